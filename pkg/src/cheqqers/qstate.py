"""Sparse factored quantum occupancy state.

Each playable square carries one occupancy qubit.  Instead of one dense
statevector over all squares, the state is kept as a product of independent
pieces: a classical bit per square that is not in superposition, plus a set of
small entangled components.  A component stores amplitudes for the few squares
it covers as a map from occupancy bitmask to complex amplitude.

Gates act on explicitly listed squares.  Squares from different components (or
classical squares) are joined into one component lazily, only when a gate
spans them.  After every gate or measurement the touched component is cleaned
up: negligible amplitudes are pruned, the norm is restored, squares whose bit
agrees across all terms are demoted back to classical bits, and an emptied
component disappears.  After measurements a full product factoring is
attempted so collapsed remnants fall apart into independent components again.

Gate conventions, with bit i of a local key holding the occupancy of the i-th
listed square:

* move (s, t): swaps occupancy with phase i on the swapped branches,
  |10> -> i|01>, |01> -> i|10>.
* split (s, t1, t2): sends |100> to (1+i)/2 |010> + (1-i)/2 |001> and
  completes to a unitary on the single-occupancy subspace; other occupancy
  sectors are untouched.
* merge (t, s1, s2): inverse of split with the roles of source and targets
  swapped, so two halves recombine into t and interference is possible.
* capture (d, a, l): defender-occupied attacker-occupied branch maps to the
  defender-gone landing-occupied branch, |110> -> i|001>, |001> -> i|110>;
  every other basis state is fixed.
"""

from __future__ import annotations

import math
from typing import Iterable

PRUNE_EPS = 1e-12
PRUNE_EPS2 = PRUNE_EPS * PRUNE_EPS

_HALF_P = 0.5 + 0.5j  # (1+i)/2
_HALF_M = 0.5 - 0.5j  # (1-i)/2

# Action maps: local key -> tuple of (new key, factor).  Keys absent from the
# map are fixed by the gate.  Bit i of a key is the occupancy of squares[i].
MOVE_ACTION = {
    0b01: ((0b10, 1j),),
    0b10: ((0b01, 1j),),
}

SPLIT_ACTION = {
    0b001: ((0b010, _HALF_P), (0b100, _HALF_M)),
    0b010: ((0b001, _HALF_P), (0b010, -0.5j), (0b100, 0.5)),
    0b100: ((0b001, _HALF_M), (0b010, 0.5), (0b100, 0.5j)),
}

# Conjugate transpose of SPLIT_ACTION.
MERGE_ACTION = {
    0b001: ((0b010, _HALF_M), (0b100, _HALF_P)),
    0b010: ((0b001, _HALF_M), (0b010, 0.5j), (0b100, 0.5)),
    0b100: ((0b001, _HALF_P), (0b010, 0.5), (0b100, -0.5j)),
}

CAPTURE_ACTION = {
    0b011: ((0b100, 1j),),
    0b100: ((0b011, 1j),),
}


class GateError(Exception):
    """A gate was applied to squares violating its occupancy preconditions."""


class Component:
    """One entangled group of squares with joint occupancy amplitudes.

    squares and pos are frozen after construction; structural changes build a
    replacement Component.  terms maps an occupancy bitmask (bit i belongs to
    squares[i]) to a complex amplitude.
    """

    __slots__ = ("squares", "pos", "terms")

    def __init__(self, squares: tuple[int, ...], terms: dict[int, complex]):
        self.squares = squares
        self.pos = {sq: i for i, sq in enumerate(squares)}
        self.terms = terms

    def marginal(self, sq: int) -> float:
        mask = 1 << self.pos[sq]
        return sum(
            a.real * a.real + a.imag * a.imag
            for k, a in self.terms.items()
            if k & mask
        )

    def norm2(self) -> float:
        return sum(a.real * a.real + a.imag * a.imag for a in self.terms.values())

    def __repr__(self):
        return f"Component(squares={self.squares}, terms={len(self.terms)})"


class QuantumState:
    """Occupancy state of every playable square, factored into components."""

    __slots__ = ("num_squares", "classical", "comp_of")

    def __init__(self, num_squares: int, occupied: Iterable[int] = ()):
        self.num_squares = num_squares
        self.classical: dict[int, int] = {sq: 0 for sq in range(num_squares)}
        for sq in occupied:
            self.classical[sq] = 1
        self.comp_of: dict[int, Component] = {}

    # ---------------------------------------------------------------- queries

    def marginal(self, sq: int) -> float:
        bit = self.classical.get(sq)
        if bit is not None:
            return float(bit)
        return self.comp_of[sq].marginal(sq)

    def classical_bit(self, sq: int) -> int | None:
        """The square's bit if it is classical, else None."""
        return self.classical.get(sq)

    def components(self) -> list[Component]:
        seen: dict[int, Component] = {}
        for comp in self.comp_of.values():
            seen.setdefault(id(comp), comp)
        return sorted(seen.values(), key=lambda c: min(c.squares))

    def component_of(self, sq: int) -> Component | None:
        return self.comp_of.get(sq)

    def validate(self, tol: float = 1e-9) -> None:
        """Consistency check for tests: norms, registry and disjointness."""
        covered = set(self.classical)
        for comp in self.components():
            assert abs(comp.norm2() - 1.0) < tol, f"norm drift in {comp}"
            for sq in comp.squares:
                assert sq not in covered, f"square {sq} double-covered"
                assert self.comp_of.get(sq) is comp
                covered.add(sq)
            # components hold only genuine superposition: no lone term, and
            # every square's bit differs somewhere (else cleanup missed it)
            assert len(comp.terms) >= 2, f"degenerate {comp}"
            and_mask = or_mask = next(iter(comp.terms))
            for k, a in comp.terms.items():
                assert 0 <= k < (1 << len(comp.squares))
                assert a.real * a.real + a.imag * a.imag >= PRUNE_EPS2
                and_mask &= k
                or_mask |= k
            full = (1 << len(comp.squares)) - 1
            assert and_mask == 0 and or_mask == full, f"agreed bits in {comp}"
        assert covered == set(range(self.num_squares))

    # ----------------------------------------------------------------- gates

    def apply_move(self, s: int, t: int) -> None:
        if self.marginal(s) <= 0.0:
            raise GateError(f"move source {s} is empty")
        if self.marginal(t) != 0.0:
            raise GateError(f"move target {t} is occupied")
        if self.classical.get(s) == 1:
            # Classical fast path: pure occupancy swap, phase is global.
            self.classical[s] = 0
            self.classical[t] = 1
            return
        self._apply((s, t), MOVE_ACTION)

    def apply_split(self, s: int, t1: int, t2: int) -> None:
        if t1 == t2:
            raise GateError("split targets must differ")
        if self.marginal(s) <= 0.0:
            raise GateError(f"split source {s} is empty")
        if self.marginal(t1) != 0.0 or self.marginal(t2) != 0.0:
            raise GateError("split target is occupied")
        self._apply((s, t1, t2), SPLIT_ACTION)

    def apply_merge(self, t: int, s1: int, s2: int) -> None:
        if s1 == s2:
            raise GateError("merge sources must differ")
        if self.marginal(t) != 0.0:
            raise GateError(f"merge target {t} is occupied")
        self._apply((t, s1, s2), MERGE_ACTION)

    def apply_capture(self, d: int, a: int, l: int) -> None:
        if self.classical.get(a) != 1:
            raise GateError(f"capture attacker {a} must be classically occupied")
        if self.marginal(d) <= 0.0:
            raise GateError(f"capture defender {d} is empty")
        if self.marginal(l) != 0.0:
            raise GateError(f"capture landing {l} is occupied")
        self._apply((d, a, l), CAPTURE_ACTION)

    def _apply(self, squares: tuple[int, ...], action) -> None:
        comp = self._join(squares)
        masks = [1 << comp.pos[sq] for sq in squares]
        allmask = 0
        for m in masks:
            allmask |= m
        new_terms: dict[int, complex] = {}
        for bits, amp in comp.terms.items():
            key = 0
            for i, m in enumerate(masks):
                if bits & m:
                    key |= 1 << i
            images = action.get(key)
            if images is None:
                new_terms[bits] = new_terms.get(bits, 0j) + amp
                continue
            base = bits & ~allmask
            for out_key, factor in images:
                nb = base
                for i, m in enumerate(masks):
                    if out_key & (1 << i):
                        nb |= m
                new_terms[nb] = new_terms.get(nb, 0j) + amp * factor
        comp.terms = new_terms
        self._cleanup(comp)

    # ------------------------------------------------------------ structure

    def _join(self, squares: tuple[int, ...]) -> Component:
        """Bring all listed squares into one component, creating it if needed."""
        comps: list[Component] = []
        seen: set[int] = set()
        loose: list[int] = []
        for sq in squares:
            comp = self.comp_of.get(sq)
            if comp is None:
                loose.append(sq)
            elif id(comp) not in seen:
                seen.add(id(comp))
                comps.append(comp)
        if len(comps) == 1 and not loose:
            return comps[0]

        new_squares: list[int] = []
        terms: dict[int, complex] = {0: 1.0 + 0j}
        for comp in comps:
            shift = len(new_squares)
            new_squares.extend(comp.squares)
            terms = {
                (k2 << shift) | k1: a1 * a2
                for k1, a1 in terms.items()
                for k2, a2 in comp.terms.items()
            }
        for sq in sorted(loose):
            bit = self.classical.pop(sq)
            if bit:
                m = 1 << len(new_squares)
                terms = {k | m: a for k, a in terms.items()}
            new_squares.append(sq)
        merged = Component(tuple(new_squares), terms)
        for sq in new_squares:
            self.comp_of[sq] = merged
        return merged

    def _cleanup(self, comp: Component) -> Component | None:
        """Prune, renormalize and demote agreed squares; None if fully demoted."""
        terms = comp.terms
        dead = [
            k
            for k, a in terms.items()
            if a.real * a.real + a.imag * a.imag < PRUNE_EPS2
        ]
        for k in dead:
            del terms[k]
        if not terms:
            raise GateError("component lost all amplitude")
        norm2 = sum(a.real * a.real + a.imag * a.imag for a in terms.values())
        if abs(norm2 - 1.0) > 1e-15:
            scale = 1.0 / math.sqrt(norm2)
            for k in terms:
                terms[k] *= scale

        keys = iter(terms)
        first = next(keys)
        and_mask = or_mask = first
        for k in keys:
            and_mask &= k
            or_mask |= k
        full = (1 << len(comp.squares)) - 1
        agreed = and_mask | (full & ~or_mask)
        if agreed == 0:
            return comp

        kept = [i for i in range(len(comp.squares)) if not (agreed >> i) & 1]
        for i, sq in enumerate(comp.squares):
            if (agreed >> i) & 1:
                self.classical[sq] = (and_mask >> i) & 1
                del self.comp_of[sq]
        if not kept:
            return None
        new_squares = tuple(comp.squares[i] for i in kept)
        new_terms: dict[int, complex] = {}
        for k, a in terms.items():
            nk = 0
            for j, i in enumerate(kept):
                if (k >> i) & 1:
                    nk |= 1 << j
            new_terms[nk] = a
        replacement = Component(new_squares, new_terms)
        for sq in new_squares:
            self.comp_of[sq] = replacement
        return replacement

    def _try_product_split(self, comp: Component) -> None:
        """Split a component into independent factors when exactly possible.

        Pairwise covariances propose a partition; an exact grouping test
        confirms it before anything is changed, so a failed proposal just
        leaves the component whole.
        """
        n = len(comp.squares)
        if n < 2:
            return
        probs = [comp.marginal(sq) for sq in comp.squares]
        joint = [[0.0] * n for _ in range(n)]
        for k, a in comp.terms.items():
            p = a.real * a.real + a.imag * a.imag
            idx = [i for i in range(n) if (k >> i) & 1]
            for x in range(len(idx)):
                for y in range(x + 1, len(idx)):
                    joint[idx[x]][idx[y]] += p

        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(n):
            for j in range(i + 1, n):
                if abs(joint[i][j] - probs[i] * probs[j]) > 1e-12:
                    parent[find(i)] = find(j)
        blocks: dict[int, list[int]] = {}
        for i in range(n):
            blocks.setdefault(find(i), []).append(i)
        if len(blocks) < 2:
            return

        block = min(blocks.values(), key=min)
        rest = [i for i in range(n) if i not in block]
        split = self._verify_split(comp, block, rest)
        if split is None:
            return
        comp_a, comp_b = split
        for sub in (comp_a, comp_b):
            if sub is None:
                continue
            cleaned = self._cleanup(sub)
            if cleaned is not None:
                self._try_product_split(cleaned)

    def _verify_split(self, comp, block, rest):
        """Factor comp.terms over (block, rest) positions, or None if entangled."""
        amask = 0
        for i in block:
            amask |= 1 << i

        def project(k, positions):
            out = 0
            for j, i in enumerate(positions):
                if (k >> i) & 1:
                    out |= 1 << j
            return out

        groups: dict[int, dict[int, complex]] = {}
        for k, a in comp.terms.items():
            groups.setdefault(project(k, block), {})[project(k, rest)] = a
        ref_key = min(groups)
        ref = groups[ref_key]
        ref_items = sorted(ref.items())
        ratios: dict[int, complex] = {}
        for ka, vec in groups.items():
            if set(vec) != set(ref):
                return None
            kb0, a0 = ref_items[0]
            r = vec[kb0] / a0
            for kb, a in ref_items[1:]:
                if abs(vec[kb] - r * a) > 1e-9:
                    return None
            ratios[ka] = r

        bnorm = math.sqrt(sum(a.real**2 + a.imag**2 for a in ref.values()))
        terms_a = {ka: r * bnorm for ka, r in ratios.items()}
        terms_b = {kb: a / bnorm for kb, a in ref.items()}
        squares_a = tuple(comp.squares[i] for i in block)
        squares_b = tuple(comp.squares[i] for i in rest)
        comp_a = Component(squares_a, terms_a)
        comp_b = Component(squares_b, terms_b)
        for sq in squares_a:
            self.comp_of[sq] = comp_a
        for sq in squares_b:
            self.comp_of[sq] = comp_b
        return comp_a, comp_b

    # ----------------------------------------------------------- measurement

    def measure(self, squares: Iterable[int], rng) -> dict[int, int]:
        """Projectively measure the occupancy of the given squares.

        One random draw is consumed per touched component, in ascending order
        of the component's smallest square, so replays with the same rng state
        reproduce the same outcomes bit for bit.
        """
        result: dict[int, int] = {}
        by_comp: dict[int, tuple[Component, list[int]]] = {}
        for sq in sorted(set(squares)):
            bit = self.classical.get(sq)
            if bit is not None:
                result[sq] = bit
            else:
                comp = self.comp_of[sq]
                by_comp.setdefault(id(comp), (comp, []))[1].append(sq)

        for comp, sqs in sorted(by_comp.values(), key=lambda cs: min(cs[0].squares)):
            positions = [comp.pos[sq] for sq in sqs]
            outcomes: dict[int, float] = {}
            for k, a in comp.terms.items():
                key = 0
                for i, p in enumerate(positions):
                    if (k >> p) & 1:
                        key |= 1 << i
                outcomes[key] = outcomes.get(key, 0.0) + (
                    a.real * a.real + a.imag * a.imag
                )
            ordered = sorted(outcomes.items())
            total = sum(p for _, p in ordered)
            draw = rng.random() * total
            acc = 0.0
            chosen = ordered[-1][0]
            for key, p in ordered:
                acc += p
                if draw < acc:
                    chosen = key
                    break
            for i, sq in enumerate(sqs):
                result[sq] = (chosen >> i) & 1

            pmask = 0
            want = 0
            for i, p in enumerate(positions):
                pmask |= 1 << p
                if (chosen >> i) & 1:
                    want |= 1 << p
            comp.terms = {
                k: a for k, a in comp.terms.items() if (k & pmask) == want
            }
            cleaned = self._cleanup(comp)
            if cleaned is not None:
                self._try_product_split(cleaned)
        return result

    # ------------------------------------------------------- piece removal

    def remove_occupant(self, sq: int) -> None:
        """Clear a classically occupied square (a captured piece leaves)."""
        if self.classical.get(sq) != 1:
            raise GateError(f"square {sq} is not classically occupied")
        self.classical[sq] = 0

    def project_out(self, squares: Iterable[int]) -> None:
        """Drop all terms occupying any listed square and renormalize.

        Used when a piece's total weight falls below tolerance: the branches
        holding it are discarded like pruned amplitudes.
        """
        targets = set(squares)
        for sq in list(targets):
            if self.classical.get(sq) == 1:
                self.classical[sq] = 0
                targets.discard(sq)
            elif sq in self.classical:
                targets.discard(sq)
        by_comp: dict[int, tuple[Component, list[int]]] = {}
        for sq in targets:
            comp = self.comp_of[sq]
            by_comp.setdefault(id(comp), (comp, []))[1].append(sq)
        for comp, sqs in sorted(by_comp.values(), key=lambda cs: min(cs[0].squares)):
            mask = 0
            for sq in sqs:
                mask |= 1 << comp.pos[sq]
            comp.terms = {k: a for k, a in comp.terms.items() if not (k & mask)}
            cleaned = self._cleanup(comp)
            if cleaned is not None:
                self._try_product_split(cleaned)

    # -------------------------------------------------------------- copying

    def copy(self) -> "QuantumState":
        new = QuantumState.__new__(QuantumState)
        new.num_squares = self.num_squares
        new.classical = dict(self.classical)
        new.comp_of = {}
        for comp in self.components():
            twin = Component.__new__(Component)
            twin.squares = comp.squares
            twin.pos = comp.pos
            twin.terms = dict(comp.terms)
            for sq in comp.squares:
                new.comp_of[sq] = twin
        return new

    # -------------------------------------------------------- serialization

    def to_dict(self) -> dict:
        return {
            "numSquares": self.num_squares,
            "classical": {
                str(sq): bit for sq, bit in sorted(self.classical.items())
            },
            "components": [
                {
                    "squares": list(comp.squares),
                    "terms": [
                        {
                            "bits": "".join(
                                str((k >> i) & 1)
                                for i in range(len(comp.squares))
                            ),
                            "re": a.real,
                            "im": a.imag,
                        }
                        for k, a in sorted(comp.terms.items())
                    ],
                }
                for comp in self.components()
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "QuantumState":
        new = cls.__new__(cls)
        new.num_squares = data["numSquares"]
        new.classical = {int(sq): bit for sq, bit in data["classical"].items()}
        new.comp_of = {}
        for cd in data["components"]:
            squares = tuple(cd["squares"])
            terms: dict[int, complex] = {}
            for td in cd["terms"]:
                k = 0
                for i, ch in enumerate(td["bits"]):
                    if ch == "1":
                        k |= 1 << i
                terms[k] = complex(td["re"], td["im"])
            comp = Component(squares, terms)
            for sq in squares:
                new.comp_of[sq] = comp
        return new
