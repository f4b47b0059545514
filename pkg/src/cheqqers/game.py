"""Game state: pieces, turn order, capture resolution and persistence.

Rule levels build on each other:

* 0: ordinary checkers.
* 1: split moves; capture attempts touching superposed pieces trigger
  measurement.  The attacker is measured first; if it turns out absent the
  turn is consumed as a pass.  A present attacker facing a superposed
  defender measures it, capturing on presence and passing otherwise.
* 2: a classically placed attacker jumping a superposed defender no longer
  measures; a three-square unitary entangles attacker position with defender
  survival.  Entangling captures never extend capture chains and count as
  plies without a capture.
* 3: merge moves.

Measurement outcomes draw from the game's own seeded generator, so a game
replayed from the same seed and move list reproduces every collapse exactly.

A capture chain keeps the turn with the mover: after a successful measured or
classical capture, if the capturing piece can jump again from its landing
square the game stays in a chain state where only those continuation jumps
are legal.  Pieces crown the moment any part of their support touches the
far row; a chain continues (or not) based on the freshly crowned status.

Pieces whose total weight collapses to nothing, or falls below 1e-9, are
removed from the board; the latter also discards their residual amplitude.
"""

from __future__ import annotations

import json
import random
from typing import Iterable

from . import rules
from .board import BLACK, COLOR_NAMES, WHITE, Geometry
from .moves import Capture, Merge, Move, Split, Step, move_from_dict, move_to_dict
from .qstate import QuantumState

ONGOING = "ongoing"
WHITE_WINS = "white_wins"
BLACK_WINS = "black_wins"
DRAW = "draw"

NO_CAPTURE_DRAW_LIMIT = 40
PIECE_WEIGHT_EPS = 1e-9


class IllegalMoveError(Exception):
    pass


class ParseError(Exception):
    """A serialized game failed to parse; the message locates the problem."""


class Piece:
    __slots__ = ("id", "color", "crowned", "lineage", "support")

    def __init__(self, pid: int, color: int, crowned: bool, lineage: int,
                 support: Iterable[int]):
        self.id = pid
        self.color = color
        self.crowned = crowned
        self.lineage = lineage
        self.support = set(support)

    def __repr__(self):
        tag = "K" if self.crowned else ""
        return (
            f"Piece({self.id}{tag} {COLOR_NAMES[self.color]} "
            f"@{sorted(self.support)})"
        )


class TurnRecord:
    """What one step() call did: move, collapses, removals, promotions.

    ops is an in-memory trace of the primitive state operations performed,
    kept for replay verification; it is not serialized.
    """

    __slots__ = ("move", "result", "pass_reason", "measurements", "captured",
                 "crowned", "ops")

    def __init__(self, move: Move):
        self.move = move
        self.result = ""
        self.pass_reason = ""
        self.measurements: list[dict[int, int]] = []
        self.captured: list[int] = []
        self.crowned: list[int] = []
        self.ops: list[tuple] = []

    def to_dict(self) -> dict:
        out = {
            "move": move_to_dict(self.move),
            "result": self.result,
            "measurements": [
                [{"square": sq, "bit": bit} for sq, bit in sorted(m.items())]
                for m in self.measurements
            ],
            "captured": list(self.captured),
            "crowned": list(self.crowned),
        }
        if self.result == "pass":
            out["passReason"] = self.pass_reason
        return out


class Game:
    __slots__ = (
        "geometry", "level", "draw_rule", "pieces", "square_piece", "qstate",
        "to_move", "chain", "no_capture_plies", "ply", "version", "seed",
        "rng", "records", "_outcome", "_moves_cache", "_blocked_checked",
    )

    def __init__(self, geometry: Geometry, level: int, seed: int,
                 draw_rule: bool = True):
        if level not in (0, 1, 2, 3):
            raise ValueError(f"level must be 0..3, got {level}")
        self.geometry = geometry
        self.level = level
        self.draw_rule = draw_rule
        self.seed = seed
        self.rng = random.Random(seed)
        self.pieces: dict[int, Piece] = {}
        self.square_piece: dict[int, int] = {}
        occupied = []
        pid = 0
        for color in (WHITE, BLACK):
            for sq in geometry.initial_squares[color]:
                self.pieces[pid] = Piece(pid, color, False, sq, (sq,))
                self.square_piece[sq] = pid
                occupied.append(sq)
                pid += 1
        self.qstate = QuantumState(geometry.num_squares, occupied)
        self.to_move = WHITE
        self.chain: tuple[int, int] | None = None
        self.no_capture_plies = 0
        self.ply = 0
        self.version = 0
        self.records: list[TurnRecord] = []
        self._outcome = ONGOING
        self._moves_cache: list[Move] | None = None
        self._blocked_checked = False

    @classmethod
    def new(cls, side: int, level: int, seed: int | None = None,
            setup_rows: int | None = None, draw_rule: bool = True) -> "Game":
        if setup_rows is None:
            setup_rows = (side - 2) // 2
        if seed is None:
            seed = random.SystemRandom().getrandbits(63)
        return cls(Geometry.get(side, setup_rows), level, seed, draw_rule)

    # -------------------------------------------------------------- queries

    @property
    def outcome(self) -> str:
        if self._outcome == ONGOING and not self._blocked_checked:
            self.legal_moves()
        return self._outcome

    def legal_moves(self) -> list[Move]:
        if self._moves_cache is None:
            if self._outcome != ONGOING:
                self._moves_cache = []
            else:
                moves = rules.legal_moves(self)
                if not moves:
                    # The side to move is blocked and loses.
                    self._outcome = (
                        WHITE_WINS if self.to_move == BLACK else BLACK_WINS
                    )
                self._moves_cache = moves
            self._blocked_checked = True
        return self._moves_cache

    def piece_weight(self, piece: Piece) -> float:
        return sum(self.qstate.marginal(sq) for sq in piece.support)

    # ---------------------------------------------------------------- steps

    def step(self, move: Move, validate: bool = True) -> TurnRecord:
        if self.outcome != ONGOING:
            raise IllegalMoveError("game is over")
        if validate and move not in self.legal_moves():
            raise IllegalMoveError(f"illegal move {move}")
        rec = TurnRecord(move)
        if isinstance(move, Step):
            self._do_step(move, rec)
        elif isinstance(move, Split):
            self._do_split(move, rec)
        elif isinstance(move, Merge):
            self._do_merge(move, rec)
        elif isinstance(move, Capture):
            self._do_capture(move, rec)
        else:
            raise IllegalMoveError("passes are recorded, never played directly")
        self.ply += 1
        self.version += 1
        self._moves_cache = None
        self._blocked_checked = False
        self._eval_outcome()
        self.records.append(rec)
        return rec

    def _do_step(self, mv: Step, rec: TurnRecord) -> None:
        piece = self.pieces[mv.piece]
        self.qstate.apply_move(mv.src, mv.dst)
        rec.ops.append(("move", mv.src, mv.dst))
        piece.support.discard(mv.src)
        del self.square_piece[mv.src]
        piece.support.add(mv.dst)
        self.square_piece[mv.dst] = piece.id
        self._maybe_crown(piece, rec, (mv.dst,))
        rec.result = "step"
        self.no_capture_plies += 1
        self._flip()

    def _do_split(self, mv: Split, rec: TurnRecord) -> None:
        piece = self.pieces[mv.piece]
        self.qstate.apply_split(mv.src, mv.dst1, mv.dst2)
        rec.ops.append(("split", mv.src, mv.dst1, mv.dst2))
        piece.support.discard(mv.src)
        del self.square_piece[mv.src]
        for sq in (mv.dst1, mv.dst2):
            piece.support.add(sq)
            self.square_piece[sq] = piece.id
        self._maybe_crown(piece, rec, (mv.dst1, mv.dst2))
        rec.result = "split"
        self.no_capture_plies += 1
        self._flip()

    def _do_merge(self, mv: Merge, rec: TurnRecord) -> None:
        piece = self.pieces[mv.piece]
        self.qstate.apply_merge(mv.dst, mv.src1, mv.src2)
        rec.ops.append(("merge", mv.dst, mv.src1, mv.src2))
        # Interference can leave weight behind on either source, so rebuild
        # this piece's support from the actual marginals.
        candidates = set(piece.support)
        candidates.add(mv.dst)
        for sq in candidates:
            if self.qstate.marginal(sq) > 0.0:
                piece.support.add(sq)
                self.square_piece[sq] = piece.id
            else:
                piece.support.discard(sq)
                self.square_piece.pop(sq, None)
        self._maybe_crown(piece, rec, (mv.dst,))
        rec.result = "merge"
        self.no_capture_plies += 1
        self._flip()

    def _do_capture(self, mv: Capture, rec: TurnRecord) -> None:
        att_was_classical = self.qstate.classical_bit(mv.src) == 1
        if not att_was_classical:
            self._measure_piece(self.pieces[mv.piece], rec)
            if (
                mv.piece not in self.pieces
                or self.qstate.classical_bit(mv.src) != 1
            ):
                self._finish_pass(rec, "attacker absent")
                return
        attacker = self.pieces[mv.piece]
        defender_id = self.square_piece.get(mv.over)
        if defender_id is None:
            # Measuring the attacker can collapse an entangled defender away.
            self._finish_pass(rec, "defender absent")
            return
        d_classical = self.qstate.classical_bit(mv.over) == 1
        if not d_classical:
            if self.level >= 2 and att_was_classical:
                self._do_entangling_capture(mv, rec, attacker)
                return
            self._measure_piece(self.pieces[defender_id], rec)
            if (
                defender_id not in self.pieces
                or self.qstate.classical_bit(mv.over) != 1
            ):
                self._finish_pass(rec, "defender absent")
                return
        # Both attacker and defender are classically placed: plain capture.
        self.qstate.remove_occupant(mv.over)
        rec.ops.append(("remove", mv.over))
        self._delete_piece(defender_id, rec)
        self.qstate.apply_move(mv.src, mv.dst)
        rec.ops.append(("move", mv.src, mv.dst))
        attacker.support.discard(mv.src)
        del self.square_piece[mv.src]
        attacker.support.add(mv.dst)
        self.square_piece[mv.dst] = attacker.id
        rec.result = "capture"
        self.no_capture_plies = 0
        self._maybe_crown(attacker, rec, (mv.dst,))
        if rules.has_capture_from(self, attacker, mv.dst):
            self.chain = (attacker.id, mv.dst)
        else:
            self.chain = None
            self._flip()

    def _do_entangling_capture(self, mv: Capture, rec: TurnRecord,
                               attacker: Piece) -> None:
        self.qstate.apply_capture(mv.over, mv.src, mv.dst)
        rec.ops.append(("capture", mv.over, mv.src, mv.dst))
        attacker.support.add(mv.dst)
        self.square_piece[mv.dst] = attacker.id
        self._refresh_pieces(rec)
        rec.result = "entangle"
        self.no_capture_plies += 1
        self._maybe_crown(attacker, rec, (mv.dst,))
        self.chain = None
        self._flip()

    def _finish_pass(self, rec: TurnRecord, reason: str) -> None:
        rec.result = "pass"
        rec.pass_reason = reason
        self.chain = None
        self.no_capture_plies += 1
        self._flip()

    def _flip(self) -> None:
        self.to_move = 1 - self.to_move

    # ---------------------------------------------------------- bookkeeping

    def _measure_piece(self, piece: Piece, rec: TurnRecord) -> None:
        sqs = tuple(sorted(piece.support))
        bits = self.qstate.measure(sqs, self.rng)
        rec.measurements.append(bits)
        rec.ops.append(("measure", sqs, tuple(bits[s] for s in sqs)))
        self._refresh_pieces(rec)

    def _refresh_pieces(self, rec: TurnRecord) -> None:
        """Drop empty support squares and remove pieces with no weight left.

        Discarding a near-zero piece renormalizes the state, which can zero
        other squares, so sweep until stable.
        """
        changed = True
        while changed:
            changed = False
            for pid in sorted(self.pieces):
                piece = self.pieces[pid]
                dead = [
                    sq for sq in piece.support
                    if self.qstate.marginal(sq) <= 0.0
                ]
                for sq in dead:
                    piece.support.discard(sq)
                    self.square_piece.pop(sq, None)
                    changed = True
                if not piece.support:
                    del self.pieces[pid]
                    rec.captured.append(pid)
                    continue
                if self.piece_weight(piece) < PIECE_WEIGHT_EPS:
                    sqs = tuple(sorted(piece.support))
                    self.qstate.project_out(sqs)
                    rec.ops.append(("project", sqs))
                    for sq in sqs:
                        self.square_piece.pop(sq, None)
                    del self.pieces[pid]
                    rec.captured.append(pid)
                    changed = True

    def _delete_piece(self, pid: int, rec: TurnRecord) -> None:
        piece = self.pieces.pop(pid)
        for sq in piece.support:
            self.square_piece.pop(sq, None)
        rec.captured.append(pid)

    def _maybe_crown(self, piece: Piece, rec: TurnRecord,
                     new_squares: Iterable[int]) -> None:
        if piece.crowned:
            return
        back = self.geometry.back_row[piece.color]
        if any(sq in back for sq in new_squares):
            piece.crowned = True
            rec.crowned.append(piece.id)

    def _eval_outcome(self) -> None:
        white_alive = black_alive = False
        for piece in self.pieces.values():
            if piece.color == WHITE:
                white_alive = True
            else:
                black_alive = True
            if white_alive and black_alive:
                break
        if not white_alive:
            self._outcome = BLACK_WINS
        elif not black_alive:
            self._outcome = WHITE_WINS
        elif self.draw_rule and self.no_capture_plies > NO_CAPTURE_DRAW_LIMIT:
            self._outcome = DRAW

    # -------------------------------------------------------------- copying

    def copy(self, rng: random.Random | None = None) -> "Game":
        g = Game.__new__(Game)
        g.geometry = self.geometry
        g.level = self.level
        g.draw_rule = self.draw_rule
        g.seed = self.seed
        if rng is None:
            rng = random.Random()
            rng.setstate(self.rng.getstate())
        g.rng = rng
        g.pieces = {
            pid: Piece(pid, p.color, p.crowned, p.lineage, p.support)
            for pid, p in self.pieces.items()
        }
        g.square_piece = dict(self.square_piece)
        g.qstate = self.qstate.copy()
        g.to_move = self.to_move
        g.chain = self.chain
        g.no_capture_plies = self.no_capture_plies
        g.ply = self.ply
        g.version = self.version
        g.records = []
        g._outcome = self._outcome
        g._moves_cache = self._moves_cache
        g._blocked_checked = self._blocked_checked
        return g

    # -------------------------------------------------------- serialization

    def to_dict(self) -> dict:
        st = self.rng.getstate()
        return {
            "schema": 1,
            "side": self.geometry.side,
            "setupRows": self.geometry.setup_rows,
            "level": self.level,
            "drawRule": self.draw_rule,
            "seed": self.seed,
            "toMove": self.to_move,
            "chain": list(self.chain) if self.chain else None,
            "noCapturePlies": self.no_capture_plies,
            "ply": self.ply,
            "version": self.version,
            # the property, not the slot: a pending blocked-side check must
            # resolve so equal positions serialize equally
            "outcome": self.outcome,
            "pieces": [
                {
                    "id": p.id,
                    "color": p.color,
                    "crowned": p.crowned,
                    "lineage": p.lineage,
                    "support": sorted(p.support),
                }
                for _, p in sorted(self.pieces.items())
            ],
            "qstate": self.qstate.to_dict(),
            "rngState": [st[0], list(st[1]), st[2]],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "Game":
        try:
            geometry = Geometry.get(data["side"], data["setupRows"])
            g = cls.__new__(cls)
            g.geometry = geometry
            g.level = data["level"]
            g.draw_rule = data["drawRule"]
            g.seed = data["seed"]
            g.to_move = data["toMove"]
            chain = data["chain"]
            g.chain = (chain[0], chain[1]) if chain else None
            g.no_capture_plies = data["noCapturePlies"]
            g.ply = data["ply"]
            g.version = data["version"]
            g._outcome = data["outcome"]
            g.pieces = {}
            g.square_piece = {}
            for pd in data["pieces"]:
                piece = Piece(pd["id"], pd["color"], pd["crowned"],
                              pd["lineage"], pd["support"])
                g.pieces[piece.id] = piece
                for sq in piece.support:
                    g.square_piece[sq] = piece.id
            g.qstate = QuantumState.from_dict(data["qstate"])
            g.rng = random.Random()
            version, state, gauss = data["rngState"]
            g.rng.setstate((version, tuple(state), gauss))
            g.records = []
            g._moves_cache = None
            g._blocked_checked = False
            return g
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise ParseError(f"bad game payload at {exc!r}") from exc

    @classmethod
    def from_json(cls, text: str) -> "Game":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(
                f"invalid JSON at line {exc.lineno} column {exc.colno}: "
                f"{exc.msg}"
            ) from exc
        return cls.from_dict(data)

    # ------------------------------------------------------------- display

    def display_dict(self, exact: bool = False) -> dict:
        """Client-facing snapshot: per-piece square probabilities and
        entanglement grouping, with probabilities rounded unless exact."""
        pieces = []
        for _, p in sorted(self.pieces.items()):
            squares = []
            for sq in sorted(p.support):
                prob = self.qstate.marginal(sq)
                squares.append({
                    "square": sq,
                    "probability": prob if exact else round(prob, 4),
                })
            pieces.append({
                "id": p.id,
                "color": COLOR_NAMES[p.color],
                "crowned": p.crowned,
                "lineage": p.lineage,
                "squares": squares,
            })
        groups = []
        for comp in self.qstate.components():
            ids = {
                self.square_piece[sq]
                for sq in comp.squares
                if sq in self.square_piece
            }
            if len(ids) >= 2:
                groups.append(sorted(ids))
        groups.sort()
        return {
            "geometry": {
                "side": self.geometry.side,
                "setupRows": self.geometry.setup_rows,
                "numSquares": self.geometry.num_squares,
            },
            "level": self.level,
            "toMove": COLOR_NAMES[self.to_move],
            "outcome": self.outcome,
            "noCapturePlies": self.no_capture_plies,
            "ply": self.ply,
            "version": self.version,
            "chain": (
                {"piece": self.chain[0], "square": self.chain[1]}
                if self.chain
                else None
            ),
            "pieces": pieces,
            "entanglement": groups,
        }
