"""Playing agents: uniform random and UCT Monte Carlo tree search.

The search treats measurement randomness as chance branching: tree edges are
(move, outcome signature) pairs, where the signature is the sorted list of
(square, bit) collapses the move produced.  Traversing an edge re-applies
the move on the copied game with fresh randomness and descends into the
child matching the signature that actually occurred, creating it on first
sight.  Scores are stored from the root player's perspective at every node,
so selection maximizes W/N at root-player nodes and 1 - W/N at opponent
nodes, plus the usual exploration term.

All game mutation happens on copies sharing the agent's own generator, so a
search never consumes the live game's randomness and two searches from the
same seed pick the same move.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .game import Game, ONGOING, DRAW, WHITE_WINS
from .board import WHITE
from .moves import Move


class AgentError(Exception):
    pass


@dataclass(frozen=True)
class MctsConfig:
    rollouts: int = 800
    c: float = math.sqrt(2)
    rollout_cap: int = 200


class RandomAgent:
    """Uniform choice among legal moves."""

    def __init__(self, rng: random.Random):
        self.rng = rng

    def choose(self, game: Game) -> Move:
        moves = game.legal_moves()
        if not moves:
            raise AgentError("no legal moves to choose from")
        return self.rng.choice(moves)


class _MoveStats:
    __slots__ = ("n", "w", "children")

    def __init__(self):
        self.n = 0
        self.w = 0.0
        self.children: dict[tuple, _Node] = {}


class _Node:
    __slots__ = ("n", "w", "to_move", "untried", "moves")

    def __init__(self, to_move: int):
        self.n = 0
        self.w = 0.0
        self.to_move = to_move
        self.untried: list[Move] | None = None
        self.moves: dict[Move, _MoveStats] = {}


def _signature(rec) -> tuple:
    if not rec.measurements:
        return ()
    return tuple(
        sorted((sq, bit) for m in rec.measurements for sq, bit in m.items())
    )


class MctsAgent:
    def __init__(self, config: MctsConfig, rng: random.Random):
        if config.rollouts < 1:
            raise ValueError("rollouts must be positive")
        self.config = config
        self.rng = rng

    def choose(self, game: Game) -> Move:
        root_moves = game.legal_moves()
        if not root_moves:
            raise AgentError("no legal moves to choose from")
        if len(root_moves) == 1:
            return root_moves[0]
        root_color = game.to_move
        root = _Node(game.to_move)
        for _ in range(self.config.rollouts):
            self._iterate(game, root, root_color)
        best_n = max(ms.n for ms in root.moves.values())
        best = [mv for mv, ms in root.moves.items() if ms.n == best_n]
        if len(best) == 1:
            return best[0]
        return self.rng.choice(best)

    def _iterate(self, game: Game, root: _Node, root_color: int) -> None:
        g = game.copy(rng=self.rng)
        node = root
        path: list[tuple[_Node, _MoveStats | None]] = []
        value = None
        while True:
            if g.outcome != ONGOING:
                path.append((node, None))
                value = self._score(g, root_color)
                break
            if node.untried is None:
                node.untried = list(g.legal_moves())
            if node.untried:
                idx = self.rng.randrange(len(node.untried))
                move = node.untried.pop(idx)
                stats = _MoveStats()
                node.moves[move] = stats
                path.append((node, stats))
                rec = g.step(move, validate=False)
                child = _Node(g.to_move)
                stats.children[_signature(rec)] = child
                path.append((child, None))
                value = self._rollout(g, root_color)
                break
            stats, move = self._select(node, root_color)
            path.append((node, stats))
            rec = g.step(move, validate=False)
            sig = _signature(rec)
            child = stats.children.get(sig)
            if child is None:
                child = _Node(g.to_move)
                stats.children[sig] = child
                path.append((child, None))
                value = self._rollout(g, root_color)
                break
            node = child
        for node, stats in path:
            node.n += 1
            node.w += value
            if stats is not None:
                stats.n += 1
                stats.w += value

    def _select(self, node: _Node, root_color: int) -> tuple[_MoveStats, Move]:
        log_n = math.log(node.n)
        c = self.config.c
        # W is root-perspective everywhere, so the mover flips it when the
        # opponent is choosing
        flip = node.to_move != root_color
        best = None
        best_score = -1.0
        for move, stats in node.moves.items():
            mean = stats.w / stats.n
            if flip:
                mean = 1.0 - mean
            score = mean + c * math.sqrt(log_n / stats.n)
            if best is None or score > best_score:
                best = (stats, move)
                best_score = score
        return best

    def _rollout(self, g: Game, root_color: int) -> float:
        cap = self.config.rollout_cap
        rng = self.rng
        plies = 0
        while g.outcome == ONGOING and plies < cap:
            moves = g.legal_moves()
            g.step(moves[rng.randrange(len(moves))], validate=False)
            plies += 1
        if g.outcome == ONGOING:
            return 0.5
        return self._score(g, root_color)

    @staticmethod
    def _score(g: Game, root_color: int) -> float:
        out = g.outcome
        if out == DRAW:
            return 0.5
        won_white = out == WHITE_WINS
        return 1.0 if won_white == (root_color == WHITE) else 0.0


def make_agent(spec: str, rng: random.Random):
    """Build an agent from its spec string: "random" or "mcts:N[:c=X]"."""
    if spec == "random":
        return RandomAgent(rng)
    if spec.startswith("mcts:"):
        parts = spec.split(":")
        try:
            rollouts = int(parts[1])
        except (IndexError, ValueError) as exc:
            raise ValueError(f"bad agent spec {spec!r}") from exc
        c = math.sqrt(2)
        for extra in parts[2:]:
            if extra.startswith("c="):
                c = float(extra[2:])
            else:
                raise ValueError(f"bad agent spec {spec!r}")
        return MctsAgent(MctsConfig(rollouts=rollouts, c=c), rng)
    raise ValueError(f"unknown agent spec {spec!r}")
