"""Drive random games while mirroring every primitive op into the dense
statevector oracle, asserting marginal agreement square by square."""

from __future__ import annotations

import random

from cheqqers.game import Game, ONGOING

from dense_oracle import DenseBoard


def run_oracle_games(level, n_games, seed0=0, side=4, tol=1e-9,
                     max_plies=300):
    """Returns the worst marginal deviation seen; raises on tolerance breach."""
    worst = 0.0
    for i in range(n_games):
        seed = seed0 + i
        g = Game.new(side, level, seed=seed, setup_rows=1)
        occupied = [
            sq
            for color in (0, 1)
            for sq in g.geometry.initial_squares[color]
        ]
        dense = DenseBoard(g.geometry.num_squares, occupied)
        rng = random.Random(1_000_003 * (seed + 1))
        while g.outcome == ONGOING and g.ply < max_plies:
            rec = g.step(rng.choice(g.legal_moves()))
            for op in rec.ops:
                dense.replay_op(op)
            for sq in range(g.geometry.num_squares):
                dev = abs(g.qstate.marginal(sq) - dense.marginal(sq))
                if dev > worst:
                    worst = dev
                if dev >= tol:
                    raise AssertionError(
                        f"level {level} seed {seed} ply {g.ply}: square {sq} "
                        f"engine {g.qstate.marginal(sq)} oracle "
                        f"{dense.marginal(sq)}"
                    )
        g.qstate.validate()
    return worst
