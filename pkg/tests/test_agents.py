"""Agents: uniformity, legality, determinism, and search quality."""

import collections
import random

import pytest

from cheqqers.agents import (
    AgentError,
    MctsAgent,
    MctsConfig,
    RandomAgent,
    make_agent,
)
from cheqqers.board import BLACK, Geometry, WHITE
from cheqqers.game import Game, ONGOING
from cheqqers.moves import Capture

from gamebuild import make_game


def sq(geom, rc):
    return geom.index_of[rc]


class TestRandomAgent:
    def test_uniform_over_seven_openings(self):
        g = Game.new(8, 0, seed=0)
        agent = RandomAgent(random.Random(123))
        counts = collections.Counter()
        for _ in range(10_000):
            counts[agent.choose(g)] += 1
        assert len(counts) == 7
        for c in counts.values():
            assert abs(c / 10_000 - 1 / 7) < 0.02

    def test_single_move_returned(self):
        geom = Geometry.get(8, 3)
        g = make_game(
            8,
            [
                (sq(geom, (2, 2)), WHITE, False),
                (sq(geom, (3, 3)), BLACK, False),
                (sq(geom, (7, 7)), BLACK, False),
            ],
            WHITE,
        )
        agent = RandomAgent(random.Random(0))
        mv = agent.choose(g)
        assert isinstance(mv, Capture)

    def test_forced_capture_only_captures(self):
        geom = Geometry.get(8, 3)
        g = make_game(
            8,
            [
                (sq(geom, (2, 2)), WHITE, False),
                (sq(geom, (3, 1)), BLACK, False),
                (sq(geom, (3, 3)), BLACK, False),
                (sq(geom, (7, 7)), BLACK, False),
            ],
            WHITE,
        )
        agent = RandomAgent(random.Random(5))
        for _ in range(50):
            assert isinstance(agent.choose(g), Capture)

    def test_terminal_raises(self):
        geom = Geometry.get(8, 3)
        g = make_game(8, [(sq(geom, (0, 0)), WHITE, True)], WHITE)
        g._outcome = "white_wins"
        with pytest.raises(AgentError):
            RandomAgent(random.Random(0)).choose(g)


class TestMctsAgent:
    def test_finds_immediate_win(self):
        # two captures are on offer: jumping (3,3) chains through (5,5) and
        # clears the board, jumping (5,5) trades into a dead-even endgame
        geom = Geometry.get(8, 3)
        for seed in range(5):
            g = make_game(
                8,
                [
                    (sq(geom, (2, 2)), WHITE, False),
                    (sq(geom, (4, 6)), WHITE, False),
                    (sq(geom, (3, 3)), BLACK, False),
                    (sq(geom, (5, 5)), BLACK, False),
                ],
                WHITE,
            )
            assert len(g.legal_moves()) == 2
            agent = MctsAgent(MctsConfig(rollouts=200), random.Random(seed))
            mv = agent.choose(g)
            assert isinstance(mv, Capture)
            assert mv.over == sq(geom, (3, 3))

    def test_same_seed_same_move(self):
        g = Game.new(5, 0, seed=3, setup_rows=1)
        a = MctsAgent(MctsConfig(rollouts=100), random.Random(42))
        b = MctsAgent(MctsConfig(rollouts=100), random.Random(42))
        assert a.choose(g) == b.choose(g)

    def test_search_does_not_mutate_game(self):
        g = Game.new(5, 2, seed=3, setup_rows=1)
        before = g.to_json()
        MctsAgent(MctsConfig(rollouts=150), random.Random(0)).choose(g)
        assert g.to_json() == before

    def test_score_conservation_at_root(self):
        g = Game.new(5, 1, seed=9, setup_rows=1)
        agent = MctsAgent(MctsConfig(rollouts=120), random.Random(7))
        root_moves = g.legal_moves()
        assert len(root_moves) > 1
        from cheqqers.agents import _Node

        root = _Node(g.to_move)
        for _ in range(120):
            agent._iterate(g, root, g.to_move)
        assert root.n == 120
        total_w = sum(ms.w for ms in root.moves.values())
        assert abs(total_w - root.w) < 1e-9
        total_n = sum(ms.n for ms in root.moves.values())
        assert total_n == root.n
        assert 0 <= root.w <= root.n

    def test_returns_legal_move_all_levels(self):
        for level in (0, 1, 2, 3):
            g = Game.new(5, level, seed=11, setup_rows=1)
            agent = MctsAgent(MctsConfig(rollouts=60), random.Random(level))
            rng = random.Random(level)
            plies = 0
            while g.outcome == ONGOING and plies < 6:
                mv = agent.choose(g)
                assert mv in g.legal_moves()
                g.step(mv)
                plies += 1

    def test_beats_random_small_sample(self):
        # cheap sanity version of the full matchup experiment
        wins = 0
        n = 12
        for i in range(n):
            g = Game.new(5, 0, seed=4_000 + i, setup_rows=1)
            mcts = MctsAgent(MctsConfig(rollouts=100), random.Random(i))
            rnd = RandomAgent(random.Random(10_000 + i))
            while g.outcome == ONGOING and g.ply < 400:
                agent = mcts if g.to_move == WHITE else rnd
                g.step(agent.choose(g))
            if g.outcome == "white_wins":
                wins += 1
        assert wins > n / 2


class TestSpecParsing:
    def test_specs(self):
        rng = random.Random(0)
        assert isinstance(make_agent("random", rng), RandomAgent)
        a = make_agent("mcts:400", rng)
        assert isinstance(a, MctsAgent)
        assert a.config.rollouts == 400
        b = make_agent("mcts:200:c=1.5", rng)
        assert b.config.c == 1.5

    def test_bad_specs(self):
        rng = random.Random(0)
        for bad in ("mcts", "mcts:", "mcts:abc", "minimax", "mcts:100:x=2"):
            with pytest.raises(ValueError):
                make_agent(bad, rng)
