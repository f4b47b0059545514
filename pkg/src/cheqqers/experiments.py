"""The standard experiment suite, with fixed seeds and file names.

Three studies make up the suite: random self-play game lengths across
board sizes and levels, search against random play, and a rated
round-robin of search strengths.  Each run writes CSVs under a results
directory and resumes from complete files, so the suite can be stopped
and restarted at will and always lands on the same numbers.
"""

from __future__ import annotations

import os

from . import harness

EXP1_SEED = 1001
EXP2_SEED = 2002
EXP3_SEED = 3003

SELFPLAY_SIZES = (5, 6, 7, 8)
SELFPLAY_SIZES_NODRAW = (4, 5, 6, 7, 8)
LEVELS = (0, 1, 2, 3)

MATCHUP_AGENT = "mcts:800"
MATCHUP_SIZE = 5
TOURNAMENT_AGENTS = ("random", "mcts:200", "mcts:400", "mcts:800")
TOURNAMENT_SIZE = 5


def matchup_csv(out_dir: str, level: int, color: str) -> str:
    return os.path.join(out_dir, f"matchup_L{level}_{color}.csv")


def tournament_csv(out_dir: str, level: int) -> str:
    return os.path.join(out_dir, f"tournament_5x5_L{level}.csv")


def exp1_game_lengths(out_dir: str, games: int = 1000, workers: int = 1):
    """Self-play sweep, with and without the no-capture draw rule.

    Returns (rows with draws, rows without), one row per (size, level).
    """
    with_draws = harness.run_selfplay(
        harness.ExperimentConfig(
            sizes=SELFPLAY_SIZES, levels=LEVELS, games=games,
            draw_rule=True, seed=EXP1_SEED, workers=workers,
        ),
        os.path.join(out_dir, "selfplay.csv"),
    )
    without_draws = harness.run_selfplay(
        harness.ExperimentConfig(
            sizes=SELFPLAY_SIZES_NODRAW, levels=LEVELS, games=games,
            draw_rule=False, seed=EXP1_SEED, workers=workers,
        ),
        os.path.join(out_dir, "selfplay_nodraw.csv"),
    )
    return with_draws, without_draws


def exp2_search_vs_random(out_dir: str, games_per_color: int = 100):
    """Fixed-color series of mcts:800 against random, per level.

    Returns {(level, color): matchup result}.
    """
    results = {}
    for level in LEVELS:
        for color in ("white", "black"):
            results[(level, color)] = harness.run_matchup(
                MATCHUP_AGENT, "random", games_per_color,
                MATCHUP_SIZE, level, seed=EXP2_SEED, color_a=color,
                out_csv=matchup_csv(out_dir, level, color), resume=True,
            )
    return results


def exp3_tournament(out_dir: str, games_per_agent: int = 150):
    """Rated tournament of search strengths per level on the small board.

    Returns {level: {agent: Rating}}.
    """
    results = {}
    for level in LEVELS:
        results[level] = harness.run_tournament(
            list(TOURNAMENT_AGENTS), games_per_agent,
            TOURNAMENT_SIZE, level, seed=EXP3_SEED,
            out_csv=tournament_csv(out_dir, level), resume=True,
        )
    return results
