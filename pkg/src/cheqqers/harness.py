"""Batch experiment driver: self-play sweeps, matchups, tournaments.

Every game in a run gets its seed derived by hashing the master seed with
the cell coordinates and game index, so any row of any output file can be
regenerated on its own and an interrupted sweep picks up exactly where it
stopped.  Aggregation never depends on completion order.
"""

from __future__ import annotations

import csv
import hashlib
import logging
import os
import random
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .agents import make_agent
from .board import BLACK, WHITE
from .game import DRAW, ONGOING, WHITE_WINS, BLACK_WINS, Game
from . import rating as rt

log = logging.getLogger(__name__)

# runaway-game guard, far beyond any plausible natural length; hitting it
# scores as a draw and is logged so it cannot pass silently
PLY_ABORT = 10_000

SELFPLAY_FIELDS = [
    "size", "level", "draw_rule", "games", "mean_plies", "std_plies",
    "draw_rate", "white_wins", "black_wins", "draws", "aborted",
]
MATCHUP_FIELDS = [
    "index", "size", "level", "agent_a", "agent_b", "color_a", "seed",
    "plies", "outcome",
]
TOURNAMENT_FIELDS = ["agent", "level", "board", "games", "mu", "sigma"]


@dataclass(frozen=True)
class ExperimentConfig:
    sizes: tuple[int, ...] = (5, 6, 7, 8)
    levels: tuple[int, ...] = (0, 1, 2, 3)
    games: int = 1000
    draw_rule: bool = True
    agents: tuple[str, ...] = ("random", "random")
    seed: int = 0
    out: str = "out"
    workers: int = field(default_factory=lambda: os.cpu_count() or 1)

    def __post_init__(self):
        if self.games < 1:
            raise ValueError("games per cell must be at least 1")
        if any(s < 4 for s in self.sizes):
            raise ValueError("board sizes below 4 are not supported")
        if len(self.agents) < 2:
            raise ValueError("need at least two agent specs")


def derive_seed(*parts) -> int:
    """Stable 63-bit seed from a tuple of labels."""
    text = "|".join(str(p) for p in parts)
    digest = hashlib.sha256(text.encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def play_out(game: Game, white, black) -> tuple[int, str, bool]:
    """Run a game to its end; returns (plies, outcome, aborted)."""
    while game.outcome == ONGOING and game.ply < PLY_ABORT:
        agent = white if game.to_move == WHITE else black
        game.step(agent.choose(game), validate=False)
    if game.outcome == ONGOING:
        log.warning(
            "game aborted at %d plies (size=%d level=%d seed=%d); scoring as draw",
            game.ply, game.geometry.side, game.level, game.seed,
        )
        return game.ply, DRAW, True
    return game.ply, game.outcome, False


# ------------------------------------------------------------------ selfplay

def _selfplay_cell_key(size: int, level: int, draw_rule: bool) -> tuple:
    return (size, level, draw_rule)


def _selfplay_game(args) -> tuple[int, str, bool]:
    size, level, draw_rule, seed, idx = args
    game_seed = derive_seed(seed, "selfplay", size, level, draw_rule, idx, "game")
    g = Game.new(size, level, seed=game_seed, setup_rows=1, draw_rule=draw_rule)
    white = make_agent("random", random.Random(
        derive_seed(seed, "selfplay", size, level, draw_rule, idx, "white")))
    black = make_agent("random", random.Random(
        derive_seed(seed, "selfplay", size, level, draw_rule, idx, "black")))
    return play_out(g, white, black)


def _selfplay_cell(config: ExperimentConfig, size: int, level: int) -> dict:
    args = [
        (size, level, config.draw_rule, config.seed, i)
        for i in range(config.games)
    ]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_selfplay_game, args, chunksize=16))
    else:
        results = [_selfplay_game(a) for a in args]

    plies = [r[0] for r in results]
    outcomes = [r[1] for r in results]
    aborted = sum(1 for r in results if r[2])
    draws = outcomes.count(DRAW)
    row = {
        "size": size,
        "level": level,
        "draw_rule": config.draw_rule,
        "games": config.games,
        "mean_plies": statistics.fmean(plies),
        "std_plies": statistics.pstdev(plies),
        "draw_rate": draws / config.games,
        "white_wins": outcomes.count(WHITE_WINS),
        "black_wins": outcomes.count(BLACK_WINS),
        "draws": draws,
        "aborted": aborted,
    }
    return row


def _read_csv(path: str) -> list[dict]:
    if not os.path.exists(path):
        return []
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _write_csv(path: str, fields: list[str], rows: list[dict]) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    os.replace(tmp, path)


def run_selfplay(config: ExperimentConfig, out_csv: str | None = None) -> list[dict]:
    """Random-vs-random sweep over (size, level) cells, one setup row each.

    With an output path, cells already present in the file are kept as-is,
    so a killed run resumes; the file is rewritten in sorted cell order
    after every finished cell.
    """
    done: dict[tuple, dict] = {}
    if out_csv:
        for raw in _read_csv(out_csv):
            key = (int(raw["size"]), int(raw["level"]), raw["draw_rule"] == "True")
            done[key] = raw

    rows: list[dict] = []
    for size in config.sizes:
        for level in config.levels:
            key = _selfplay_cell_key(size, level, config.draw_rule)
            if key in done:
                rows.append(done[key])
                continue
            row = _selfplay_cell(config, size, level)
            rows.append(row)
            done[key] = row
            if out_csv:
                ordered = sorted(
                    done.values(),
                    key=lambda r: (int(r["size"]), int(r["level"])),
                )
                _write_csv(out_csv, SELFPLAY_FIELDS, ordered)
            log.info(
                "selfplay size=%d level=%d: mean=%.1f draw_rate=%.3f",
                size, level, float(row["mean_plies"]), float(row["draw_rate"]),
            )
    return rows


# ------------------------------------------------------------------- matchup

def _finished_matchup(path: str, agent_a: str, agent_b: str, n: int):
    rows = _read_csv(path)
    if len(rows) != n:
        return None
    if any(r["agent_a"] != agent_a or r["agent_b"] != agent_b for r in rows):
        return None
    wins_a = wins_b = draws = 0
    for r in rows:
        if r["outcome"] == DRAW:
            draws += 1
        elif (r["outcome"] == WHITE_WINS) == (r["color_a"] == "white"):
            wins_a += 1
        else:
            wins_b += 1
    return {
        "agent_a": agent_a,
        "agent_b": agent_b,
        "games": n,
        "wins_a": wins_a,
        "wins_b": wins_b,
        "draws": draws,
        "rows": rows,
    }


def run_matchup(
    agent_a: str,
    agent_b: str,
    n: int,
    size: int,
    level: int,
    seed: int,
    color_a: str = "white",
    draw_rule: bool = True,
    out_csv: str | None = None,
    resume: bool = False,
) -> dict:
    """n games of agent_a against agent_b with a fixed or alternating color.

    color_a is "white", "black", or "alternate".  Returns win counts from
    a's perspective plus the per-game rows that were (optionally) written.
    With resume, a complete output file is trusted instead of replayed.
    """
    if n < 1:
        raise ValueError("need at least one game")
    if color_a not in ("white", "black", "alternate"):
        raise ValueError(f"bad color assignment {color_a!r}")
    if resume and out_csv:
        prior = _finished_matchup(out_csv, agent_a, agent_b, n)
        if prior is not None:
            return prior
    wins_a = wins_b = draws = 0
    game_rows: list[dict] = []
    for i in range(n):
        if color_a == "alternate":
            a_is_white = i % 2 == 0
        else:
            a_is_white = color_a == "white"
        game_seed = derive_seed(seed, "matchup", size, level, i, "game")
        g = Game.new(size, level, seed=game_seed, draw_rule=draw_rule)
        ag_a = make_agent(agent_a, random.Random(
            derive_seed(seed, "matchup", size, level, i, "a")))
        ag_b = make_agent(agent_b, random.Random(
            derive_seed(seed, "matchup", size, level, i, "b")))
        white, black = (ag_a, ag_b) if a_is_white else (ag_b, ag_a)
        plies, outcome, _ = play_out(g, white, black)
        if outcome == DRAW:
            draws += 1
        elif (outcome == WHITE_WINS) == a_is_white:
            wins_a += 1
        else:
            wins_b += 1
        game_rows.append({
            "index": i,
            "size": size,
            "level": level,
            "agent_a": agent_a,
            "agent_b": agent_b,
            "color_a": "white" if a_is_white else "black",
            "seed": game_seed,
            "plies": plies,
            "outcome": outcome,
        })
    if out_csv:
        _write_csv(out_csv, MATCHUP_FIELDS, game_rows)
    return {
        "agent_a": agent_a,
        "agent_b": agent_b,
        "games": n,
        "wins_a": wins_a,
        "wins_b": wins_b,
        "draws": draws,
        "rows": game_rows,
    }


# ---------------------------------------------------------------- tournament

def _split_alias(entry: str) -> tuple[str, str]:
    # "name=spec" lets the same underlying agent enter twice; bare specs
    # are their own name
    if "=" in entry:
        alias, spec = entry.split("=", 1)
        return alias.strip(), spec.strip()
    return entry, entry


def run_tournament(
    agent_specs: list[str],
    games_per_agent: int,
    size: int,
    level: int,
    seed: int,
    params: rt.TrueSkillParams | None = None,
    draw_rule: bool = True,
    out_csv: str | None = None,
    resume: bool = False,
) -> dict[str, rt.Rating]:
    """Uniform random pairings until every agent has played its quota.

    Ratings update after each game in schedule order.  A pairing is only
    ever drawn from agents with quota left; when one agent's remainder
    reaches everyone else's combined, it must sit in every remaining game,
    which keeps the schedule finishable.  With resume, a complete output
    file is loaded instead of replaying the tournament.
    """
    if len(agent_specs) < 2:
        raise ValueError("a tournament needs at least two agents")
    entries = dict(_split_alias(e) for e in agent_specs)
    if len(entries) != len(agent_specs):
        raise ValueError("duplicate agent name")
    if (games_per_agent * len(agent_specs)) % 2 != 0:
        raise ValueError("total quota must be even to pair every game")
    if resume and out_csv:
        rows = _read_csv(out_csv)
        if (
            {r["agent"] for r in rows} == set(entries)
            and all(int(r["games"]) == games_per_agent for r in rows)
        ):
            return {
                r["agent"]: rt.Rating(float(r["mu"]), float(r["sigma"]))
                for r in rows
            }
    params = params or rt.TrueSkillParams()
    sched_rng = random.Random(derive_seed(seed, "tournament", size, level, "sched"))
    ratings = {name: rt.Rating() for name in entries}
    remaining = {name: games_per_agent for name in entries}
    played = {name: 0 for name in entries}
    game_idx = 0

    while sum(remaining.values()) > 0:
        open_specs = sorted(s for s, r in remaining.items() if r > 0)
        total_left = sum(remaining[s] for s in open_specs)
        heavy = max(open_specs, key=lambda s: remaining[s])
        if remaining[heavy] * 2 >= total_left:
            first = heavy
            second = sched_rng.choice([s for s in open_specs if s != heavy])
        else:
            first, second = sched_rng.sample(open_specs, 2)
        if sched_rng.random() < 0.5:
            white_spec, black_spec = first, second
        else:
            white_spec, black_spec = second, first

        game_seed = derive_seed(seed, "tournament", size, level, game_idx, "game")
        g = Game.new(size, level, seed=game_seed, draw_rule=draw_rule)
        white = make_agent(entries[white_spec], random.Random(
            derive_seed(seed, "tournament", size, level, game_idx, "white")))
        black = make_agent(entries[black_spec], random.Random(
            derive_seed(seed, "tournament", size, level, game_idx, "black")))
        _, outcome, _ = play_out(g, white, black)

        if outcome == DRAW:
            result = rt.DRAW
        elif outcome == WHITE_WINS:
            result = rt.A_WINS
        else:
            result = rt.B_WINS
        ratings[white_spec], ratings[black_spec] = rt.trueskill_update(
            ratings[white_spec], ratings[black_spec], result, params
        )
        for spec in (white_spec, black_spec):
            remaining[spec] -= 1
            played[spec] += 1
        game_idx += 1

    assert game_idx == games_per_agent * len(agent_specs) // 2
    if out_csv:
        rows = [
            {
                "agent": name,
                "level": level,
                "board": f"{size}x{size}",
                "games": played[name],
                "mu": ratings[name].mu,
                "sigma": ratings[name].sigma,
            }
            for name in entries
        ]
        _write_csv(out_csv, TOURNAMENT_FIELDS, rows)
    return ratings
