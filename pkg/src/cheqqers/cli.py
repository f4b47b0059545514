"""Command line front door: terminal play, batch experiments, serving.

Experiment configs are flat TOML files; every key maps one-to-one onto a
harness argument, so a config plus a seed pins a run completely.
"""

from __future__ import annotations

import argparse
import logging
import os
import random
import sys

try:
    import tomllib
except ModuleNotFoundError:  # 3.10
    import tomli as tomllib

from .agents import make_agent
from .board import BLACK, WHITE, COLOR_NAMES
from .game import Game, ONGOING
from .moves import move_to_dict
from . import harness

log = logging.getLogger(__name__)


# ------------------------------------------------------------------ rendering

def render_board(game: Game) -> str:
    """Plain text grid, White's home row at the bottom.

    Occupied squares show the piece letter (upper case when crowned); a
    superposed square appends its occupation probability in deciles.
    """
    geom = game.geometry
    lines = []
    for r in range(geom.side - 1, -1, -1):
        cells = []
        for c in range(geom.side):
            if (r + c) % 2 != 0:
                cells.append("   ")
                continue
            sq = geom.index_of[(r, c)]
            pid = game.square_piece.get(sq)
            if pid is None:
                cells.append(" . ")
                continue
            piece = game.pieces[pid]
            letter = "wb"[piece.color]
            if piece.crowned:
                letter = letter.upper()
            prob = game.qstate.marginal(sq)
            if prob > 1 - 1e-9:
                cells.append(f" {letter} ")
            else:
                cells.append(f"{letter}{min(9, round(prob * 10))!s} ")
        lines.append(f"{r:2d} |" + "".join(cells))
    lines.append("    " + "".join(f" {c:<2d}" for c in range(geom.side)))
    return "\n".join(lines)


def describe_move(game: Game, mv) -> str:
    geom = game.geometry
    squares = move_to_dict(mv)["squares"]
    coords = "-".join(str(geom.coords[s]) for s in squares)
    return f"{type(mv).__name__.lower()} {coords}" if squares else "pass"


def describe_record(game: Game, rec) -> list[str]:
    geom = game.geometry
    out = []
    for m in rec.measurements:
        found = ", ".join(
            f"{geom.coords[sq]}={'occupied' if bit else 'empty'}"
            for sq, bit in sorted(m.items())
        )
        out.append(f"  measured: {found}")
    if rec.result == "pass":
        out.append(f"  no effect: {rec.pass_reason}")
    for pid in rec.captured:
        out.append(f"  piece {pid} captured")
    for pid in rec.crowned:
        out.append(f"  piece {pid} crowned")
    return out


# ----------------------------------------------------------------------- play

def cmd_play(args, input_fn=input, out=sys.stdout) -> int:
    def say(text=""):
        print(text, file=out)

    game = Game.new(args.size, args.level, seed=args.seed,
                    setup_rows=args.setup_rows)
    say(f"seed {game.seed}")
    controllers = {}
    for color, spec in ((WHITE, args.white), (BLACK, args.black)):
        if spec == "human":
            controllers[color] = None
        else:
            try:
                controllers[color] = make_agent(
                    spec, random.Random(
                        harness.derive_seed(game.seed, "play", color, spec)))
            except ValueError as exc:
                say(f"bad agent spec: {exc}")
                return 2

    while game.outcome == ONGOING:
        say()
        say(render_board(game))
        say(f"{COLOR_NAMES[game.to_move]} to move")
        agent = controllers[game.to_move]
        moves = game.legal_moves()
        if agent is None:
            for i, mv in enumerate(moves):
                say(f"  [{i}] {describe_move(game, mv)}")
            while True:
                try:
                    raw = input_fn("move number (q quits): ")
                except EOFError:
                    return 0
                if raw.strip().lower() in ("q", "quit"):
                    return 0
                try:
                    choice = int(raw)
                except ValueError:
                    say("not a number")
                    continue
                if 0 <= choice < len(moves):
                    break
                say("out of range")
            mv = moves[choice]
        else:
            mv = agent.choose(game)
            say(f"  plays {describe_move(game, mv)}")
        rec = game.step(mv)
        for line in describe_record(game, rec):
            say(line)

    say()
    say(render_board(game))
    say(f"result: {game.outcome} after {game.ply} plies")
    return 0


# ---------------------------------------------------------------- experiments

def _load_config(path: str) -> dict:
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def _agent_tag(spec: str) -> str:
    return spec.replace(":", "-").replace("=", "-")


def cmd_experiment(args) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    try:
        cfg = _load_config(args.config)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return 2
    os.makedirs(args.out, exist_ok=True)
    try:
        if args.kind == "selfplay":
            return _exp_selfplay(cfg, args.out)
        if args.kind == "matchup":
            return _exp_matchup(cfg, args.out)
        return _exp_tournament(cfg, args.out)
    except (KeyError, ValueError, TypeError) as exc:
        print(f"bad config: {exc!r}", file=sys.stderr)
        return 2


def _exp_selfplay(cfg: dict, out_dir: str) -> int:
    config = harness.ExperimentConfig(
        sizes=tuple(cfg.get("sizes", [5, 6, 7, 8])),
        levels=tuple(cfg.get("levels", [0, 1, 2, 3])),
        games=cfg.get("games", 1000),
        draw_rule=cfg.get("draw_rule", True),
        seed=cfg.get("seed", 0),
        workers=cfg.get("workers", os.cpu_count() or 1),
    )
    name = "selfplay.csv" if config.draw_rule else "selfplay_nodraw.csv"
    rows = harness.run_selfplay(config, os.path.join(out_dir, name))
    print(f"wrote {len(rows)} cells to {os.path.join(out_dir, name)}")
    return 0


def _exp_matchup(cfg: dict, out_dir: str) -> int:
    agent_a, agent_b = cfg["agent_a"], cfg["agent_b"]
    for size in cfg.get("sizes", [5]):
        for level in cfg.get("levels", [0, 1, 2, 3]):
            for color in cfg.get("colors", ["white", "black"]):
                res = harness.run_matchup(
                    agent_a, agent_b,
                    cfg.get("games", 100), size, level,
                    seed=cfg.get("seed", 0),
                    color_a=color,
                    draw_rule=cfg.get("draw_rule", True),
                    out_csv=os.path.join(
                        out_dir,
                        f"matchup_{_agent_tag(agent_a)}_vs_{_agent_tag(agent_b)}"
                        f"_{size}x{size}_L{level}_{color}.csv"),
                )
                print(
                    f"{size}x{size} L{level} {agent_a} as {color}: "
                    f"{res['wins_a']}-{res['wins_b']}-{res['draws']}")
    return 0


def _exp_tournament(cfg: dict, out_dir: str) -> int:
    for size in cfg.get("sizes", [5]):
        for level in cfg.get("levels", [0, 1, 2, 3]):
            ratings = harness.run_tournament(
                list(cfg["agents"]),
                cfg.get("games_per_agent", 150),
                size, level,
                seed=cfg.get("seed", 0),
                draw_rule=cfg.get("draw_rule", True),
                out_csv=os.path.join(
                    out_dir, f"tournament_{size}x{size}_L{level}.csv"),
            )
            table = sorted(ratings.items(), key=lambda kv: -kv[1].mu)
            for name, r in table:
                print(f"{size}x{size} L{level} {name}: "
                      f"mu={r.mu:.2f} sigma={r.sigma:.2f}")
    return 0


# ---------------------------------------------------------------------- serve

def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


# ----------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cheqqers")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("play", help="interactive terminal game")
    p.add_argument("--level", type=int, default=2)
    p.add_argument("--size", type=int, default=8)
    p.add_argument("--setup-rows", type=int, default=None, dest="setup_rows")
    p.add_argument("--white", default="human")
    p.add_argument("--black", default="mcts:200")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(fn=cmd_play)

    p = sub.add_parser("experiment", help="batch experiment runner")
    p.add_argument("kind", choices=["selfplay", "matchup", "tournament"])
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="out")
    p.set_defaults(fn=cmd_experiment)

    p = sub.add_parser("serve", help="start the HTTP game service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
