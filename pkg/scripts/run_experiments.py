#!/usr/bin/env python3
"""Run the standard experiment suite end to end.

Safe to interrupt: finished cells and files are picked up on the next
invocation.  Expect the tournament stage to dominate the runtime.
"""

import argparse
import logging
import time

from cheqqers import experiments


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default="results")
    parser.add_argument("--games", type=int, default=1000,
                        help="self-play games per cell")
    parser.add_argument("--matchup-games", type=int, default=100,
                        help="games per color per level")
    parser.add_argument("--tournament-games", type=int, default=150,
                        help="games per agent per level")
    parser.add_argument("--stages", default="1,2,3")
    args = parser.parse_args()
    logging.basicConfig(level=logging.INFO,
                        format="%(asctime)s %(message)s")
    stages = set(args.stages.split(","))

    if "1" in stages:
        t0 = time.time()
        experiments.exp1_game_lengths(args.out, games=args.games)
        logging.info("stage 1 done in %.0f s", time.time() - t0)
    if "2" in stages:
        t0 = time.time()
        res = experiments.exp2_search_vs_random(
            args.out, games_per_color=args.matchup_games)
        for (level, color), r in sorted(res.items()):
            logging.info("L%d %s as %s: %d-%d-%d", level,
                         experiments.MATCHUP_AGENT, color,
                         r["wins_a"], r["wins_b"], r["draws"])
        logging.info("stage 2 done in %.0f s", time.time() - t0)
    if "3" in stages:
        t0 = time.time()
        res = experiments.exp3_tournament(
            args.out, games_per_agent=args.tournament_games)
        for level, ratings in sorted(res.items()):
            order = sorted(ratings.items(), key=lambda kv: -kv[1].mu)
            logging.info("L%d: %s", level, ", ".join(
                f"{name}={r.mu:.1f}" for name, r in order))
        logging.info("stage 3 done in %.0f s", time.time() - t0)


if __name__ == "__main__":
    main()
