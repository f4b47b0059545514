#!/usr/bin/env python3
"""Record a corpus of live game states for the web client's conformance tests.

Plays seeded human-vs-human games through the HTTP service and snapshots the
exact JSON a browser would see: the state payload and the legal-move payload,
captured together at the same version.  The selection pass picks 50 states
across all quantumness levels, making sure the corpus contains split and
merge offers, entangled groups, superposed pieces, and mid-chain captures.

Run from the repository root:

    python3 scripts/record_ui_fixtures.py

Output: frontend/test/fixtures/states.json (committed; regeneration is
deterministic).
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from fastapi.testclient import TestClient

from cheqqers.service import create_app

OUT = Path(__file__).resolve().parent.parent / "frontend" / "test" / "fixtures" / "states.json"

BOARDS = ((8, None), (5, None))
MAX_PLIES = 60
GAMES_PER_BOARD = 4
QUOTA = {0: 12, 1: 12, 2: 13, 3: 13}


def features(state: dict, moves: dict) -> set[str]:
    kinds = {m["type"] for m in moves["moves"]}
    tags = set(kinds)
    if state["entanglement"]:
        tags.add("entangled")
    if any(len(p["squares"]) > 1 for p in state["pieces"]):
        tags.add("superposed")
    if state["chain"] is not None:
        tags.add("chain")
    return tags


def record_level(client: TestClient, level: int) -> list[dict]:
    pool = []
    for size, setup_rows in BOARDS:
        for g in range(GAMES_PER_BOARD):
            seed = 90_000 + level * 1000 + size * 10 + g
            body = {"level": level, "size": size, "seed": seed,
                    "white": "human", "black": "human"}
            if setup_rows is not None:
                body["setupRows"] = setup_rows
            resp = client.post("/games", json=body)
            resp.raise_for_status()
            gid = resp.json()["gameId"]
            rng = random.Random(seed ^ 0xF1D0)
            for ply in range(MAX_PLIES):
                state = client.get(f"/games/{gid}").json()
                if state["outcome"] != "ongoing":
                    break
                moves = client.get(f"/games/{gid}/moves").json()
                assert moves["version"] == state["version"]
                # session ids are random; pin them so regeneration is
                # byte-identical
                state["gameId"] = f"fixture-L{level}-{size}x{size}-g{g}"
                pool.append({
                    "label": f"L{level} {size}x{size} game{g} ply{ply}",
                    "level": level,
                    "state": state,
                    "moves": moves,
                    "tags": sorted(features(state, moves)),
                })
                pick = rng.randrange(len(moves["moves"]))
                client.post(
                    f"/games/{gid}/moves/{moves['moves'][pick]['id']}"
                ).raise_for_status()
    return pool


def select(pool: list[dict], level: int, want: int) -> list[dict]:
    """Feature exemplars first, then an even spread over the rest."""
    needs: list[tuple[str, int]] = [("capture", 2)]
    if level >= 1:
        needs += [("split", 3), ("superposed", 2), ("chain", 1)]
    if level >= 2:
        needs += [("entangled", 2)]
    if level >= 3:
        needs += [("merge", 2)]
    chosen: list[dict] = []
    used = set()
    for tag, count in needs:
        have = sum(1 for c in chosen if tag in c["tags"])
        for i, entry in enumerate(pool):
            if have >= count:
                break
            if i in used or tag not in entry["tags"]:
                continue
            used.add(i)
            chosen.append(entry)
            have += 1
        if have < count:
            raise SystemExit(
                f"level {level}: only {have} states with {tag!r}, need {count}")
    rest = [i for i in range(len(pool)) if i not in used]
    stride = max(1, len(rest) // max(1, want - len(chosen)))
    for i in rest[::stride]:
        if len(chosen) >= want:
            break
        chosen.append(pool[i])
    if len(chosen) < want:
        raise SystemExit(f"level {level}: pool too small ({len(pool)})")
    chosen.sort(key=lambda c: c["label"])
    return chosen


def main() -> None:
    app = create_app()
    out = []
    with TestClient(app) as client:
        for level, want in QUOTA.items():
            pool = record_level(client, level)
            picked = select(pool, level, want)
            print(f"level {level}: pool {len(pool)}, picked {len(picked)}")
            out.extend(picked)
    assert len(out) == sum(QUOTA.values())
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps({"states": out}, indent=1))
    print(f"wrote {OUT} ({len(out)} states)")


if __name__ == "__main__":
    main()
