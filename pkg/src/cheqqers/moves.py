"""Move types and their wire encoding.

Every move is a small frozen dataclass naming the acting piece and the
squares involved.  The JSON form is {"type", "piece", "squares"} with the
squares listed in the same order as the dataclass fields; a forced pass
(failed capture attempt) additionally carries its reason.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True, slots=True)
class Step:
    piece: int
    src: int
    dst: int


@dataclass(frozen=True, slots=True)
class Capture:
    piece: int
    src: int
    over: int
    dst: int


@dataclass(frozen=True, slots=True)
class Split:
    piece: int
    src: int
    dst1: int
    dst2: int


@dataclass(frozen=True, slots=True)
class Merge:
    piece: int
    src1: int
    src2: int
    dst: int


@dataclass(frozen=True, slots=True)
class Pass:
    reason: str = ""


Move = Union[Step, Capture, Split, Merge, Pass]

_TYPE_NAMES = {
    Step: "step",
    Capture: "capture",
    Split: "split",
    Merge: "merge",
    Pass: "pass",
}


def move_to_dict(move: Move) -> dict:
    if isinstance(move, Step):
        squares = [move.src, move.dst]
    elif isinstance(move, Capture):
        squares = [move.src, move.over, move.dst]
    elif isinstance(move, Split):
        squares = [move.src, move.dst1, move.dst2]
    elif isinstance(move, Merge):
        squares = [move.src1, move.src2, move.dst]
    else:
        return {"type": "pass", "piece": None, "squares": [], "reason": move.reason}
    return {"type": _TYPE_NAMES[type(move)], "piece": move.piece, "squares": squares}


def move_from_dict(data: dict) -> Move:
    kind = data.get("type")
    squares = data.get("squares", [])
    piece = data.get("piece")
    try:
        if kind == "step":
            return Step(piece, *squares)
        if kind == "capture":
            return Capture(piece, *squares)
        if kind == "split":
            return Split(piece, *squares)
        if kind == "merge":
            return Merge(piece, *squares)
        if kind == "pass":
            return Pass(data.get("reason", ""))
    except TypeError as exc:
        raise ValueError(f"bad square list for {kind!r} move: {squares}") from exc
    raise ValueError(f"unknown move type {kind!r}")
