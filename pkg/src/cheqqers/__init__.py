"""Checkers with splits, entangling captures and merges, plus the agents,
rating math and experiment tooling used to study how the rule levels play."""

from .board import BLACK, WHITE, Geometry
from .game import (
    BLACK_WINS,
    DRAW,
    Game,
    IllegalMoveError,
    ONGOING,
    ParseError,
    WHITE_WINS,
)
from .moves import Capture, Merge, Move, Pass, Split, Step
from .qstate import GateError, QuantumState

__all__ = [
    "BLACK",
    "BLACK_WINS",
    "Capture",
    "DRAW",
    "Game",
    "GateError",
    "Geometry",
    "IllegalMoveError",
    "Merge",
    "Move",
    "ONGOING",
    "ParseError",
    "Pass",
    "QuantumState",
    "Split",
    "Step",
    "WHITE",
    "WHITE_WINS",
]
