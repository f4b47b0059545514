"""Board geometry for checkers on the dark squares of an n x n board.

Playable squares are the dark diagonal network that includes each player's
bottom-left corner.  With rows counted 0..n-1 from White's side and columns
0..n-1 left to right, a square (r, c) is playable when r + c is even.
Playable squares are indexed row-major starting at White's bottom-left.

White moves toward higher rows, Black toward lower rows.  All direction and
jump lookups are precomputed per (color, crowned) pair so move generation is
table-driven.
"""

from __future__ import annotations

from functools import lru_cache

WHITE = 0
BLACK = 1

COLOR_NAMES = ("white", "black")


def opponent(color: int) -> int:
    return 1 - color


class Geometry:
    """Immutable board shape plus derived lookup tables.

    Use Geometry.get() rather than the constructor so tables are shared
    between the many game copies an agent search creates.
    """

    __slots__ = (
        "side",
        "setup_rows",
        "num_squares",
        "coords",
        "index_of",
        "steps",
        "jumps",
        "back_row",
        "initial_squares",
    )

    def __init__(self, side: int, setup_rows: int):
        if side < 4:
            raise ValueError(f"side must be >= 4, got {side}")
        if setup_rows < 1 or 2 * setup_rows >= side:
            raise ValueError(
                f"setup_rows must satisfy 1 <= 2*setup_rows < side, got {setup_rows}"
            )
        self.side = side
        self.setup_rows = setup_rows

        coords = []
        index_of = {}
        for r in range(side):
            for c in range(side):
                if (r + c) % 2 == 0:
                    index_of[(r, c)] = len(coords)
                    coords.append((r, c))
        self.coords = tuple(coords)
        self.index_of = index_of
        self.num_squares = len(coords)

        # steps[(color, crowned)][sq] -> tuple of destination squares
        # jumps[(color, crowned)][sq] -> tuple of (over, landing) pairs
        white_dirs = ((1, -1), (1, 1))
        black_dirs = ((-1, -1), (-1, 1))
        all_dirs = white_dirs + black_dirs
        self.steps = {}
        self.jumps = {}
        for color, crowned, dirs in (
            (WHITE, False, white_dirs),
            (BLACK, False, black_dirs),
            (WHITE, True, all_dirs),
            (BLACK, True, all_dirs),
        ):
            step_tab = []
            jump_tab = []
            for r, c in coords:
                ss = []
                js = []
                for dr, dc in dirs:
                    t = index_of.get((r + dr, c + dc))
                    if t is not None:
                        ss.append(t)
                    land = index_of.get((r + 2 * dr, c + 2 * dc))
                    if t is not None and land is not None:
                        js.append((t, land))
                step_tab.append(tuple(ss))
                jump_tab.append(tuple(js))
            self.steps[(color, crowned)] = tuple(step_tab)
            self.jumps[(color, crowned)] = tuple(jump_tab)

        # back_row[color]: squares where that color's pieces crown
        self.back_row = (
            frozenset(i for i, (r, _) in enumerate(coords) if r == side - 1),
            frozenset(i for i, (r, _) in enumerate(coords) if r == 0),
        )

        # initial_squares[color]: starting squares, in index order
        self.initial_squares = (
            tuple(i for i, (r, _) in enumerate(coords) if r < setup_rows),
            tuple(i for i, (r, _) in enumerate(coords) if r >= side - setup_rows),
        )

    @staticmethod
    @lru_cache(maxsize=None)
    def get(side: int, setup_rows: int) -> "Geometry":
        return Geometry(side, setup_rows)

    def __repr__(self):
        return f"Geometry(side={self.side}, setup_rows={self.setup_rows})"
