"""Legal move generation.

A square is empty exactly when no piece has any probability weight there, so
superposed halves block movement and cannot be stepped through.  Captures are
forced: whenever any capture exists, only captures may be played.  Any enemy
weight on the jumped square makes the jump available, whatever the amplitude.

Quiet options depend on the rule level: plain steps always exist, splits (a
piece moves to two empty step targets at once) from level 1, merges (two
halves of one piece recombine on a shared empty step target) from level 3.
Mid capture chain, only continuation captures by the capturing piece are
offered.
"""

from __future__ import annotations

from .moves import Capture, Merge, Move, Split, Step


def legal_moves(game) -> list[Move]:
    geom = game.geometry
    mover = game.to_move
    occupied = game.square_piece
    pieces = game.pieces

    if game.chain is not None:
        piece_id, sq = game.chain
        piece = pieces[piece_id]
        return _captures_from(geom, occupied, pieces, piece, sq)

    captures: list[Move] = []
    quiet: list[Move] = []
    movers = [p for p in pieces.values() if p.color == mover]
    movers.sort(key=lambda p: p.id)
    for piece in movers:
        jump_tab = geom.jumps[(piece.color, piece.crowned)]
        step_tab = geom.steps[(piece.color, piece.crowned)]
        for sq in sorted(piece.support):
            for over, land in jump_tab[sq]:
                victim = occupied.get(over)
                if (
                    victim is not None
                    and pieces[victim].color != mover
                    and land not in occupied
                ):
                    captures.append(Capture(piece.id, sq, over, land))
            if captures:
                continue
            free = [t for t in step_tab[sq] if t not in occupied]
            for t in free:
                quiet.append(Step(piece.id, sq, t))
            if game.level >= 1:
                for i in range(len(free)):
                    for j in range(i + 1, len(free)):
                        quiet.append(Split(piece.id, sq, free[i], free[j]))
    if captures:
        return captures

    if game.level >= 3:
        for piece in movers:
            if len(piece.support) < 2:
                continue
            step_tab = geom.steps[(piece.color, piece.crowned)]
            support = sorted(piece.support)
            for i in range(len(support)):
                s1 = support[i]
                targets1 = step_tab[s1]
                for j in range(i + 1, len(support)):
                    s2 = support[j]
                    for t in targets1:
                        if t in step_tab[s2] and t not in occupied:
                            quiet.append(Merge(piece.id, s1, s2, t))
    return quiet


def _captures_from(geom, occupied, pieces, piece, sq) -> list[Move]:
    """Captures available to one piece part standing on one square."""
    out: list[Move] = []
    for over, land in geom.jumps[(piece.color, piece.crowned)][sq]:
        victim = occupied.get(over)
        if (
            victim is not None
            and pieces[victim].color != piece.color
            and land not in occupied
        ):
            out.append(Capture(piece.id, sq, over, land))
    return out


def has_capture_from(game, piece, sq) -> bool:
    """Whether the piece standing on sq could continue capturing."""
    occupied = game.square_piece
    pieces = game.pieces
    for over, land in game.geometry.jumps[(piece.color, piece.crowned)][sq]:
        victim = occupied.get(over)
        if (
            victim is not None
            and pieces[victim].color != piece.color
            and land not in occupied
        ):
            return True
    return False
