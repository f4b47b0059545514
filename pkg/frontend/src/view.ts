// Pure construction of everything the board shows from the two service
// payloads: piece glyphs with probability labels, connection lines, and
// one affordance per legal move.  No legality is computed here; every
// affordance is a one-to-one image of a move entry the service returned,
// so a headless test can compare the view against the raw payloads.

import type {
  ChainState,
  Color,
  GameState,
  MoveEntry,
  MoveKind,
  MovesPayload,
  Outcome,
} from './types.js';
import { numPlayable } from './geometry.js';

export class SchemaError extends Error {}

/** Thrown when the moves payload is for a different state version. */
export class StaleMovesError extends Error {}

export interface Arrow {
  from: number;
  to: number;
  over?: number;
}

export interface Affordance {
  id: string;
  kind: MoveKind;
  piece: number | null;
  squares: number[];
  /** squares that select this affordance when clicked */
  sources: number[];
  /** square the confirming click lands on (the move's destination) */
  target: number | null;
  arrows: Arrow[];
}

export interface Glyph {
  piece: number;
  color: Color;
  crowned: boolean;
  square: number;
  probability: number;
  label: string | null;
}

export interface Link {
  kind: 'self' | 'entangled';
  pieces: number[];
  squares: number[];
}

export interface BoardView {
  side: number;
  setupRows: number;
  level: number;
  squares: number[];
  glyphs: Glyph[];
  links: Link[];
  affordances: Affordance[];
  toMove: Color;
  outcome: Outcome;
  version: number;
  chain: ChainState | null;
}

/** Occupancy shown as a whole percent; certain pieces carry no label. */
export function probabilityLabel(probability: number): string | null {
  if (probability >= 1) return null;
  return `${Math.round(probability * 100)}%`;
}

function fail(msg: string): never {
  throw new SchemaError(msg);
}

function isInt(x: unknown): x is number {
  return typeof x === 'number' && Number.isInteger(x);
}

const COLORS = new Set(['white', 'black']);
const OUTCOMES = new Set(['ongoing', 'white_wins', 'black_wins', 'draw']);
const KINDS = new Set(['step', 'capture', 'split', 'merge', 'pass']);

export function validateState(raw: unknown): GameState {
  if (typeof raw !== 'object' || raw === null) fail('state is not an object');
  const s = raw as Record<string, unknown>;
  const geom = s.geometry as Record<string, unknown> | undefined;
  if (!geom || !isInt(geom.side) || !isInt(geom.setupRows) || !isInt(geom.numSquares)) {
    fail('bad geometry');
  }
  if (geom.numSquares !== numPlayable(geom.side as number)) {
    fail(`numSquares ${geom.numSquares} does not fit side ${geom.side}`);
  }
  const n = geom.numSquares as number;
  if (!isInt(s.level) || !isInt(s.version) || !isInt(s.ply)) fail('bad counters');
  if (!COLORS.has(s.toMove as string)) fail(`bad toMove ${s.toMove}`);
  if (!OUTCOMES.has(s.outcome as string)) fail(`bad outcome ${s.outcome}`);
  if (s.chain !== null) {
    const ch = s.chain as Record<string, unknown> | undefined;
    if (!ch || !isInt(ch.piece) || !isInt(ch.square)) fail('bad chain');
  }
  if (!Array.isArray(s.pieces)) fail('pieces is not an array');
  for (const p of s.pieces as Array<Record<string, unknown>>) {
    if (!isInt(p.id) || !COLORS.has(p.color as string) || typeof p.crowned !== 'boolean') {
      fail(`bad piece entry ${JSON.stringify(p)}`);
    }
    if (!Array.isArray(p.squares) || p.squares.length === 0) {
      fail(`piece ${p.id} has no squares`);
    }
    for (const q of p.squares as Array<Record<string, unknown>>) {
      if (!isInt(q.square) || q.square < 0 || q.square >= n) {
        fail(`piece ${p.id} on bad square ${q.square}`);
      }
      const prob = q.probability;
      if (typeof prob !== 'number' || prob < 0 || prob > 1) {
        fail(`piece ${p.id} square ${q.square} bad probability ${prob}`);
      }
    }
  }
  if (!Array.isArray(s.entanglement)) fail('entanglement is not an array');
  for (const group of s.entanglement as unknown[]) {
    if (!Array.isArray(group) || group.length < 2 || !group.every(isInt)) {
      fail(`bad entanglement group ${JSON.stringify(group)}`);
    }
  }
  return raw as GameState;
}

export function validateMoves(raw: unknown, numSquares: number): MovesPayload {
  if (typeof raw !== 'object' || raw === null) fail('moves payload is not an object');
  const m = raw as Record<string, unknown>;
  if (!isInt(m.version) || !Array.isArray(m.moves)) fail('bad moves payload');
  for (const entry of m.moves as Array<Record<string, unknown>>) {
    if (!KINDS.has(entry.type as string)) fail(`bad move type ${entry.type}`);
    if (typeof entry.id !== 'string') fail('move entry without id');
    if (!Array.isArray(entry.squares)) fail('move entry without squares');
    for (const q of entry.squares as unknown[]) {
      if (!isInt(q) || q < 0 || q >= numSquares) {
        fail(`move square ${q} out of range`);
      }
    }
    const want = entry.type === 'pass' ? 0 : entry.type === 'step' ? 2 : 3;
    if ((entry.squares as unknown[]).length !== want) {
      fail(`${entry.type} move with ${(entry.squares as unknown[]).length} squares`);
    }
  }
  return raw as unknown as MovesPayload;
}

function affordanceOf(entry: MoveEntry): Affordance {
  const sq = entry.squares;
  const base = {
    id: entry.id,
    kind: entry.type,
    piece: entry.piece,
    squares: [...sq],
  };
  switch (entry.type) {
    case 'step':
      return {
        ...base,
        sources: [sq[0]!],
        target: sq[1]!,
        arrows: [{ from: sq[0]!, to: sq[1]! }],
      };
    case 'capture':
      return {
        ...base,
        sources: [sq[0]!],
        target: sq[2]!,
        arrows: [{ from: sq[0]!, to: sq[2]!, over: sq[1]! }],
      };
    case 'split':
      // one piece, two outgoing arrows, both shown on the same button
      return {
        ...base,
        sources: [sq[0]!],
        target: null,
        arrows: [
          { from: sq[0]!, to: sq[1]! },
          { from: sq[0]!, to: sq[2]! },
        ],
      };
    case 'merge':
      // two origins converging on one destination
      return {
        ...base,
        sources: [sq[0]!, sq[1]!],
        target: sq[2]!,
        arrows: [
          { from: sq[0]!, to: sq[2]! },
          { from: sq[1]!, to: sq[2]! },
        ],
      };
    case 'pass':
      return { ...base, sources: [], target: null, arrows: [] };
  }
}

export function buildBoardView(stateRaw: unknown, movesRaw: unknown | null): BoardView {
  const state = validateState(stateRaw);
  const n = state.geometry.numSquares;

  const glyphs: Glyph[] = [];
  const squaresOf = new Map<number, number[]>();
  for (const p of state.pieces) {
    squaresOf.set(p.id, p.squares.map((q) => q.square));
    for (const q of p.squares) {
      glyphs.push({
        piece: p.id,
        color: p.color,
        crowned: p.crowned,
        square: q.square,
        probability: q.probability,
        label: probabilityLabel(q.probability),
      });
    }
  }

  const links: Link[] = [];
  for (const p of state.pieces) {
    if (p.squares.length > 1) {
      links.push({
        kind: 'self',
        pieces: [p.id],
        squares: p.squares.map((q) => q.square),
      });
    }
  }
  for (const group of state.entanglement) {
    const squares: number[] = [];
    for (const pid of group) {
      const sqs = squaresOf.get(pid);
      if (!sqs) fail(`entanglement group names unknown piece ${pid}`);
      squares.push(...sqs);
    }
    links.push({ kind: 'entangled', pieces: [...group], squares });
  }

  let affordances: Affordance[] = [];
  if (movesRaw !== null && state.outcome === 'ongoing') {
    const moves = validateMoves(movesRaw, n);
    if (moves.version !== state.version) {
      throw new StaleMovesError(
        `moves are for version ${moves.version}, state is ${state.version}`,
      );
    }
    affordances = moves.moves.map(affordanceOf);
  }

  return {
    side: state.geometry.side,
    setupRows: state.geometry.setupRows,
    level: state.level,
    squares: Array.from({ length: n }, (_, i) => i),
    glyphs,
    links,
    affordances,
    toMove: state.toMove,
    outcome: state.outcome,
    version: state.version,
    chain: state.chain,
  };
}
