// Wire types for the game service JSON API.  These mirror the server's
// response schemas; the client never derives game facts that are not in
// these payloads.

export type Color = 'white' | 'black';

export type Outcome = 'ongoing' | 'white_wins' | 'black_wins' | 'draw';

export type MoveKind = 'step' | 'capture' | 'split' | 'merge' | 'pass';

export interface GeometryInfo {
  side: number;
  setupRows: number;
  numSquares: number;
}

export interface SquareProb {
  square: number;
  probability: number;
}

export interface PieceState {
  id: number;
  color: Color;
  crowned: boolean;
  lineage: number;
  squares: SquareProb[];
}

export interface ChainState {
  piece: number;
  square: number;
}

export interface GameState {
  geometry: GeometryInfo;
  level: number;
  toMove: Color;
  outcome: Outcome;
  noCapturePlies: number;
  ply: number;
  version: number;
  chain: ChainState | null;
  pieces: PieceState[];
  entanglement: number[][];
  gameId: string;
  seed: number;
  controllers: Record<Color, string>;
}

export interface MoveEntry {
  type: MoveKind;
  piece: number | null;
  squares: number[];
  id: string;
  reason?: string;
}

export interface MovesPayload {
  version: number;
  moves: MoveEntry[];
}

export interface MeasurementEntry {
  square: number;
  bit: number;
}

export interface TurnRecord {
  move: { type: MoveKind; piece: number | null; squares: number[]; reason?: string };
  result: string;
  measurements: MeasurementEntry[][];
  captured: number[];
  crowned: number[];
  passReason?: string;
}

export interface CreateGameResponse {
  gameId: string;
  records: TurnRecord[];
  state: GameState;
}

export interface PlayMoveResponse {
  records: TurnRecord[];
  state: GameState;
}

export interface ErrorBody {
  code: string;
  message: string;
}
