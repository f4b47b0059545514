// Square indexing and screen placement.
//
// The service indexes playable squares the way the engine does: a square at
// (row, col) is playable when row + col is even, and playable squares are
// numbered row-major starting from white's back row.  The board is drawn
// with white at the bottom, so the screen y axis runs against the row axis.
// This file is layout only; legality always comes from the service.

export interface Coord {
  row: number;
  col: number;
}

export const TILE = 64;

export function numPlayable(side: number): number {
  // odd sides have one extra playable square on the even diagonal
  return Math.ceil((side * side) / 2);
}

export function squareCoord(index: number, side: number): Coord {
  if (!Number.isInteger(index) || index < 0 || index >= numPlayable(side)) {
    throw new RangeError(`square ${index} out of range for side ${side}`);
  }
  const perRowPair = side; // two rows hold `side` playable squares together
  const pair = Math.floor(index / perRowPair);
  let rem = index % perRowPair;
  const evenRowCount = Math.ceil(side / 2); // playable cols in an even row
  let row = 2 * pair;
  let col;
  if (rem < evenRowCount) {
    col = 2 * rem;
  } else {
    row += 1;
    rem -= evenRowCount;
    col = 2 * rem + 1;
  }
  return { row, col };
}

export function coordIndex(row: number, col: number, side: number): number | null {
  if (row < 0 || row >= side || col < 0 || col >= side) return null;
  if ((row + col) % 2 !== 0) return null;
  const evenRowCount = Math.ceil(side / 2);
  const oddRowCount = Math.floor(side / 2);
  const pairs = Math.floor(row / 2);
  let index = pairs * (evenRowCount + oddRowCount);
  if (row % 2 === 1) index += evenRowCount;
  index += Math.floor(col / 2);
  return index;
}

export function tileX(col: number): number {
  return col * TILE;
}

export function tileY(row: number, side: number): number {
  return (side - 1 - row) * TILE;
}

export function centerOf(index: number, side: number): { x: number; y: number } {
  const { row, col } = squareCoord(index, side);
  return { x: tileX(col) + TILE / 2, y: tileY(row, side) + TILE / 2 };
}
