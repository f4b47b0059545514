// SVG board renderer.  Stateless: every call clears the element and draws
// the given view.  Affordances are drawn exactly as the view describes
// them; a split shows its two diverging arrows on one button, a merge
// shows two arrows meeting on the destination square.

import type { Affordance, BoardView, Glyph } from './view.js';
import { TILE, centerOf, squareCoord, tileX, tileY } from './geometry.js';

const NS = 'http://www.w3.org/2000/svg';

export interface RenderCallbacks {
  onSquareClick(square: number): void;
  onAffordanceClick(id: string): void;
}

export interface RenderHints {
  selected: number | null;
  /** squares to accent after a measurement: vanished or solidified */
  flashes: ReadonlyMap<number, 'gone' | 'solid'>;
  /** allow interaction (it is a human's turn and no request is in flight) */
  live: boolean;
}

function el(
  name: string,
  attrs: Record<string, string | number>,
  ...children: (Element | string)[]
): SVGElement {
  const node = document.createElementNS(NS, name);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, String(v));
  for (const c of children) {
    node.append(typeof c === 'string' ? document.createTextNode(c) : c);
  }
  return node;
}

function arrowLine(
  x1: number, y1: number, x2: number, y2: number, cls: string,
): SVGElement {
  // stop short of the head square so the marker tip does not overshoot
  const dx = x2 - x1;
  const dy = y2 - y1;
  const len = Math.hypot(dx, dy) || 1;
  const trim = TILE * 0.3;
  return el('line', {
    x1, y1,
    x2: x2 - (dx / len) * trim,
    y2: y2 - (dy / len) * trim,
    class: cls,
    'marker-end': 'url(#arrowhead)',
  });
}

function drawGlyph(g: Glyph, view: BoardView, faded: boolean): SVGElement {
  const { x, y } = centerOf(g.square, view.side);
  const group = el('g', {
    class: `piece ${g.color}${faded ? ' faded' : ''}`,
    'data-piece': g.piece,
    'data-square': g.square,
  });
  group.append(el('circle', { cx: x, cy: y, r: TILE * 0.36, class: 'body' }));
  if (g.crowned) {
    group.append(el('text', { x, y: y + 5, class: 'crown' }, '♛'));
  }
  if (g.label !== null) {
    group.append(
      el('text', { x, y: y + TILE * 0.36 + 11, class: 'prob' }, g.label),
    );
  }
  return group;
}

function splitButtonPos(a: Affordance, view: BoardView): { x: number; y: number } {
  // between the two destinations, nudged away from the source
  const [one, two] = a.arrows;
  const p1 = centerOf(one!.to, view.side);
  const p2 = centerOf(two!.to, view.side);
  const src = centerOf(one!.from, view.side);
  const mx = (p1.x + p2.x) / 2;
  const my = (p1.y + p2.y) / 2;
  const dx = mx - src.x;
  const dy = my - src.y;
  const len = Math.hypot(dx, dy) || 1;
  return { x: mx + (dx / len) * 6, y: my + (dy / len) * 6 };
}

function drawAffordance(
  a: Affordance, view: BoardView, cb: RenderCallbacks,
): SVGElement {
  const group = el('g', { class: `affordance ${a.kind}`, 'data-move': a.id });
  const fire = (evt: Event) => {
    evt.stopPropagation();
    cb.onAffordanceClick(a.id);
  };
  for (const arrow of a.arrows) {
    const from = centerOf(arrow.from, view.side);
    const to = centerOf(arrow.to, view.side);
    group.append(arrowLine(from.x, from.y, to.x, to.y, `arrow ${a.kind}`));
    if (arrow.over !== undefined) {
      const over = centerOf(arrow.over, view.side);
      group.append(
        el('circle', { cx: over.x, cy: over.y, r: TILE * 0.18, class: 'over-mark' }),
      );
    }
  }
  if (a.kind === 'split') {
    const pos = splitButtonPos(a, view);
    const btn = el('circle', {
      cx: pos.x, cy: pos.y, r: TILE * 0.22, class: 'quantum-button',
    });
    btn.addEventListener('click', fire);
    group.append(btn);
  } else if (a.target !== null) {
    const { x, y } = centerOf(a.target, view.side);
    const cls = a.kind === 'merge' ? 'quantum-button' : 'target-ring';
    const ring = el('circle', { cx: x, cy: y, r: TILE * 0.26, class: cls });
    ring.addEventListener('click', fire);
    group.append(ring);
  }
  return group;
}

export function renderBoard(
  svg: SVGSVGElement,
  view: BoardView,
  hints: RenderHints,
  cb: RenderCallbacks,
): void {
  svg.replaceChildren();
  const px = view.side * TILE;
  svg.setAttribute('viewBox', `0 0 ${px} ${px}`);

  const defs = el('defs', {});
  const marker = el('marker', {
    id: 'arrowhead', viewBox: '0 0 10 10', refX: 8, refY: 5,
    markerWidth: 7, markerHeight: 7, orient: 'auto-start-reverse',
  });
  marker.append(el('path', { d: 'M 0 0 L 10 5 L 0 10 z', class: 'arrowfill' }));
  defs.append(marker);
  svg.append(defs);

  for (let row = 0; row < view.side; row++) {
    for (let col = 0; col < view.side; col++) {
      const playable = (row + col) % 2 === 0;
      const rect = el('rect', {
        x: tileX(col), y: tileY(row, view.side),
        width: TILE, height: TILE,
        class: playable ? 'tile playable' : 'tile',
      });
      svg.append(rect);
    }
  }

  // invisible hit layer over playable squares so clicks land anywhere in the cell
  const selectable = new Set<number>();
  if (hints.live) {
    for (const a of view.affordances) for (const s of a.sources) selectable.add(s);
  }
  for (const sq of view.squares) {
    const { row, col } = squareCoord(sq, view.side);
    const hit = el('rect', {
      x: tileX(col), y: tileY(row, view.side),
      width: TILE, height: TILE,
      class: 'hit' + (selectable.has(sq) ? ' selectable' : ''),
      'data-square': sq,
    });
    hit.addEventListener('click', () => cb.onSquareClick(sq));
    svg.append(hit);
  }

  if (hints.selected !== null) {
    const { row, col } = squareCoord(hints.selected, view.side);
    svg.append(el('rect', {
      x: tileX(col), y: tileY(row, view.side),
      width: TILE, height: TILE, class: 'selected',
    }));
  }

  for (const link of view.links) {
    const pts = link.squares
      .map((sq) => centerOf(sq, view.side))
      .map((p) => `${p.x},${p.y}`)
      .join(' ');
    svg.append(el('polyline', { points: pts, class: `link ${link.kind}` }));
  }

  for (const [square, kind] of hints.flashes) {
    const { x, y } = centerOf(square, view.side);
    svg.append(el('circle', {
      cx: x, cy: y, r: TILE * 0.4, class: `flash ${kind}`,
    }));
  }

  for (const g of view.glyphs) {
    svg.append(drawGlyph(g, view, hints.flashes.get(g.square) === 'gone'));
  }

  if (hints.live && hints.selected !== null) {
    for (const a of view.affordances) {
      if (a.sources.includes(hints.selected)) {
        svg.append(drawAffordance(a, view, cb));
      }
    }
  }
}
