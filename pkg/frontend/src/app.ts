// Application controller: owns the current game, selection, the polling
// loop, and the single in-flight mutation.  All game knowledge comes from
// service payloads; this file only decides when to fetch and what to show.

import { ApiError, GameClient, type NewGameOptions } from './api.js';
import { renderBoard } from './render.js';
import {
  buildBoardView,
  SchemaError,
  StaleMovesError,
  type BoardView,
} from './view.js';
import type { GameState, MovesPayload, TurnRecord } from './types.js';

const POLL_MS = 500;
const FLASH_MS = 700;

export interface AppElements {
  board: SVGSVGElement;
  status: HTMLElement;
  banner: HTMLElement;
  log: HTMLElement;
}

function describeRecord(rec: TurnRecord): string {
  const mv = rec.move;
  let head: string;
  if (mv.type === 'pass' || rec.result === 'pass') {
    head = `pass (${rec.passReason ?? mv.reason ?? 'failed capture'})`;
  } else {
    head = `${mv.type} ${mv.squares.join(' > ')}`;
  }
  const bits: string[] = [head];
  for (const event of rec.measurements) {
    bits.push(
      'measured ' + event.map((m) => `${m.square}:${m.bit}`).join(' '),
    );
  }
  if (rec.captured.length) bits.push(`captured piece ${rec.captured.join(', ')}`);
  if (rec.crowned.length) bits.push(`crowned piece ${rec.crowned.join(', ')}`);
  return bits.join('; ');
}

export class App {
  private client: GameClient;
  private state: GameState | null = null;
  private moves: MovesPayload | null = null;
  private view: BoardView | null = null;
  private selected: number | null = null;
  private busy = false;
  private pollTimer: number | null = null;
  private flashes = new Map<number, 'gone' | 'solid'>();
  private flashTimer: number | null = null;

  constructor(private els: AppElements, baseUrl: string) {
    this.client = new GameClient(baseUrl);
  }

  setBaseUrl(url: string): void {
    this.client.baseUrl = url;
  }

  async newGame(options: NewGameOptions): Promise<void> {
    if (this.busy) return;
    this.busy = true;
    this.stopPolling();
    try {
      const resp = await this.client.createGame(options);
      this.els.log.replaceChildren();
      this.logLine(`game ${resp.gameId} seed ${resp.state.seed}`);
      this.applyUpdate(resp.state, resp.records);
    } catch (err) {
      this.showError(err);
    } finally {
      this.busy = false;
    }
    await this.ensureMoves();
  }

  /** Human clicked a square: select a piece or clear the selection. */
  onSquareClick(square: number): void {
    if (!this.view || this.busy || !this.humanTurn()) return;
    const mine = this.view.affordances.some((a) => a.sources.includes(square));
    this.selected = mine && this.selected !== square ? square : null;
    this.render();
  }

  async onAffordanceClick(id: string): Promise<void> {
    if (!this.state || this.busy || !this.humanTurn()) return;
    this.busy = true;
    try {
      const resp = await this.client.playMove(this.state.gameId, id);
      this.applyUpdate(resp.state, resp.records);
    } catch (err) {
      if (err instanceof ApiError && err.code === 'stale_move') {
        this.logLine('move was stale; refreshing');
        await this.refresh();
      } else {
        this.showError(err);
      }
    } finally {
      this.busy = false;
    }
    await this.ensureMoves();
  }

  async refresh(): Promise<void> {
    if (!this.state) return;
    try {
      const state = await this.client.getState(this.state.gameId);
      if (state.version < this.state.version) return; // stale response
      this.applyUpdate(state, []);
      await this.ensureMoves();
    } catch (err) {
      this.showError(err);
    }
  }

  // ------------------------------------------------------------ internals

  private humanTurn(): boolean {
    return (
      this.state !== null &&
      this.state.outcome === 'ongoing' &&
      this.state.controllers[this.state.toMove] === 'human'
    );
  }

  private applyUpdate(state: GameState, records: TurnRecord[]): void {
    this.state = state;
    this.moves = null;
    this.selected = null;
    for (const rec of records) this.logLine(describeRecord(rec));
    this.collectFlashes(records);
    this.rebuild();
    if (state.outcome === 'ongoing' && !this.humanTurn()) {
      this.startPolling();
    } else {
      this.stopPolling();
    }
    if (state.outcome !== 'ongoing') {
      this.logLine(`result: ${state.outcome.replace('_', ' ')}`);
    }
  }

  private async ensureMoves(): Promise<void> {
    if (!this.state || !this.humanTurn() || this.moves) return;
    try {
      const moves = await this.client.listMoves(this.state.gameId);
      if (!this.state || moves.version !== this.state.version) return;
      this.moves = moves;
      this.rebuild();
    } catch (err) {
      if (err instanceof ApiError && err.code === 'game_over') {
        await this.refresh();
        return;
      }
      this.showError(err);
    }
  }

  private rebuild(): void {
    if (!this.state) return;
    try {
      this.view = buildBoardView(this.state, this.moves);
      this.clearError();
    } catch (err) {
      if (err instanceof StaleMovesError) {
        this.moves = null;
        this.view = buildBoardView(this.state, null);
      } else {
        this.view = null;
        this.showError(err);
        this.els.board.replaceChildren(); // no partial board
        return;
      }
    }
    this.render();
  }

  private render(): void {
    if (!this.view) return;
    renderBoard(
      this.els.board,
      this.view,
      {
        selected: this.selected,
        flashes: this.flashes,
        live: this.humanTurn() && !this.busy,
      },
      {
        onSquareClick: (sq) => this.onSquareClick(sq),
        onAffordanceClick: (id) => void this.onAffordanceClick(id),
      },
    );
    this.renderStatus();
  }

  private renderStatus(): void {
    if (!this.state) return;
    const s = this.state;
    let line: string;
    if (s.outcome !== 'ongoing') {
      line = `finished: ${s.outcome.replace('_', ' ')}`;
    } else {
      const who = s.controllers[s.toMove];
      const hand = who === 'human' ? 'your move' : `waiting for ${who}`;
      line = `${s.toMove} to move (${hand})`;
      if (s.chain) line += ', capture chain in progress';
    }
    this.els.status.textContent =
      `level ${s.level} · ply ${s.ply} · ${line}`;
  }

  private collectFlashes(records: TurnRecord[]): void {
    this.flashes = new Map();
    for (const rec of records) {
      for (const event of rec.measurements) {
        for (const m of event) {
          this.flashes.set(m.square, m.bit === 1 ? 'solid' : 'gone');
        }
      }
    }
    if (this.flashTimer !== null) clearTimeout(this.flashTimer);
    if (this.flashes.size) {
      this.flashTimer = setTimeout(() => {
        this.flashes = new Map();
        this.flashTimer = null;
        this.render();
      }, FLASH_MS) as unknown as number;
    }
  }

  private startPolling(): void {
    if (this.pollTimer !== null) return;
    this.pollTimer = setInterval(() => {
      if (!this.busy) void this.pollOnce();
    }, POLL_MS) as unknown as number;
  }

  private stopPolling(): void {
    if (this.pollTimer !== null) {
      clearInterval(this.pollTimer);
      this.pollTimer = null;
    }
  }

  private async pollOnce(): Promise<void> {
    if (!this.state) return;
    try {
      const state = await this.client.getState(this.state.gameId);
      if (!this.state || state.version <= this.state.version) return;
      this.applyUpdate(state, []);
      await this.ensureMoves();
    } catch {
      // transient poll errors are retried on the next tick
    }
  }

  private logLine(text: string): void {
    const div = document.createElement('div');
    div.textContent = text;
    this.els.log.append(div);
    this.els.log.scrollTop = this.els.log.scrollHeight;
  }

  private showError(err: unknown): void {
    let text: string;
    if (err instanceof ApiError) {
      text = `service error ${err.status} (${err.code}): ${err.message}`;
    } else if (err instanceof SchemaError) {
      text = `bad payload from service: ${err.message}`;
    } else {
      text = `error: ${err instanceof Error ? err.message : String(err)}`;
    }
    this.els.banner.textContent = text;
    this.els.banner.hidden = false;
  }

  private clearError(): void {
    this.els.banner.hidden = true;
  }
}
