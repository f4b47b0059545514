// Thin fetch wrapper around the game service.  One base URL, JSON in and
// out, and the service's {code, message} error envelope surfaced as a
// typed exception so the app can branch on conflicts.

import type {
  CreateGameResponse,
  GameState,
  MovesPayload,
  PlayMoveResponse,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export interface NewGameOptions {
  size: number;
  level: number;
  white: string;
  black: string;
  seed?: number;
  setupRows?: number;
}

export class GameClient {
  constructor(public baseUrl: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const url = this.baseUrl.replace(/\/$/, '') + path;
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { 'content-type': 'application/json' };
      init.body = JSON.stringify(body);
    }
    const resp = await fetch(url, init);
    let payload: unknown = null;
    try {
      payload = await resp.json();
    } catch {
      // fall through; missing body handled below
    }
    if (!resp.ok) {
      const err = (payload ?? {}) as { code?: string; message?: string };
      throw new ApiError(
        resp.status,
        err.code ?? 'http_error',
        err.message ?? `request failed with status ${resp.status}`,
      );
    }
    if (payload === null) {
      throw new ApiError(resp.status, 'bad_payload', 'response was not JSON');
    }
    return payload as T;
  }

  createGame(options: NewGameOptions): Promise<CreateGameResponse> {
    return this.request('POST', '/games', options);
  }

  getState(gameId: string): Promise<GameState> {
    return this.request('GET', `/games/${encodeURIComponent(gameId)}`);
  }

  listMoves(gameId: string): Promise<MovesPayload> {
    return this.request('GET', `/games/${encodeURIComponent(gameId)}/moves`);
  }

  playMove(gameId: string, moveId: string): Promise<PlayMoveResponse> {
    return this.request(
      'POST',
      `/games/${encodeURIComponent(gameId)}/moves/${encodeURIComponent(moveId)}`,
    );
  }
}
