"""HTTP game service: create games, inspect state, play moves.

Sessions live in memory and expire after a day of inactivity.  Each game
id carries an exclusive lock so concurrent requests against it serialize;
agent replies are computed on a small worker pool off the request thread
and returned in the same response, so a polling client never needs a push
channel.
"""

from __future__ import annotations

import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import random

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .agents import make_agent
from .board import BLACK, WHITE, COLOR_NAMES
from .game import Game, ONGOING
from .harness import PLY_ABORT, derive_seed
from .moves import move_to_dict

DEFAULT_EXPIRY = 24 * 3600


class ServiceError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _bad_request(message: str) -> ServiceError:
    return ServiceError(400, "bad_request", message)


@dataclass
class Session:
    game: Game
    controllers: dict[int, str]
    agents: dict[int, object] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)
    created: float = field(default_factory=time.time)
    last_active: float = field(default_factory=time.time)

    def touch(self):
        self.last_active = time.time()


class GameStore:
    """Id-keyed session registry with idle expiry."""

    def __init__(self, expiry: float = DEFAULT_EXPIRY):
        self.expiry = expiry
        self._sessions: dict[str, Session] = {}
        self._guard = threading.Lock()

    def add(self, session: Session) -> str:
        gid = uuid.uuid4().hex
        with self._guard:
            self._sessions[gid] = session
        return gid

    def get(self, gid: str) -> Session:
        with self._guard:
            session = self._sessions.get(gid)
        if session is None:
            raise ServiceError(404, "unknown_game", f"no game {gid!r}")
        session.touch()
        return session

    def sweep(self, now: float | None = None) -> int:
        now = time.time() if now is None else now
        with self._guard:
            stale = [
                gid for gid, s in self._sessions.items()
                if now - s.last_active > self.expiry
            ]
            for gid in stale:
                del self._sessions[gid]
        return len(stale)

    def __len__(self):
        return len(self._sessions)


def _make_controller(raw, color: int, game_seed: int):
    """Validate a controller field; returns (label, agent or None)."""
    if not isinstance(raw, str) or not raw:
        raise _bad_request("controller must be 'human' or an agent spec")
    if raw == "human":
        return raw, None
    try:
        agent = make_agent(
            raw, random.Random(derive_seed(game_seed, "service", color, raw)))
    except ValueError as exc:
        raise _bad_request(str(exc)) from None
    return raw, agent


def _state_payload(gid: str, session: Session) -> dict:
    state = session.game.display_dict()
    state["gameId"] = gid
    state["seed"] = session.game.seed
    state["controllers"] = {
        COLOR_NAMES[c]: session.controllers[c] for c in (WHITE, BLACK)
    }
    return state


def _move_id(version: int, index: int) -> str:
    return f"{version}-{index}"


def _moves_payload(session: Session) -> dict:
    game = session.game
    moves = []
    for i, mv in enumerate(game.legal_moves()):
        entry = move_to_dict(mv)
        entry["id"] = _move_id(game.version, i)
        moves.append(entry)
    return {"version": game.version, "moves": moves}


def _advance_agents(session: Session) -> list[dict]:
    """Let agent controllers play until a human's turn or the game ends."""
    game = session.game
    records = []
    while game.outcome == ONGOING and game.ply < PLY_ABORT:
        agent = session.agents.get(game.to_move)
        if agent is None:
            break
        rec = game.step(agent.choose(game), validate=False)
        records.append(rec.to_dict())
    return records


def create_app(expiry: float = DEFAULT_EXPIRY, agent_workers: int = 2) -> FastAPI:
    app = FastAPI(title="cheqqers", docs_url=None, redoc_url=None)
    # browser clients are served from their own origin (a static file server)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = GameStore(expiry)
    pool = ThreadPoolExecutor(max_workers=agent_workers)
    app.state.store = store

    @app.exception_handler(ServiceError)
    async def _service_error(request: Request, exc: ServiceError):
        return JSONResponse(
            status_code=exc.status,
            content={"code": exc.code, "message": exc.message},
        )

    @app.get("/health")
    def health():
        return {"status": "ok", "games": len(store)}

    @app.post("/games", status_code=201)
    def create_game(body: dict):
        store.sweep()
        level = body.get("level", 0)
        size = body.get("size", 8)
        setup_rows = body.get("setupRows")
        seed = body.get("seed")
        if not isinstance(level, int) or not isinstance(size, int):
            raise _bad_request("level and size must be integers")
        if seed is not None and not isinstance(seed, int):
            raise _bad_request("seed must be an integer")
        if setup_rows is not None and not isinstance(setup_rows, int):
            raise _bad_request("setupRows must be an integer")
        try:
            game = Game.new(size, level, seed=seed, setup_rows=setup_rows)
        except ValueError as exc:
            raise _bad_request(str(exc)) from None

        controllers = {}
        agents = {}
        for color, key in ((WHITE, "white"), (BLACK, "black")):
            raw = body.get(key, "human")
            label, agent = _make_controller(raw, color, game.seed)
            controllers[color] = label
            if agent is not None:
                agents[color] = agent
        session = Session(game=game, controllers=controllers, agents=agents)
        gid = store.add(session)
        with session.lock:
            records = pool.submit(_advance_agents, session).result()
        return {
            "gameId": gid,
            "seed": game.seed,
            "records": records,
            "state": _state_payload(gid, session),
        }

    @app.get("/games/{gid}")
    def get_state(gid: str):
        session = store.get(gid)
        with session.lock:
            return _state_payload(gid, session)

    @app.get("/games/{gid}/moves")
    def list_moves(gid: str):
        session = store.get(gid)
        with session.lock:
            if session.game.outcome != ONGOING:
                raise ServiceError(409, "game_over", "the game has ended")
            return _moves_payload(session)

    @app.post("/games/{gid}/moves/{move_id}")
    def play_move(gid: str, move_id: str):
        session = store.get(gid)
        with session.lock:
            game = session.game
            if game.outcome != ONGOING:
                raise ServiceError(409, "game_over", "the game has ended")
            if session.controllers[game.to_move] != "human":
                raise ServiceError(
                    409, "not_your_turn", "an agent controls the side to move")
            try:
                version_s, index_s = move_id.split("-", 1)
                version, index = int(version_s), int(index_s)
            except ValueError:
                raise _bad_request(f"malformed move id {move_id!r}") from None
            if version != game.version:
                raise ServiceError(
                    409, "stale_move",
                    f"move id is for version {version}, game is at {game.version}")
            moves = game.legal_moves()
            if not 0 <= index < len(moves):
                raise _bad_request(f"move index {index} out of range")
            rec = game.step(moves[index])
            records = [rec.to_dict()]
            records.extend(pool.submit(_advance_agents, session).result())
            return {
                "records": records,
                "state": _state_payload(gid, session),
            }

    return app
