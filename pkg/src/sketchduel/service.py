"""FastAPI service: the WebSocket game endpoint plus a few REST endpoints
for operational visibility.

The protocol core (rooms.LobbyService) is synchronous; this layer only
accepts connections, feeds frames in, and fans the returned messages out
through per-connection queues so outbound order always matches event
order. Heartbeats live here, not in the protocol core.
"""

from __future__ import annotations

import asyncio
import itertools
import json
import time
from contextlib import asynccontextmanager
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import protocol
from .rooms import LobbyService

TIMER_INTERVAL_SECONDS = 0.2
HEARTBEAT_SECONDS = 15.0
HEARTBEAT_MISS_LIMIT = 2


class HealthResponse(BaseModel):
    status: str
    rooms: int
    categories: int


class InfoResponse(BaseModel):
    categories: list[str]
    rounds_to_play: int
    round_seconds: float
    confidence_threshold: float
    ink_multiplier: float


class _Connection:
    def __init__(self, client_id: str, ws: WebSocket):
        self.client_id = client_id
        self.ws = ws
        self.queue: asyncio.Queue[str] = asyncio.Queue()
        self.missed_pings = 0


def create_app(service: LobbyService, static_dir: str | Path | None = None,
               heartbeat_seconds: float = HEARTBEAT_SECONDS) -> FastAPI:
    connections: dict[str, _Connection] = {}
    ids = itertools.count(1)

    def dispatch(outbound) -> None:
        for client_id, msg in outbound:
            conn = connections.get(client_id)
            if conn is not None:
                conn.queue.put_nowait(protocol.encode(msg))

    async def timer_loop() -> None:
        while True:
            await asyncio.sleep(TIMER_INTERVAL_SECONDS)
            dispatch(service.run_timers(time.time()))

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        task = asyncio.create_task(timer_loop())
        try:
            yield
        finally:
            task.cancel()

    app = FastAPI(title="sketchduel", lifespan=lifespan)

    @app.get("/healthz", response_model=HealthResponse)
    def healthz() -> HealthResponse:
        return HealthResponse(status="ok", rooms=len(service.rooms),
                              categories=len(service.index.categories))

    @app.get("/info", response_model=InfoResponse)
    def info() -> InfoResponse:
        d = service.defaults
        return InfoResponse(categories=list(service.index.categories),
                            rounds_to_play=d.rounds_to_play,
                            round_seconds=d.round_seconds,
                            confidence_threshold=d.confidence_threshold,
                            ink_multiplier=d.ink_multiplier)

    async def writer(conn: _Connection) -> None:
        while True:
            text = await conn.queue.get()
            await conn.ws.send_text(text)

    async def heartbeat(conn: _Connection) -> None:
        while True:
            await asyncio.sleep(heartbeat_seconds)
            if conn.missed_pings >= HEARTBEAT_MISS_LIMIT:
                await conn.ws.close(code=1001)
                return
            conn.missed_pings += 1
            conn.queue.put_nowait(protocol.encode(protocol.ping()))

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket) -> None:
        await ws.accept()
        conn = _Connection(f"C{next(ids)}", ws)
        connections[conn.client_id] = conn
        tasks = [asyncio.create_task(writer(conn)),
                 asyncio.create_task(heartbeat(conn))]
        try:
            while True:
                text = await ws.receive_text()
                try:
                    frame = json.loads(text)
                except json.JSONDecodeError:
                    frame = text   # let the core report the schema error
                if isinstance(frame, dict) and frame.get("type") == "pong":
                    conn.missed_pings = 0
                    continue
                dispatch(service.handle_message(conn.client_id, frame,
                                                time.time()))
        except WebSocketDisconnect:
            pass
        finally:
            for task in tasks:
                task.cancel()
            connections.pop(conn.client_id, None)
            dispatch(service.handle_disconnect(conn.client_id, time.time()))

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True),
                  name="client")

    return app
