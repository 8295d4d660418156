"""Live steering service: one websocket per session, exchanging JSON frames.

The server owns the authoritative state and advances it either on explicit
``step`` requests (paused mode) or on a wall-clock ticker (running mode).  A
human drives the shill through ``set_shill`` commands, or the pull-law
autopilot does. Protocol schema is versioned with a ``v`` field (current: 1);
see README for the message catalogue.
"""
from __future__ import annotations

import asyncio
import json
import logging
import math
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import HTMLResponse
from fastapi.staticfiles import StaticFiles

from .control import CommandSource, ControlCommand, UBetaParams, u_beta, validate_manual
from .errors import ConfigError, InvalidCommand, ScenarioViolation
from .harness import ControlMode, RunConfig, config_from_dict
from .model import SwarmState, step
from .scenarios import generate_scenario

log = logging.getLogger(__name__)

PROTOCOL_VERSION = 1
DEFAULT_TICK_RATE = 20.0
DEFAULT_FRAME_BUFFER = 256

_FALLBACK_PAGE = """<!doctype html>
<html><body>
<h1>shillflock live service</h1>
<p>No UI assets are mounted. Build the frontend (see README) and restart with
<code>--ui-dir</code>, or talk to <code>/ws</code> directly.</p>
</body></html>"""


def _lenient_delta(state: SwarmState) -> Optional[float]:
    hdg = state.headings
    if bool(np.all((hdg >= 0.0) & (hdg < math.pi))):
        return math.pi - float(hdg.min())
    return None


def state_frame(state: SwarmState) -> dict:
    shill = None
    if state.shill is not None:
        shill = {"x": state.shill.x, "y": state.shill.y, "heading": state.shill.heading}
    return {
        "v": PROTOCOL_VERSION,
        "type": "state",
        "tick": state.t,
        "agents": [
            {
                "x": float(state.positions[i, 0]),
                "y": float(state.positions[i, 1]),
                "heading": float(state.headings[i]),
            }
            for i in range(state.n)
        ],
        "shill": shill,
        "delta": _lenient_delta(state),
    }


def _error(code: str, detail: str = "") -> dict:
    return {"v": PROTOCOL_VERSION, "type": "error", "code": code, "detail": detail}


def put_drop_oldest(queue: asyncio.Queue, frame: dict) -> None:
    """Enqueue a frame, evicting the oldest one when the buffer is full; the
    realtime tick loop must never stall on a lagging consumer."""
    while True:
        try:
            queue.put_nowait(frame)
            return
        except asyncio.QueueFull:
            try:
                queue.get_nowait()
            except asyncio.QueueEmpty:
                pass


def _ack(of: str, **extra) -> dict:
    return {"v": PROTOCOL_VERSION, "type": "ack", "of": of, **extra}


@dataclass
class Session:
    """Server-side session: authoritative state plus control bookkeeping."""

    session_id: str
    config: RunConfig
    state: SwarmState
    control_source: str  # "manual" | "ubeta" | "none"
    beta: Optional[float]
    mode: str = "paused"
    tick_rate: float = DEFAULT_TICK_RATE
    pending_command: Optional[ControlCommand] = None
    synced: bool = False
    trajectory: list[SwarmState] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.trajectory.append(self.state)

    def advance(self) -> list[dict]:
        """Advance one tick, consuming at most one command; returns frames to push."""
        if self.control_source == "ubeta":
            command = u_beta(self.state, UBetaParams(self.beta))
        elif self.pending_command is not None:
            command = self.pending_command
            self.pending_command = None
        else:
            command = None
        self.state = step(self.state, self.config.model, command)
        self.trajectory.append(self.state)
        frames = [state_frame(self.state)]
        d = _lenient_delta(self.state)
        if not self.synced and d is not None and d < self.config.sync_tolerance:
            self.synced = True
            frames.append({"v": PROTOCOL_VERSION, "type": "sync", "tick": self.state.t})
        return frames


_CONTROL_TO_SOURCE = {
    ControlMode.NONE: "none",
    ControlMode.MANUAL: "manual",
    ControlMode.UBETA: "ubeta",
}


def create_session(config_data: dict) -> Session:
    config = config_from_dict(config_data)
    state = generate_scenario(config.scenario)
    session = Session(
        session_id=uuid.uuid4().hex,
        config=config,
        state=state,
        control_source=_CONTROL_TO_SOURCE[config.control.mode],
        beta=config.control.beta,
    )
    log.info(
        "session %s: n=%d control=%s shill_constraint=%s",
        session.session_id,
        config.model.n,
        session.control_source,
        config.model.shill_constraint.value,
    )
    return session


def _default_ui_dir() -> Optional[str]:
    # repo layout: the built frontend sits next to src/
    candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    return str(candidate) if candidate.is_dir() else None


def create_app(ui_dir: Optional[str] = None, frame_buffer: int = DEFAULT_FRAME_BUFFER) -> FastAPI:
    if ui_dir is None:
        ui_dir = _default_ui_dir()
    app = FastAPI(title="shillflock live service")
    app.state.sessions = {}

    @app.websocket("/ws")
    async def session_socket(ws: WebSocket) -> None:
        await ws.accept()
        outbound: asyncio.Queue = asyncio.Queue(maxsize=frame_buffer)
        session: Optional[Session] = None
        ticker: Optional[asyncio.Task] = None

        async def sender() -> None:
            while True:
                frame = await outbound.get()
                await ws.send_text(json.dumps(frame))

        sender_task = asyncio.create_task(sender())

        def push_drop(frame: dict) -> None:
            put_drop_oldest(outbound, frame)

        async def push_wait(frame: dict) -> None:
            await outbound.put(frame)

        async def tick_loop() -> None:
            while session is not None and session.mode == "running":
                try:
                    frames = session.advance()
                except ScenarioViolation as exc:
                    session.mode = "paused"
                    push_drop(_error("scenario_violation", str(exc)))
                    return
                for frame in frames:
                    push_drop(frame)
                await asyncio.sleep(1.0 / session.tick_rate)

        def start_ticker() -> None:
            nonlocal ticker
            if ticker is None or ticker.done():
                ticker = asyncio.create_task(tick_loop())

        async def handle(msg: dict) -> None:
            nonlocal session
            if not isinstance(msg, dict) or "type" not in msg:
                await push_wait(_error("bad_message", "expected an object with a type field"))
                return
            if msg.get("v", PROTOCOL_VERSION) != PROTOCOL_VERSION:
                await push_wait(_error("bad_version", f"supported protocol version: {PROTOCOL_VERSION}"))
                return
            kind = msg["type"]

            if kind == "init":
                if session is not None:
                    await push_wait(_error("already_initialized", session.session_id))
                    return
                try:
                    session = create_session(msg.get("config", {}))
                except (ConfigError, ValueError) as exc:
                    await push_wait(_error("bad_config", str(exc)))
                    return
                app.state.sessions[session.session_id] = session
                await push_wait(
                    _ack("init", session_id=session.session_id, state=state_frame(session.state))
                )
                return

            if session is None:
                await push_wait(_error("no_session", "send init first"))
                return

            if kind == "set_shill":
                if session.control_source == "none":
                    await push_wait(_error("no_shill", "session has no shill slot"))
                    return
                if session.control_source == "ubeta":
                    await push_wait(_error("autopilot_active", "disable autopilot first"))
                    return
                try:
                    raw = ControlCommand(
                        x=float(msg["x"]),
                        y=float(msg["y"]),
                        heading=float(msg["heading"]),
                        source=CommandSource.MANUAL,
                    )
                    command = validate_manual(raw, session.state, session.config.model)
                except (KeyError, TypeError, ValueError, InvalidCommand) as exc:
                    await push_wait(_error("bad_command", str(exc)))
                    return
                session.pending_command = command  # latest wins
                await push_wait(_ack("set_shill"))
                return

            if kind == "set_mode":
                mode = msg.get("mode")
                if mode not in ("paused", "running"):
                    await push_wait(_error("bad_mode", f"unknown mode {mode!r}"))
                    return
                if "tick_rate" in msg:
                    try:
                        rate = float(msg["tick_rate"])
                    except (TypeError, ValueError):
                        rate = 0.0
                    if not rate > 0.0:
                        await push_wait(_error("bad_tick_rate", str(msg.get("tick_rate"))))
                        return
                    session.tick_rate = rate
                session.mode = mode
                if mode == "running":
                    start_ticker()
                await push_wait(_ack("set_mode", mode=mode, tick_rate=session.tick_rate))
                return

            if kind == "step":
                if session.mode != "paused":
                    await push_wait(_error("not_paused", "step requires paused mode"))
                    return
                count = msg.get("count", 1)
                if not isinstance(count, int) or isinstance(count, bool) or count < 1:
                    await push_wait(_error("bad_count", f"count must be a positive int, got {count!r}"))
                    return
                for _ in range(count):
                    try:
                        frames = session.advance()
                    except ScenarioViolation as exc:
                        await push_wait(_error("scenario_violation", str(exc)))
                        return
                    for frame in frames:
                        await push_wait(frame)
                await push_wait(_ack("step", tick=session.state.t))
                return

            if kind == "autopilot":
                on = msg.get("on")
                if not isinstance(on, bool):
                    await push_wait(_error("bad_message", "autopilot needs a boolean 'on'"))
                    return
                if on:
                    beta = msg.get("beta", session.beta)
                    if beta is None:
                        await push_wait(_error("missing_beta", "no beta configured"))
                        return
                    try:
                        UBetaParams(float(beta))
                    except (TypeError, ValueError) as exc:
                        await push_wait(_error("bad_beta", str(exc)))
                        return
                    session.beta = float(beta)
                    session.control_source = "ubeta"
                else:
                    session.control_source = (
                        "manual" if session.state.shill is not None else "none"
                    )
                await push_wait(_ack("autopilot", control_source=session.control_source))
                return

            await push_wait(_error("unknown_type", str(kind)))

        try:
            while True:
                raw = await ws.receive_text()
                try:
                    msg = json.loads(raw)
                except json.JSONDecodeError as exc:
                    await push_wait(_error("bad_message", f"not JSON: {exc}"))
                    continue
                await handle(msg)
        except WebSocketDisconnect:
            pass
        finally:
            sender_task.cancel()
            if ticker is not None:
                ticker.cancel()
            if session is not None:
                app.state.sessions.pop(session.session_id, None)

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    else:

        @app.get("/")
        async def index() -> HTMLResponse:
            return HTMLResponse(_FALLBACK_PAGE)

    return app
