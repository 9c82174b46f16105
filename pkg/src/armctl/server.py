"""HTTP operator API.

All state mutations (commands, calibration swaps) funnel through one
worker thread consuming a queue, because the arm is a single physical
resource: concurrently submitted commands execute strictly in arrival
order and their trajectories never interleave.  Tick events fan out to
every /api/stream subscriber; when the arm is idle a heartbeat carrying
the current state is sent about once a second so clients can tell a
quiet line from a dead one.
"""

from __future__ import annotations

import asyncio
import concurrent.futures
import contextlib
import queue
import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.responses import HTMLResponse
from fastapi.staticfiles import StaticFiles

from armctl.actuation import parse_profile
from armctl.persistence import SchemaError
from armctl.service import ArmService, SessionConfig

HEARTBEAT_SECONDS = 1.0


class _Job:
    def __init__(self, kind: str, payload):
        self.kind = kind
        self.payload = payload
        self.future: concurrent.futures.Future = concurrent.futures.Future()


class CommandWorker(threading.Thread):
    """Owns the execution core; everything else only reads snapshots."""

    def __init__(self, service: ArmService):
        super().__init__(name="arm-worker", daemon=True)
        self.service = service
        self.jobs: queue.Queue[_Job | None] = queue.Queue()

    def submit(self, kind: str, payload) -> concurrent.futures.Future:
        job = _Job(kind, payload)
        self.jobs.put(job)
        return job.future

    def stop(self) -> None:
        self.jobs.put(None)

    def run(self) -> None:
        while True:
            job = self.jobs.get()
            if job is None:
                return
            try:
                if job.kind == "command":
                    job.future.set_result(self.service.process_command(job.payload))
                elif job.kind == "calibration":
                    self.service.set_profile(job.payload)
                    job.future.set_result(None)
                else:
                    raise ValueError(f"unknown job kind {job.kind}")
            except BaseException as exc:  # report into the waiting request
                job.future.set_exception(exc)


def create_app(config: SessionConfig | None = None,
               console_dir: str | Path | None = None) -> FastAPI:
    service = ArmService(config or SessionConfig())
    worker = CommandWorker(service)

    @contextlib.asynccontextmanager
    async def lifespan(app: FastAPI):
        worker.start()
        yield
        worker.stop()

    app = FastAPI(title="armctl", lifespan=lifespan)
    app.state.service = service
    app.state.worker = worker

    def state_snapshot() -> dict:
        return {
            "joints": list(service.joint_state().as_tuple()),
            "registers": list(service.registers()),
            "held": service.held,
            "active_command": service._active_command,
        }

    @app.post("/api/command")
    async def post_command(body: dict):
        text = body.get("text")
        if not isinstance(text, str):
            raise HTTPException(status_code=422, detail="body must be {\"text\": string}")
        future = worker.submit("command", text)
        outcome = await asyncio.wrap_future(future)
        return outcome.to_dict()

    @app.get("/api/state")
    async def get_state():
        return state_snapshot()

    @app.get("/api/config")
    async def get_config():
        return service.config.to_dict()

    @app.put("/api/calibration")
    async def put_calibration(body: dict):
        try:
            profile = parse_profile(body, "PUT /api/calibration")
        except SchemaError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        await asyncio.wrap_future(worker.submit("calibration", profile))
        return {"ok": True, "channels": len(profile.channels)}

    @app.get("/api/trace/{trace_id}")
    async def get_trace(trace_id: str):
        trace = service.traces.get(trace_id)
        if trace is None:
            raise HTTPException(status_code=404, detail=f"no trace {trace_id}")
        return {
            "id": trace.trace_id,
            "command": trace.command,
            "frames_log": trace.frames_log(),
            "trajectory_csv": trace.trajectory_csv(),
        }

    @app.websocket("/api/stream")
    async def stream(ws: WebSocket):
        await ws.accept()
        loop = asyncio.get_running_loop()
        events: asyncio.Queue[dict] = asyncio.Queue()

        def listener(event: dict) -> None:
            loop.call_soon_threadsafe(events.put_nowait, event)

        service.add_tick_listener(listener)

        async def drain_client():
            # Incoming messages are permitted but carry no meaning yet.
            while True:
                await ws.receive_text()

        drain = asyncio.create_task(drain_client())
        try:
            while True:
                try:
                    event = await asyncio.wait_for(events.get(), timeout=HEARTBEAT_SECONDS)
                except asyncio.TimeoutError:
                    event = {"elapsed_ms": None, **state_snapshot()}
                    event.pop("held")
                await ws.send_json(event)
        except (WebSocketDisconnect, RuntimeError):
            pass
        finally:
            service.remove_tick_listener(listener)
            drain.cancel()

    if console_dir is not None:
        # API routes above win; everything else is console assets.
        app.mount("/", StaticFiles(directory=str(console_dir), html=True), name="console")
    else:
        @app.get("/", response_class=HTMLResponse)
        async def index():
            return (
                "<html><body><h1>armctl</h1>"
                "<p>API: POST /api/command, GET /api/state, GET /api/config, "
                "PUT /api/calibration, GET /api/trace/{id}, WS /api/stream</p>"
                "</body></html>"
            )

    return app


def serve(config: SessionConfig | None = None, host: str = "127.0.0.1",
          port: int = 8000, console_dir: str | Path | None = None) -> None:
    """Run the API under uvicorn (blocking)."""
    import uvicorn

    uvicorn.run(create_app(config, console_dir=console_dir), host=host,
                port=port, log_level="info")
