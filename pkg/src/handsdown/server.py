"""WebSocket transport for the typing service (FastAPI app factory)."""
from __future__ import annotations

import json
import pathlib
import time

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse, FileResponse

from .decode import DecoderRegistry
from .layout import KeyLayout, layout_to_dict
from .pipeline import PipelineConfig, event_to_json, event_from_json
from .service import Session


def create_app(registry: DecoderRegistry, layout: KeyLayout,
               default_backend: str = "ngram",
               phrases: list[str] | None = None,
               log_dir: str | None = None,
               static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="handsdown typing service")

    @app.get("/layout")
    def get_layout():
        return JSONResponse(layout_to_dict(layout))

    @app.get("/healthz")
    def healthz():
        return {"ok": True, "backends": registry.backends()}

    if static_dir:
        static = pathlib.Path(static_dir)

        @app.get("/")
        def index():
            return FileResponse(static / "index.html")

        @app.get("/static/{name:path}")
        def static_file(name: str):
            return FileResponse(static / name)

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        session = None
        touch_log = None
        msg_log = None
        try:
            while True:
                msg = json.loads(await ws.receive_text())
                if msg.get("kind") == "open":
                    backend = msg.get("backend", default_backend)
                    phrase_set = msg.get("phrase_set") or phrases
                    try:
                        session = Session(registry, backend, layout,
                                          PipelineConfig(), phrase_set)
                    except Exception as exc:
                        await ws.send_text(json.dumps(
                            {"kind": "error", "code": "open", "msg": str(exc)}))
                        continue
                    if log_dir:
                        base = pathlib.Path(log_dir)
                        base.mkdir(parents=True, exist_ok=True)
                        touch_log = open(base / f"{session.id}.touches.jsonl", "a")
                        msg_log = open(base / f"{session.id}.messages.jsonl", "a")
                    replies = [{"kind": "opened", "session": session.id,
                                "backend": backend,
                                "phrase": session.target_phrase}]
                elif session is None:
                    replies = [{"kind": "error", "code": "no_session",
                                "msg": "open a session first"}]
                else:
                    if touch_log and msg.get("kind") == "touch":
                        touch_log.write(json.dumps(
                            event_to_json(event_from_json(msg["e"]))) + "\n")
                    replies = session.handle(msg)
                if msg_log:
                    msg_log.write(json.dumps({"t": time.time(), "in": msg,
                                              "out": replies}) + "\n")
                for r in replies:
                    await ws.send_text(json.dumps(r))
        except WebSocketDisconnect:
            pass
        finally:
            for f in (touch_log, msg_log):
                if f:
                    f.close()

    return app
