"""HTTP API and live event stream around a single simulation run.

One worker thread owns the tick loop and processes prompts sequentially;
request handlers never touch live simulation objects, they read immutable
snapshot dicts refreshed at tick boundaries, and talk to the worker
through a queue. The event stream (server-sent events) supports any
number of concurrent subscribers.

Endpoints:
    POST /api/prompt {"text"}        -> 202 {"task_id"}
    GET  /api/tasks                  -> all task records
    GET  /api/tasks/<id>             -> one task record (404 if unknown)
    GET  /api/kb                     -> KB snapshot
    GET  /api/world                  -> world snapshot
    GET  /api/metrics?since=<t>      -> samples with t > since
    GET  /api/events?since=<seq>     -> SSE stream {seq, type, t, payload}
    GET  /api/config                 -> active run configuration
    POST /api/reset {"scenario", "seed"} -> 409 while a task is active
"""

from __future__ import annotations

import json
import mimetypes
import queue
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .events import EventBus
from .executor import RunConfig, Runtime
from .kb import kb_to_document
from .world import find_scenario, load_scenario_file, world_to_dict


class Service:
    """Tick-loop owner plus the thread-safe views the API serves."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.bus = EventBus()
        self.lock = threading.Lock()
        self.tasks: dict[str, dict] = {}
        self.task_order: list[str] = []
        self._queue: queue.Queue = queue.Queue()
        self._stop = threading.Event()
        self._active = False
        self._build_runtime(config.scenario, config.seed)
        self._worker = threading.Thread(target=self._run_loop, daemon=True)
        self._worker.start()

    # -- worker side -------------------------------------------------------

    def _build_runtime(self, scenario: str, seed: int) -> None:
        path = find_scenario(scenario)
        world = load_scenario_file(path, seed=seed)
        self.runtime = Runtime(world, self.config, bus=self.bus)
        self.runtime.snapshot_hook = self._refresh_snapshots
        self._refresh_snapshots()

    def _refresh_snapshots(self) -> None:
        world_snap = world_to_dict(self.runtime.world)
        kb_snap = kb_to_document(self.runtime.kb)
        with self.lock:
            self._world_snap = world_snap
            self._kb_snap = kb_snap

    def _run_loop(self) -> None:
        while not self._stop.is_set():
            try:
                task_id, prompt = self._queue.get(timeout=0.1)
            except queue.Empty:
                continue
            with self.lock:
                self.tasks[task_id]["status"] = "running"
                self._active = True
            try:
                result = self.runtime.run_task(prompt, task_id=task_id)
                record = {"status": "done", "result": result.to_dict()}
            except Exception as exc:  # surface crashes through the API
                record = {"status": "error", "result": None, "error": str(exc)}
            self._refresh_snapshots()
            with self.lock:
                self.tasks[task_id].update(record)
                self._active = not self._queue.empty()

    def close(self) -> None:
        self._stop.set()
        self._worker.join(timeout=2.0)

    # -- API side ----------------------------------------------------------

    def submit(self, text: str) -> str:
        with self.lock:
            task_id = self.runtime.next_task_id()
            self.tasks[task_id] = {
                "task_id": task_id,
                "prompt": text,
                "status": "queued",
                "result": None,
            }
            self.task_order.append(task_id)
            self._active = True
        self.bus.emit(
            "task_queued",
            self.runtime.world.clock,
            {"task_id": task_id, "prompt": text},
        )
        self._queue.put((task_id, text))
        return task_id

    def busy(self) -> bool:
        with self.lock:
            return self._active or not self._queue.empty()

    def reset(self, scenario: str | None, seed: int | None) -> None:
        if self.busy():
            raise RuntimeError("reset while a task is active")
        scenario = scenario or self.config.scenario
        seed = self.config.seed if seed is None else seed
        self.config.scenario = scenario
        self.config.seed = seed
        with self.lock:
            self.tasks.clear()
            self.task_order.clear()
        self._build_runtime(scenario, seed)
        self.bus.emit("reset", 0.0, {"scenario": scenario, "seed": seed})

    def task_record(self, task_id: str) -> dict | None:
        with self.lock:
            record = self.tasks.get(task_id)
            return dict(record) if record is not None else None

    def task_records(self) -> list[dict]:
        with self.lock:
            return [dict(self.tasks[tid]) for tid in self.task_order]

    def world_snapshot(self) -> dict:
        with self.lock:
            return self._world_snap

    def kb_snapshot_doc(self) -> list[dict]:
        with self.lock:
            return self._kb_snap

    def metrics_since(self, since: float) -> list[dict]:
        return [s.to_dict() for s in list(self.runtime.samples) if s.t > since]

    def config_doc(self) -> dict:
        return {
            "scenario": self.config.scenario,
            "planner": self.config.planner,
            "kb_mode": self.config.kb_mode.value,
            "exec_mode": self.config.exec_mode.value,
            "config": self.config.placement.value,
            "seed": self.config.seed,
            "speed": self.config.speed,
        }


def make_handler(service: Service, ui_dir: str | None):
    ui_root = Path(ui_dir).resolve() if ui_dir else None

    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # keep test output quiet
            pass

        # -- helpers -------------------------------------------------------

        def _send_json(self, payload, status: int = 200) -> None:
            body = json.dumps(payload, sort_keys=True).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(body)

        def _read_json(self) -> dict | None:
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b""
            try:
                doc = json.loads(raw.decode("utf-8")) if raw else {}
            except (json.JSONDecodeError, UnicodeDecodeError):
                return None
            return doc if isinstance(doc, dict) else None

        # -- routes --------------------------------------------------------

        def do_GET(self):
            url = urlparse(self.path)
            route = url.path.rstrip("/") or "/"
            if route == "/api/world":
                self._send_json(service.world_snapshot())
            elif route == "/api/kb":
                self._send_json(service.kb_snapshot_doc())
            elif route == "/api/tasks":
                self._send_json(service.task_records())
            elif route.startswith("/api/tasks/"):
                record = service.task_record(route.rsplit("/", 1)[1])
                if record is None:
                    self._send_json({"error": "unknown task"}, 404)
                else:
                    self._send_json(record)
            elif route == "/api/metrics":
                params = parse_qs(url.query)
                since = float(params.get("since", ["-inf"])[0])
                self._send_json(service.metrics_since(since))
            elif route == "/api/config":
                self._send_json(service.config_doc())
            elif route == "/api/events":
                params = parse_qs(url.query)
                since = int(params.get("since", ["0"])[0])
                self._stream_events(since)
            elif ui_root is not None:
                self._send_static(route)
            else:
                self._send_json({"error": "not found"}, 404)

        def do_POST(self):
            url = urlparse(self.path)
            route = url.path.rstrip("/")
            if route == "/api/prompt":
                doc = self._read_json()
                text = (doc or {}).get("text")
                if not isinstance(text, str) or not text.strip():
                    self._send_json({"error": "body must be {\"text\": ...}"}, 400)
                    return
                task_id = service.submit(text.strip())
                self._send_json({"task_id": task_id}, 202)
            elif route == "/api/reset":
                doc = self._read_json()
                if doc is None:
                    self._send_json({"error": "malformed body"}, 400)
                    return
                try:
                    service.reset(doc.get("scenario"), doc.get("seed"))
                except RuntimeError as exc:
                    self._send_json({"error": str(exc)}, 409)
                    return
                except (FileNotFoundError, ValueError) as exc:
                    self._send_json({"error": str(exc)}, 400)
                    return
                self._send_json({"ok": True})
            else:
                self._send_json({"error": "not found"}, 404)

        def _stream_events(self, since: int) -> None:
            self.send_response(200)
            self.send_header("Content-Type", "text/event-stream")
            self.send_header("Cache-Control", "no-cache")
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            sub = service.bus.subscribe(since)
            try:
                while True:
                    try:
                        event = sub.get(timeout=15.0)
                    except queue.Empty:
                        self.wfile.write(b": keepalive\n\n")
                        self.wfile.flush()
                        continue
                    data = json.dumps(event, sort_keys=True)
                    self.wfile.write(
                        f"id: {event['seq']}\ndata: {data}\n\n".encode("utf-8")
                    )
                    self.wfile.flush()
            except (BrokenPipeError, ConnectionResetError, OSError):
                pass
            finally:
                service.bus.unsubscribe(sub)

        def _send_static(self, route: str) -> None:
            rel = route.lstrip("/") or "index.html"
            target = (ui_root / rel).resolve()
            if not str(target).startswith(str(ui_root)) or not target.is_file():
                self._send_json({"error": "not found"}, 404)
                return
            ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
            body = target.read_bytes()
            self.send_response(200)
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

    return Handler


def serve(config: RunConfig, host: str = "127.0.0.1", port: int = 8080,
          ui_dir: str | None = None):
    """Build the service and a ready-to-run HTTP server (not yet serving)."""
    service = Service(config)
    handler = make_handler(service, ui_dir)
    httpd = ThreadingHTTPServer((host, port), handler)
    httpd.daemon_threads = True
    return service, httpd
