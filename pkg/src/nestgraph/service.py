"""Stateless HTTP facade over parsing, validation, layout, and rendering.

Each request builds its own model from the GraphML it carries, so requests
never observe each other.  Errors follow one shape: a JSON body with an
"error" message and a machine-readable "violations" list; unknown
algorithm names are answered with 422, everything else wrong with the
input with 400.
"""

from __future__ import annotations

import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .graphml import GraphMLError, parse_graphml, write_graphml
from .layout.base import LayoutError, run_layout
from .model import ModelError
from .registry import UnknownAlgorithmError, build_options, describe_all, resolve
from .svg import render_svg

MAX_BODY = 64 * 1024 * 1024


class ServiceError(Exception):
    def __init__(self, status: int, message: str, violations: list[dict] | None = None):
        super().__init__(message)
        self.status = status
        self.violations = violations


def _layout_payload(body: dict) -> dict:
    graphml = _required_text(body, "graphml")
    algorithm_name = _required_text(body, "algorithm")
    try:
        entry = resolve(algorithm_name)
    except UnknownAlgorithmError as exc:
        raise ServiceError(422, str(exc)) from None
    seed = body.get("seed", 1)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ServiceError(400, "seed must be a non-negative integer")
    options = body.get("options") or {}
    if not isinstance(options, dict):
        raise ServiceError(400, "options must be an object of numbers")
    try:
        opts = build_options(options, seed=seed)
    except ValueError as exc:
        raise ServiceError(400, str(exc)) from None
    model = _parse_or_400(graphml)
    try:
        report = run_layout(model, entry.factory(), opts)
    except (LayoutError, ModelError) as exc:
        raise ServiceError(400, str(exc), [{"object": None, "rule": "layout", "message": str(exc)}]) from None
    return {
        "graphml": write_graphml(model),
        "report": {
            "iterations_used": report.iterations_used,
            "final_total_displacement": report.final_total_displacement,
        },
    }


def _render_payload(body: dict) -> str:
    graphml = _required_text(body, "graphml")
    model = _parse_or_400(graphml)
    scale = body.get("scale", 1.0)
    if not isinstance(scale, (int, float)) or isinstance(scale, bool) or scale <= 0:
        raise ServiceError(400, "scale must be a positive number")
    highlight = body.get("highlightColor", "#ff0000")
    if not isinstance(highlight, str):
        raise ServiceError(400, "highlightColor must be a string")
    return render_svg(model, scale=float(scale), highlight_color=highlight)


def _validate_payload(body: dict) -> dict:
    graphml = _required_text(body, "graphml")
    model = _parse_or_400(graphml)
    return {"violations": [v.as_dict() for v in model.validate()]}


def _parse_or_400(graphml: str):
    try:
        return parse_graphml(graphml)
    except GraphMLError as exc:
        raise ServiceError(
            400, str(exc), [{"object": None, "rule": "parse", "message": str(exc)}]
        ) from None


def _required_text(body: dict, key: str) -> str:
    value = body.get(key)
    if not isinstance(value, str) or not value:
        raise ServiceError(400, f"body field {key!r} must be a non-empty string")
    return value


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    def log_message(self, *args) -> None:  # tests and piped use stay quiet
        pass

    def _send(self, status: int, payload: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def _send_json(self, status: int, data: dict) -> None:
        payload = json.dumps(data, sort_keys=True, separators=(",", ":")).encode("utf-8")
        self._send(status, payload, "application/json")

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if length <= 0 or length > MAX_BODY:
            raise ServiceError(400, "request needs a JSON body")
        raw = self.rfile.read(length)
        try:
            body = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ServiceError(400, f"request body is not valid JSON: {exc}") from None
        if not isinstance(body, dict):
            raise ServiceError(400, "request body must be a JSON object")
        return body

    def do_GET(self) -> None:
        if self.path.rstrip("/") == "/algorithms" or self.path == "/algorithms":
            self._send_json(200, {"algorithms": describe_all()})
        else:
            self._send_json(404, {"error": f"no such endpoint: {self.path}"})

    def do_POST(self) -> None:
        try:
            body = self._read_body()
            if self.path == "/layout":
                self._send_json(200, _layout_payload(body))
            elif self.path == "/render":
                svg = _render_payload(body)
                self._send(200, svg.encode("utf-8"), "image/svg+xml")
            elif self.path == "/validate":
                self._send_json(200, _validate_payload(body))
            else:
                self._send_json(404, {"error": f"no such endpoint: {self.path}"})
        except ServiceError as exc:
            data: dict = {"error": str(exc)}
            if exc.violations is not None:
                data["violations"] = exc.violations
            self._send_json(exc.status, data)
        except Exception as exc:  # internal error; keep the server alive
            self._send_json(500, {"error": f"internal error: {exc}"})


def make_server(port: int = 0, bind: str = "127.0.0.1") -> ThreadingHTTPServer:
    """Create (but do not start) the HTTP server; port 0 picks a free port."""
    return ThreadingHTTPServer((bind, port), _Handler)


def serve(port: int, bind: str = "127.0.0.1") -> None:
    """Run the service until interrupted."""
    server = make_server(port, bind)
    host, actual_port = server.server_address[:2]
    print(f"serving on http://{host}:{actual_port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
