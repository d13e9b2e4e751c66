"""HTTP SPARQL service hosting one read-only dataset.

Routes:
    GET/POST /sparql   query via ?query=, application/sparql-query body, or
                       application/x-www-form-urlencoded body; responds with
                       SPARQL JSON results (or CSV when Accept prefers text/csv)
    GET /health        200 "ok"
    GET /stats         {"triples": n, "classes": n, "properties": n, "individuals": n}

The dataset is parsed (and optionally materialized) once at startup into an
immutable snapshot; request handlers never take locks.  GET and POST of the
same query produce byte-identical bodies.  The bind address comes from the
--bind flag, then the PLANTKB_BIND environment variable, then 127.0.0.1:3030.
"""

from __future__ import annotations

import json
import logging
import os
import time
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlsplit

from .errors import ParseError, UnknownPrefixError
from .graph import Graph
from .ontology import extract_ontology
from .reasoner import materialize
from .sparql import evaluate, parse_query, serialize_results
from .turtle import parse_turtle

DEFAULT_BIND = "127.0.0.1:3030"
BIND_ENV_VAR = "PLANTKB_BIND"

log = logging.getLogger("plantkb.endpoint")


@dataclass(slots=True)
class DatasetConfig:
    source_path: str
    materialize_on_load: bool = False
    bind_address: str = DEFAULT_BIND
    read_only: bool = True


def resolve_bind(flag: str | None = None) -> tuple[str, int]:
    """Bind address precedence: CLI flag, then PLANTKB_BIND, then the default."""
    text = flag or os.environ.get(BIND_ENV_VAR) or DEFAULT_BIND
    host, sep, port_text = text.rpartition(":")
    if not sep or not port_text.isdigit():
        raise ValueError(f"bind address must be HOST:PORT, got {text!r}")
    return host, int(port_text)


def load_dataset(cfg: DatasetConfig) -> tuple[Graph, dict[str, int]]:
    """Parse (and optionally materialize) the source file into a frozen snapshot."""
    with open(cfg.source_path, encoding="utf-8") as fh:
        text = fh.read()
    graph = parse_turtle(text).graph
    if cfg.materialize_on_load:
        materialize(graph)
    snapshot = graph.snapshot()
    view = extract_ontology(snapshot)
    stats = {
        "triples": len(snapshot),
        "classes": len(view.classes),
        "properties": len(view.properties),
        "individuals": len(view.individuals),
    }
    return snapshot, stats


def _prefers_csv(accept: str | None) -> bool:
    if not accept:
        return False
    csv_q = 0.0
    json_q = 0.0
    for part in accept.split(","):
        fields = part.strip().split(";")
        mtype = fields[0].strip().lower()
        q = 1.0
        for f in fields[1:]:
            f = f.strip()
            if f.startswith("q="):
                try:
                    q = float(f[2:])
                except ValueError:
                    q = 0.0
        if mtype == "text/csv":
            csv_q = max(csv_q, q)
        elif mtype in ("application/sparql-results+json", "application/json"):
            json_q = max(json_q, q)
    return csv_q > json_q


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    dataset: Graph
    dataset_stats: dict[str, int]

    # one structured line per request instead of the default stderr format
    def log_message(self, format, *args):  # noqa: A002 - stdlib signature
        pass

    def _finish(self, status: int, content_type: str, body: bytes, started: float,
                extra_headers: dict[str, str] | None = None) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        for name, value in (extra_headers or {}).items():
            self.send_header(name, value)
        self.end_headers()
        self.wfile.write(body)
        duration_ms = (time.monotonic() - started) * 1000.0
        log.info("%s %s %d %.1fms", self.command, self.path, status, duration_ms)

    def _run_query(self, query_text: str, started: float) -> None:
        try:
            query = parse_query(query_text)
            results = evaluate(query, self.dataset)
        except (ParseError, UnknownPrefixError) as exc:
            self._finish(400, "text/plain; charset=utf-8", str(exc).encode("utf-8"), started)
            return
        if _prefers_csv(self.headers.get("Accept")):
            body = serialize_results(results, "csv").encode("utf-8")
            self._finish(200, "text/csv; charset=utf-8", body, started)
        else:
            body = serialize_results(results, "sparql-json").encode("utf-8")
            self._finish(200, "application/sparql-results+json", body, started)

    def do_GET(self) -> None:
        started = time.monotonic()
        parts = urlsplit(self.path)
        if parts.path == "/sparql":
            params = parse_qs(parts.query)
            values = params.get("query")
            if not values:
                self._finish(400, "text/plain; charset=utf-8",
                             b"missing query parameter", started)
                return
            self._run_query(values[0], started)
        elif parts.path == "/health":
            self._finish(200, "text/plain; charset=utf-8", b"ok", started)
        elif parts.path == "/stats":
            body = json.dumps(self.dataset_stats).encode("utf-8")
            self._finish(200, "application/json", body, started)
        else:
            self._finish(404, "text/plain; charset=utf-8", b"not found", started)

    def do_POST(self) -> None:
        started = time.monotonic()
        parts = urlsplit(self.path)
        if parts.path != "/sparql":
            self._finish(404, "text/plain; charset=utf-8", b"not found", started)
            return
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length)
        content_type = (self.headers.get("Content-Type") or "").split(";")[0].strip().lower()
        try:
            if content_type == "application/x-www-form-urlencoded":
                params = parse_qs(raw.decode("utf-8"))
                values = params.get("query")
                if not values:
                    self._finish(400, "text/plain; charset=utf-8",
                                 b"missing query form field", started)
                    return
                query_text = values[0]
            else:
                query_text = raw.decode("utf-8")
        except UnicodeDecodeError:
            self._finish(400, "text/plain; charset=utf-8", b"body is not valid UTF-8", started)
            return
        self._run_query(query_text, started)

    def _method_not_allowed(self) -> None:
        started = time.monotonic()
        if urlsplit(self.path).path == "/sparql":
            self._finish(405, "text/plain; charset=utf-8", b"method not allowed", started,
                         extra_headers={"Allow": "GET, POST"})
        else:
            self._finish(404, "text/plain; charset=utf-8", b"not found", started)

    do_PUT = _method_not_allowed
    do_DELETE = _method_not_allowed
    do_PATCH = _method_not_allowed
    do_HEAD = _method_not_allowed


def make_server(cfg: DatasetConfig) -> ThreadingHTTPServer:
    """Load the dataset and return a ready-to-run server (not yet serving).

    Parse and bind failures raise before any listener accepts traffic.
    """
    snapshot, stats = load_dataset(cfg)
    handler = type("BoundHandler", (_Handler,), {"dataset": snapshot, "dataset_stats": stats})
    host, port = resolve_bind(cfg.bind_address)
    server = ThreadingHTTPServer((host, port), handler)
    server.daemon_threads = True
    return server


def serve(cfg: DatasetConfig) -> None:
    """Run the service until interrupted."""
    server = make_server(cfg)
    host, port = server.server_address[:2]
    log.info("serving %s on %s:%d", cfg.source_path, host, port)
    try:
        server.serve_forever()
    finally:
        server.server_close()
