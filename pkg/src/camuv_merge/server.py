"""Read-only HTTP service over one enumeration-result file.

Endpoints:

* ``GET /api/meta`` — variable names, solution count, minimum cost, budget.
* ``POST /api/filter`` — body ``{"constraints": {...}, "sample_n", "seed"}``;
  responds with the surviving count, the edge-frequency matrix (null when
  nothing survives), up to ``sample_n`` sampled solutions, and the seed.
* ``GET /api/solution/<index>`` — one solution by canonical index.

Solutions are served from the indexed result file, so the whole set never
has to sit in memory; filtering streams through it.  Responses are canonical
JSON with CORS enabled for the exploration UI.
"""
from __future__ import annotations

import json
import os
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np

from .documents import DocumentError, ResultReader, canonical_json, parse_constraints
from .refine import ContradictoryConstraints, sample_indices, satisfies

DEFAULT_PORT = 8642
PORT_ENV_VAR = "CAMUV_MERGE_PORT"
UI_ORIGIN_ENV_VAR = "CAMUV_MERGE_UI_ORIGIN"
MAX_SAMPLES = 100


def default_port() -> int:
    raw = os.environ.get(PORT_ENV_VAR)
    if raw is None:
        return DEFAULT_PORT
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{PORT_ENV_VAR} must be an integer, got {raw!r}") from None


def _filter_reader(reader: ResultReader, constraints, sample_n: int, seed: int) -> dict:
    d = reader.dimension
    counts = np.zeros((d, d), dtype=np.int64)
    matches: list[int] = []
    for index in range(reader.count):
        sol = reader.solution(index)
        if satisfies(sol.graph, constraints):
            matches.append(index)
            counts += sol.graph.adjacency
    picked = [matches[k] for k in sample_indices(len(matches), sample_n, seed)]
    samples = []
    for index in picked:
        sol = reader.solution(index)
        samples.append(
            {"index": index, "cost": sol.cost, "edges": [list(e) for e in sol.graph.sorted_edges()]}
        )
    if matches:
        frequencies = [[c / len(matches) for c in row] for row in counts.tolist()]
    else:
        frequencies = None
    return {
        "count": len(matches),
        "frequencies": frequencies,
        "samples": samples,
        "seed": seed,
    }


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    # attached by make_server
    reader: ResultReader
    reader_lock: threading.Lock
    ui_origin: str
    quiet: bool = True

    def log_message(self, fmt, *args):
        if not self.quiet:
            super().log_message(fmt, *args)

    def _send(self, status: int, payload) -> None:
        body = canonical_json(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self._cors()
        self.end_headers()
        self.wfile.write(body)

    def _cors(self) -> None:
        self.send_header("Access-Control-Allow-Origin", self.ui_origin)
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")

    def _error(self, status: int, message: str) -> None:
        self._send(status, {"error": message})

    def do_OPTIONS(self):  # noqa: N802 (http.server naming)
        self.send_response(204)
        self._cors()
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):  # noqa: N802
        if self.path == "/api/meta":
            with self.reader_lock:
                header = self.reader.header
                names = list(self.reader.table.names)
            self._send(200, {
                "names": names,
                "solution_count": header["solution_count"],
                "c_star": header["c_star"],
                "budget": header["budget"],
            })
            return
        if self.path.startswith("/api/solution/"):
            raw = self.path[len("/api/solution/"):]
            try:
                index = int(raw)
            except ValueError:
                self._error(404, f"bad solution index {raw!r}")
                return
            with self.reader_lock:
                if not (0 <= index < self.reader.count):
                    self._error(404, f"solution index {index} out of range")
                    return
                sol = self.reader.solution(index)
            self._send(200, {
                "index": index,
                "cost": sol.cost,
                "edges": [list(e) for e in sol.graph.sorted_edges()],
            })
            return
        self._error(404, f"unknown path {self.path!r}")

    def do_POST(self):  # noqa: N802
        if self.path != "/api/filter":
            self._error(404, f"unknown path {self.path!r}")
            return
        length = int(self.headers.get("Content-Length", "0"))
        raw = self.rfile.read(length) if length else b"{}"
        try:
            body = json.loads(raw.decode("utf-8"))
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            self._error(400, f"invalid JSON body: {exc}")
            return
        if not isinstance(body, dict):
            self._error(400, "body must be a JSON object")
            return
        unknown = set(body) - {"constraints", "sample_n", "seed"}
        if unknown:
            self._error(400, f"unknown fields {sorted(unknown)}")
            return
        sample_n = body.get("sample_n", 3)
        seed = body.get("seed", 0)
        if not isinstance(sample_n, int) or not (0 <= sample_n <= MAX_SAMPLES):
            self._error(400, f"sample_n must be an integer in 0..{MAX_SAMPLES}")
            return
        if not isinstance(seed, int):
            self._error(400, "seed must be an integer")
            return
        try:
            constraints = parse_constraints(body.get("constraints", {}), strict=True)
        except ContradictoryConstraints as exc:
            self._error(409, str(exc))
            return
        except DocumentError as exc:
            self._error(400, str(exc))
            return
        d = None
        with self.reader_lock:
            d = self.reader.dimension
        bad_ids = [v for v in constraints.sinks if not (0 <= v < d)]
        bad_edges = [
            e for e in (constraints.required_edges | constraints.forbidden_edges
                        | constraints.required_absent_pairs)
            if not (0 <= e[0] < d and 0 <= e[1] < d)
        ]
        if bad_ids or bad_edges:
            self._error(400, f"constraint ids outside 0..{d - 1}")
            return
        with self.reader_lock:
            response = _filter_reader(self.reader, constraints, sample_n, seed)
        self._send(200, response)


def make_server(
    result_path: str,
    host: str = "127.0.0.1",
    port: int = 0,
    ui_origin: str | None = None,
    quiet: bool = True,
) -> ThreadingHTTPServer:
    """Build (but do not start) the HTTP server for a result file."""
    reader = ResultReader(result_path)
    handler = type("BoundHandler", (_Handler,), {
        "reader": reader,
        "reader_lock": threading.Lock(),
        "ui_origin": ui_origin or os.environ.get(UI_ORIGIN_ENV_VAR, "*"),
        "quiet": quiet,
    })
    return ThreadingHTTPServer((host, port), handler)


def serve_http(result_path: str, port: int | None = None, host: str = "127.0.0.1") -> None:
    """Serve a result file until interrupted."""
    server = make_server(result_path, host, default_port() if port is None else port, quiet=False)
    address = server.socket.getsockname()
    print(f"serving {result_path} on http://{address[0]}:{address[1]}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
