"""HTTP JSON API over one store: ingestion, querying, comparison, crawling,
and composition under /api/v1. Every handler is a thin shim over the library
call with the same semantics, so responses always equal direct library
results; reads never write.

Errors are uniform: {"code": <machine code>, "message": ..., "detail": ...}
with codes VALIDATION_FAILED, VERSION_CONFLICT, SYNTAX_ERROR, ANALYSIS_ERROR,
INFEASIBLE, NOT_FOUND, BAD_REQUEST.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from urllib.parse import parse_qs

from . import composer, ingest, metamodel, mql
from .metamodel import DecodeError, decode, encode
from .mql import EvalContext, MqlAnalysisError, MqlSyntaxError, StoreCaches
from .store import StoreLog, ValidationFailed, VersionConflict

DEFAULT_PAGE_LIMIT = 100

_ADAPTERS = {
    "huggingface": ingest.HuggingFaceFixtureAdapter,
}


@dataclass
class ApiError(Exception):
    status: int
    code: str
    message: str
    detail: object = None

    def body(self) -> dict:
        doc = {"code": self.code, "message": self.message}
        if self.detail is not None:
            doc["detail"] = self.detail
        return doc


def comparison_matrix(store: StoreLog, ids: list[str]) -> dict:
    """Side-by-side metric matrix: one row per (metric, dataset, hardware,
    slice) tuple present on any compared model, lexicographic row order,
    null cells where a model has no value. Latest run wins per cell."""
    caches = StoreCaches(store)
    models = []
    for raw in ids:
        record = store.lookup("ModelRecord", id=raw)
        if record is None and "@" in raw:
            name, _, version = raw.partition("@")
            record = store.lookup("ModelRecord", name=name, version=version)
        if record is None:
            raise ApiError(404, "NOT_FOUND", f"no model {raw!r}")
        models.append(record)
    cells: dict[tuple, dict[int, tuple]] = {}
    for column, model in enumerate(models):
        for idx, run in caches.runs_for(f"{model.name}@{model.version}"):
            for mv in run.metrics:
                row = (mv.name, str(run.dataset_id), run.hardware_id, mv.slice or "")
                rank = (run.executed_at, idx)
                current = cells.setdefault(row, {}).get(column)
                if current is None or rank > current[0]:
                    cells[row][column] = (rank, mv.value, mv.higher_is_better)
    rows = []
    for row_key in sorted(cells):
        metric, dataset, hardware, slice_ = row_key
        by_column = cells[row_key]
        polarity = next(iter(by_column.values()))[2]
        rows.append({
            "metric": metric,
            "dataset": dataset,
            "hardware": hardware,
            "slice": slice_ or None,
            "higher_is_better": polarity,
            "values": [
                by_column[c][1] if c in by_column else None
                for c in range(len(models))
            ],
        })
    return {
        "models": [f"{m.name}@{m.version}" for m in models],
        "rows": rows,
    }


class MetadataService:
    """WSGI application; also serves the static web console when given its
    directory (the API works identically without it)."""

    def __init__(self, store: StoreLog, fixtures_root: str | Path | None = None,
                 webui_root: str | Path | None = None):
        self.store = store
        self.fixtures_root = Path(fixtures_root) if fixtures_root else None
        self.webui_root = Path(webui_root) if webui_root else None
        self.routes = [
            ("POST", re.compile(r"^/api/v1/records$"), self.post_record),
            ("GET", re.compile(r"^/api/v1/records/(?P<kind>[^/]+)/(?P<rid>.+)$"), self.get_record),
            ("POST", re.compile(r"^/api/v1/query$"), self.post_query),
            ("GET", re.compile(r"^/api/v1/compare$"), self.get_compare),
            ("POST", re.compile(r"^/api/v1/crawl/(?P<zoo>[^/]+)$"), self.post_crawl),
            ("POST", re.compile(r"^/api/v1/compose$"), self.post_compose),
            ("GET", re.compile(r"^/api/v1/health$"), self.get_health),
        ]

    # -- endpoint handlers --------------------------------------------------

    def post_record(self, match, query, body):
        if not isinstance(body, dict):
            raise ApiError(400, "BAD_REQUEST", "expected a record envelope")
        try:
            record = decode(body)
        except DecodeError as err:
            raise ApiError(400, "BAD_REQUEST", str(err))
        try:
            key = ingest.ingest_manual(self.store, record)
        except ValidationFailed as err:
            raise ApiError(422, "VALIDATION_FAILED", "record failed validation",
                           detail=[{"path": v.path, "reason": v.reason} for v in err.report])
        except VersionConflict as err:
            raise ApiError(409, "VERSION_CONFLICT", str(err))
        return 201, {"kind": key.kind, "id": key.id, "name": key.name, "version": key.version}

    def get_record(self, match, query, body):
        kind, rid = match.group("kind"), match.group("rid")
        if kind not in metamodel.RECORD_TYPES:
            raise ApiError(404, "NOT_FOUND", f"unknown record kind {kind!r}")
        record = self.store.lookup(kind, id=rid)
        if record is None and "@" in rid:
            name, _, version = rid.partition("@")
            record = self.store.lookup(kind, name=name, version=version)
        if record is None:
            raise ApiError(404, "NOT_FOUND", f"no {kind} with id {rid!r}")
        return 200, encode(record)

    def post_query(self, match, query, body):
        if not isinstance(body, dict) or not isinstance(body.get("mql"), str):
            raise ApiError(400, "BAD_REQUEST", 'expected {"mql": "..."}')
        offset = _int_param(query, "offset", 0)
        limit = _int_param(query, "limit", DEFAULT_PAGE_LIMIT)
        try:
            result = mql.run_query(body["mql"], EvalContext(self.store))
        except MqlSyntaxError as err:
            raise ApiError(400, "SYNTAX_ERROR", str(err),
                           detail={"line": err.line, "column": err.column,
                                   "expected": err.expected})
        except MqlAnalysisError as err:
            raise ApiError(400, "ANALYSIS_ERROR", str(err), detail={"path": err.path})
        page = result.records[offset:offset + limit]
        return 200, {
            "count": len(result.records),
            "offset": offset,
            "limit": limit,
            "results": [encode(r) for r in page],
            "plan": result.plan,
            "elapsed_ms": result.elapsed_ms,
        }

    def get_compare(self, match, query, body):
        raw = query.get("ids", [""])[0]
        ids = [part for part in raw.split(",") if part]
        if not ids:
            raise ApiError(400, "BAD_REQUEST", "compare requires ?ids=a,b,...")
        return 200, comparison_matrix(self.store, ids)

    def post_crawl(self, match, query, body):
        zoo = match.group("zoo")
        adapter_cls = _ADAPTERS.get(zoo)
        if adapter_cls is None:
            raise ApiError(404, "NOT_FOUND", f"unknown zoo {zoo!r}")
        if not isinstance(body, dict) or "fixture_dir" not in body:
            raise ApiError(400, "BAD_REQUEST", 'expected {"fixture_dir": "..."}')
        fixture_dir = Path(body["fixture_dir"])
        if not fixture_dir.is_absolute() and self.fixtures_root is not None:
            fixture_dir = self.fixtures_root / fixture_dir
        try:
            summary = ingest.crawl(self.store, adapter_cls(), fixture_dir)
        except ingest.IngestError as err:
            raise ApiError(400, "BAD_REQUEST", str(err))
        return 200, {
            "cards_total": summary.cards_total,
            "cards_stored": summary.cards_stored,
            "quarantined": [{"file": f, "reason": r} for f, r in summary.quarantined],
            "new_records": summary.new_records,
        }

    def post_compose(self, match, query, body):
        if not isinstance(body, dict):
            raise ApiError(400, "BAD_REQUEST", "expected a composition document")
        try:
            graph, constraints, objective = composer.graph_from_json(body)
            if self.store.lookup("HardwareProfile", name=constraints.hardware) is None:
                raise ApiError(400, "BAD_REQUEST",
                               f"unknown hardware profile {constraints.hardware!r}")
            plan, excluded = composer.optimize(graph, constraints, objective, self.store)
        except composer.GraphError as err:
            raise ApiError(400, "BAD_REQUEST", str(err))
        except mql.MqlError as err:
            raise ApiError(400, "BAD_REQUEST", f"bad node filter: {err}")
        doc = composer.plan_to_json(plan, excluded)
        if not plan.feasible:
            raise ApiError(422, "INFEASIBLE", "no assignment satisfies the constraints",
                           detail=doc)
        return 200, doc

    def get_health(self, match, query, body):
        return 200, {"status": "ok", "record_counts": self.store.record_counts()}

    # -- wsgi plumbing ---------------------------------------------------------

    def __call__(self, environ, start_response):
        method = environ.get("REQUEST_METHOD", "GET")
        path = environ.get("PATH_INFO", "/")
        query = parse_qs(environ.get("QUERY_STRING", ""))
        try:
            for route_method, pattern, handler in self.routes:
                match = pattern.match(path)
                if match and method == route_method:
                    body = _read_json(environ) if method == "POST" else None
                    status, doc = handler(match, query, body)
                    return _respond(start_response, status, doc)
            if method == "GET" and self.webui_root is not None:
                served = self._static(path)
                if served is not None:
                    content_type, payload = served
                    start_response("200 OK", [("Content-Type", content_type),
                                              ("Content-Length", str(len(payload)))])
                    return [payload]
            raise ApiError(404, "NOT_FOUND", f"no route for {method} {path}")
        except ApiError as err:
            return _respond(start_response, err.status, err.body())
        except Exception as err:  # responses stay JSON even when surprised
            return _respond(start_response, 500,
                            {"code": "INTERNAL", "message": str(err)})

    def _static(self, path: str):
        rel = path.lstrip("/") or "index.html"
        candidate = (self.webui_root / rel).resolve()
        root = self.webui_root.resolve()
        if root not in candidate.parents and candidate != root:
            return None
        if candidate.is_dir():
            candidate = candidate / "index.html"
        if not candidate.is_file():
            return None
        suffix = candidate.suffix
        content_type = {
            ".html": "text/html; charset=utf-8",
            ".js": "text/javascript; charset=utf-8",
            ".css": "text/css; charset=utf-8",
            ".json": "application/json",
        }.get(suffix, "application/octet-stream")
        return content_type, candidate.read_bytes()


def _read_json(environ):
    try:
        length = int(environ.get("CONTENT_LENGTH") or 0)
    except ValueError:
        length = 0
    raw = environ["wsgi.input"].read(length) if length else b""
    if not raw:
        return None
    try:
        return json.loads(raw.decode("utf-8"))
    except ValueError as err:
        raise ApiError(400, "BAD_REQUEST", f"request body is not JSON: {err}")


_STATUS_TEXT = {
    200: "200 OK", 201: "201 Created", 400: "400 Bad Request",
    404: "404 Not Found", 409: "409 Conflict", 422: "422 Unprocessable Entity",
    500: "500 Internal Server Error",
}


def _respond(start_response, status: int, doc):
    payload = json.dumps(doc, ensure_ascii=False, allow_nan=False).encode("utf-8")
    start_response(_STATUS_TEXT.get(status, f"{status} Status"), [
        ("Content-Type", "application/json"),
        ("Content-Length", str(len(payload))),
    ])
    return [payload]


def _int_param(query, key, default):
    try:
        return max(int(query.get(key, [default])[0]), 0)
    except (TypeError, ValueError):
        raise ApiError(400, "BAD_REQUEST", f"query parameter {key} must be an integer")


def serve(store: StoreLog, bind: str = "127.0.0.1:8080",
          fixtures_root=None, webui_root=None):  # pragma: no cover - manual entry
    """Run the service on a threading WSGI server until interrupted."""
    import socketserver
    from wsgiref.simple_server import WSGIServer, make_server

    class ThreadingServer(socketserver.ThreadingMixIn, WSGIServer):
        daemon_threads = True

    host, _, port = bind.partition(":")
    app = MetadataService(store, fixtures_root=fixtures_root, webui_root=webui_root)
    server = make_server(host or "127.0.0.1", int(port or 8080), app,
                         server_class=ThreadingServer)
    print(f"serving on http://{server.server_address[0]}:{server.server_address[1]}")
    server.serve_forever()
