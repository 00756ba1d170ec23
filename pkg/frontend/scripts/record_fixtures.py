#!/usr/bin/env python3
"""Regenerate the recorded API responses the console's tests run against.

Spins up the service in process over a freshly seeded store and captures
responses as JSON files under frontend/fixtures/. Run from anywhere:

    python3 frontend/scripts/record_fixtures.py
"""

from __future__ import annotations

import io
import json
import tempfile
from pathlib import Path

from mzmeta.seed import populate_seed_zoo
from mzmeta.service import MetadataService
from mzmeta.store import open_store

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

COMPOSE_DOC = {
    "nodes": [
        {"id": "sentiment", "task": "text-classification",
         "input_type": "text", "output_type": "text"},
        {"id": "pos", "task": "pos-tagging",
         "input_type": "text", "output_type": "pos-tags"},
    ],
    "edges": [["sentiment", "pos"]],
    "budgets": {"latency_ms": 40, "memory_mb": 800},
    "hardware": "mobile-pixel8",
    "weights": {"sentiment": 0.5, "pos": 0.5},
}

Q3 = ('FIND MODELS WHERE trained_on.name = "ImageNet" '
      'AND metric(dataset="ImageNet", name="accuracy") > 0.90')


def call(app, method, path, body=None, query_string=""):
    raw = json.dumps(body).encode() if body is not None else b""
    environ = {
        "REQUEST_METHOD": method, "PATH_INFO": path, "QUERY_STRING": query_string,
        "CONTENT_LENGTH": str(len(raw)), "wsgi.input": io.BytesIO(raw),
    }
    out = {}
    chunks = app(environ, lambda status, headers: out.update(status=status))
    return json.loads(b"".join(chunks))


def main():
    FIXTURES.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        store = open_store(tmp)
        populate_seed_zoo(store)
        app = MetadataService(store)
        captures = {
            "query_q3.json": call(app, "POST", "/api/v1/query", {"mql": Q3}),
            "query_empty.json": call(app, "POST", "/api/v1/query",
                                     {"mql": 'FIND MODELS WHERE task = "no-such-task"'}),
            "query_syntax_error.json": call(app, "POST", "/api/v1/query", {"mql": "FIND"}),
            "record_model.json": call(app, "GET",
                                      "/api/v1/records/ModelRecord/model:person-finder-pro:2.0"),
            "compare_detectors.json": call(
                app, "GET", "/api/v1/compare",
                query_string="ids=person-finder-pro@2.0,crowd-scan@1.4,person-finder-edge@1.1"),
            "compare_single.json": call(app, "GET", "/api/v1/compare",
                                        query_string="ids=person-finder-pro@2.0"),
            "compose_ok.json": call(app, "POST", "/api/v1/compose", COMPOSE_DOC),
            "compose_infeasible.json": call(
                app, "POST", "/api/v1/compose",
                dict(COMPOSE_DOC, budgets={"latency_ms": 5, "memory_mb": 800})),
            "health.json": call(app, "GET", "/api/v1/health"),
        }
        # elapsed_ms is wall clock; pin it so fixtures are reproducible
        for name, doc in captures.items():
            if isinstance(doc, dict) and "elapsed_ms" in doc:
                doc["elapsed_ms"] = 0.0
            (FIXTURES / name).write_text(
                json.dumps(doc, indent=1, sort_keys=True) + "\n", encoding="utf-8")
            print(f"wrote fixtures/{name}")


if __name__ == "__main__":
    main()
