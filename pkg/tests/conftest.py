from __future__ import annotations

import io
import json

import pytest

from mzmeta.seed import populate_seed_zoo
from mzmeta.store import open_store


@pytest.fixture()
def empty_store(tmp_path):
    return open_store(tmp_path / "empty")


@pytest.fixture(scope="session")
def seed_store(tmp_path_factory):
    store = open_store(tmp_path_factory.mktemp("zoo"))
    populate_seed_zoo(store)
    return store


@pytest.fixture()
def fresh_seed_store(tmp_path):
    """A seeded store private to one test (for tests that write)."""
    store = open_store(tmp_path / "zoo")
    populate_seed_zoo(store)
    return store


def call_app(app, method, path, body=None, query_string=""):
    """Drive a WSGI app directly; returns (status code, parsed JSON body)."""
    raw = json.dumps(body).encode("utf-8") if body is not None else b""
    environ = {
        "REQUEST_METHOD": method,
        "PATH_INFO": path,
        "QUERY_STRING": query_string,
        "CONTENT_LENGTH": str(len(raw)),
        "wsgi.input": io.BytesIO(raw),
    }
    captured = {}

    def start_response(status, headers):
        captured["status"] = status
        captured["headers"] = dict(headers)

    chunks = app(environ, start_response)
    assert captured["headers"]["Content-Type"].startswith("application/json")
    return int(captured["status"].split()[0]), json.loads(b"".join(chunks))
