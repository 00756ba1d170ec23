"""Durable, versioned, append-only record log with in-memory indexes.

Log format, bit-exact: one entry per line, "<crc32c-hex> <canonical JSON
envelope>\\n". The checksum covers the envelope bytes. Entries are never
rewritten; new versions of a record are new entries. A trailing line without
its newline is a torn write and is skipped with a warning on open; a bad
checksum anywhere else is corruption and open() fails naming the entry.

Indexes (kind, id, (name, version), task, dataset_id) are rebuilt in memory on
open. Single writer, many readers: `put` is serialized by a lock, readers see
the in-memory snapshot.
"""

from __future__ import annotations

import json
import logging
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path

from . import metamodel
from .metamodel import DatasetRef, canonical_bytes, decode, record_identity, validate, version_sort_key

logger = logging.getLogger(__name__)

STORE_FILENAME = "metadata.log"


class StoreError(Exception):
    pass


class UnknownKind(StoreError):
    pass


class ValidationFailed(StoreError):
    def __init__(self, report):
        self.report = report
        super().__init__("; ".join(f"{v.path}: {v.reason}" for v in report))


class VersionConflict(StoreError):
    pass


class StoreCorruption(StoreError):
    def __init__(self, message, entry_index, byte_offset):
        self.entry_index = entry_index
        self.byte_offset = byte_offset
        super().__init__(f"{message} (entry {entry_index}, byte offset {byte_offset})")


# ---------------------------------------------------------------------------
# CRC-32C (Castagnoli), reflected polynomial 0x82F63B78.

def _make_crc_table():
    table = []
    for i in range(256):
        crc = i
        for _ in range(8):
            crc = (crc >> 1) ^ 0x82F63B78 if crc & 1 else crc >> 1
        table.append(crc)
    return table


_CRC_TABLE = _make_crc_table()


def crc32c(data: bytes) -> int:
    crc = 0xFFFFFFFF
    for byte in data:
        crc = _CRC_TABLE[(crc ^ byte) & 0xFF] ^ (crc >> 8)
    return crc ^ 0xFFFFFFFF


@dataclass
class RecordKey:
    kind: str
    id: str | None = None
    name: str | None = None
    version: str | None = None


@dataclass
class _Indexes:
    by_kind: dict[str, list[int]] = field(default_factory=dict)
    by_id: dict[tuple[str, str], int] = field(default_factory=dict)
    by_name_version: dict[tuple[str, str, str], int] = field(default_factory=dict)
    by_name: dict[tuple[str, str], list[int]] = field(default_factory=dict)
    by_task: dict[str, list[int]] = field(default_factory=dict)
    by_dataset: dict[tuple[str, str], list[int]] = field(default_factory=dict)


class StoreLog:
    """Append-only store over a single log file. Use `open_store` to create."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self._records: list = []
        self._bytes: list[bytes] = []
        self._index = _Indexes()
        self._write_lock = threading.Lock()
        self._fh = None

    # -- loading -----------------------------------------------------------

    def _load(self):
        data = self.path.read_bytes()
        offset = 0
        entry_index = 0
        while offset < len(data):
            newline = data.find(b"\n", offset)
            if newline == -1:
                logger.warning(
                    "%s: ignoring torn trailing entry at byte %d (%d bytes, no newline)",
                    self.path, offset, len(data) - offset,
                )
                break
            line = data[offset:newline]
            self._ingest_line(line, entry_index, offset)
            entry_index += 1
            offset = newline + 1

    def _ingest_line(self, line: bytes, entry_index: int, byte_offset: int):
        sep = line.find(b" ")
        if sep != 8:
            raise StoreCorruption("malformed entry header", entry_index, byte_offset)
        payload = line[sep + 1:]
        try:
            expected = int(line[:sep], 16)
        except ValueError:
            raise StoreCorruption("unparseable checksum", entry_index, byte_offset) from None
        if crc32c(payload) != expected:
            raise StoreCorruption("checksum mismatch", entry_index, byte_offset)
        try:
            record = decode(json.loads(payload.decode("utf-8")))
        except (ValueError, metamodel.DecodeError) as err:
            raise StoreCorruption(f"undecodable entry: {err}", entry_index, byte_offset) from None
        self._append_in_memory(record, payload)

    def _append_in_memory(self, record, payload: bytes):
        idx = len(self._records)
        self._records.append(record)
        self._bytes.append(payload)
        kind, rid, name, version = record_identity(record)
        self._index.by_kind.setdefault(kind, []).append(idx)
        if rid:
            self._index.by_id[(kind, rid)] = idx
        if name:
            self._index.by_name.setdefault((kind, name), []).append(idx)
            if version:
                self._index.by_name_version[(kind, name, version)] = idx
        task = getattr(record, "task", None)
        if task:
            self._index.by_task.setdefault(task, []).append(idx)
        dataset_id = getattr(record, "dataset_id", None)
        if isinstance(dataset_id, DatasetRef):
            self._index.by_dataset.setdefault((kind, str(dataset_id)), []).append(idx)

    # -- write path ----------------------------------------------------------

    def put(self, record) -> RecordKey:
        """Append a record. Idempotent for identical content; same
        (kind, name, version) with different bytes is a version conflict."""
        with self._write_lock:
            kind, rid, name, version = record_identity(record)
            if kind not in metamodel.RECORD_TYPES:
                raise UnknownKind(kind)
            structural = validate(record, resolver=None)
            if structural:
                raise ValidationFailed(structural)
            payload = canonical_bytes(record)
            existing = None
            if kind in metamodel.VERSIONED_KINDS and name and version:
                existing = self.lookup(kind, name=name, version=version)
            elif rid:
                existing = self.lookup(kind, id=rid)
            if existing is not None:
                if canonical_bytes(existing) == payload:
                    return self._key_for(existing)
                raise VersionConflict(
                    f"{kind} {name or rid}@{version or ''} already stored with different content"
                )
            report = validate(record, resolver=self)
            if report:
                raise ValidationFailed(report)
            self._append_to_disk(payload)
            self._append_in_memory(record, payload)
            return self._key_for(record)

    def _append_to_disk(self, payload: bytes):
        if self._fh is None:
            self._fh = open(self.path, "ab")
        line = b"%08x " % crc32c(payload) + payload + b"\n"
        self._fh.write(line)
        self._fh.flush()
        os.fsync(self._fh.fileno())

    def _key_for(self, record) -> RecordKey:
        kind, rid, name, version = record_identity(record)
        return RecordKey(kind=kind, id=rid, name=name, version=version)

    def close(self):
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    # -- read path -----------------------------------------------------------

    def __len__(self):
        return len(self._records)

    def get(self, key: RecordKey):
        """Record for a key, or None. Keys address by id or by (name, version)."""
        if key.kind not in metamodel.RECORD_TYPES:
            raise UnknownKind(key.kind)
        if key.id is not None:
            return self.lookup(key.kind, id=key.id)
        return self.lookup(key.kind, name=key.name, version=key.version)

    def latest(self, kind: str, name: str):
        """The maximal-version record for (kind, name), or None."""
        if kind not in metamodel.RECORD_TYPES:
            raise UnknownKind(kind)
        rows = self._index.by_name.get((kind, name), [])
        if not rows:
            return None
        records = [self._records[i] for i in rows]
        return max(records, key=lambda r: version_sort_key(getattr(r, "version", "")))

    def versions(self, kind: str, name: str) -> list[str]:
        rows = self._index.by_name.get((kind, name), [])
        found = [getattr(self._records[i], "version", None) for i in rows]
        return sorted((v for v in found if v), key=version_sort_key)

    def scan(self, kind: str, *, name: str | None = None, task: str | None = None,
             dataset_id: str | None = None):
        """Yield records of `kind` in insertion order. Filters are limited to
        the indexed fields (name, task, dataset_id)."""
        if kind not in metamodel.RECORD_TYPES:
            raise UnknownKind(kind)
        rows = self._index.by_kind.get(kind, [])
        if name is not None:
            keep = set(self._index.by_name.get((kind, name), []))
            rows = [i for i in rows if i in keep]
        if task is not None:
            keep = set(self._index.by_task.get(task, []))
            rows = [i for i in rows if i in keep]
        if dataset_id is not None:
            keep = set(self._index.by_dataset.get((kind, dataset_id), []))
            rows = [i for i in rows if i in keep]
        for i in rows:
            yield self._records[i]

    def entries(self):
        """All records in insertion order (no filtering)."""
        return list(self._records)

    def entry_index_of(self, record) -> int:
        kind, rid, _, _ = record_identity(record)
        return self._index.by_id[(kind, rid)]

    def record_counts(self) -> dict[str, int]:
        return {kind: len(rows) for kind, rows in sorted(self._index.by_kind.items())}

    # -- Resolver protocol ----------------------------------------------------

    def lookup(self, kind, *, id=None, name=None, version=None):
        if id is not None:
            idx = self._index.by_id.get((kind, id))
            return self._records[idx] if idx is not None else None
        if name is not None and version is not None:
            idx = self._index.by_name_version.get((kind, name, version))
            return self._records[idx] if idx is not None else None
        if name is not None:
            return self.latest(kind, name)
        return None

    def count_instances(self, dataset: DatasetRef) -> int:
        return len(self._index.by_dataset.get(("DataInstance", str(dataset)), []))

    # -- integrity -------------------------------------------------------------

    def integrity_check(self) -> list[str]:
        """Verify checksums, index consistency, and reference closure.
        Empty report means the store is healthy."""
        problems: list[str] = []
        try:
            reloaded = StoreLog(self.path)
            reloaded._load()
        except StoreCorruption as err:
            return [f"log corruption: {err}"]
        if reloaded._bytes != self._bytes:
            problems.append("in-memory state diverges from the log file")
        rebuilt = reloaded._index
        for attr in ("by_kind", "by_id", "by_name_version", "by_name", "by_task", "by_dataset"):
            if getattr(rebuilt, attr) != getattr(self._index, attr):
                problems.append(f"index {attr} inconsistent with entries")
        for i, record in enumerate(self._records):
            for violation in validate(record, resolver=self):
                problems.append(f"entry {i} ({record_identity(record)[0]}): {violation.path}: {violation.reason}")
        return problems


def open_store(path: str | Path) -> StoreLog:
    """Open (or create) a store. Complete entries are loaded and indexed; a
    torn trailing write is skipped with a warning; interior corruption fails
    hard naming the entry."""
    path = Path(path)
    if path.is_dir():
        path = path / STORE_FILENAME
    if not path.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
        path.touch()
    store = StoreLog(path)
    store._load()
    return store
