from __future__ import annotations

import hashlib
import logging

import pytest

from mzmeta import metamodel as mm
from mzmeta.store import (
    RecordKey, StoreCorruption, ValidationFailed, VersionConflict, crc32c, open_store,
)

from test_metamodel import make_dataset, make_model


def concept(i: int) -> mm.SemanticConcept:
    return mm.SemanticConcept(iri=f"kb:thing-{i:03d}", label=f"thing {i}", kb_source="kb")


def test_crc32c_reference_vector():
    # standard CRC-32C check value for "123456789"
    assert crc32c(b"123456789") == 0xE3069283


def test_open_empty_file(tmp_path):
    store = open_store(tmp_path)
    assert len(store) == 0
    assert list(store.scan("ModelRecord")) == []


def test_put_get_latest_roundtrip(tmp_path):
    store = open_store(tmp_path)
    store.put(make_dataset())
    key = store.put(make_model())
    assert key == RecordKey("ModelRecord", id="model:demo:1.0", name="demo", version="1.0")
    assert store.get(key) == make_model()
    assert store.get(RecordKey("ModelRecord", name="demo", version="1.0")) == make_model()
    assert store.latest("ModelRecord", "demo").version == "1.0"


def test_get_absent_returns_none(tmp_path):
    store = open_store(tmp_path)
    assert store.get(RecordKey("ModelRecord", id="nope")) is None
    assert store.latest("ModelRecord", "nope") is None


def test_unknown_kind_is_an_error(tmp_path):
    store = open_store(tmp_path)
    with pytest.raises(Exception):
        list(store.scan("NopeRecord"))


def test_double_put_is_idempotent(tmp_path):
    store = open_store(tmp_path)
    store.put(make_dataset())
    k1 = store.put(make_model())
    size = store.path.stat().st_size
    k2 = store.put(make_model())
    assert k1 == k2
    assert store.path.stat().st_size == size
    assert len(list(store.scan("ModelRecord"))) == 1


def test_new_version_keeps_both_and_latest_resolves(tmp_path):
    store = open_store(tmp_path)
    store.put(make_dataset())
    store.put(make_model())
    store.put(make_model(id="model:demo:1.1", version="1.1"))
    assert len(list(store.scan("ModelRecord", name="demo"))) == 2
    assert store.latest("ModelRecord", "demo").version == "1.1"
    assert store.versions("ModelRecord", "demo") == ["1.0", "1.1"]


def test_same_version_different_content_conflicts(tmp_path):
    store = open_store(tmp_path)
    store.put(make_dataset())
    store.put(make_model())
    with pytest.raises(VersionConflict):
        store.put(make_model(tags={"other"}))


def test_validation_failure_rejected_and_not_stored(tmp_path):
    store = open_store(tmp_path)
    with pytest.raises(ValidationFailed) as err:
        store.put(make_model())  # trained_on imagenet@1.0 missing from the store
    assert any("dangling" in v.reason for v in err.value.report)
    assert len(store) == 0


def test_structurally_invalid_record_is_validation_failure_not_a_crash(tmp_path):
    store = open_store(tmp_path)
    with pytest.raises(ValidationFailed) as err:
        store.put(mm.SemanticConcept(iri="", label="x", kb_source="kb"))
    assert any(v.path == "iri" for v in err.value.report)
    assert len(store) == 0


def test_durability_across_reopen(tmp_path):
    store = open_store(tmp_path)
    for i in range(12):
        store.put(concept(i))
    store.close()
    reopened = open_store(tmp_path)
    assert len(reopened) == 12
    assert reopened.lookup("SemanticConcept", id="kb:thing-007") == concept(7)


def test_append_only_prefix_never_rewritten(tmp_path):
    store = open_store(tmp_path)
    for i in range(5):
        store.put(concept(i))
    prefix = store.path.read_bytes()
    digest = hashlib.sha256(prefix).hexdigest()
    store.put(concept(99))
    after = store.path.read_bytes()
    assert after[: len(prefix)] == prefix
    assert hashlib.sha256(after[: len(prefix)]).hexdigest() == digest


def test_torn_trailing_write_ignored_with_warning(tmp_path, caplog):
    store = open_store(tmp_path)
    for i in range(10):
        store.put(concept(i))
    store.close()
    data = store.path.read_bytes()
    store.path.write_bytes(data[:-7])  # cut into the last entry
    with caplog.at_level(logging.WARNING, logger="mzmeta.store"):
        reopened = open_store(tmp_path)
    assert len(reopened) == 9
    assert any("torn" in message for message in caplog.messages)


def test_truncation_sweep_of_final_entry(tmp_path):
    store = open_store(tmp_path)
    for i in range(10):
        store.put(concept(i))
    store.close()
    data = store.path.read_bytes()
    last_start = data[:-1].rfind(b"\n") + 1
    for cut in range(last_start, len(data)):
        store.path.write_bytes(data[:cut])
        assert len(open_store(tmp_path)) == 9, f"cut at byte {cut}"
    store.path.write_bytes(data)
    assert len(open_store(tmp_path)) == 10


def test_interior_corruption_fails_naming_the_entry(tmp_path):
    store = open_store(tmp_path)
    for i in range(10):
        store.put(concept(i))
    store.close()
    lines = store.path.read_bytes().split(b"\n")
    k = 4
    lines[k] = lines[k][:20] + lines[k][24:]  # drop bytes inside entry k, keep suffix
    store.path.write_bytes(b"\n".join(lines))
    with pytest.raises(StoreCorruption) as err:
        open_store(tmp_path)
    assert err.value.entry_index == k


def test_flipped_byte_is_checksum_mismatch(tmp_path):
    store = open_store(tmp_path)
    for i in range(3):
        store.put(concept(i))
    store.close()
    data = bytearray(store.path.read_bytes())
    lines = bytes(data).split(b"\n")
    offset = len(lines[0]) + 1 + 30  # inside entry 1
    data[offset] ^= 0xFF
    store.path.write_bytes(bytes(data))
    with pytest.raises(StoreCorruption) as err:
        open_store(tmp_path)
    assert "checksum mismatch" in str(err.value)
    assert err.value.entry_index == 1


def test_scan_filters_match_linear_scan(seed_store):
    everything = seed_store.entries()

    def linear(kind, predicate=lambda r: True):
        return [r for r in everything if type(r).__name__ == kind and predicate(r)]

    got = list(seed_store.scan("ModelRecord", task="image-classification"))
    assert got == linear("ModelRecord", lambda r: r.task == "image-classification")

    got = list(seed_store.scan("ModelRecord", name="sent-fast"))
    assert got == linear("ModelRecord", lambda r: r.name == "sent-fast")

    got = list(seed_store.scan("DataInstance", dataset_id="COCO@2017"))
    assert got == linear("DataInstance", lambda r: str(r.dataset_id) == "COCO@2017")

    for kind in ("ModelRecord", "DatasetRecord", "EvaluationRun", "HardwareProfile"):
        assert list(seed_store.scan(kind)) == linear(kind)


def test_integrity_check_clean_store(seed_store):
    assert seed_store.integrity_check() == []


def test_integrity_check_reports_instance_count_drift(tmp_path):
    store = open_store(tmp_path)
    store.put(make_dataset(instance_count=2))
    store.put(mm.DataInstance(id="inst:0", dataset_id=mm.DatasetRef("imagenet", "1.0"),
                              locator="sha256:0"))
    problems = store.integrity_check()
    assert any("materialized instances" in p for p in problems)


def test_integrity_check_detects_on_disk_corruption(tmp_path):
    store = open_store(tmp_path)
    for i in range(3):
        store.put(concept(i))
    data = bytearray(store.path.read_bytes())
    data[15] ^= 0x01
    store.close()
    store.path.write_bytes(bytes(data))
    reopened_problems = None
    try:
        open_store(tmp_path)
    except StoreCorruption as err:
        reopened_problems = str(err)
    assert reopened_problems is not None


def test_count_instances_matches_scan(seed_store):
    ref = mm.DatasetRef("COCO", "2017")
    assert seed_store.count_instances(ref) == len(list(seed_store.scan("DataInstance", dataset_id=str(ref))))
