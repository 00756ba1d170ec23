from __future__ import annotations

import json
import math
import random
from datetime import datetime, timezone

import pytest

from mzmeta import metamodel as mm

UTC = timezone.utc


def make_model(**overrides) -> mm.ModelRecord:
    base = dict(
        id="model:demo:1.0", name="demo", version="1.0", task="image-classification",
        input_signature=[mm.IOSpec("image", "float32", ["*", 3, 224, 224], "image")],
        output_signature=[mm.IOSpec("probs", "float32", ["*", 10], "image-label")],
        architecture=mm.Architecture("cnn", 1_000_000),
        created_at=datetime(2024, 1, 1, tzinfo=UTC),
        source=mm.Provenance(origin="manual"),
        trained_on=[mm.DatasetRef("imagenet", "1.0")],
        tags={"demo"},
    )
    base.update(overrides)
    return mm.ModelRecord(**base)


def make_dataset(name="imagenet", version="1.0", **overrides) -> mm.DatasetRecord:
    base = dict(
        id=f"ds:{name}:{version}", name=name, version=version, source=["ImageNet"],
        collection_method="scraped", modality="image", instance_count=0,
        provenance=mm.Provenance(origin="manual"),
    )
    base.update(overrides)
    return mm.DatasetRecord(**base)


class TestValidate:
    def test_valid_model_against_resolver_is_clean(self):
        resolver = mm.MemoryResolver([make_dataset()])
        assert mm.validate(make_model(), resolver) == []

    def test_empty_output_signature_is_one_violation(self):
        report = mm.validate(make_model(output_signature=[]))
        assert [v.path for v in report] == ["output_signature"]

    def test_empty_input_signature_flagged(self):
        report = mm.validate(make_model(input_signature=[]))
        assert any(v.path == "input_signature" for v in report)

    def test_dangling_dataset_ref_is_a_violation(self):
        resolver = mm.MemoryResolver([])
        report = mm.validate(make_model(), resolver)
        assert any("dangling dataset reference imagenet@1.0" in v.reason for v in report)

    def test_metric_nan_not_finite(self):
        mv = mm.MetricValue(name="accuracy", value=float("nan"))
        run = mm.EvaluationRun(
            id="run:x", model_id=mm.ModelRef("demo", "1.0"),
            dataset_id=mm.DatasetRef("imagenet", "1.0"), hardware_id="edge",
            metrics=[mv], executed_at=datetime(2024, 1, 1, tzinfo=UTC),
            executor=mm.Provenance(origin="manual"),
        )
        report = mm.validate(run)
        assert any("value not finite" in v.reason for v in report)

    def test_known_metric_polarity_is_fixed(self):
        mv = mm.MetricValue(name="latency_ms", value=10.0, higher_is_better=True)
        report = []
        mm._check_metric_value(mv, "metrics[0]", report)
        assert any("fixed polarity" in v.reason for v in report)

    def test_unknown_metric_requires_explicit_polarity(self):
        anonymous = mm.MetricValue(name="hate_speech_rate", value=0.0)
        report = []
        mm._check_metric_value(anonymous, "m", report)
        assert any("required explicitly" in v.reason for v in report)
        explicit = mm.MetricValue(name="hate_speech_rate", value=0.0, higher_is_better=False)
        report = []
        mm._check_metric_value(explicit, "m", report)
        assert report == []

    def test_duplicate_metric_name_slice_within_run(self):
        run = mm.EvaluationRun(
            id="run:x", model_id=mm.ModelRef("demo", "1.0"),
            dataset_id=mm.DatasetRef("imagenet", "1.0"), hardware_id="edge",
            metrics=[mm.MetricValue("accuracy", 0.5), mm.MetricValue("accuracy", 0.6)],
            executed_at=datetime(2024, 1, 1, tzinfo=UTC),
            executor=mm.Provenance(origin="manual"),
        )
        report = mm.validate(run)
        assert any("duplicate metric" in v.reason for v in report)

    def test_external_zoo_provenance_needs_source_name(self):
        model = make_model(source=mm.Provenance(origin="external_zoo"))
        report = mm.validate(model)
        assert any(v.path == "source.source_name" for v in report)

    def test_hardware_memory_must_be_positive(self):
        hw = mm.HardwareProfile(id="hw:x", name="x", device_class="edge", cpu="arm", memory_mb=0)
        assert any(v.path == "memory_mb" for v in mm.validate(hw))

    def test_prediction_scores_clamped_to_unit_interval(self):
        pred = mm.PredictionRecord(
            id="p:1", model_id=mm.ModelRef("demo", "1.0"), instance_id="inst:1",
            predicted=[("kb:dog", 1.5)],
        )
        assert any("score must be in [0, 1]" in v.reason for v in mm.validate(pred))

    def test_bad_shape_entries_flagged(self):
        spec = mm.IOSpec("x", "float32", [0, "*", -3])
        model = make_model(input_signature=[spec])
        report = mm.validate(model)
        paths = {v.path for v in report}
        assert "input_signature[0].shape[0]" in paths
        assert "input_signature[0].shape[2]" in paths

    def test_hyperparameter_value_must_parse_under_type(self):
        model = make_model(hyperparameters=[mm.Hyperparameter("lr", "float", "fast")])
        assert any("does not parse as float" in v.reason for v in mm.validate(model))

    def test_validate_is_total_on_garbage_fields(self):
        # every field wrong, still a report rather than an exception
        wreck = make_model()
        wreck.name = None
        wreck.architecture = "not-an-architecture"
        wreck.created_at = "2024-01-01"
        wreck.tags = ["list", "not", "set"]
        report = mm.validate(wreck)
        assert report and all(isinstance(v, mm.Violation) for v in report)

    def test_id_reuse_with_different_content_flagged(self):
        resolver = mm.MemoryResolver([make_dataset(), make_model()])
        other = make_model(version="2.0", name="demo2")  # same id, different record
        report = mm.validate(other, resolver)
        assert any("already used by a different" in v.reason for v in report)

    def test_instance_count_must_match_materialized_instances(self):
        dataset = make_dataset(instance_count=2)
        instance = mm.DataInstance(id="inst:0", dataset_id=mm.DatasetRef("imagenet", "1.0"),
                                   locator="sha256:x")
        resolver = mm.MemoryResolver([dataset, instance])
        report = mm.validate(dataset, resolver)
        assert any("materialized instances" in v.reason for v in report)


class TestCanonicalBytes:
    def test_key_order_independent(self):
        record = make_model()
        envelope = mm.encode(record)
        scrambled = json.loads(json.dumps(envelope))  # fresh dicts
        assert mm.canonical_json(envelope) == mm.canonical_json(scrambled)
        # decoding from differently-ordered JSON text yields identical bytes
        text = json.dumps(envelope, sort_keys=False)
        assert mm.canonical_bytes(mm.decode_json(text)) == mm.canonical_bytes(record)

    def test_version_bump_changes_bytes(self):
        a = make_model()
        b = make_model(id="model:demo:1.1", version="1.1")
        assert mm.canonical_bytes(a) != mm.canonical_bytes(b)

    def test_equal_records_equal_bytes(self):
        assert mm.canonical_bytes(make_model()) == mm.canonical_bytes(make_model())

    def test_invalid_record_rejected(self):
        with pytest.raises(mm.InvalidRecord):
            mm.canonical_bytes(make_model(output_signature=[]))

    def test_round_trip_every_seed_record(self, seed_store):
        for record in seed_store.entries():
            envelope = json.loads(mm.canonical_bytes(record))
            assert mm.decode(envelope) == record

    def test_no_collisions_across_random_records(self):
        rng = random.Random(7)
        seen = set()
        for i in range(100):
            record = make_model(
                id=f"model:r{i}:1.{i}", name=f"r{i}", version=f"1.{i}",
                task=rng.choice(["image-classification", "pos-tagging"]),
                architecture=mm.Architecture(rng.choice(["cnn", "transformer"]),
                                             rng.randrange(10**9)),
                tags={rng.choice("abcdef") for _ in range(rng.randrange(4))},
                created_at=datetime(2024, 1, 1, rng.randrange(24), tzinfo=UTC),
            )
            seen.add(mm.canonical_bytes(record))
        assert len(seen) == 100

    def test_timestamps_are_rfc3339_utc(self):
        blob = mm.canonical_bytes(make_model()).decode()
        assert '"created_at":"2024-01-01T00:00:00Z"' in blob

    def test_non_utc_timestamp_normalized(self):
        from datetime import timedelta, timezone as tz

        offset = tz(timedelta(hours=2))
        record = make_model(created_at=datetime(2024, 1, 1, 2, tzinfo=offset))
        assert record.created_at == datetime(2024, 1, 1, tzinfo=UTC)

    def test_naive_timestamp_is_a_violation(self):
        report = mm.validate(make_model(created_at=datetime(2024, 1, 1)))
        assert any(v.path == "created_at" for v in report)


class TestVersionOrdering:
    @pytest.mark.parametrize("lower,higher", [
        ("1.0", "1.1"), ("1.9", "1.10"), ("2", "10"), ("0.0", "0.0.1"),
        ("abc", "abd"), ("v1.0", "v1.1"),
        ("legacy", "1.0"),  # numeric versions rank above non-numeric
    ])
    def test_pairs(self, lower, higher):
        assert mm.version_sort_key(lower) < mm.version_sort_key(higher)

    def test_latest_is_max(self):
        versions = ["1.2", "1.10", "legacy", "1.9"]
        assert max(versions, key=mm.version_sort_key) == "1.10"

    def test_total_order_is_consistent(self):
        versions = ["2", "10", "1a", "1.0", "05", "z", "!x", "0.1.2"]
        ordered = sorted(versions, key=mm.version_sort_key)
        for i in range(len(ordered)):
            for j in range(i + 1, len(ordered)):
                assert mm.version_sort_key(ordered[i]) <= mm.version_sort_key(ordered[j])


def test_decode_rejects_unknown_fields():
    envelope = mm.encode(make_model())
    envelope["body"]["bogus"] = 1
    with pytest.raises(mm.DecodeError):
        mm.decode(envelope)


def test_decode_rejects_missing_required_field():
    envelope = mm.encode(make_model())
    del envelope["body"]["name"]
    with pytest.raises(mm.DecodeError):
        mm.decode(envelope)


def test_decode_rejects_unknown_kind():
    with pytest.raises(mm.DecodeError):
        mm.decode({"kind": "Nope", "body": {}})


def test_float_fields_coerced_for_stable_bytes():
    a = mm.MetricValue(name="accuracy", value=0)
    b = mm.MetricValue(name="accuracy", value=0.0)
    assert a == b
    assert math.isclose(a.value, 0.0) and isinstance(a.value, float)
