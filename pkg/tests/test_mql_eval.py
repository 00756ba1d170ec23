from __future__ import annotations

import random
from datetime import datetime, timezone

import pytest

from mzmeta import metamodel as mm
from mzmeta import mql
from mzmeta.mql import (
    CANNED_QUERIES, EvalContext, FALSE, MqlAnalysisError, TRUE, TriBool, UNKNOWN,
)
from mzmeta.store import open_store

from generators import random_total_predicate
from oracles import CANNED_ORACLES, EXPECTED_RESULTS
from test_metamodel import make_dataset, make_model

T, F, U = TRUE, FALSE, UNKNOWN

AND_TABLE = {
    (T, T): T, (T, F): F, (T, U): U,
    (F, T): F, (F, F): F, (F, U): F,
    (U, T): U, (U, F): F, (U, U): U,
}
OR_TABLE = {
    (T, T): T, (T, F): T, (T, U): T,
    (F, T): T, (F, F): F, (F, U): U,
    (U, T): T, (U, F): U, (U, U): U,
}
NOT_TABLE = {T: F, F: T, U: U}


class TestKleene:
    @pytest.mark.parametrize("a,b", sorted(AND_TABLE, key=str))
    def test_and_or_cells(self, a, b):
        assert a.and_(b) is AND_TABLE[(a, b)]
        assert a.or_(b) is OR_TABLE[(a, b)]

    @pytest.mark.parametrize("a", [T, F, U])
    def test_not_cells(self, a):
        assert a.not_() is NOT_TABLE[a]

    @pytest.mark.parametrize("a,b", sorted(AND_TABLE, key=str))
    def test_de_morgan(self, a, b):
        assert a.and_(b).not_() is a.not_().or_(b.not_())

    def test_named_laws(self):
        assert U.not_() is U
        assert U.and_(F) is F
        assert U.or_(T) is T


class TestAnalyzer:
    def test_known_path_binds(self):
        mql.analyze(mql.parse('FIND MODELS WHERE architecture.family = "cnn"'))

    def test_type_mismatch_number_vs_string(self):
        with pytest.raises(MqlAnalysisError) as err:
            mql.analyze(mql.parse('FIND DATASETS WHERE annotator_count > "fifty"'))
        assert "type mismatch" in str(err.value)
        assert err.value.path == "annotator_count"

    def test_unknown_path_is_analysis_error(self):
        with pytest.raises(MqlAnalysisError) as err:
            mql.analyze(mql.parse('FIND MODELS WHERE flavor = "spicy"'))
        assert err.value.path == "flavor"

    def test_unknown_metric_argument(self):
        with pytest.raises(MqlAnalysisError) as err:
            mql.analyze(mql.parse('FIND MODELS WHERE metric(dataset="d", name="n", gpu="a100") > 1'))
        assert "unknown metric() argument" in str(err.value)

    def test_metric_requires_dataset_and_name(self):
        with pytest.raises(MqlAnalysisError):
            mql.analyze(mql.parse('FIND MODELS WHERE metric(name="accuracy") > 1'))
        with pytest.raises(MqlAnalysisError):
            mql.analyze(mql.parse('FIND MODELS WHERE metric(dataset="d") > 1'))

    def test_metric_rejected_for_datasets_target(self):
        with pytest.raises(MqlAnalysisError) as err:
            mql.analyze(mql.parse('FIND DATASETS WHERE metric(dataset="d", name="n") > 1'))
        assert "MODELS" in str(err.value)

    def test_nested_quantifier_rejected(self):
        with pytest.raises(MqlAnalysisError) as err:
            mql.analyze(mql.parse(
                'FIND DATASETS WHERE ALL(INSTANCES, ANY(INSTANCES, split = "train"))'
            ))
        assert "nested" in str(err.value)

    def test_contains_requires_collection(self):
        with pytest.raises(MqlAnalysisError) as err:
            mql.analyze(mql.parse('FIND MODELS WHERE task CONTAINS "x"'))
        assert "collection" in str(err.value)

    def test_order_by_collection_rejected(self):
        with pytest.raises(MqlAnalysisError):
            mql.analyze(mql.parse("FIND MODELS ORDER BY tags ASC"))

    def test_ordering_comparison_on_bool_rejected(self):
        with pytest.raises(MqlAnalysisError):
            mql.analyze(mql.parse("FIND DATASETS WHERE contains_sensitive_data > TRUE"))

    @pytest.mark.parametrize("name", sorted(CANNED_QUERIES))
    def test_all_canned_queries_analyze(self, name):
        mql.analyze(mql.parse(CANNED_QUERIES[name]))


def _keys(records):
    return {(r.name, r.version) for r in records}


class TestCannedQueriesOnSeedZoo:
    @pytest.mark.parametrize("name", sorted(CANNED_QUERIES))
    def test_matches_independent_oracle_and_frozen_expectation(self, seed_store, name):
        records = mql.evaluate(mql.analyze_text(CANNED_QUERIES[name]), EvalContext(seed_store))
        expected = EXPECTED_RESULTS[name]
        oracle = CANNED_ORACLES[name](seed_store)
        if isinstance(expected, list):  # ordered result (Query 4)
            got = [(r.name, r.version) for r in records]
            assert got == expected
            assert got == oracle
        else:
            assert _keys(records) == oracle
            assert _keys(records) == expected

    def test_model_without_runs_is_excluded_not_an_error(self, seed_store):
        # vit-experimental trained on ImageNet but has no evaluations
        records = mql.evaluate(
            mql.analyze_text(CANNED_QUERIES["q3_imagenet_accuracy"]), EvalContext(seed_store),
        )
        assert ("vit-experimental", "0.1") not in _keys(records)

    def test_find_models_returns_every_model(self, seed_store):
        records = mql.evaluate(mql.analyze_text("FIND MODELS"), EvalContext(seed_store))
        assert len(records) == 30


class TestMetricResolution:
    def test_latest_run_wins(self, seed_store):
        # efficientnet-lite has 0.89 then 0.91 accuracy runs; recency picks 0.91
        model = seed_store.lookup("ModelRecord", name="efficientnet-lite", version="1.2")
        caches = mql.StoreCaches(seed_store)
        call = mql.MetricCall(dataset="ImageNet", name="accuracy")
        assert mql.resolve_metric(caches, model, call) == pytest.approx(0.91)

    def test_hardware_matches_name_or_device_class(self, seed_store):
        model = seed_store.lookup("ModelRecord", name="mobilenet-slim", version="1.0")
        caches = mql.StoreCaches(seed_store)
        by_class = mql.MetricCall(dataset="ImageNet", name="latency_ms", hardware="edge")
        by_name = mql.MetricCall(dataset="ImageNet", name="latency_ms", hardware="edge-jetson-nano")
        assert mql.resolve_metric(caches, model, by_class) == pytest.approx(32.0)
        assert mql.resolve_metric(caches, model, by_name) == pytest.approx(32.0)

    def test_sliced_values_do_not_leak_into_unsliced_lookups(self, seed_store):
        model = seed_store.lookup("ModelRecord", name="person-finder-pro", version="2.0")
        caches = mql.StoreCaches(seed_store)
        unsliced = mql.MetricCall(dataset="fairness-faces", name="accuracy")
        sliced = mql.MetricCall(dataset="fairness-faces", name="accuracy", slice="gender=female")
        assert mql.resolve_metric(caches, model, unsliced) == pytest.approx(0.85)
        assert mql.resolve_metric(caches, model, sliced) == pytest.approx(0.83)

    def test_missing_dataset_or_run_is_missing(self, seed_store):
        model = seed_store.lookup("ModelRecord", name="vit-experimental", version="0.1")
        caches = mql.StoreCaches(seed_store)
        assert mql.resolve_metric(caches, model, mql.MetricCall(dataset="ImageNet", name="accuracy")) is mql.MISSING
        assert mql.resolve_metric(caches, model, mql.MetricCall(dataset="nope", name="accuracy")) is mql.MISSING

    def test_latest_dataset_version_is_used(self, tmp_path):
        store = open_store(tmp_path)
        store.put(make_dataset(name="bench", version="1.0"))
        store.put(make_dataset(name="bench", version="2.0", id="ds:bench:2.0"))
        store.put(make_dataset())
        store.put(make_model())
        base = dict(
            model_id=mm.ModelRef("demo", "1.0"), hardware_id="edge",
            executor=mm.Provenance(origin="manual"),
        )
        store.put(mm.HardwareProfile(id="hw:e", name="edge", device_class="edge",
                                     cpu="arm", memory_mb=128))
        base["hardware_id"] = "edge"
        store.put(mm.EvaluationRun(
            id="run:old", dataset_id=mm.DatasetRef("bench", "1.0"),
            metrics=[mm.MetricValue("accuracy", 0.99)],
            executed_at=datetime(2024, 6, 1, tzinfo=timezone.utc), **base,
        ))
        store.put(mm.EvaluationRun(
            id="run:new", dataset_id=mm.DatasetRef("bench", "2.0"),
            metrics=[mm.MetricValue("accuracy", 0.42)],
            executed_at=datetime(2024, 5, 1, tzinfo=timezone.utc), **base,
        ))
        model = store.lookup("ModelRecord", name="demo", version="1.0")
        caches = mql.StoreCaches(store)
        # version 2.0 is latest, so its (older) run is the one that counts
        value = mql.resolve_metric(caches, model, mql.MetricCall(dataset="bench", name="accuracy"))
        assert value == pytest.approx(0.42)


class TestEvaluationSemantics:
    def test_quantifier_over_zero_instances(self, tmp_path):
        store = open_store(tmp_path)
        store.put(make_dataset(name="hollow", version="1.0", id="ds:hollow:1.0"))
        ctx = EvalContext(store)
        base = 'FIND DATASETS WHERE {}(INSTANCES, labels CONTAINS "dog")'
        all_result = mql.evaluate(mql.analyze_text(base.format("ALL")), ctx)
        any_result = mql.evaluate(mql.analyze_text(base.format("ANY")), ctx)
        assert _keys(all_result) == {("hollow", "1.0")}  # vacuous truth
        assert any_result == []

    def test_quantifier_under_models_ranges_over_trained_on_instances(self, seed_store):
        records = mql.evaluate(mql.analyze_text(
            'FIND MODELS WHERE task = "image-classification" '
            'AND ANY(INSTANCES, labels CONTAINS "dog")'
        ), EvalContext(seed_store))
        assert _keys(records) == {
            (name, version) for (name, version) in (
                ("mobilenet-slim", "1.0"), ("resnet-atlas", "2.1"),
                ("efficientnet-lite", "1.2"), ("squeezenet-micro", "0.9"),
                ("vit-experimental", "0.1"),
            )
        }

    def test_order_by_unknown_goes_last_both_directions(self, seed_store):
        for direction in ("ASC", "DESC"):
            records = mql.evaluate(mql.analyze_text(
                f'FIND MODELS WHERE task = "person-detection" '
                f'ORDER BY metric(dataset="COCO", name="map") {direction}'
            ), EvalContext(seed_store))
            assert records[-1].name == "people-net-legacy"  # only one without a map

    def test_order_by_ties_break_by_name_version(self, seed_store):
        records = mql.evaluate(mql.analyze_text(
            'FIND MODELS WHERE task = "pos-tagging" ORDER BY task ASC'
        ), EvalContext(seed_store))
        names = [r.name for r in records]
        assert names == sorted(names)

    def test_limit_is_a_prefix_of_the_unlimited_result(self, seed_store):
        full = mql.evaluate(mql.analyze_text(
            'FIND MODELS ORDER BY architecture.parameter_count DESC'
        ), EvalContext(seed_store))
        for k in (1, 3, 10, 100):
            limited = mql.evaluate(mql.analyze_text(
                f'FIND MODELS ORDER BY architecture.parameter_count DESC LIMIT {k}'
            ), EvalContext(seed_store))
            assert limited == full[:k]

    def test_unknown_excludes_without_error(self, seed_store):
        # license is optional; datasets lacking it neither match nor crash
        records = mql.evaluate(mql.analyze_text(
            'FIND DATASETS WHERE license = "cc-by-4.0"'
        ), EvalContext(seed_store))
        assert _keys(records) == {("COCO", "2017"), ("open-images-animals", "1.0")}
        inverted = mql.evaluate(mql.analyze_text(
            'FIND DATASETS WHERE NOT license = "cc-by-4.0"'
        ), EvalContext(seed_store))
        # datasets with no license are UNKNOWN under NOT too
        assert _keys(inverted) == {("ImageNet", "2012"), ("tweets-sentiment", "1.0")}

    def test_membership_over_list_field(self, seed_store):
        records = mql.evaluate(mql.analyze_text(
            'FIND DATASETS WHERE source IN ("twitter-stream", "web-forums")'
        ), EvalContext(seed_store))
        assert _keys(records) == {("tweets-sentiment", "1.0"), ("toxicity-bench", "1.0")}

    def test_contains_on_tags(self, seed_store):
        records = mql.evaluate(mql.analyze_text(
            'FIND MODELS WHERE tags CONTAINS "edge-optimized"'
        ), EvalContext(seed_store))
        assert len(records) == 4

    def test_random_predicates_match_brute_force(self, seed_store):
        rng = random.Random(99)
        models = [r for r in seed_store.entries() if type(r).__name__ == "ModelRecord"]
        ctx = EvalContext(seed_store)
        for _ in range(150):
            expr, interpret = random_total_predicate(rng, models)
            ast = mql.QueryAst(target="models", predicate=expr)
            got = mql.evaluate(mql.analyze(ast), ctx)
            expected = [m for m in models if interpret(m)]
            assert got == expected, mql.pretty_print(ast)


class TestExplain:
    def test_explain_is_deterministic_and_mentions_index(self, seed_store):
        analyzed = mql.analyze_text(CANNED_QUERIES["q4_best_person_detector"])
        first = mql.explain(analyzed)
        second = mql.explain(mql.analyze_text(CANNED_QUERIES["q4_best_person_detector"]))
        assert first == second
        assert 'via index task = "person-detection"' in first
        assert "order by" in first

    def test_full_scan_reported_when_no_index_applies(self):
        analyzed = mql.analyze_text('FIND MODELS WHERE architecture.family = "cnn"')
        assert "full scan" in mql.explain(analyzed)


def test_run_query_returns_plan_and_timing(seed_store):
    result = mql.run_query("FIND DATASETS", EvalContext(seed_store))
    assert len(result.records) == 6
    assert result.plan.startswith("target: DATASETS")
    assert result.elapsed_ms >= 0.0
