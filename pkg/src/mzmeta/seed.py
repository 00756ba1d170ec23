"""Deterministic demo zoo: 30 models across 6 tasks, 6 datasets, 64 data
instances, 4 hardware profiles, and ~80 evaluation runs with hand-authored
metrics. Used by the test suite, the CLI (`mz seed`), and the web console's
recorded fixtures. Every value is fixed; re-seeding an already-seeded store is
a no-op thanks to idempotent puts.
"""

from __future__ import annotations

import json
from datetime import datetime, timedelta, timezone
from pathlib import Path

from .metamodel import (
    Architecture, DataInstance, DatasetRecord, DatasetRef, HardwareProfile,
    Hyperparameter, IOSpec, MetricValue, ModelRecord, ModelRef,
    PredictionRecord, Provenance, SemanticConcept, TransformStep,
)
from .store import StoreLog

_MANUAL = Provenance(origin="manual")
_HARNESS = Provenance(origin="evaluation_harness", source_name="seed-harness")
_MODEL_EPOCH = datetime(2024, 1, 1, tzinfo=timezone.utc)
_RUN_EPOCH = datetime(2024, 3, 1, tzinfo=timezone.utc)

CONCEPTS = ["dog", "cat", "person", "car", "bicycle", "positive", "negative", "toxic"]

HARDWARE = [
    ("hw:cloud-a100", "cloud-a100", "cloud", "xeon-8380", "a100", 40960),
    ("hw:workstation-rtx4090", "workstation-rtx4090", "workstation", "ryzen-7950x", "rtx4090", 24576),
    ("hw:edge-jetson-nano", "edge-jetson-nano", "edge", "cortex-a57", "maxwell-128", 4096),
    ("hw:mobile-pixel8", "mobile-pixel8", "mobile", "tensor-g3", None, 8192),
]

# name, version, source, collection_method, modality, annotator_count, license, sensitive
DATASETS = [
    ("ImageNet", "2012", ["ImageNet"], "scraped", "image", None, "research-only", False),
    ("COCO", "2017", ["COCO"], "crowdsourced", "image", 30, "cc-by-4.0", False),
    ("open-images-animals", "1.0", ["OpenImage"], "derived", "image", None, "cc-by-4.0", False),
    ("fairness-faces", "1.0", ["internal-faces"], "curated", "image", 12, None, True),
    ("toxicity-bench", "1.0", ["web-forums"], "scraped", "text", None, None, False),
    ("tweets-sentiment", "1.0", ["twitter-stream"], "crowdsourced", "text", 120, "cc0", False),
]

_SPLITS = ("train", "train", "validation", "test")


def _instance_plan() -> dict[str, list[tuple[list[str], str, bool]]]:
    """Per-dataset (labels, split, sensitive) triples for every data instance."""
    plan: dict[str, list[tuple[list[str], str, bool]]] = {}
    imagenet = []
    for i in range(16):
        label = ["dog", "cat", "car", "bicycle"][i % 4]
        imagenet.append(([f"kb:{label}"], _SPLITS[i % 4], False))
    plan["ImageNet"] = imagenet
    coco = []
    for i in range(8):
        labels = ["kb:person", "kb:car"] if i % 2 == 0 else ["kb:person"]
        coco.append((labels, _SPLITS[i % 4], False))
    for i in range(6):
        labels = ["kb:dog", "kb:person"] if i % 2 == 0 else ["kb:dog"]
        coco.append((labels, _SPLITS[i % 4], False))
    for i in range(6):
        coco.append((["kb:car", "kb:bicycle"], _SPLITS[i % 4], False))
    plan["COCO"] = coco
    animals = []
    for i in range(8):
        labels = ["kb:dog"]
        if i < 3:
            labels = ["kb:dog", "kb:cat"]
        elif i < 5:
            labels = ["kb:dog", "kb:person"]
        animals.append((labels, _SPLITS[i % 4], False))
    plan["open-images-animals"] = animals
    plan["fairness-faces"] = [(["kb:person"], "test", True) for _ in range(6)]
    plan["toxicity-bench"] = [(["kb:toxic"] if i < 3 else [], "test", False) for i in range(6)]
    plan["tweets-sentiment"] = [
        (["kb:positive"] if i % 2 == 0 else ["kb:negative"], _SPLITS[i % 4], False)
        for i in range(8)
    ]
    return plan


_IMAGE_IN = [IOSpec("image", "float32", ["*", 3, 224, 224], "image")]
_TEXT_IN = [IOSpec("text", "string", ["*"], "text")]

# task -> (input_signature, output_signature)
_SIGNATURES = {
    "image-classification": (_IMAGE_IN, [IOSpec("probs", "float32", ["*", 1000], "image-label")]),
    "object-detection": (_IMAGE_IN, [IOSpec("boxes", "float32", ["*", 4], "bounding-boxes")]),
    "person-detection": (_IMAGE_IN, [IOSpec("boxes", "float32", ["*", 4], "person-boxes")]),
    "text-classification": (
        _TEXT_IN,
        [IOSpec("label", "string", ["*"], "sentiment-label"), IOSpec("filtered", "string", ["*"], "text")],
    ),
    "pos-tagging": (_TEXT_IN, [IOSpec("tags", "string", ["*"], "pos-tags")]),
    "text-generation": (_TEXT_IN, [IOSpec("generated", "string", ["*"], "text")]),
}

# name, version, task, architecture family, parameter_count, trained_on names, tags
MODELS = [
    ("mobilenet-slim", "1.0", "image-classification", "cnn", 3_400_000, ["ImageNet"], {"edge-optimized"}),
    ("resnet-atlas", "2.1", "image-classification", "cnn", 25_600_000, ["ImageNet"], set()),
    ("efficientnet-lite", "1.2", "image-classification", "cnn", 5_300_000, ["ImageNet"], {"edge-optimized"}),
    ("squeezenet-micro", "0.9", "image-classification", "cnn", 1_200_000, ["ImageNet"], set()),
    ("vit-experimental", "0.1", "image-classification", "transformer", 86_000_000, ["ImageNet"], {"research"}),
    ("yolo-town", "3.0", "object-detection", "cnn", 62_000_000, ["COCO"], set()),
    ("ssd-compact", "1.0", "object-detection", "cnn", 24_000_000, ["COCO"], set()),
    ("detr-wide", "1.1", "object-detection", "transformer", 41_000_000, ["COCO"], set()),
    ("retina-mid", "2.0", "object-detection", "cnn", 34_000_000, ["COCO"], set()),
    ("yolo-nano", "0.5", "object-detection", "cnn", 1_900_000, ["COCO"], {"edge-optimized"}),
    ("person-finder-pro", "2.0", "person-detection", "cnn", 52_000_000, ["COCO"], set()),
    ("crowd-scan", "1.4", "person-detection", "cnn", 28_000_000, ["COCO"], set()),
    ("sentry-lite", "1.0", "person-detection", "cnn", 9_000_000, ["COCO"], set()),
    ("person-finder-edge", "1.1", "person-detection", "cnn", 6_500_000, ["COCO"], {"edge-optimized"}),
    ("people-net-legacy", "0.8", "person-detection", "feed-forward", 4_000_000, ["COCO"], {"deprecated"}),
    ("sent-fast", "1.0", "text-classification", "cnn", 2_000_000, ["tweets-sentiment"], set()),
    ("sent-accurate", "2.0", "text-classification", "transformer", 110_000_000, ["tweets-sentiment"], set()),
    ("sent-balanced", "1.3", "text-classification", "transformer", 14_000_000, ["tweets-sentiment"], set()),
    ("tox-filter", "1.0", "text-classification", "cnn", 8_000_000, ["toxicity-bench"], set()),
    ("sent-jumbo", "0.9", "text-classification", "transformer", 340_000_000, ["tweets-sentiment", "toxicity-bench"], set()),
    ("pos-swift", "1.0", "pos-tagging", "feed-forward", 900_000, ["tweets-sentiment"], set()),
    ("pos-exact", "2.2", "pos-tagging", "transformer", 66_000_000, ["tweets-sentiment"], set()),
    ("pos-mid", "1.1", "pos-tagging", "cnn", 12_000_000, ["tweets-sentiment"], set()),
    ("pos-tiny", "0.4", "pos-tagging", "feed-forward", 300_000, ["tweets-sentiment"], set()),
    ("pos-research", "3.0", "pos-tagging", "transformer", 240_000_000, ["tweets-sentiment"], {"research"}),
    ("gen-clean", "1.0", "text-generation", "transformer", 125_000_000, ["tweets-sentiment"], set()),
    ("gen-wild", "1.0", "text-generation", "transformer", 125_000_000, ["tweets-sentiment"], set()),
    ("gen-guarded", "2.0", "text-generation", "transformer", 350_000_000, ["tweets-sentiment"], {"hate-speech-filtered"}),
    ("gen-classic", "0.7", "text-generation", "transformer", 117_000_000, ["tweets-sentiment"], set()),
    ("gen-raw", "0.2", "text-generation", "transformer", 125_000_000, ["tweets-sentiment"], set()),
]

_DATASET_VERSION = {name: version for name, version, *_ in DATASETS}

# model, dataset, hardware name, {metric: value}; order fixes executed_at
# (one hour apart), so later entries win metric resolution.
RUNS: list[tuple[str, str, str, dict[str, float]]] = [
    # image classification: accuracy measured on cloud, footprint on device
    ("mobilenet-slim", "ImageNet", "cloud-a100", {"accuracy": 0.88}),
    ("mobilenet-slim", "ImageNet", "edge-jetson-nano", {"latency_ms": 32, "memory_footprint_mb": 280}),
    ("mobilenet-slim", "ImageNet", "mobile-pixel8", {"latency_ms": 45, "memory_footprint_mb": 300}),
    ("resnet-atlas", "ImageNet", "cloud-a100", {"accuracy": 0.93}),
    ("resnet-atlas", "ImageNet", "edge-jetson-nano", {"latency_ms": 95, "memory_footprint_mb": 900}),
    ("resnet-atlas", "ImageNet", "mobile-pixel8", {"latency_ms": 130, "memory_footprint_mb": 950}),
    ("efficientnet-lite", "ImageNet", "cloud-a100", {"accuracy": 0.89}),  # superseded below
    ("efficientnet-lite", "ImageNet", "cloud-a100", {"accuracy": 0.91}),
    ("efficientnet-lite", "ImageNet", "edge-jetson-nano", {"latency_ms": 44, "memory_footprint_mb": 410}),
    ("squeezenet-micro", "ImageNet", "cloud-a100", {"accuracy": 0.76}),
    ("squeezenet-micro", "ImageNet", "edge-jetson-nano", {"latency_ms": 18, "memory_footprint_mb": 95}),
    # object detection
    ("yolo-town", "COCO", "cloud-a100", {"map": 0.47}),
    ("yolo-town", "COCO", "edge-jetson-nano", {"latency_ms": 60, "memory_footprint_mb": 700}),
    ("ssd-compact", "COCO", "cloud-a100", {"map": 0.39}),
    ("ssd-compact", "COCO", "edge-jetson-nano", {"latency_ms": 35, "memory_footprint_mb": 350}),
    ("detr-wide", "COCO", "cloud-a100", {"map": 0.52}),
    ("retina-mid", "COCO", "cloud-a100", {"map": 0.44}),
    ("yolo-nano", "COCO", "cloud-a100", {"map": 0.31}),
    ("yolo-nano", "COCO", "edge-jetson-nano", {"latency_ms": 22, "memory_footprint_mb": 180}),
    # person detection: COCO quality + fairness screening
    ("person-finder-pro", "COCO", "cloud-a100", {"map": 0.58}),
    ("person-finder-pro", "fairness-faces", "cloud-a100", {"demographic_parity_gap": 0.02}),
    ("crowd-scan", "COCO", "cloud-a100", {"map": 0.51}),
    ("crowd-scan", "fairness-faces", "cloud-a100", {"demographic_parity_gap": 0.008}),
    ("sentry-lite", "COCO", "cloud-a100", {"map": 0.40}),
    ("sentry-lite", "fairness-faces", "cloud-a100", {"demographic_parity_gap": 0.012}),
    ("person-finder-edge", "COCO", "cloud-a100", {"map": 0.49}),
    ("person-finder-edge", "fairness-faces", "cloud-a100", {"demographic_parity_gap": 0.01}),
    ("person-finder-edge", "COCO", "edge-jetson-nano", {"latency_ms": 40, "memory_footprint_mb": 260}),
    ("people-net-legacy", "fairness-faces", "cloud-a100", {"demographic_parity_gap": 0.05}),
    # sentiment models: mobile runs carry everything the composer needs
    ("sent-fast", "tweets-sentiment", "mobile-pixel8", {"accuracy": 0.86, "latency_ms": 12, "memory_footprint_mb": 150}),
    ("sent-fast", "tweets-sentiment", "workstation-rtx4090", {"accuracy": 0.86}),
    ("sent-accurate", "tweets-sentiment", "mobile-pixel8", {"accuracy": 0.94, "latency_ms": 45, "memory_footprint_mb": 420}),
    ("sent-balanced", "tweets-sentiment", "mobile-pixel8", {"accuracy": 0.90, "latency_ms": 25, "memory_footprint_mb": 260}),
    ("tox-filter", "tweets-sentiment", "mobile-pixel8", {"accuracy": 0.88, "latency_ms": 20, "memory_footprint_mb": 210}),
    ("tox-filter", "toxicity-bench", "workstation-rtx4090", {"accuracy": 0.92}),
    ("sent-jumbo", "tweets-sentiment", "workstation-rtx4090", {"accuracy": 0.95}),
    # PoS taggers
    ("pos-swift", "tweets-sentiment", "mobile-pixel8", {"accuracy": 0.91, "latency_ms": 8, "memory_footprint_mb": 90}),
    ("pos-exact", "tweets-sentiment", "mobile-pixel8", {"accuracy": 0.97, "latency_ms": 35, "memory_footprint_mb": 380}),
    ("pos-exact", "tweets-sentiment", "workstation-rtx4090", {"accuracy": 0.97}),
    ("pos-mid", "tweets-sentiment", "mobile-pixel8", {"accuracy": 0.94, "latency_ms": 18, "memory_footprint_mb": 200}),
    ("pos-tiny", "tweets-sentiment", "mobile-pixel8", {"accuracy": 0.85, "latency_ms": 5, "memory_footprint_mb": 40}),
    ("pos-research", "tweets-sentiment", "workstation-rtx4090", {"accuracy": 0.98}),
    # text generation: toxicity screening
    ("gen-clean", "toxicity-bench", "cloud-a100", {"hate_speech_rate": 0.0}),
    ("gen-clean", "toxicity-bench", "cloud-a100", {"latency_ms": 120, "memory_footprint_mb": 1200}),
    ("gen-wild", "toxicity-bench", "cloud-a100", {"hate_speech_rate": 0.03}),
    ("gen-guarded", "toxicity-bench", "cloud-a100", {"hate_speech_rate": 0.0}),
    ("gen-guarded", "toxicity-bench", "mobile-pixel8", {"latency_ms": 300, "memory_footprint_mb": 800}),
    ("gen-classic", "toxicity-bench", "cloud-a100", {"hate_speech_rate": 0.01}),
    ("gen-raw", "tweets-sentiment", "cloud-a100", {"latency_ms": 200, "memory_footprint_mb": 1500}),
    # broader coverage: workstation accuracy for the image classifiers
    ("mobilenet-slim", "ImageNet", "workstation-rtx4090", {"accuracy": 0.88}),
    ("resnet-atlas", "ImageNet", "workstation-rtx4090", {"accuracy": 0.93}),
    ("efficientnet-lite", "ImageNet", "workstation-rtx4090", {"accuracy": 0.91}),
    ("squeezenet-micro", "ImageNet", "workstation-rtx4090", {"accuracy": 0.76}),
    # device footprints for detectors and text models
    ("crowd-scan", "COCO", "edge-jetson-nano", {"latency_ms": 55, "memory_footprint_mb": 420}),
    ("sentry-lite", "COCO", "edge-jetson-nano", {"latency_ms": 28, "memory_footprint_mb": 150}),
    ("yolo-town", "COCO", "mobile-pixel8", {"latency_ms": 85, "memory_footprint_mb": 760}),
    ("ssd-compact", "COCO", "mobile-pixel8", {"latency_ms": 48, "memory_footprint_mb": 380}),
    ("detr-wide", "COCO", "mobile-pixel8", {"latency_ms": 120, "memory_footprint_mb": 820}),
    ("retina-mid", "COCO", "mobile-pixel8", {"latency_ms": 70, "memory_footprint_mb": 500}),
    ("yolo-nano", "COCO", "mobile-pixel8", {"latency_ms": 26, "memory_footprint_mb": 190}),
    ("sent-fast", "tweets-sentiment", "cloud-a100", {"latency_ms": 4, "memory_footprint_mb": 150}),
    ("sent-accurate", "tweets-sentiment", "cloud-a100", {"latency_ms": 15, "memory_footprint_mb": 420}),
    ("sent-balanced", "tweets-sentiment", "cloud-a100", {"latency_ms": 9, "memory_footprint_mb": 260}),
    ("tox-filter", "tweets-sentiment", "cloud-a100", {"latency_ms": 7, "memory_footprint_mb": 210}),
    ("pos-swift", "tweets-sentiment", "cloud-a100", {"latency_ms": 3, "memory_footprint_mb": 90}),
    ("pos-exact", "tweets-sentiment", "cloud-a100", {"latency_ms": 12, "memory_footprint_mb": 380}),
    ("pos-mid", "tweets-sentiment", "cloud-a100", {"latency_ms": 6, "memory_footprint_mb": 200}),
    ("pos-tiny", "tweets-sentiment", "cloud-a100", {"latency_ms": 2, "memory_footprint_mb": 40}),
    ("gen-wild", "toxicity-bench", "cloud-a100", {"latency_ms": 150, "memory_footprint_mb": 1250}),
    ("gen-classic", "toxicity-bench", "cloud-a100", {"latency_ms": 95, "memory_footprint_mb": 1100}),
    ("sent-fast", "tweets-sentiment", "edge-jetson-nano", {"latency_ms": 22, "memory_footprint_mb": 150}),
    ("sent-balanced", "tweets-sentiment", "edge-jetson-nano", {"latency_ms": 40, "memory_footprint_mb": 260}),
    ("tox-filter", "tweets-sentiment", "edge-jetson-nano", {"latency_ms": 33, "memory_footprint_mb": 210}),
    ("pos-swift", "tweets-sentiment", "edge-jetson-nano", {"latency_ms": 14, "memory_footprint_mb": 90}),
    ("pos-mid", "tweets-sentiment", "edge-jetson-nano", {"latency_ms": 30, "memory_footprint_mb": 200}),
]

# gender-sliced accuracy for the person detectors (fairness reporting)
SLICED_RUNS: list[tuple[str, str, str, list[tuple[str, float, str | None]]]] = [
    ("person-finder-pro", "fairness-faces", "cloud-a100",
     [("accuracy", 0.85, None), ("accuracy", 0.83, "gender=female"), ("accuracy", 0.86, "gender=male")]),
    ("crowd-scan", "fairness-faces", "cloud-a100",
     [("accuracy", 0.82, None), ("accuracy", 0.82, "gender=female"), ("accuracy", 0.82, "gender=male")]),
    ("person-finder-edge", "fairness-faces", "cloud-a100",
     [("accuracy", 0.80, None), ("accuracy", 0.80, "gender=female"), ("accuracy", 0.81, "gender=male")]),
]

PREDICTIONS = [
    ("person-finder-pro", "inst:fairness-faces:00", [("kb:person", 0.97)], True),
    ("person-finder-pro", "inst:fairness-faces:01", [("kb:person", 0.91)], True),
    ("person-finder-pro", "inst:fairness-faces:02", [("kb:person", 0.42)], False),
    ("crowd-scan", "inst:COCO:08", [("kb:dog", 0.64), ("kb:person", 0.88)], True),
]


def populate_seed_zoo(store: StoreLog) -> dict[str, int]:
    """Load the fixture zoo into a store; returns counts by record kind."""
    for label in CONCEPTS:
        store.put(SemanticConcept(iri=f"kb:{label}", label=label, kb_source="demo-kb"))
    for hw_id, name, device_class, cpu, accel, memory in HARDWARE:
        store.put(HardwareProfile(id=hw_id, name=name, device_class=device_class,
                                  cpu=cpu, accelerator=accel, memory_mb=memory))
    plan = _instance_plan()
    for name, version, source, method, modality, annotators, license_, sensitive in DATASETS:
        store.put(DatasetRecord(
            id=f"ds:{name}:{version}", name=name, version=version, source=source,
            collection_method=method, modality=modality, annotator_count=annotators,
            license=license_, contains_sensitive_data=sensitive,
            instance_count=len(plan[name]), provenance=_MANUAL,
        ))
    for name, instances in plan.items():
        ref = DatasetRef(name, _DATASET_VERSION[name])
        for k, (labels, split, sensitive) in enumerate(instances):
            store.put(DataInstance(
                id=f"inst:{name}:{k:02d}", dataset_id=ref,
                locator=f"sha256:{name}-{k:02d}", labels=labels, split=split,
                sensitive=sensitive,
            ))
    for i, (name, version, task, family, params, trained, tags) in enumerate(MODELS):
        input_sig, output_sig = _SIGNATURES[task]
        store.put(ModelRecord(
            id=f"model:{name}:{version}", name=name, version=version, task=task,
            input_signature=list(input_sig), output_signature=list(output_sig),
            architecture=Architecture(family=family, parameter_count=params),
            transformations=[TransformStep("resize", {"size": 224})] if "image" in task or "detection" in task else [],
            hyperparameters=[Hyperparameter("learning_rate", "float", 0.001),
                             Hyperparameter("epochs", "int", 30)],
            trained_on=[DatasetRef(d, _DATASET_VERSION[d]) for d in trained],
            source=_MANUAL, tags=set(tags),
            created_at=_MODEL_EPOCH + timedelta(days=i),
        ))
    seq = 0
    for model_name, dataset_name, hardware_name, metrics in RUNS:
        _put_run(store, seq, model_name, dataset_name, hardware_name,
                 [(n, v, None) for n, v in metrics.items()])
        seq += 1
    for model_name, dataset_name, hardware_name, metrics in SLICED_RUNS:
        _put_run(store, seq, model_name, dataset_name, hardware_name, metrics)
        seq += 1
    for k, (model_name, instance_id, predicted, correct) in enumerate(PREDICTIONS):
        version = _model_version(model_name)
        store.put(PredictionRecord(
            id=f"pred:{k:02d}", model_id=ModelRef(model_name, version),
            instance_id=instance_id, predicted=predicted, correct=correct,
        ))
    return store.record_counts()


def _model_version(name: str) -> str:
    for model_name, version, *_ in MODELS:
        if model_name == name:
            return version
    raise KeyError(name)


def _put_run(store, seq, model_name, dataset_name, hardware_name, metrics):
    from .metamodel import EvaluationRun

    values = []
    for metric_name, value, slice_ in metrics:
        extra = {}
        if metric_name == "hate_speech_rate":
            extra["higher_is_better"] = False
        values.append(MetricValue(name=metric_name, value=float(value), slice=slice_, **extra))
    store.put(EvaluationRun(
        id=f"run:{seq:03d}",
        model_id=ModelRef(model_name, _model_version(model_name)),
        dataset_id=DatasetRef(dataset_name, _DATASET_VERSION[dataset_name]),
        hardware_id=hardware_name,
        metrics=values,
        executed_at=_RUN_EPOCH + timedelta(hours=seq),
        executor=_HARNESS,
    ))


# ---------------------------------------------------------------------------
# crawl fixtures: 20 recorded cards, 18 mappable and 2 malformed

def crawl_fixture_cards() -> list[tuple[str, str]]:
    """(filename, file content) pairs for the recorded-card fixture set."""
    cards: list[tuple[str, str]] = []
    specs = [
        ("hub/sent-mini", "text-classification", ["tweets-clean"], {"accuracy": 0.87}),
        ("hub/sent-large", "text-classification", ["tweets-clean"], {"accuracy": 0.93}),
        ("hub/sent-multi", "text-classification", ["tweets-clean", "reviews-mixed"], {"accuracy": 0.9}),
        ("hub/imgnet-a", "image-classification", ["imagenet-1k"], {"accuracy": 0.91}),
        ("hub/imgnet-b", "image-classification", ["imagenet-1k"], {"accuracy": 0.84}),
        ("hub/imgnet-c", "image-classification", ["imagenet-1k"], {}),
        ("hub/detect-roads", "object-detection", ["street-scenes"], {"map": 0.41}),
        ("hub/detect-people", "person-detection", ["street-scenes"], {"map": 0.5}),
        ("hub/pos-bi", "pos-tagging", ["universal-deps"], {"accuracy": 0.95}),
        ("hub/pos-tri", "pos-tagging", ["universal-deps"], {"accuracy": 0.96}),
        ("hub/gen-story", "text-generation", ["web-text"], {}),
        ("hub/gen-chat", "text-generation", ["web-text"], {"latency_ms": 210.0}),
        ("hub/mystery-widget", "foo-bar", ["widget-data"], {}),
        ("hub/no-data-model", "text-classification", None, {"accuracy": 0.8}),
        ("hub/no-metrics-model", "image-classification", ["imagenet-1k"], None),
        ("hub/oddball-metric", "text-classification", ["tweets-clean"], {"rouge": 0.55}),
        ("hub/asr-base", "speech-recognition", ["voice-hours"], {"accuracy": 0.82}),
        ("hub/tab-reg", "tabular-regression", ["sensor-logs"], {"mse": 1.75}),
    ]
    for i, (identifier, tag, datasets, metrics) in enumerate(specs):
        fields: dict = {"pipeline_tag": tag, "last_modified": f"2024-02-{(i % 27) + 1:02d}T10:00:00Z"}
        if datasets is not None:
            fields["datasets"] = datasets
        if metrics is not None:
            fields["metrics"] = metrics
        body = {
            "identifier": identifier,
            "fields": fields,
            "body_text": f"# {identifier}\n\nRecorded card body for {identifier}.",
        }
        cards.append((f"card_{i:02d}.json", json.dumps(body, sort_keys=True, indent=1)))
    cards.append(("card_18.json", "{this is not json"))
    cards.append(("card_19.json", json.dumps({"fields": {"pipeline_tag": "text-classification"}})))
    return cards


def write_crawl_fixtures(directory: str | Path) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for filename, content in crawl_fixture_cards():
        (directory / filename).write_text(content, encoding="utf-8")
    return directory


# metrics manifest for the simulated executor
MANIFEST_ENTRIES = [
    {"model": "sent-fast@1.0", "dataset": "tweets-sentiment@1.0", "hardware": "edge-jetson-nano",
     "metrics": {"accuracy": 0.85, "latency_ms": 24.0, "memory_footprint_mb": 150.0}},
    {"model": "pos-swift@1.0", "dataset": "tweets-sentiment@1.0", "hardware": "edge-jetson-nano",
     "metrics": {"accuracy": 0.9, "latency_ms": 15.0, "memory_footprint_mb": 90.0}},
    {"model": "gen-raw@0.2", "dataset": "toxicity-bench@1.0", "hardware": "cloud-a100",
     "metrics": {"hate_speech_rate": 0.07}, "polarity": {"hate_speech_rate": False}},
]


def write_manifest(path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(MANIFEST_ENTRIES, sort_keys=True, indent=1), encoding="utf-8")
    return path
