"""The three metadata-acquisition paths: manual ingestion, external-zoo card
extraction over recorded fixtures, and evaluation-harness execution.

Card mapping is deterministic end to end (no wall clock, no randomness), so
re-mapping a stored RawCard reproduces the stored record byte for byte, and
re-crawling the same fixtures is a no-op.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .metamodel import (
    Architecture, DatasetRecord, DatasetRef, EvaluationRun, HardwareProfile,
    IOSpec, METRIC_POLARITY, MetricValue, ModelRecord, ModelRef, Provenance,
    Violation, parse_timestamp, register_checker, register_record_type, validate,
)
from .store import StoreLog, StoreError, ValidationFailed, VersionConflict

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)

# hardware placeholder for metrics reported on cards without an environment
UNSPECIFIED_HARDWARE = HardwareProfile(
    id="hw:unspecified", name="unspecified", device_class="workstation",
    cpu="unknown", memory_mb=1,
)


class IngestError(StoreError):
    pass


class CardError(IngestError):
    pass


class ExecutorError(IngestError):
    pass


@register_record_type
@dataclass
class RawCard:
    """Verbatim payload retrieved from an external zoo, kept for audit."""

    id: str
    zoo: str
    identifier: str
    fields: dict = field(default_factory=dict)
    body_text: str = ""


def _check_raw_card(card: RawCard, resolver, out: list[Violation]):
    for attr in ("id", "zoo", "identifier"):
        if not isinstance(getattr(card, attr), str) or not getattr(card, attr):
            out.append(Violation(attr, "must be a non-empty string"))
    if not isinstance(card.fields, dict):
        out.append(Violation("fields", "must be an object"))
    if not isinstance(card.body_text, str):
        out.append(Violation("body_text", "must be a string"))


register_checker("RawCard", _check_raw_card)


@dataclass
class MappingReport:
    identifier: str
    mapped: list[str] = field(default_factory=list)
    unmapped: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    derived: list = field(default_factory=list)  # stub/auxiliary records to store


@dataclass
class CrawlSummary:
    cards_total: int = 0
    cards_stored: int = 0
    quarantined: list[tuple[str, str]] = field(default_factory=list)
    new_records: int = 0
    reports: list[MappingReport] = field(default_factory=list)


# ---------------------------------------------------------------------------
# manual path

def ingest_manual(store: StoreLog, record):
    """Validate and store a hand-authored record, stamping manual provenance
    where the record does not declare any."""
    return store.put(stamp_provenance(record, Provenance(origin="manual")))


def stamp_provenance(record, provenance: Provenance):
    for attr in ("source", "provenance", "executor"):
        if hasattr(record, attr) and getattr(record, attr) is None:
            record = dataclasses.replace(record, **{attr: provenance})
    return record


# ---------------------------------------------------------------------------
# external-zoo path

class ZooAdapter:
    """Read-only view of one external zoo. Subclasses fetch raw cards; every
    record mapped from them carries external_zoo provenance naming the zoo.
    A live-HTTP adapter would implement the same surface; tests and the CLI
    use recorded fixtures only."""

    zoo_name = "external"

    def list_models(self, source) -> list[tuple[str, RawCard]]:
        raise NotImplementedError

    def fetch_card(self, source, identifier: str) -> RawCard:
        raise NotImplementedError


class HuggingFaceFixtureAdapter(ZooAdapter):
    """Hub-style cards recorded one JSON file per card:

        {"identifier": "...", "fields": {...}, "body_text": "..."}

    Field mapping: pipeline_tag -> task; datasets -> trained_on refs at
    version "0.0" (stub DatasetRecords are derived for unknown names);
    metrics -> one EvaluationRun on the first listed dataset against the
    "unspecified" hardware profile; model_type -> architecture.family;
    parameters -> parameter_count; tags -> tags; last_modified -> created_at.
    IO signatures are synthesized from the task. Everything else is reported
    unmapped, never dropped silently.
    """

    zoo_name = "huggingface"

    def list_models(self, source) -> list[tuple[str, RawCard]]:
        directory = Path(source)
        if not directory.is_dir():
            raise IngestError(f"fixture directory {directory} is unreadable")
        out = []
        for path in sorted(directory.glob("*.json")):
            out.append((path.name, self._load(path)))
        return out

    def fetch_card(self, source, identifier: str) -> RawCard:
        for _, card in self.list_models(source):
            if isinstance(card, RawCard) and card.identifier == identifier:
                return card
        raise CardError(f"no card for {identifier!r}")

    def _load(self, path: Path):
        try:
            doc = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, ValueError) as err:
            return CardError(f"unreadable card: {err}")
        if not isinstance(doc, dict) or not doc.get("identifier"):
            return CardError("card missing the identifier field")
        return RawCard(
            id=f"rawcard:{self.zoo_name}:{doc['identifier']}",
            zoo=self.zoo_name,
            identifier=doc["identifier"],
            fields=doc.get("fields", {}),
            body_text=doc.get("body_text", ""),
        )


_TEXT_TASKS = ("text", "token", "translation", "summarization", "pos", "sentence")
_IMAGE_TASKS = ("image", "vision", "detection", "segmentation")
_AUDIO_TASKS = ("audio", "speech", "voice")


def _synthesize_signature(task: str) -> tuple[list[IOSpec], list[IOSpec]]:
    lowered = task.lower()
    if any(word in lowered for word in _IMAGE_TASKS):
        return (
            [IOSpec("image", "float32", ["*", 3, "*", "*"], "image")],
            [IOSpec("output", "float32", ["*"], "image-label")],
        )
    if any(word in lowered for word in _AUDIO_TASKS):
        return (
            [IOSpec("audio", "float32", ["*"], "audio")],
            [IOSpec("output", "string", ["*"], "text")],
        )
    if any(word in lowered for word in _TEXT_TASKS):
        return (
            [IOSpec("text", "string", ["*"], "text")],
            [IOSpec("output", "string", ["*"], "text-label")],
        )
    return (
        [IOSpec("input", "bytes", ["*"], None)],
        [IOSpec("output", "bytes", ["*"], None)],
    )


def map_card(zoo_name: str, card: RawCard) -> tuple[ModelRecord, MappingReport]:
    """Deterministically translate a raw card into a ModelRecord plus derived
    records (dataset stubs, the unspecified hardware profile, card-metric
    evaluation runs, and the card itself for audit)."""
    if not card.identifier:
        raise CardError("card missing the identifier field")
    report = MappingReport(identifier=card.identifier)
    fields = dict(card.fields)
    provenance = Provenance(
        origin="external_zoo", source_name=zoo_name,
        source_url=fields.pop("url", None),
    )

    task = fields.pop("pipeline_tag", None)
    if task:
        report.mapped.append("pipeline_tag -> task")
    else:
        task = "unknown"
        report.unmapped.append("pipeline_tag: absent, task set to 'unknown'")

    version = str(fields.pop("version", "1.0"))
    raw_modified = fields.pop("last_modified", None)
    created_at = _EPOCH
    if raw_modified:
        try:
            created_at = parse_timestamp(raw_modified)
            report.mapped.append("last_modified -> created_at")
        except Exception:
            report.unmapped.append(f"last_modified: unparseable {raw_modified!r}")

    dataset_names = fields.pop("datasets", None)
    trained_on: list[DatasetRef] = []
    if dataset_names:
        trained_on = [DatasetRef(str(n), "0.0") for n in dataset_names]
        report.mapped.append("datasets -> trained_on")
        for ref in trained_on:
            report.derived.append(_dataset_stub(zoo_name, ref.name))
    else:
        report.unmapped.append("datasets: unmapped/absent")

    architecture = Architecture(
        family=str(fields.pop("model_type", "unknown")),
        parameter_count=int(fields.pop("parameters", 0)),
    )
    tags = {str(t) for t in fields.pop("tags", [])}

    input_sig, output_sig = _synthesize_signature(task)
    report.notes.append("io signatures synthesized from task")

    model = ModelRecord(
        id=f"{zoo_name}:{card.identifier}:{version}",
        name=card.identifier, version=version, task=task,
        input_signature=input_sig, output_signature=output_sig,
        architecture=architecture, created_at=created_at,
        trained_on=trained_on, tags=tags, source=provenance,
    )
    if task not in ("unknown",) and task.count("-") == 0:
        report.notes.append(f"non-curated task label {task!r}")

    metrics = fields.pop("metrics", None)
    if metrics:
        known = {n: v for n, v in metrics.items() if n in METRIC_POLARITY}
        unknown = sorted(set(metrics) - set(known))
        if unknown:
            report.unmapped.append(f"metrics without known polarity: {', '.join(unknown)}")
        if known and not trained_on:
            report.unmapped.append("metrics: no dataset to attach them to")
        elif known:
            report.mapped.append("metrics -> evaluation run")
            report.derived.append(UNSPECIFIED_HARDWARE)
            report.derived.append(EvaluationRun(
                id=f"{zoo_name}:{card.identifier}:{version}:card-metrics",
                model_id=ModelRef(model.name, model.version),
                dataset_id=trained_on[0],
                hardware_id=UNSPECIFIED_HARDWARE.name,
                metrics=[MetricValue(name=n, value=float(v)) for n, v in sorted(known.items())],
                executed_at=created_at,
                executor=provenance,
            ))
    for leftover in sorted(fields):
        report.unmapped.append(f"{leftover}: unmapped")
    report.derived.append(card)
    return model, report


def _dataset_stub(zoo_name: str, name: str) -> DatasetRecord:
    # stubs keep trained_on references resolvable without claiming anything
    return DatasetRecord(
        id=f"{zoo_name}:dataset:{name}:0.0", name=name, version="0.0",
        source=[zoo_name], collection_method="unknown", modality="multimodal",
        instance_count=0,
        provenance=Provenance(origin="external_zoo", source_name=zoo_name),
    )


class _ChainResolver:
    """Store contents plus a batch of still-unstored records, so a whole card
    can be validated before anything is written."""

    def __init__(self, store: StoreLog, staged):
        self.store = store
        from .metamodel import MemoryResolver

        self.staged = MemoryResolver(staged)

    def lookup(self, kind, *, id=None, name=None, version=None):
        found = self.store.lookup(kind, id=id, name=name, version=version)
        if found is None:
            found = self.staged.lookup(kind, id=id, name=name, version=version)
        return found

    def count_instances(self, dataset):
        return self.store.count_instances(dataset) + self.staged.count_instances(dataset)


def crawl(store: StoreLog, adapter: ZooAdapter, fixture_dir) -> CrawlSummary:
    """Map, validate, and store every card in a fixture directory. Bad cards
    are quarantined with a reason and never partially written; re-crawling
    identical fixtures adds nothing."""
    summary = CrawlSummary()
    before = len(store)
    for filename, card in adapter.list_models(fixture_dir):
        summary.cards_total += 1
        if isinstance(card, CardError):
            summary.quarantined.append((filename, str(card)))
            continue
        try:
            model, report = map_card(adapter.zoo_name, card)
        except CardError as err:
            summary.quarantined.append((filename, str(err)))
            continue
        batch = [r for r in report.derived if not isinstance(r, EvaluationRun)]
        batch += [model]
        batch += [r for r in report.derived if isinstance(r, EvaluationRun)]
        problem = _validate_batch(store, batch)
        if problem:
            summary.quarantined.append((filename, problem))
            continue
        try:
            for record in batch:
                store.put(record)
        except (ValidationFailed, VersionConflict) as err:
            summary.quarantined.append((filename, str(err)))
            continue
        summary.cards_stored += 1
        summary.reports.append(report)
    summary.new_records = len(store) - before
    return summary


def _validate_batch(store, batch) -> str | None:
    staged: list = []
    for record in batch:
        resolver = _ChainResolver(store, staged)
        existing = store.lookup(
            type(record).__name__,
            **(
                {"name": record.name, "version": record.version}
                if hasattr(record, "version") and hasattr(record, "name")
                else {"id": getattr(record, "id", None) or getattr(record, "iri", None)}
            ),
        )
        if existing is not None and existing != record:
            return f"{type(record).__name__} {getattr(record, 'id', '?')}: conflicts with stored content"
        violations = validate(record, resolver)
        if violations:
            head = "; ".join(f"{v.path}: {v.reason}" for v in violations[:3])
            return f"{type(record).__name__} invalid: {head}"
        staged.append(record)
    return None


# ---------------------------------------------------------------------------
# evaluation-harness path

class Executor:
    """Runs a model on a dataset under a hardware profile and reports
    metrics. Must be deterministic for fixed (inputs, seed)."""

    name = "executor"

    def run(self, model_ref: ModelRef, dataset_ref: DatasetRef, hardware_name: str,
            seed: int) -> list[MetricValue]:
        raise NotImplementedError


class SimulatedExecutor(Executor):
    """Deterministic executor backed by a metrics manifest instead of real
    inference: entries are {"model": "name@version", "dataset":
    "name@version", "hardware": name, "metrics": {...}, "polarity": {...}?}.
    """

    name = "simulated"

    def __init__(self, manifest):
        if isinstance(manifest, (str, Path)):
            manifest = json.loads(Path(manifest).read_text(encoding="utf-8"))
        self.entries = {
            (e["model"], e["dataset"], e["hardware"]): e for e in manifest
        }

    def run(self, model_ref, dataset_ref, hardware_name, seed):
        key = (str(model_ref), str(dataset_ref), hardware_name)
        entry = self.entries.get(key)
        if entry is None:
            raise ExecutorError(f"no manifest entry for {key}")
        polarity = entry.get("polarity", {})
        out = []
        for name, value in sorted(entry["metrics"].items()):
            extra = {}
            if name in polarity:
                extra["higher_is_better"] = bool(polarity[name])
            out.append(MetricValue(name=name, value=float(value), **extra))
        return out


def parse_ref(text: str) -> tuple[str, str]:
    name, sep, version = text.partition("@")
    if not sep or not name or not version:
        raise IngestError(f"expected name@version, got {text!r}")
    return name, version


def run_evaluation(store: StoreLog, executor: Executor, model: str | ModelRef,
                   dataset: str | DatasetRef, hardware: str, seed: int = 0):
    """Execute (or simulate) one evaluation and store it as a new
    EvaluationRun. Runs are events: repeating the call stores another run, and
    metric resolution will prefer the later one."""
    if isinstance(model, str):
        model = ModelRef(*parse_ref(model))
    if isinstance(dataset, str):
        dataset = DatasetRef(*parse_ref(dataset))
    for kind, name, version in (("ModelRecord", model.name, model.version),
                                ("DatasetRecord", dataset.name, dataset.version)):
        if store.lookup(kind, name=name, version=version) is None:
            raise IngestError(f"unresolvable {kind} reference {name}@{version}")
    if store.lookup("HardwareProfile", name=hardware) is None:
        raise IngestError(f"unresolvable hardware reference {hardware!r}")
    metrics = executor.run(model, dataset, hardware, seed)
    for mv in metrics:
        if not isinstance(mv.value, float) or not math.isfinite(mv.value):
            raise ValidationFailed([Violation(f"metrics[{mv.name}].value", "value not finite")])
    prefix = f"run:harness:{model}:{dataset}:{hardware}:"
    existing = sum(
        1 for run in store.scan("EvaluationRun")
        if run.id.startswith(prefix)
    )
    run = EvaluationRun(
        id=f"{prefix}{existing:04d}",
        model_id=model, dataset_id=dataset, hardware_id=hardware,
        metrics=metrics,
        executed_at=datetime.now(timezone.utc),
        executor=Provenance(origin="evaluation_harness", source_name=executor.name),
    )
    return store.put(run)
