"""Record types for the model-zoo metadata registry.

Four families of records: model configuration (ModelRecord and its parts),
datasets and their instances, execution results (predictions linked to
semantic concepts), and hardware-conditioned evaluations. Everything else in
the package stores, queries, or derives these values.

Records are plain dataclasses treated as immutable values. `validate` reports
every violated invariant instead of raising; `encode`/`decode` give a
canonical JSON envelope with stable bytes (see `canonical_bytes`).
"""

from __future__ import annotations

import dataclasses
import json
import math
import re
import types
import typing
from dataclasses import dataclass, field
from datetime import datetime, timezone

# Curated vocabularies. Task labels and metric names are open: unknown values
# are accepted, but unknown metrics must declare their polarity explicitly.
TASK_SEED_VOCABULARY = frozenset({
    "image-classification",
    "text-classification",
    "pos-tagging",
    "person-detection",
    "text-generation",
    "object-detection",
})

METRIC_POLARITY = {
    "accuracy": True,
    "map": True,
    "f1": True,
    "mse": False,
    "latency_ms": False,
    "memory_footprint_mb": False,
    "demographic_parity_gap": False,
}

IO_DTYPES = frozenset({"float32", "int64", "string", "bytes", "bool"})
WILDCARD_DIM = "*"
COLLECTION_METHODS = frozenset({"crowdsourced", "scraped", "synthetic", "curated", "derived", "unknown"})
MODALITIES = frozenset({"image", "text", "audio", "tabular", "multimodal"})
DEVICE_CLASSES = frozenset({"cloud", "workstation", "edge", "mobile"})
SPLITS = frozenset({"train", "validation", "test", "unsplit"})
PROVENANCE_ORIGINS = frozenset({"manual", "external_zoo", "evaluation_harness"})
HYPERPARAM_TYPES = frozenset({"int", "float", "string", "bool", "enum"})


class MetamodelError(Exception):
    pass


class InvalidRecord(MetamodelError):
    """Raised by canonical_bytes/encode when given a structurally invalid record."""

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        super().__init__("; ".join(f"{v.path}: {v.reason}" for v in violations))


class DecodeError(MetamodelError):
    pass


@dataclass
class Violation:
    path: str
    reason: str


@dataclass
class DatasetRef:
    """Reference to a dataset by (name, version), rendered "name@version"."""

    name: str
    version: str

    def __str__(self) -> str:
        return f"{self.name}@{self.version}"


@dataclass
class ModelRef:
    name: str
    version: str

    def __str__(self) -> str:
        return f"{self.name}@{self.version}"


@dataclass
class Provenance:
    origin: str
    source_name: str | None = None
    source_url: str | None = None
    retrieved_at: datetime | None = None


@dataclass
class IOSpec:
    name: str
    dtype: str
    shape: list[int | str] = field(default_factory=list)
    semantic_type: str | None = None


@dataclass
class TransformStep:
    name: str
    params: dict = field(default_factory=dict)


@dataclass
class Architecture:
    family: str
    parameter_count: int = 0
    description: str | None = None


@dataclass
class Hyperparameter:
    name: str
    value_type: str
    value: object


@dataclass
class ModelRecord:
    id: str
    name: str
    version: str
    task: str
    input_signature: list[IOSpec]
    output_signature: list[IOSpec]
    architecture: Architecture
    created_at: datetime
    source: Provenance | None = None  # stamped by the ingest layer when absent
    transformations: list[TransformStep] = field(default_factory=list)
    hyperparameters: list[Hyperparameter] = field(default_factory=list)
    trained_on: list[DatasetRef] = field(default_factory=list)
    tags: set[str] = field(default_factory=set)

    def __post_init__(self):
        if isinstance(self.tags, (list, tuple)):
            self.tags = set(self.tags)
        self.created_at = _coerce_utc(self.created_at)


@dataclass
class DatasetRecord:
    id: str
    name: str
    version: str
    source: list[str]
    collection_method: str
    modality: str
    instance_count: int
    provenance: Provenance | None = None
    annotator_count: int | None = None
    license: str | None = None
    contains_sensitive_data: bool = False


@dataclass
class DataInstance:
    id: str
    dataset_id: DatasetRef
    locator: str
    split: str = "unsplit"
    labels: list[str] = field(default_factory=list)
    sensitive: bool = False


@dataclass
class PredictionRecord:
    id: str
    model_id: ModelRef
    instance_id: str
    predicted: list[tuple[str, float]]
    correct: bool | None = None

    def __post_init__(self):
        self.predicted = [
            (p[0], float(p[1])) if isinstance(p, (list, tuple)) and len(p) == 2
            and isinstance(p[1], (int, float)) and not isinstance(p[1], bool) else tuple(p)
            for p in self.predicted
        ]


@dataclass
class SemanticConcept:
    iri: str
    label: str
    kb_source: str


@dataclass
class HardwareProfile:
    id: str
    name: str
    device_class: str
    cpu: str
    memory_mb: int
    accelerator: str | None = None


@dataclass
class MetricValue:
    name: str
    value: float
    unit: str | None = None
    slice: str | None = None
    higher_is_better: bool | None = None

    def __post_init__(self):
        if isinstance(self.value, int) and not isinstance(self.value, bool):
            self.value = float(self.value)
        if self.higher_is_better is None:
            self.higher_is_better = METRIC_POLARITY.get(self.name)


@dataclass
class EvaluationRun:
    id: str
    model_id: ModelRef
    dataset_id: DatasetRef
    hardware_id: str
    metrics: list[MetricValue]
    executed_at: datetime
    executor: Provenance | None = None

    def __post_init__(self):
        self.executed_at = _coerce_utc(self.executed_at)


RECORD_TYPES: dict[str, type] = {
    cls.__name__: cls
    for cls in (
        ModelRecord,
        DatasetRecord,
        DataInstance,
        PredictionRecord,
        SemanticConcept,
        HardwareProfile,
        EvaluationRun,
    )
}

# Kinds whose identity is (name, version) and that participate in versioning.
VERSIONED_KINDS = frozenset({"ModelRecord", "DatasetRecord"})


def register_record_type(cls: type) -> type:
    """Register an additional storable record kind (used by the ingest layer)."""
    RECORD_TYPES[cls.__name__] = cls
    return cls


def kind_of(record) -> str:
    kind = type(record).__name__
    if kind not in RECORD_TYPES:
        raise MetamodelError(f"unregistered record type: {kind}")
    return kind


def record_identity(record) -> tuple[str, str | None, str | None, str | None]:
    """(kind, id, name, version) with None where the kind lacks the axis."""
    kind = kind_of(record)
    rid = getattr(record, "id", None) or getattr(record, "iri", None)
    name = getattr(record, "name", None)
    version = getattr(record, "version", None)
    return kind, rid, name, version


# ---------------------------------------------------------------------------
# version ordering

_NUMERIC_VERSION = re.compile(r"^\d+(\.\d+)*$")


def version_sort_key(version: str):
    """Total order for version strings: dotted numeric versions compare as
    integer tuples and rank above non-numeric ones, which compare as plain
    strings. "latest" means maximal under this key."""
    if isinstance(version, str) and _NUMERIC_VERSION.match(version):
        return (1, tuple(int(part) for part in version.split(".")), "")
    return (0, (), str(version))


# ---------------------------------------------------------------------------
# timestamps

def _coerce_utc(value):
    if isinstance(value, datetime) and value.tzinfo is not None:
        return value.astimezone(timezone.utc)
    return value


def format_timestamp(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def parse_timestamp(text: str) -> datetime:
    try:
        dt = datetime.fromisoformat(text.replace("Z", "+00:00"))
    except ValueError as err:
        raise DecodeError(f"bad timestamp {text!r}: {err}") from None
    if dt.tzinfo is None:
        raise DecodeError(f"timestamp {text!r} is not timezone-aware")
    return dt.astimezone(timezone.utc)


# ---------------------------------------------------------------------------
# validation

class Resolver(typing.Protocol):
    """Reference-resolution context; the store satisfies this protocol."""

    def lookup(self, kind: str, *, id: str | None = None, name: str | None = None,
               version: str | None = None): ...

    def count_instances(self, dataset: DatasetRef) -> int: ...


def validate(record, resolver: Resolver | None = None) -> list[Violation]:
    """Report every violated invariant of `record`. Empty list means valid.

    Total over structurally parseable input: bad field values become report
    entries, never exceptions. With a resolver, reference resolution and
    uniqueness are checked too; without one, only local structure is.
    """
    out: list[Violation] = []
    try:
        kind = type(record).__name__
        checker = _CHECKERS.get(kind)
        if checker is None:
            out.append(Violation("", f"unknown record type {kind}"))
            return out
        checker(record, resolver, out)
        if resolver is not None:
            _check_uniqueness(record, resolver, out)
    except Exception as err:  # validation must never abort
        out.append(Violation("", f"unverifiable record: {err}"))
    return out


def _check_uniqueness(record, resolver, out):
    kind, rid, name, version = record_identity(record)
    if rid:
        existing = resolver.lookup(kind, id=rid)
        if existing is not None and existing != record:
            out.append(Violation("id", f"id {rid!r} already used by a different {kind}"))
    if kind in VERSIONED_KINDS and name and version:
        existing = resolver.lookup(kind, name=name, version=version)
        if existing is not None and existing != record:
            out.append(Violation("version", f"({name!r}, {version!r}) already bound to different content"))


def _str(out, path, value, nonempty=True):
    if not isinstance(value, str) or (nonempty and not value):
        out.append(Violation(path, "must be a non-empty string" if nonempty else "must be a string"))
        return False
    return True


def _opt_str(out, path, value):
    if value is not None and not isinstance(value, str):
        out.append(Violation(path, "must be a string or absent"))


def _bool(out, path, value):
    if not isinstance(value, bool):
        out.append(Violation(path, "must be a boolean"))


def _int(out, path, value, minimum=None, exclusive=False):
    if not isinstance(value, int) or isinstance(value, bool):
        out.append(Violation(path, "must be an integer"))
        return
    if minimum is not None and (value <= minimum if exclusive else value < minimum):
        op = ">" if exclusive else ">="
        out.append(Violation(path, f"must be {op} {minimum}"))


def _enum(out, path, value, allowed):
    if value not in allowed:
        out.append(Violation(path, f"must be one of {sorted(allowed)}"))


def _utc(out, path, value, optional=False):
    if value is None:
        if not optional:
            out.append(Violation(path, "timestamp required"))
        return
    if not isinstance(value, datetime) or value.tzinfo is None:
        out.append(Violation(path, "must be a timezone-aware UTC timestamp"))


def _check_provenance(prov, path, out):
    if prov is None:
        out.append(Violation(path, "provenance required"))
        return
    if not isinstance(prov, Provenance):
        out.append(Violation(path, "must be a Provenance"))
        return
    _enum(out, f"{path}.origin", prov.origin, PROVENANCE_ORIGINS)
    if prov.origin == "external_zoo" and not prov.source_name:
        out.append(Violation(f"{path}.source_name", "required when origin is external_zoo"))
    _opt_str(out, f"{path}.source_name", prov.source_name)
    _opt_str(out, f"{path}.source_url", prov.source_url)
    _utc(out, f"{path}.retrieved_at", prov.retrieved_at, optional=True)


def _check_iospec(spec, path, out):
    if not isinstance(spec, IOSpec):
        out.append(Violation(path, "must be an IOSpec"))
        return
    _str(out, f"{path}.name", spec.name)
    _enum(out, f"{path}.dtype", spec.dtype, IO_DTYPES)
    if not isinstance(spec.shape, list):
        out.append(Violation(f"{path}.shape", "must be a list"))
    else:
        for i, dim in enumerate(spec.shape):
            ok_int = isinstance(dim, int) and not isinstance(dim, bool) and dim > 0
            if not ok_int and dim != WILDCARD_DIM:
                out.append(Violation(f"{path}.shape[{i}]", f"must be a positive integer or {WILDCARD_DIM!r}"))
    _opt_str(out, f"{path}.semantic_type", spec.semantic_type)


def _check_dataset_ref(ref, path, out, resolver):
    if not isinstance(ref, DatasetRef):
        out.append(Violation(path, "must be a DatasetRef"))
        return
    _str(out, f"{path}.name", ref.name)
    _str(out, f"{path}.version", ref.version)
    if resolver is not None and ref.name and ref.version:
        if resolver.lookup("DatasetRecord", name=ref.name, version=ref.version) is None:
            out.append(Violation(path, f"dangling dataset reference {ref}"))


def _check_model_ref(ref, path, out, resolver):
    if not isinstance(ref, ModelRef):
        out.append(Violation(path, "must be a ModelRef"))
        return
    _str(out, f"{path}.name", ref.name)
    _str(out, f"{path}.version", ref.version)
    if resolver is not None and ref.name and ref.version:
        if resolver.lookup("ModelRecord", name=ref.name, version=ref.version) is None:
            out.append(Violation(path, f"dangling model reference {ref}"))


def _check_model(rec: ModelRecord, resolver, out):
    _str(out, "id", rec.id)
    _str(out, "name", rec.name)
    _str(out, "version", rec.version)
    _str(out, "task", rec.task)
    for sig_name in ("input_signature", "output_signature"):
        sig = getattr(rec, sig_name)
        if not isinstance(sig, list) or not sig:
            out.append(Violation(sig_name, "must be a non-empty list"))
            continue
        for i, spec in enumerate(sig):
            _check_iospec(spec, f"{sig_name}[{i}]", out)
    if not isinstance(rec.transformations, list):
        out.append(Violation("transformations", "must be a list"))
    else:
        for i, step in enumerate(rec.transformations):
            if not isinstance(step, TransformStep):
                out.append(Violation(f"transformations[{i}]", "must be a TransformStep"))
            else:
                _str(out, f"transformations[{i}].name", step.name)
    if not isinstance(rec.architecture, Architecture):
        out.append(Violation("architecture", "must be an Architecture"))
    else:
        _str(out, "architecture.family", rec.architecture.family)
        _int(out, "architecture.parameter_count", rec.architecture.parameter_count, minimum=0)
        _opt_str(out, "architecture.description", rec.architecture.description)
    seen_hp = set()
    for i, hp in enumerate(rec.hyperparameters):
        path = f"hyperparameters[{i}]"
        if not isinstance(hp, Hyperparameter):
            out.append(Violation(path, "must be a Hyperparameter"))
            continue
        _str(out, f"{path}.name", hp.name)
        _enum(out, f"{path}.value_type", hp.value_type, HYPERPARAM_TYPES)
        if hp.name in seen_hp:
            out.append(Violation(f"{path}.name", f"duplicate hyperparameter {hp.name!r}"))
        seen_hp.add(hp.name)
        if hp.value_type in HYPERPARAM_TYPES and not _hyperparam_value_ok(hp.value_type, hp.value):
            out.append(Violation(f"{path}.value", f"value {hp.value!r} does not parse as {hp.value_type}"))
    for i, ref in enumerate(rec.trained_on):
        _check_dataset_ref(ref, f"trained_on[{i}]", out, resolver)
    _check_provenance(rec.source, "source", out)
    if not isinstance(rec.tags, set) or not all(isinstance(t, str) for t in rec.tags):
        out.append(Violation("tags", "must be a set of strings"))
    _utc(out, "created_at", rec.created_at)


def _hyperparam_value_ok(value_type, value):
    if value_type == "int":
        return isinstance(value, int) and not isinstance(value, bool)
    if value_type == "float":
        return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)
    if value_type == "bool":
        return isinstance(value, bool)
    return isinstance(value, str)  # string and enum


def _check_dataset(rec: DatasetRecord, resolver, out):
    _str(out, "id", rec.id)
    _str(out, "name", rec.name)
    _str(out, "version", rec.version)
    if not isinstance(rec.source, list) or not all(isinstance(s, str) for s in rec.source):
        out.append(Violation("source", "must be a list of strings"))
    _enum(out, "collection_method", rec.collection_method, COLLECTION_METHODS)
    if rec.annotator_count is not None:
        _int(out, "annotator_count", rec.annotator_count, minimum=0)
    _opt_str(out, "license", rec.license)
    _bool(out, "contains_sensitive_data", rec.contains_sensitive_data)
    _enum(out, "modality", rec.modality, MODALITIES)
    _int(out, "instance_count", rec.instance_count, minimum=0)
    _check_provenance(rec.provenance, "provenance", out)
    if resolver is not None and isinstance(rec.name, str) and isinstance(rec.version, str):
        materialized = resolver.count_instances(DatasetRef(rec.name, rec.version))
        if materialized and materialized != rec.instance_count:
            out.append(Violation(
                "instance_count",
                f"{rec.instance_count} does not match {materialized} materialized instances",
            ))


def _check_instance(rec: DataInstance, resolver, out):
    _str(out, "id", rec.id)
    _check_dataset_ref(rec.dataset_id, "dataset_id", out, resolver)
    _str(out, "locator", rec.locator)
    _enum(out, "split", rec.split, SPLITS)
    if not isinstance(rec.labels, list) or not all(isinstance(l, str) for l in rec.labels):
        out.append(Violation("labels", "must be a list of concept references"))
    _bool(out, "sensitive", rec.sensitive)


def _check_prediction(rec: PredictionRecord, resolver, out):
    _str(out, "id", rec.id)
    _check_model_ref(rec.model_id, "model_id", out, resolver)
    _str(out, "instance_id", rec.instance_id)
    if resolver is not None and isinstance(rec.instance_id, str) and rec.instance_id:
        if resolver.lookup("DataInstance", id=rec.instance_id) is None:
            out.append(Violation("instance_id", f"dangling instance reference {rec.instance_id!r}"))
    if not isinstance(rec.predicted, list):
        out.append(Violation("predicted", "must be a list of (concept, score) pairs"))
        return
    for i, pair in enumerate(rec.predicted):
        path = f"predicted[{i}]"
        if not isinstance(pair, tuple) or len(pair) != 2 or not isinstance(pair[0], str):
            out.append(Violation(path, "must be a (concept reference, score) pair"))
            continue
        score = pair[1]
        if not isinstance(score, (int, float)) or isinstance(score, bool) or math.isnan(score) or not 0.0 <= score <= 1.0:
            out.append(Violation(f"{path}.score", "score must be in [0, 1]"))
    if rec.correct is not None:
        _bool(out, "correct", rec.correct)


def _check_concept(rec: SemanticConcept, resolver, out):
    _str(out, "iri", rec.iri)
    _str(out, "label", rec.label)
    _str(out, "kb_source", rec.kb_source)


def _check_hardware(rec: HardwareProfile, resolver, out):
    _str(out, "id", rec.id)
    _str(out, "name", rec.name)
    _enum(out, "device_class", rec.device_class, DEVICE_CLASSES)
    _str(out, "cpu", rec.cpu)
    _opt_str(out, "accelerator", rec.accelerator)
    _int(out, "memory_mb", rec.memory_mb, minimum=0, exclusive=True)


def _check_metric_value(mv: MetricValue, path, out):
    if not isinstance(mv, MetricValue):
        out.append(Violation(path, "must be a MetricValue"))
        return
    _str(out, f"{path}.name", mv.name)
    if not isinstance(mv.value, float) or not math.isfinite(mv.value):
        out.append(Violation(f"{path}.value", "value not finite"))
    _opt_str(out, f"{path}.unit", mv.unit)
    _opt_str(out, f"{path}.slice", mv.slice)
    known = METRIC_POLARITY.get(mv.name)
    if mv.higher_is_better is None:
        out.append(Violation(f"{path}.higher_is_better", f"required explicitly for unknown metric {mv.name!r}"))
    elif known is not None and mv.higher_is_better != known:
        out.append(Violation(f"{path}.higher_is_better", f"{mv.name!r} has fixed polarity higher_is_better={known}"))


def _check_run(rec: EvaluationRun, resolver, out):
    _str(out, "id", rec.id)
    _check_model_ref(rec.model_id, "model_id", out, resolver)
    _check_dataset_ref(rec.dataset_id, "dataset_id", out, resolver)
    _str(out, "hardware_id", rec.hardware_id)
    if resolver is not None and isinstance(rec.hardware_id, str) and rec.hardware_id:
        if resolver.lookup("HardwareProfile", name=rec.hardware_id) is None:
            out.append(Violation("hardware_id", f"dangling hardware reference {rec.hardware_id!r}"))
    if not isinstance(rec.metrics, list) or not rec.metrics:
        out.append(Violation("metrics", "must be a non-empty list"))
    else:
        seen = set()
        for i, mv in enumerate(rec.metrics):
            _check_metric_value(mv, f"metrics[{i}]", out)
            if isinstance(mv, MetricValue):
                key = (mv.name, mv.slice)
                if key in seen:
                    out.append(Violation(f"metrics[{i}]", f"duplicate metric {key} within one run"))
                seen.add(key)
    _utc(out, "executed_at", rec.executed_at)
    _check_provenance(rec.executor, "executor", out)


_CHECKERS = {
    "ModelRecord": _check_model,
    "DatasetRecord": _check_dataset,
    "DataInstance": _check_instance,
    "PredictionRecord": _check_prediction,
    "SemanticConcept": _check_concept,
    "HardwareProfile": _check_hardware,
    "EvaluationRun": _check_run,
}


def register_checker(kind: str, checker) -> None:
    _CHECKERS[kind] = checker


# ---------------------------------------------------------------------------
# canonical encoding
#
# Envelope: {"kind": <type name>, "body": {...}} as UTF-8 JSON with keys sorted,
# no insignificant whitespace, floats in shortest round-trip form, timestamps
# RFC 3339 UTC. Optional fields that are None are omitted.

def _encode_value(value):
    if isinstance(value, datetime):
        return format_timestamp(value)
    if isinstance(value, set):
        return sorted(_encode_value(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [_encode_value(v) for v in value]
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {
            f.name: _encode_value(getattr(value, f.name))
            for f in dataclasses.fields(value)
            if getattr(value, f.name) is not None
        }
    if isinstance(value, dict):
        return {str(k): _encode_value(v) for k, v in value.items()}
    return value


def encode(record) -> dict:
    return {"kind": kind_of(record), "body": _encode_value(record)}


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False, allow_nan=False)


def canonical_bytes(record) -> bytes:
    """Stable identity bytes for a record; equal records give equal bytes.

    Rejects records that fail structural validation (reference resolution is
    the store's concern, not identity's).
    """
    violations = validate(record, resolver=None)
    if violations:
        raise InvalidRecord(violations)
    return canonical_json(encode(record)).encode("utf-8")


def _type_hints(cls) -> dict:
    return typing.get_type_hints(cls)


def _decode_value(hint, value, path):
    origin = typing.get_origin(hint)
    if origin in (typing.Union, types.UnionType):
        args = [a for a in typing.get_args(hint) if a is not type(None)]
        if value is None:
            return None
        if len(args) == 1:
            return _decode_value(args[0], value, path)
        # int | str unions (shape dims): trust the JSON value's own type
        if isinstance(value, bool):
            raise DecodeError(f"{path}: unexpected boolean")
        return value
    if hint is datetime:
        if not isinstance(value, str):
            raise DecodeError(f"{path}: expected timestamp string")
        return parse_timestamp(value)
    if origin in (list, set):
        (item_hint,) = typing.get_args(hint) or (object,)
        if not isinstance(value, list):
            raise DecodeError(f"{path}: expected array")
        items = [_decode_value(item_hint, v, f"{path}[{i}]") for i, v in enumerate(value)]
        return set(items) if origin is set else items
    if origin is tuple:
        args = typing.get_args(hint)
        if not isinstance(value, list):
            raise DecodeError(f"{path}: expected array")
        return tuple(_decode_value(a, v, f"{path}[{i}]") for i, (a, v) in enumerate(zip(args, value)))
    if origin is dict or hint is dict:
        if not isinstance(value, dict):
            raise DecodeError(f"{path}: expected object")
        return value
    if dataclasses.is_dataclass(hint):
        return _decode_dataclass(hint, value, path)
    if hint is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise DecodeError(f"{path}: expected number")
        return float(value)
    if hint is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise DecodeError(f"{path}: expected integer")
        return value
    if hint is bool:
        if not isinstance(value, bool):
            raise DecodeError(f"{path}: expected boolean")
        return value
    if hint is str:
        if not isinstance(value, str):
            raise DecodeError(f"{path}: expected string")
        return value
    return value


def _decode_dataclass(cls, body, path):
    if not isinstance(body, dict):
        raise DecodeError(f"{path}: expected object for {cls.__name__}")
    hints = _type_hints(cls)
    kwargs = {}
    known = {f.name for f in dataclasses.fields(cls)}
    for key in body:
        if key not in known:
            raise DecodeError(f"{path}.{key}: unknown field for {cls.__name__}")
    for f in dataclasses.fields(cls):
        if f.name in body:
            kwargs[f.name] = _decode_value(hints[f.name], body[f.name], f"{path}.{f.name}")
        elif f.default is not dataclasses.MISSING or f.default_factory is not dataclasses.MISSING:  # type: ignore[misc]
            continue
        else:
            raise DecodeError(f"{path}.{f.name}: missing required field")
    return cls(**kwargs)


def decode(envelope: dict):
    """Inverse of encode: decode(encode(r)) == r for every valid record."""
    if not isinstance(envelope, dict) or set(envelope) != {"kind", "body"}:
        raise DecodeError("envelope must be {kind, body}")
    kind = envelope["kind"]
    cls = RECORD_TYPES.get(kind)
    if cls is None:
        raise DecodeError(f"unknown record kind {kind!r}")
    return _decode_dataclass(cls, envelope["body"], kind)


def decode_json(line: str | bytes):
    try:
        envelope = json.loads(line)
    except json.JSONDecodeError as err:
        raise DecodeError(f"bad JSON: {err}") from None
    return decode(envelope)


class MemoryResolver:
    """Dict-backed Resolver for validating records outside a store."""

    def __init__(self, records=()):
        self._by_id: dict[tuple[str, str], object] = {}
        self._by_name_version: dict[tuple[str, str, str], object] = {}
        self._by_name: dict[tuple[str, str], object] = {}
        self._instances: dict[str, int] = {}
        for record in records:
            self.add(record)

    def add(self, record):
        kind, rid, name, version = record_identity(record)
        if rid:
            self._by_id[(kind, rid)] = record
        if name and version:
            self._by_name_version[(kind, name, version)] = record
        if name:
            self._by_name[(kind, name)] = record
        if kind == "DataInstance":
            key = str(record.dataset_id)
            self._instances[key] = self._instances.get(key, 0) + 1

    def lookup(self, kind, *, id=None, name=None, version=None):
        if id is not None:
            return self._by_id.get((kind, id))
        if name is not None and version is not None:
            return self._by_name_version.get((kind, name, version))
        if name is not None:
            return self._by_name.get((kind, name))
        return None

    def count_instances(self, dataset: DatasetRef) -> int:
        return self._instances.get(str(dataset), 0)
