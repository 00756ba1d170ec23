"""Queryable field catalog: which dotted paths exist per query target, their
base type, and whether they are collections (evaluated existentially)."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class FieldType:
    base: str  # "string" | "number" | "bool"
    collection: bool = False


_S = FieldType("string")
_N = FieldType("number")
_B = FieldType("bool")
_SC = FieldType("string", collection=True)
_NC = FieldType("number", collection=True)
_BC = FieldType("bool", collection=True)

# Dataset fields reachable both directly (DATASETS target) and through a
# model's trained_on references.
_DATASET_FIELDS: dict[tuple[str, ...], FieldType] = {
    ("id",): _S,
    ("name",): _S,
    ("version",): _S,
    ("source",): _SC,
    ("collection_method",): _S,
    ("annotator_count",): _N,
    ("license",): _S,
    ("contains_sensitive_data",): _B,
    ("modality",): _S,
    ("instance_count",): _N,
    ("provenance", "origin"): _S,
    ("provenance", "source_name"): _S,
    ("provenance", "source_url"): _S,
}

MODEL_FIELDS: dict[tuple[str, ...], FieldType] = {
    ("id",): _S,
    ("name",): _S,
    ("version",): _S,
    ("task",): _S,
    ("created_at",): _S,  # RFC 3339 text; lexicographic order is time order
    ("tags",): _SC,
    ("architecture", "family"): _S,
    ("architecture", "parameter_count"): _N,
    ("architecture", "description"): _S,
    ("source", "origin"): _S,
    ("source", "source_name"): _S,
    ("source", "source_url"): _S,
    ("input_signature", "name"): _SC,
    ("input_signature", "dtype"): _SC,
    ("input_signature", "semantic_type"): _SC,
    ("output_signature", "name"): _SC,
    ("output_signature", "dtype"): _SC,
    ("output_signature", "semantic_type"): _SC,
    ("hyperparameters", "name"): _SC,
    ("transformations", "name"): _SC,
}
# trained_on dereferences a dataset, so its subfields are the dataset's,
# lifted to collections (a model may train on many datasets).
for _path, _ft in _DATASET_FIELDS.items():
    if _path[0] == "provenance":
        continue
    MODEL_FIELDS[("trained_on",) + _path] = FieldType(_ft.base, collection=True)

DATASET_FIELDS = dict(_DATASET_FIELDS)

INSTANCE_FIELDS: dict[tuple[str, ...], FieldType] = {
    ("id",): _S,
    ("locator",): _S,
    ("split",): _S,
    ("sensitive",): _B,
    ("labels",): _SC,  # concept references; both iri and resolved label match
}

CATALOGS = {
    "models": MODEL_FIELDS,
    "datasets": DATASET_FIELDS,
    "instances": INSTANCE_FIELDS,
}

TARGET_KINDS = {"models": "ModelRecord", "datasets": "DatasetRecord"}

# scan() filters the evaluator may push down, per target
INDEXED_EQ_PATHS = {
    "models": {("task",): "task", ("name",): "name"},
    "datasets": {("name",): "name"},
}
