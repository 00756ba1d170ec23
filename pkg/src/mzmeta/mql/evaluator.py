"""Query evaluation over a store snapshot.

Missing metadata never raises: it propagates as UNKNOWN through Kleene logic
and a record is kept only when the whole predicate is TRUE. Collection-valued
paths (tags, trained_on.*, signature fields, labels) are evaluated
existentially: the comparison holds if it holds for some element, folding
per-element unknowns with OR.

metric(dataset=D, name=N, hardware=H?, slice=S?) resolves over the candidate
model's evaluation runs: runs on the latest version of dataset D, optionally
filtered to hardware H (profile name or device class), carrying a value for N
with slice S (unsliced when S is omitted). The most recent run by executed_at
wins, later insertion breaking ties. No matching run means UNKNOWN.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from ..metamodel import DatasetRef, format_timestamp, version_sort_key
from .analyzer import AnalyzedQuery
from .ast import (
    And, Comparison, Contains, Literal, Membership, MetricCall, Not, Or,
    Quantifier, TriBool, FALSE, TRUE, UNKNOWN,
)
from .parser import _operand_str


class _MissingType:
    def __repr__(self):
        return "MISSING"


MISSING = _MissingType()


@dataclass
class EvalContext:
    """Evaluation environment: a store snapshot plus the metric policy."""

    store: object
    metric_policy: str = "latest-run"


class StoreCaches:
    """Per-evaluation lookups, built lazily from one snapshot of the store."""

    def __init__(self, store):
        self.store = store
        self._runs_by_model = None
        self._hardware = None
        self._concept_labels = None
        self._latest_dataset_version: dict[str, str | None] = {}

    def runs_for(self, model_ref: str):
        if self._runs_by_model is None:
            self._runs_by_model = {}
            for idx, record in enumerate(self.store.entries()):
                if type(record).__name__ == "EvaluationRun":
                    self._runs_by_model.setdefault(str(record.model_id), []).append((idx, record))
        return self._runs_by_model.get(model_ref, [])

    def hardware(self, name: str):
        if self._hardware is None:
            self._hardware = {hw.name: hw for hw in self.store.scan("HardwareProfile")}
        return self._hardware.get(name)

    def concept_label(self, iri: str):
        if self._concept_labels is None:
            self._concept_labels = {c.iri: c.label for c in self.store.scan("SemanticConcept")}
        return self._concept_labels.get(iri)

    def latest_dataset_version(self, name: str):
        if name not in self._latest_dataset_version:
            versions = self.store.versions("DatasetRecord", name)
            self._latest_dataset_version[name] = versions[-1] if versions else None
        return self._latest_dataset_version[name]

    def dataset(self, ref: DatasetRef):
        return self.store.lookup("DatasetRecord", name=ref.name, version=ref.version)

    def instances_of(self, ref: DatasetRef):
        return list(self.store.scan("DataInstance", dataset_id=str(ref)))


def resolve_metric(caches: StoreCaches, model, call: MetricCall):
    """Metric value for a model per the resolution policy, or MISSING."""
    latest = caches.latest_dataset_version(call.dataset)
    if latest is None:
        return MISSING
    wanted_dataset = f"{call.dataset}@{latest}"
    best = None  # ((executed_at, idx), value)
    for idx, run in caches.runs_for(f"{model.name}@{model.version}"):
        if str(run.dataset_id) != wanted_dataset:
            continue
        if call.hardware is not None:
            profile = caches.hardware(run.hardware_id)
            device_class = profile.device_class if profile is not None else None
            if run.hardware_id != call.hardware and device_class != call.hardware:
                continue
        for mv in run.metrics:
            if mv.name == call.name and mv.slice == call.slice:
                rank = (run.executed_at, idx)
                if best is None or rank > best[0]:
                    best = (rank, mv.value)
    return MISSING if best is None else best[1]


class _Evaluator:
    def __init__(self, analyzed: AnalyzedQuery, ctx: EvalContext):
        self.analyzed = analyzed
        self.ctx = ctx
        self.caches = StoreCaches(ctx.store)

    # -- path resolution ----------------------------------------------------

    def resolve_path(self, record, context: str, parts: tuple[str, ...]):
        """Scalar value, MISSING, or a list of elements for collections."""
        if context == "models":
            return self._resolve_model_path(record, parts)
        if context == "datasets":
            return self._resolve_dataset_path(record, parts)
        return self._resolve_instance_path(record, parts)

    def _scalar(self, value):
        return MISSING if value is None else value

    def _resolve_model_path(self, model, parts):
        head = parts[0]
        if head == "created_at":
            return format_timestamp(model.created_at)
        if head in ("architecture", "source"):
            return self._scalar(getattr(getattr(model, head), parts[1]))
        if head == "tags":
            return sorted(model.tags)
        if head in ("input_signature", "output_signature", "hyperparameters", "transformations"):
            items = getattr(model, head)
            return [self._scalar(getattr(item, parts[1])) for item in items]
        if head == "trained_on":
            return self._resolve_trained_on(model, parts[1])
        return self._scalar(getattr(model, head))

    def _resolve_trained_on(self, model, field: str):
        out = []
        for ref in model.trained_on:
            if field == "name":
                out.append(ref.name)
            elif field == "version":
                out.append(ref.version)
            else:
                dataset = self.caches.dataset(ref)
                if dataset is None:
                    out.append(MISSING)
                elif field == "source":
                    out.extend(dataset.source)
                else:
                    out.append(self._scalar(getattr(dataset, field)))
        return out

    def _resolve_dataset_path(self, dataset, parts):
        head = parts[0]
        if head == "provenance":
            return self._scalar(getattr(dataset.provenance, parts[1]))
        if head == "source":
            return list(dataset.source)
        return self._scalar(getattr(dataset, head))

    def _resolve_instance_path(self, instance, parts):
        head = parts[0]
        if head == "labels":
            out = []
            for ref in instance.labels:
                out.append(ref)
                label = self.caches.concept_label(ref)
                if label is not None and label != ref:
                    out.append(label)
            return out
        return self._scalar(getattr(instance, head))

    def resolve_operand(self, record, context, operand) -> list:
        """Normalize any operand to a list of scalars/MISSING for existential
        comparison. Scalars become one-element lists."""
        if isinstance(operand, Literal):
            return [operand.value]
        if isinstance(operand, MetricCall):
            return [resolve_metric(self.caches, record, operand)]
        value = self.resolve_path(record, context, operand.parts)
        if isinstance(value, list):
            return value
        return [value]

    # -- predicate evaluation -------------------------------------------------

    def eval_expr(self, record, context, expr) -> TriBool:
        if isinstance(expr, And):
            result = TRUE
            for term in expr.operands:
                result = result.and_(self.eval_expr(record, context, term))
            return result
        if isinstance(expr, Or):
            result = FALSE
            for term in expr.operands:
                result = result.or_(self.eval_expr(record, context, term))
            return result
        if isinstance(expr, Not):
            return self.eval_expr(record, context, expr.operand).not_()
        if isinstance(expr, Comparison):
            left = self.resolve_operand(record, context, expr.left)
            right = self.resolve_operand(record, context, expr.right)
            result = FALSE
            for lv in left:
                for rv in right:
                    result = result.or_(_compare(expr.op, lv, rv))
            return result
        if isinstance(expr, Membership):
            values = self.resolve_operand(record, context, expr.path)
            result = FALSE
            for v in values:
                if v is MISSING:
                    result = result.or_(UNKNOWN)
                else:
                    result = result.or_(TriBool.of(any(v == item.value for item in expr.items)))
            return result
        if isinstance(expr, Contains):
            elements = self.resolve_operand(record, context, expr.path)
            result = FALSE
            for v in elements:
                if v is MISSING:
                    result = result.or_(UNKNOWN)
                else:
                    result = result.or_(TriBool.of(v == expr.item.value))
            return result
        if isinstance(expr, Quantifier):
            return self.eval_quantifier(record, context, expr)
        raise TypeError(f"unsupported expression {expr!r}")

    def eval_quantifier(self, record, context, quant: Quantifier) -> TriBool:
        if context == "datasets":
            refs = [DatasetRef(record.name, record.version)]
        else:  # models: quantify over instances of the trained-on datasets
            refs = list(record.trained_on)
        instances = []
        for ref in refs:
            instances.extend(self.caches.instances_of(ref))
        if quant.which == "all":
            result = TRUE
            for inst in instances:
                result = result.and_(self.eval_expr(inst, "instances", quant.predicate))
            return result
        result = FALSE
        for inst in instances:
            result = result.or_(self.eval_expr(inst, "instances", quant.predicate))
        return result

    # -- driver ----------------------------------------------------------------

    def run(self) -> list:
        ast = self.analyzed.ast
        candidates = list(self.ctx.store.scan(self.analyzed.target_kind, **self.analyzed.index_filter))
        if ast.predicate is None:
            kept = candidates
        else:
            kept = [
                rec for rec in candidates
                if self.eval_expr(rec, ast.target, ast.predicate) is TRUE
            ]
        if ast.order_by is not None:
            kept = self._order(kept, *ast.order_by)
        if ast.limit is not None:
            kept = kept[: ast.limit]
        return kept

    def _order(self, records, key_operand, direction):
        def tie(rec):
            return (rec.name, version_sort_key(rec.version))

        keyed, unknown = [], []
        for rec in records:
            values = self.resolve_operand(rec, self.analyzed.ast.target, key_operand)
            value = values[0] if values else MISSING
            (unknown if value is MISSING else keyed).append((value, rec))
        keyed.sort(key=lambda pair: tie(pair[1]))
        keyed.sort(key=lambda pair: pair[0], reverse=(direction == "desc"))
        unknown.sort(key=lambda pair: tie(pair[1]))
        return [rec for _, rec in keyed] + [rec for _, rec in unknown]


def _compare(op, lv, rv) -> TriBool:
    if lv is MISSING or rv is MISSING:
        return UNKNOWN
    if op == "=":
        return TriBool.of(lv == rv)
    if op == "!=":
        return TriBool.of(lv != rv)
    if op == "<":
        return TriBool.of(lv < rv)
    if op == "<=":
        return TriBool.of(lv <= rv)
    if op == ">":
        return TriBool.of(lv > rv)
    return TriBool.of(lv >= rv)


def evaluate(analyzed: AnalyzedQuery, ctx: EvalContext) -> list:
    """Ordered result records for an analyzed query. Total: bad or missing
    metadata excludes records (UNKNOWN), it never raises."""
    return _Evaluator(analyzed, ctx).run()


class PredicateEvaluator:
    """One analyzed predicate expression, evaluated record by record (the
    composer uses this for per-node candidate filters). Analysis happens at
    construction, so bad filters fail before any matching."""

    def __init__(self, target: str, expr, ctx: EvalContext):
        from .analyzer import analyze
        from .ast import QueryAst

        self.target = target
        self.expr = expr
        analyzed = analyze(QueryAst(target=target, predicate=expr))
        self._evaluator = _Evaluator(analyzed, ctx)

    def matches(self, record) -> TriBool:
        return self._evaluator.eval_expr(record, self.target, self.expr)


@dataclass
class QueryResult:
    records: list
    elapsed_ms: float
    plan: str


def run_query(text: str, ctx: EvalContext) -> QueryResult:
    """Parse, analyze, and evaluate in one step (the service/CLI entry)."""
    started = time.monotonic()
    analyzed = analyze_text(text)
    records = evaluate(analyzed, ctx)
    elapsed_ms = (time.monotonic() - started) * 1000.0
    return QueryResult(records=records, elapsed_ms=elapsed_ms, plan=explain(analyzed))


def analyze_text(text: str) -> AnalyzedQuery:
    from .analyzer import analyze
    from .parser import parse

    return analyze(parse(text))


def explain(analyzed: AnalyzedQuery) -> str:
    """Deterministic, human-readable evaluation plan."""
    ast = analyzed.ast
    lines = [f"target: {ast.target.upper()}"]
    if analyzed.index_filter:
        rendered = ", ".join(f'{k} = "{v}"' for k, v in sorted(analyzed.index_filter.items()))
        lines.append(f"scan: {analyzed.target_kind} via index {rendered}")
    else:
        lines.append(f"scan: {analyzed.target_kind} full scan")
    if ast.predicate is not None:
        lines.append(f"where: {_predicate_text(ast)}")
    for call in analyzed.metric_calls:
        lines.append(
            f"metric: {_operand_str(call)} -> latest run on the latest version of "
            f"dataset \"{call.dataset}\""
            + (f", hardware \"{call.hardware}\" (name or device class)" if call.hardware else "")
            + (f", slice \"{call.slice}\"" if call.slice else ", unsliced")
        )
    if ast.order_by is not None:
        key, direction = ast.order_by
        lines.append(
            f"order by: {_operand_str(key)} {direction.upper()}, unknown keys last, "
            "ties by (name, version)"
        )
    if ast.limit is not None:
        lines.append(f"limit: {ast.limit}")
    return "\n".join(lines)


def _predicate_text(ast) -> str:
    from .parser import _expr_str

    return _expr_str(ast.predicate)
