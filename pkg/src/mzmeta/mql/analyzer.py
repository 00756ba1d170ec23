"""Semantic analysis: bind paths to catalog fields, type-check comparisons,
and validate metric() calls before any evaluation happens. Unknown paths and
argument names are analysis errors, never a runtime UNKNOWN."""

from __future__ import annotations

from dataclasses import dataclass, field

from .ast import (
    And, Comparison, Contains, Literal, Membership, MetricCall, Not, Or, Path,
    Quantifier, QueryAst,
)
from .lexer import MqlAnalysisError
from .schema import CATALOGS, INDEXED_EQ_PATHS, TARGET_KINDS, FieldType

_ORDERING_OPS = ("<", "<=", ">", ">=")


@dataclass
class AnalyzedQuery:
    ast: QueryAst
    target_kind: str  # "ModelRecord" | "DatasetRecord"
    index_filter: dict[str, str] = field(default_factory=dict)  # scan() kwargs
    metric_calls: list[MetricCall] = field(default_factory=list)


def _literal_type(lit: Literal) -> FieldType:
    if isinstance(lit.value, bool):
        return FieldType("bool")
    if isinstance(lit.value, (int, float)):
        return FieldType("number")
    return FieldType("string")


class _Analyzer:
    def __init__(self, ast: QueryAst):
        self.ast = ast
        self.metric_calls: list[MetricCall] = []

    def fail(self, message: str, path: str | None = None):
        raise MqlAnalysisError(message, path=path)

    def path_type(self, path: Path, context: str) -> FieldType:
        catalog = CATALOGS[context]
        ftype = catalog.get(path.parts)
        if ftype is None:
            self.fail(f"unknown field path {path.dotted()!r} for {context.upper()}", path=path.dotted())
        return ftype

    def operand_type(self, operand, context: str) -> FieldType:
        if isinstance(operand, Literal):
            return _literal_type(operand)
        if isinstance(operand, Path):
            return self.path_type(operand, context)
        if isinstance(operand, MetricCall):
            self.check_metric(operand, context)
            return FieldType("number")
        self.fail(f"unsupported operand {operand!r}")

    def check_metric(self, call: MetricCall, context: str):
        if self.ast.target != "models" or context != "models":
            self.fail("metric() is only valid in MODELS queries", path="metric")
        if call.extra_args:
            self.fail(
                f"unknown metric() argument {call.extra_args[0]!r} "
                "(expected dataset, name, hardware, slice)",
                path=f"metric.{call.extra_args[0]}",
            )
        if call.dataset is None:
            self.fail("metric() requires a dataset argument", path="metric.dataset")
        if call.name is None:
            self.fail("metric() requires a name argument", path="metric.name")
        self.metric_calls.append(call)

    def check_expr(self, expr, context: str):
        if isinstance(expr, (And, Or)):
            for term in expr.operands:
                self.check_expr(term, context)
        elif isinstance(expr, Not):
            self.check_expr(expr.operand, context)
        elif isinstance(expr, Comparison):
            lt = self.operand_type(expr.left, context)
            rt = self.operand_type(expr.right, context)
            if lt.base != rt.base:
                self.fail(
                    f"type mismatch: cannot compare {lt.base} with {rt.base}",
                    path=self._comparison_path(expr),
                )
            if expr.op in _ORDERING_OPS and lt.base == "bool":
                self.fail("ordering comparison on boolean", path=self._comparison_path(expr))
        elif isinstance(expr, Membership):
            ftype = self.path_type(expr.path, context)
            for item in expr.items:
                if _literal_type(item).base != ftype.base:
                    self.fail(
                        f"IN list item {item.value!r} does not match {ftype.base} field "
                        f"{expr.path.dotted()!r}",
                        path=expr.path.dotted(),
                    )
        elif isinstance(expr, Contains):
            ftype = self.path_type(expr.path, context)
            if not ftype.collection:
                self.fail(
                    f"CONTAINS requires a collection field, {expr.path.dotted()!r} is scalar",
                    path=expr.path.dotted(),
                )
            if _literal_type(expr.item).base != ftype.base:
                self.fail(
                    f"CONTAINS literal {expr.item.value!r} does not match element type",
                    path=expr.path.dotted(),
                )
        elif isinstance(expr, Quantifier):
            if context == "instances":
                self.fail("quantifiers cannot be nested", path="instances")
            self.check_expr(expr.predicate, "instances")
        else:
            self.fail(f"unsupported expression node {type(expr).__name__}")

    def _comparison_path(self, cmp: Comparison) -> str:
        for side in (cmp.left, cmp.right):
            if isinstance(side, Path):
                return side.dotted()
        return cmp.op

    def run(self) -> AnalyzedQuery:
        target = self.ast.target
        if self.ast.predicate is not None:
            self.check_expr(self.ast.predicate, target)
        if self.ast.order_by is not None:
            key, _ = self.ast.order_by
            ktype = self.operand_type(key, target)
            if ktype.collection:
                self.fail(
                    f"cannot order by collection field {key.dotted()!r}",
                    path=key.dotted(),
                )
            if ktype.base == "bool":
                self.fail("cannot order by a boolean key")
        return AnalyzedQuery(
            ast=self.ast,
            target_kind=TARGET_KINDS[target],
            index_filter=_index_filter(self.ast),
            metric_calls=self.metric_calls,
        )


def _index_filter(ast: QueryAst) -> dict[str, str]:
    """Equality conjuncts on indexed fields at the top of the predicate can be
    pushed into the store scan. They never change the result set (the full
    predicate is still applied per record)."""
    indexed = INDEXED_EQ_PATHS[ast.target]
    conjuncts: list = []
    if isinstance(ast.predicate, And):
        conjuncts = list(ast.predicate.operands)
    elif ast.predicate is not None:
        conjuncts = [ast.predicate]
    out: dict[str, str] = {}
    for term in conjuncts:
        if not isinstance(term, Comparison) or term.op != "=":
            continue
        sides = [(term.left, term.right), (term.right, term.left)]
        for path_side, lit_side in sides:
            if (
                isinstance(path_side, Path)
                and isinstance(lit_side, Literal)
                and isinstance(lit_side.value, str)
                and path_side.parts in indexed
            ):
                out.setdefault(indexed[path_side.parts], lit_side.value)
    return out


def analyze(ast: QueryAst) -> AnalyzedQuery:
    """Type-check a parsed query against the meta-model field catalog."""
    return _Analyzer(ast).run()
