"""Query AST nodes and the three-valued logic they evaluate under."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field


class TriBool(enum.Enum):
    """Kleene three-valued logic. UNKNOWN models missing metadata; a record
    is kept by a query only when its predicate is TRUE."""

    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @staticmethod
    def of(value: bool) -> "TriBool":
        return TriBool.TRUE if value else TriBool.FALSE

    def and_(self, other: "TriBool") -> "TriBool":
        if self is TriBool.FALSE or other is TriBool.FALSE:
            return TriBool.FALSE
        if self is TriBool.TRUE and other is TriBool.TRUE:
            return TriBool.TRUE
        return TriBool.UNKNOWN

    def or_(self, other: "TriBool") -> "TriBool":
        if self is TriBool.TRUE or other is TriBool.TRUE:
            return TriBool.TRUE
        if self is TriBool.FALSE and other is TriBool.FALSE:
            return TriBool.FALSE
        return TriBool.UNKNOWN

    def not_(self) -> "TriBool":
        if self is TriBool.UNKNOWN:
            return TriBool.UNKNOWN
        return TriBool.FALSE if self is TriBool.TRUE else TriBool.TRUE


TRUE = TriBool.TRUE
FALSE = TriBool.FALSE
UNKNOWN = TriBool.UNKNOWN


@dataclass
class Literal:
    value: str | float | int | bool


@dataclass
class Path:
    parts: tuple[str, ...]

    def dotted(self) -> str:
        return ".".join(self.parts)


@dataclass
class MetricCall:
    """metric(dataset=..., name=..., hardware=?, slice=?). Argument order is
    normalized at parse time so equal calls compare equal."""

    dataset: str | None = None
    name: str | None = None
    hardware: str | None = None
    slice: str | None = None
    extra_args: tuple[str, ...] = ()  # unknown kv names, rejected by analysis


@dataclass
class Comparison:
    op: str  # = != < <= > >=
    left: "Operand"
    right: "Operand"


@dataclass
class Membership:
    path: Path
    items: tuple[Literal, ...]


@dataclass
class Contains:
    path: Path
    item: Literal


@dataclass
class Quantifier:
    which: str  # "any" | "all"
    predicate: "Expr"


@dataclass
class Not:
    operand: "Expr"


@dataclass
class And:
    operands: tuple["Expr", ...]  # length >= 2, flattened chains


@dataclass
class Or:
    operands: tuple["Expr", ...]  # length >= 2, flattened chains


Operand = Literal | Path | MetricCall
Expr = Comparison | Membership | Contains | Quantifier | Not | And | Or


@dataclass
class QueryAst:
    target: str  # "models" | "datasets"
    predicate: Expr | None = None
    order_by: tuple[Operand, str] | None = None  # (key, "asc"|"desc")
    limit: int | None = None
