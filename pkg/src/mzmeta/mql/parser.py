"""Recursive-descent parser for MQL.

Grammar:

    query      := FIND target [WHERE expr] [ORDER BY key (ASC|DESC)?] [LIMIT int]
    target     := MODELS | DATASETS
    expr       := and_chain (OR and_chain)*
    and_chain  := unary (AND unary)*
    unary      := NOT unary | atom
    atom       := '(' expr ')'
                | (ANY|ALL) '(' INSTANCES ',' expr ')'
                | operand (cmp operand | IN '(' literal (',' literal)* ')' | CONTAINS literal)
    operand    := literal | METRIC '(' kv-args ')' | path
    path       := IDENT ('.' IDENT)*
    cmp        := '=' | '!=' | '<' | '<=' | '>' | '>='

Precedence NOT > AND > OR; comparison is non-associative. AND/OR chains are
flattened into n-ary nodes, so `pretty_print` then `parse` reproduces the
same tree.
"""

from __future__ import annotations

from .ast import (
    And, Comparison, Contains, Literal, Membership, MetricCall, Not, Operand, Or,
    Path, Quantifier, QueryAst,
)
from .lexer import MqlSyntaxError, Token, tokenize

_CMP_OPS = ("=", "!=", "<", "<=", ">", ">=")
_METRIC_ARGS = ("dataset", "name", "hardware", "slice")


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def at_keyword(self, *names: str) -> bool:
        tok = self.peek()
        return tok.kind == "KEYWORD" and tok.value in names

    def accept_keyword(self, *names: str) -> Token | None:
        if self.at_keyword(*names):
            return self.next()
        return None

    def expect_keyword(self, *names: str) -> Token:
        tok = self.accept_keyword(*names)
        if tok is None:
            self.fail(list(names))
        return tok

    def expect(self, kind: str) -> Token:
        if self.peek().kind == kind:
            return self.next()
        self.fail([kind])

    def fail(self, expected: list[str]):
        tok = self.peek()
        got = tok.value if tok.kind in ("KEYWORD", "IDENT") else tok.kind
        raise MqlSyntaxError(
            f"unexpected {got!r}, expected one of {sorted(expected)}",
            tok.line, tok.column, expected=sorted(expected),
        )

    # -- grammar ------------------------------------------------------------

    def query(self) -> QueryAst:
        self.expect_keyword("FIND")
        target_tok = self.expect_keyword("MODELS", "DATASETS")
        target = "models" if target_tok.value == "MODELS" else "datasets"
        predicate = None
        if self.accept_keyword("WHERE"):
            predicate = self.expr()
        order_by = None
        if self.accept_keyword("ORDER"):
            self.expect_keyword("BY")
            key = self.operand()
            direction = "asc"
            tok = self.accept_keyword("ASC", "DESC")
            if tok is not None:
                direction = tok.value.lower()
            order_by = (key, direction)
        limit = None
        if self.accept_keyword("LIMIT"):
            tok = self.expect("NUMBER")
            if not isinstance(tok.value, int) or tok.value < 1:
                raise MqlSyntaxError("LIMIT must be a positive integer", tok.line, tok.column)
            limit = tok.value
        if self.peek().kind != "EOF":
            self.fail(["EOF"])
        return QueryAst(target=target, predicate=predicate, order_by=order_by, limit=limit)

    def expr(self):
        terms = [self.and_chain()]
        while self.accept_keyword("OR"):
            terms.append(self.and_chain())
        return terms[0] if len(terms) == 1 else Or(tuple(terms))

    def and_chain(self):
        terms = [self.unary()]
        while self.accept_keyword("AND"):
            terms.append(self.unary())
        return terms[0] if len(terms) == 1 else And(tuple(terms))

    def unary(self):
        if self.accept_keyword("NOT"):
            return Not(self.unary())
        return self.atom()

    def atom(self):
        if self.peek().kind == "(":
            self.next()
            inner = self.expr()
            self.expect(")")
            return inner
        quant = self.accept_keyword("ANY", "ALL")
        if quant is not None:
            self.expect("(")
            self.expect_keyword("INSTANCES")
            self.expect(",")
            inner = self.expr()
            self.expect(")")
            return Quantifier(which=quant.value.lower(), predicate=inner)
        left = self.operand()
        tok = self.peek()
        if tok.kind in _CMP_OPS:
            op = self.next().kind
            right = self.operand()
            follow = self.peek()
            if follow.kind in _CMP_OPS:
                raise MqlSyntaxError(
                    "comparison is non-associative", follow.line, follow.column,
                )
            return Comparison(op=op, left=left, right=right)
        if self.at_keyword("IN"):
            if not isinstance(left, Path):
                self.fail(["path before IN"])
            self.next()
            self.expect("(")
            items = [self.literal()]
            while self.peek().kind == ",":
                self.next()
                items.append(self.literal())
            self.expect(")")
            return Membership(path=left, items=tuple(items))
        if self.at_keyword("CONTAINS"):
            if not isinstance(left, Path):
                self.fail(["path before CONTAINS"])
            self.next()
            return Contains(path=left, item=self.literal())
        self.fail(list(_CMP_OPS) + ["IN", "CONTAINS"])

    def operand(self) -> Operand:
        tok = self.peek()
        if tok.kind in ("STRING", "NUMBER") or self.at_keyword("TRUE", "FALSE"):
            return self.literal()
        if self.at_keyword("METRIC"):
            return self.metric_call()
        if tok.kind == "IDENT":
            return self.path()
        self.fail(["STRING", "NUMBER", "TRUE", "FALSE", "METRIC", "path"])

    def literal(self) -> Literal:
        tok = self.peek()
        if tok.kind in ("STRING", "NUMBER"):
            self.next()
            return Literal(tok.value)
        kw = self.accept_keyword("TRUE", "FALSE")
        if kw is not None:
            return Literal(kw.value == "TRUE")
        self.fail(["STRING", "NUMBER", "TRUE", "FALSE"])

    def path(self) -> Path:
        parts = [self.expect("IDENT").value]
        while self.peek().kind == ".":
            self.next()
            parts.append(self.expect("IDENT").value)
        return Path(parts=tuple(parts))

    def metric_call(self) -> MetricCall:
        self.expect_keyword("METRIC")
        self.expect("(")
        known: dict[str, str] = {}
        extra: list[str] = []
        while True:
            name_tok = self.expect("IDENT")
            self.expect("=")
            value = self.expect("STRING")
            if name_tok.value in known or name_tok.value in extra:
                raise MqlSyntaxError(
                    f"duplicate metric() argument {name_tok.value!r}",
                    name_tok.line, name_tok.column,
                )
            if name_tok.value in _METRIC_ARGS:
                known[name_tok.value] = value.value
            else:
                extra.append(name_tok.value)
            if self.peek().kind == ",":
                self.next()
                continue
            break
        self.expect(")")
        return MetricCall(
            dataset=known.get("dataset"), name=known.get("name"),
            hardware=known.get("hardware"), slice=known.get("slice"),
            extra_args=tuple(extra),
        )


def parse(text_or_tokens) -> QueryAst:
    """Parse query text (or a token list) into a QueryAst."""
    tokens = tokenize(text_or_tokens) if isinstance(text_or_tokens, str) else text_or_tokens
    return _Parser(tokens).query()


def parse_predicate(text: str):
    """Parse a bare predicate expression (used for composer node filters)."""
    parser = _Parser(tokenize(text))
    expr = parser.expr()
    if parser.peek().kind != "EOF":
        parser.fail(["EOF"])
    return expr


# ---------------------------------------------------------------------------
# pretty printing; parse(pretty_print(q)) reproduces q exactly

def _escape(text: str) -> str:
    out = text.replace("\\", "\\\\").replace('"', '\\"')
    return out.replace("\n", "\\n").replace("\t", "\\t").replace("\r", "\\r")


def _literal_str(lit: Literal) -> str:
    v = lit.value
    if isinstance(v, bool):
        return "TRUE" if v else "FALSE"
    if isinstance(v, str):
        return f'"{_escape(v)}"'
    return repr(v)


def _operand_str(op: Operand) -> str:
    if isinstance(op, Literal):
        return _literal_str(op)
    if isinstance(op, Path):
        return op.dotted()
    if isinstance(op, MetricCall):
        args = [(k, getattr(op, k)) for k in _METRIC_ARGS if getattr(op, k) is not None]
        args += [(k, "") for k in op.extra_args]
        rendered = ", ".join(f'{k}="{_escape(v)}"' for k, v in args)
        return f"metric({rendered})"
    raise TypeError(f"not an operand: {op!r}")


def _expr_str(expr) -> str:
    if isinstance(expr, Comparison):
        return f"{_operand_str(expr.left)} {expr.op} {_operand_str(expr.right)}"
    if isinstance(expr, Membership):
        items = ", ".join(_literal_str(i) for i in expr.items)
        return f"{expr.path.dotted()} IN ({items})"
    if isinstance(expr, Contains):
        return f"{expr.path.dotted()} CONTAINS {_literal_str(expr.item)}"
    if isinstance(expr, Quantifier):
        return f"{expr.which.upper()}(INSTANCES, {_expr_str(expr.predicate)})"
    if isinstance(expr, Not):
        inner = _expr_str(expr.operand)
        if isinstance(expr.operand, (And, Or)):
            inner = f"({inner})"
        return f"NOT {inner}"
    if isinstance(expr, And):
        parts = [
            f"({_expr_str(t)})" if isinstance(t, (And, Or)) else _expr_str(t)
            for t in expr.operands
        ]
        return " AND ".join(parts)
    if isinstance(expr, Or):
        parts = [
            f"({_expr_str(t)})" if isinstance(t, Or) else _expr_str(t)
            for t in expr.operands
        ]
        return " OR ".join(parts)
    raise TypeError(f"not an expression: {expr!r}")


def pretty_print(query: QueryAst) -> str:
    """Canonical text for a query; round-trips through parse()."""
    out = ["FIND", "MODELS" if query.target == "models" else "DATASETS"]
    if query.predicate is not None:
        out += ["WHERE", _expr_str(query.predicate)]
    if query.order_by is not None:
        key, direction = query.order_by
        out += ["ORDER BY", _operand_str(key), direction.upper()]
    if query.limit is not None:
        out += ["LIMIT", str(query.limit)]
    return " ".join(out)
