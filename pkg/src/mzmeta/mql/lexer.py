"""Tokenizer for MQL query text."""

from __future__ import annotations

from dataclasses import dataclass

KEYWORDS = frozenset({
    "FIND", "MODELS", "DATASETS", "WHERE", "ORDER", "BY", "ASC", "DESC", "LIMIT",
    "AND", "OR", "NOT", "ANY", "ALL", "INSTANCES", "IN", "CONTAINS", "METRIC",
    "TRUE", "FALSE",
})

_OPERATORS = ("!=", "<=", ">=", "=", "<", ">", "(", ")", ",", ".")

_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t", "r": "\r"}


class MqlError(Exception):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"{message} at {line}:{column}")


class MqlSyntaxError(MqlError):
    def __init__(self, message, line, column, expected: list[str] | None = None):
        self.expected = expected or []
        super().__init__(message, line, column)


class MqlAnalysisError(MqlError):
    def __init__(self, message, line=0, column=0, path: str | None = None):
        self.path = path
        super().__init__(message, line, column)


@dataclass
class Token:
    kind: str  # "KEYWORD" | "IDENT" | "STRING" | "NUMBER" | operator symbol | "EOF"
    value: object
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    """Tokens with 1-based source positions. Keywords are case-insensitive;
    strings are double-quoted with backslash escapes; a trailing '%' on a
    number divides it by 100 (so `90%` means 0.9)."""
    tokens: list[Token] = []
    i = 0
    line, col = 1, 1

    def advance(n=1):
        nonlocal i, line, col
        for _ in range(n):
            if i < len(text) and text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < len(text):
        ch = text[i]
        if ch in " \t\r\n":
            advance()
            continue
        start_line, start_col = line, col
        if ch == '"':
            advance()
            parts: list[str] = []
            while True:
                if i >= len(text):
                    raise MqlSyntaxError("unterminated string", start_line, start_col)
                c = text[i]
                if c == '"':
                    advance()
                    break
                if c == "\\":
                    advance()
                    if i >= len(text):
                        raise MqlSyntaxError("unterminated string", start_line, start_col)
                    esc = text[i]
                    if esc not in _ESCAPES:
                        raise MqlSyntaxError(f"bad escape \\{esc}", line, col - 1)
                    parts.append(_ESCAPES[esc])
                    advance()
                else:
                    parts.append(c)
                    advance()
            tokens.append(Token("STRING", "".join(parts), start_line, start_col))
            continue
        if ch.isdigit() or (ch == "-" and i + 1 < len(text) and text[i + 1].isdigit()):
            j = i + (1 if ch == "-" else 0)
            while j < len(text) and text[j].isdigit():
                j += 1
            is_float = False
            if j < len(text) and text[j] == "." and j + 1 < len(text) and text[j + 1].isdigit():
                is_float = True
                j += 1
                while j < len(text) and text[j].isdigit():
                    j += 1
            raw = text[i:j]
            value: object = float(raw) if is_float else int(raw)
            if j < len(text) and text[j] == "%":
                value = float(value) / 100.0
                j += 1
            advance(j - i)
            tokens.append(Token("NUMBER", value, start_line, start_col))
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            advance(j - i)
            upper = word.upper()
            if upper in KEYWORDS:
                tokens.append(Token("KEYWORD", upper, start_line, start_col))
            else:
                tokens.append(Token("IDENT", word, start_line, start_col))
            continue
        for op in _OPERATORS:
            if text.startswith(op, i):
                advance(len(op))
                tokens.append(Token(op, op, start_line, start_col))
                break
        else:
            raise MqlSyntaxError(f"illegal character {ch!r}", start_line, start_col)
    tokens.append(Token("EOF", None, line, col))
    return tokens
