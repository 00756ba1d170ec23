from __future__ import annotations

import random

import pytest

from mzmeta import mql
from mzmeta.mql import (
    And, CANNED_QUERIES, Comparison, Contains, Literal, Membership, MetricCall,
    MqlSyntaxError, Not, Or, Path, Quantifier, QueryAst,
)

from generators import random_query


class TestTokenize:
    def test_find_models(self):
        tokens = mql.tokenize("FIND MODELS")
        assert [(t.kind, t.value) for t in tokens] == [
            ("KEYWORD", "FIND"), ("KEYWORD", "MODELS"), ("EOF", None),
        ]

    def test_metric_call_is_twelve_tokens_ending_in_number(self):
        tokens = mql.tokenize('metric(dataset="ImageNet", name="accuracy") > 0.90')
        real = tokens[:-1]
        assert len(real) == 12
        assert real[-1].kind == "NUMBER" and real[-1].value == pytest.approx(0.9)
        assert [t.kind for t in real] == [
            "KEYWORD", "(", "IDENT", "=", "STRING", ",", "IDENT", "=", "STRING",
            ")", ">", "NUMBER",
        ]

    def test_unterminated_string_error_position(self):
        with pytest.raises(MqlSyntaxError) as err:
            mql.tokenize('"unclosed')
        assert (err.value.line, err.value.column) == (1, 1)

    def test_illegal_character_position(self):
        with pytest.raises(MqlSyntaxError) as err:
            mql.tokenize("FIND MODELS\nWHERE task ; x")
        assert (err.value.line, err.value.column) == (2, 12)

    def test_keywords_case_insensitive(self):
        tokens = mql.tokenize("find Models wHeRe")
        assert [t.value for t in tokens[:-1]] == ["FIND", "MODELS", "WHERE"]

    def test_percent_literal_normalized(self):
        (tok, _) = mql.tokenize("90%")
        assert tok.value == pytest.approx(0.9)

    def test_escapes(self):
        (tok, _) = mql.tokenize(r'"a\"b\\c\nd"')
        assert tok.value == 'a"b\\c\nd'

    def test_numbers(self):
        values = [t.value for t in mql.tokenize("42 0.5 -3 -0.25 7%")[:-1]]
        assert values == [42, 0.5, -3, -0.25, pytest.approx(0.07)]


class TestParse:
    def test_query3_structure(self):
        ast = mql.parse(CANNED_QUERIES["q3_imagenet_accuracy"])
        assert ast.target == "models"
        assert isinstance(ast.predicate, And)
        first, second = ast.predicate.operands
        assert first == Comparison("=", Path(("trained_on", "name")), Literal("ImageNet"))
        assert second == Comparison(
            ">", MetricCall(dataset="ImageNet", name="accuracy"), Literal(0.9),
        )

    def test_query1_parses_with_and_root(self):
        ast = mql.parse(CANNED_QUERIES["q1_crowdsourced_training_data"])
        assert isinstance(ast.predicate, And)
        assert len(ast.predicate.operands) == 3

    def test_query2_quantifier(self):
        ast = mql.parse(CANNED_QUERIES["q2_dog_datasets"])
        membership, quantifier = ast.predicate.operands
        assert membership == Membership(Path(("source",)), (Literal("COCO"), Literal("OpenImage")))
        assert quantifier == Quantifier("all", Contains(Path(("labels",)), Literal("dog")))

    def test_order_by_and_limit(self):
        ast = mql.parse(CANNED_QUERIES["q4_best_person_detector"])
        key, direction = ast.order_by
        assert isinstance(key, MetricCall) and direction == "desc"
        assert ast.limit == 1

    def test_metric_arguments_any_order(self):
        a = mql.parse('FIND MODELS WHERE metric(dataset="D", name="accuracy") > 0.5')
        b = mql.parse('FIND MODELS WHERE metric(name="accuracy", dataset="D") > 0.5')
        assert a == b

    def test_dangling_boolean_operator_errors_with_expected_set(self):
        with pytest.raises(MqlSyntaxError) as err:
            mql.parse("FIND MODELS WHERE AND")
        assert "expected" in str(err.value)
        assert set(err.value.expected) >= {"STRING", "NUMBER", "METRIC", "path"}

    def test_comparison_is_non_associative(self):
        with pytest.raises(MqlSyntaxError) as err:
            mql.parse('FIND MODELS WHERE name = "a" = "b"')
        assert "non-associative" in str(err.value)

    def test_limit_must_be_positive_integer(self):
        with pytest.raises(MqlSyntaxError):
            mql.parse("FIND MODELS LIMIT 0")
        with pytest.raises(MqlSyntaxError):
            mql.parse("FIND MODELS LIMIT 2.5")

    def test_trailing_garbage_rejected(self):
        with pytest.raises(MqlSyntaxError):
            mql.parse('FIND MODELS WHERE name = "a" name')

    def test_duplicate_metric_argument_rejected(self):
        with pytest.raises(MqlSyntaxError) as err:
            mql.parse('FIND MODELS WHERE metric(dataset="a", dataset="b", name="x") > 1')
        assert "duplicate" in str(err.value)

    def test_not_precedence_tighter_than_and(self):
        ast = mql.parse('FIND MODELS WHERE NOT task = "a" AND name = "b"')
        assert isinstance(ast.predicate, And)
        assert isinstance(ast.predicate.operands[0], Not)

    def test_and_binds_tighter_than_or(self):
        ast = mql.parse('FIND MODELS WHERE task = "a" OR task = "b" AND name = "c"')
        assert isinstance(ast.predicate, Or)
        assert isinstance(ast.predicate.operands[1], And)

    def test_parenthesized_or_under_and_is_preserved(self):
        ast = mql.parse('FIND MODELS WHERE (task = "a" OR task = "b") AND name = "c"')
        assert isinstance(ast.predicate, And)
        assert isinstance(ast.predicate.operands[0], Or)

    def test_boolean_literals(self):
        ast = mql.parse("FIND DATASETS WHERE contains_sensitive_data = TRUE")
        assert ast.predicate == Comparison("=", Path(("contains_sensitive_data",)), Literal(True))


class TestPrettyPrint:
    @pytest.mark.parametrize("name", sorted(CANNED_QUERIES))
    def test_canned_queries_round_trip(self, name):
        ast = mql.parse(CANNED_QUERIES[name])
        printed = mql.pretty_print(ast)
        assert mql.parse(printed) == ast
        assert mql.pretty_print(mql.parse(printed)) == printed  # idempotent

    def test_string_escaping_round_trips(self):
        ast = QueryAst(
            target="models",
            predicate=Comparison("=", Path(("name",)), Literal('we"ird\\na\nme')),
        )
        assert mql.parse(mql.pretty_print(ast)) == ast

    def test_random_ast_round_trip_sample(self):
        rng = random.Random(2024)
        for i in range(250):
            ast = random_query(rng)
            printed = mql.pretty_print(ast)
            assert mql.parse(printed) == ast, f"case {i}: {printed}"
