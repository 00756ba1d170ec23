"""MQL: the declarative query language over the metadata registry.

`CANNED_QUERIES` ships the reference translations of the seven motivating
model-zoo search questions (dataset provenance, performance thresholds,
best-on-benchmark ranking, bias and toxicity screening, edge deployability).
"""

from .analyzer import AnalyzedQuery, analyze
from .ast import (
    And, Comparison, Contains, Literal, Membership, MetricCall, Not, Or, Path,
    Quantifier, QueryAst, TriBool, FALSE, TRUE, UNKNOWN,
)
from .evaluator import (
    EvalContext, MISSING, PredicateEvaluator, QueryResult, StoreCaches,
    analyze_text, evaluate, explain, resolve_metric, run_query,
)
from .lexer import MqlAnalysisError, MqlError, MqlSyntaxError, Token, tokenize
from .parser import parse, parse_predicate, pretty_print

# Reference query suite. Q2 reads "collected from COCO and OpenImage" as
# source matching either collection; the conjunctive reading would be
# `source CONTAINS "COCO" AND source CONTAINS "OpenImage"`.
CANNED_QUERIES: dict[str, str] = {
    "q1_crowdsourced_training_data": (
        'FIND MODELS WHERE task = "text-classification" '
        'AND trained_on.collection_method = "crowdsourced" '
        'AND trained_on.annotator_count >= 50'
    ),
    "q2_dog_datasets": (
        'FIND DATASETS WHERE source IN ("COCO", "OpenImage") '
        'AND ALL(INSTANCES, labels CONTAINS "dog")'
    ),
    "q3_imagenet_accuracy": (
        'FIND MODELS WHERE trained_on.name = "ImageNet" '
        'AND metric(dataset="ImageNet", name="accuracy") > 0.90'
    ),
    "q4_best_person_detector": (
        'FIND MODELS WHERE task = "person-detection" '
        'ORDER BY metric(dataset="COCO", name="map") DESC LIMIT 1'
    ),
    "q5_unbiased_person_detector": (
        'FIND MODELS WHERE task = "person-detection" '
        'AND metric(dataset="fairness-faces", name="demographic_parity_gap") <= 0.01'
    ),
    "q6_no_hate_speech": (
        'FIND MODELS WHERE task = "text-generation" '
        'AND metric(dataset="toxicity-bench", name="hate_speech_rate") = 0'
    ),
    "q7_edge_deployable": (
        'FIND MODELS WHERE task = "image-classification" '
        'AND metric(hardware="edge", name="latency_ms", dataset="ImageNet") <= 50 '
        'AND metric(hardware="edge", name="memory_footprint_mb", dataset="ImageNet") <= 512'
    ),
}

__all__ = [
    "AnalyzedQuery", "analyze", "analyze_text", "And", "CANNED_QUERIES",
    "Comparison", "Contains", "EvalContext", "evaluate", "explain", "FALSE",
    "Literal", "Membership", "MetricCall", "MISSING", "MqlAnalysisError",
    "MqlError", "MqlSyntaxError", "Not", "Or", "parse", "parse_predicate",
    "Path", "pretty_print", "Quantifier", "QueryAst", "QueryResult",
    "resolve_metric", "run_query", "Token", "tokenize", "TriBool", "TRUE",
    "UNKNOWN",
]
