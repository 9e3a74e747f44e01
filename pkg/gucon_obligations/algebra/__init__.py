"""Алгебра графовых шаблонов SPARQL-star и ее вычисление."""

from .evaluate import evaluate, hash_join, left_join, minus, substitute
from .expressions import EXPR_ERROR, ExprError, effective_boolean_value, eval_filter_expr, filter_holds
from .patterns import (
    And,
    ArithExpr,
    Bind,
    CompareExpr,
    EmptyPattern,
    Filter,
    FilterExpr,
    GraphPattern,
    LogicalExpr,
    Minus,
    NegateExpr,
    NotExpr,
    Opt,
    SolutionMapping,
    TermExpr,
    TriplePattern,
    Union_,
    in_scope_variables,
    pattern_variables,
    sorted_mappings,
)

__all__ = [
    "evaluate",
    "hash_join",
    "left_join",
    "minus",
    "substitute",
    "EXPR_ERROR",
    "ExprError",
    "effective_boolean_value",
    "eval_filter_expr",
    "filter_holds",
    "And",
    "ArithExpr",
    "Bind",
    "CompareExpr",
    "EmptyPattern",
    "Filter",
    "FilterExpr",
    "GraphPattern",
    "LogicalExpr",
    "Minus",
    "NegateExpr",
    "NotExpr",
    "Opt",
    "SolutionMapping",
    "TermExpr",
    "TriplePattern",
    "Union_",
    "in_scope_variables",
    "pattern_variables",
    "sorted_mappings",
]
