"""Модель термов и графов RDF-star и арифметика моментов времени."""

from .graph import Graph
from .terms import (
    Iri,
    Literal,
    QuotedTriple,
    Term,
    Triple,
    Variable,
    is_ground,
    term_sort_key,
    triple_sort_key,
)
from .timeline import (
    NEG_INF,
    POS_INF,
    InstantKind,
    Ordering,
    TimeInstant,
    add_duration,
    compare_instants,
    format_duration,
    format_instant,
    parse_datetime,
    parse_duration,
)

__all__ = [
    "Graph",
    "Iri",
    "Literal",
    "QuotedTriple",
    "Term",
    "Triple",
    "Variable",
    "is_ground",
    "term_sort_key",
    "triple_sort_key",
    "NEG_INF",
    "POS_INF",
    "InstantKind",
    "Ordering",
    "TimeInstant",
    "add_duration",
    "compare_instants",
    "format_duration",
    "format_instant",
    "parse_datetime",
    "parse_duration",
]
