"""Ввод и вывод: Turtle-star, стрелочный синтаксис правил и кодировка UCP."""

from .policy import (
    PolicyDocument,
    PolicyMetadata,
    detect_policy_format,
    encode_ucp,
    load_policy_file,
    parse_policy_graph,
)
from .rules import (
    format_action,
    format_condition,
    format_policy_text,
    format_rule,
    parse_action_text,
    parse_condition_text,
    parse_policy_text,
    parse_rule_text,
)
from .turtle import load_graph_file, parse_turtle_star, serialize_turtle_star, write_graph_file

__all__ = [
    "PolicyDocument",
    "PolicyMetadata",
    "detect_policy_format",
    "encode_ucp",
    "load_policy_file",
    "parse_policy_graph",
    "format_action",
    "format_condition",
    "format_policy_text",
    "format_rule",
    "parse_action_text",
    "parse_condition_text",
    "parse_policy_text",
    "parse_rule_text",
    "load_graph_file",
    "parse_turtle_star",
    "serialize_turtle_star",
    "write_graph_file",
]
