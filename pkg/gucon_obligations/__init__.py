"""Мониторинг временных обязательств GUCON поверх RDF-star базы знаний."""

__version__ = "1.0"

from gucon_obligations.engine import (
    ComplianceStatus,
    GroundedObligation,
    ObligationState,
    ObligationStates,
    check_compliance,
    get_obligation_states,
)
from gucon_obligations.exceptions import GuconError
from gucon_obligations.io import load_graph_file, load_policy_file, parse_policy_text, parse_turtle_star
from gucon_obligations.kb import TemporalKB, load_kb, snapshot
from gucon_obligations.report import build_report

__all__ = [
    "__version__",
    "ComplianceStatus",
    "GroundedObligation",
    "ObligationState",
    "ObligationStates",
    "check_compliance",
    "get_obligation_states",
    "GuconError",
    "load_graph_file",
    "load_policy_file",
    "parse_policy_text",
    "parse_turtle_star",
    "TemporalKB",
    "load_kb",
    "snapshot",
    "build_report",
]
