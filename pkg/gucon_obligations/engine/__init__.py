"""Правила-обязательства, их состояния и проверка соответствия."""

from .compliance import (
    ActiveRule,
    ComplianceStatus,
    active_rules,
    active_rules_atemporal,
    check_compliance,
    check_compliance_atemporal,
    check_rule_compliance_atemporal,
    is_policy_active,
)
from .rules import ActionPattern, AtemporalRule, ExtendedActionPattern, ObligationRule, Rule, local_name, validate_rule
from .states import (
    GroundedObligation,
    ObligationState,
    ObligationStates,
    augment_rule,
    classify,
    get_obligation_states,
    ground_rule,
)

__all__ = [
    "ActiveRule",
    "ComplianceStatus",
    "active_rules",
    "active_rules_atemporal",
    "check_compliance",
    "check_compliance_atemporal",
    "check_rule_compliance_atemporal",
    "is_policy_active",
    "ActionPattern",
    "AtemporalRule",
    "ExtendedActionPattern",
    "ObligationRule",
    "Rule",
    "local_name",
    "validate_rule",
    "GroundedObligation",
    "ObligationState",
    "ObligationStates",
    "augment_rule",
    "classify",
    "get_obligation_states",
    "ground_rule",
]
