"""Проверка соответствия политике."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import StrEnum
from typing import TYPE_CHECKING, Iterable

from gucon_obligations.algebra.evaluate import EMPTY_MAPPING, evaluate, substitute
from gucon_obligations.algebra.patterns import SolutionMapping
from gucon_obligations.core.graph import Graph
from gucon_obligations.core.terms import Term, Triple, triple_sort_key
from gucon_obligations.core.timeline import TimeInstant
from gucon_obligations.engine.rules import AtemporalRule, ObligationRule, Rule
from gucon_obligations.engine.states import GroundedObligation, ObligationStates, get_obligation_states
from gucon_obligations.exceptions import SubstitutionError
from gucon_obligations.kb.temporal import TemporalKB
from gucon_obligations.vocab import GUCON

if TYPE_CHECKING:
    from gucon_obligations.io.policy import PolicyDocument

logger = logging.getLogger(__name__)


class ComplianceStatus(StrEnum):
    """Итог проверки соответствия."""

    COMPLIANT = "COMPLIANT"
    NON_COMPLIANT = "NON_COMPLIANT"

    @property
    def iri(self) -> str:
        """IRI статуса в пространстве имен gucon."""
        return str(GUCON[self.value])


def check_compliance(
    policy: PolicyDocument | Iterable[Rule],
    kb: TemporalKB,
    t: TimeInstant,
    states: ObligationStates | None = None,
) -> ComplianceStatus:
    """Соответствие на момент t: нет ни одного нарушенного обязательства.

    Args:
        policy: Документ политики или набор правил
        kb: База знаний
        t: Момент оценки
        states: Уже вычисленные состояния на тот же момент
    """
    if states is None:
        states = get_obligation_states(policy, kb, t)
    status = ComplianceStatus.NON_COMPLIANT if states.violated else ComplianceStatus.COMPLIANT
    logger.info(f"[Движок] t={t}: {status} (нарушений {len(states.violated)})")
    return status


def active_rules(
    policy: PolicyDocument | Iterable[Rule],
    kb: TemporalKB,
    t: TimeInstant,
) -> frozenset[GroundedObligation]:
    """Активные конкретизации правил на момент t."""
    return get_obligation_states(policy, kb, t).active


def is_policy_active(policy: PolicyDocument | Iterable[Rule], kb: TemporalKB, t: TimeInstant) -> bool:
    """Политика активна, если активна хотя бы одна конкретизация ее правил."""
    return bool(active_rules(policy, kb, t))


@dataclass(frozen=True, slots=True)
class ActiveRule:
    """Конкретизация атемпорального правила: требуемое действие.

    Args:
        rule_iri: IRI правила
        action: Конкретное действие
        mapping: Отображение условия
    """

    rule_iri: str
    action: Triple
    mapping: SolutionMapping = field(default=EMPTY_MAPPING, compare=False)

    def sort_key(self) -> tuple:
        """Канонический порядок."""
        return self.rule_iri, triple_sort_key(self.action)


def _plain_action(rule: Rule):
    if isinstance(rule, ObligationRule):
        return rule.action.action.as_triple_pattern()
    return rule.action.as_triple_pattern()


def _ground_actions(rule: Rule, graph: Graph) -> list[ActiveRule]:
    pattern = _plain_action(rule)
    result: dict[ActiveRule, None] = {}
    for mapping in sorted(evaluate(rule.condition, graph), key=SolutionMapping.sort_key):
        try:
            action = substitute(mapping, pattern)
        except SubstitutionError as e:
            logger.warning(f"[Движок] Правило {rule.rule_iri}: действие не конкретизировано ({e}), отображение пропущено")
            continue
        result.setdefault(ActiveRule(rule.rule_iri, action, mapping))
    return list(result)


def check_rule_compliance_atemporal(rule: AtemporalRule | ObligationRule, graph: Graph) -> bool:
    """Правило соблюдено, если каждое требуемое им действие есть в графе."""
    missing = [active.action for active in _ground_actions(rule, graph) if active.action not in graph]
    if missing:
        logger.debug(f"[Движок] Правило {rule.rule_iri}: не выполнено действий {len(missing)}")
    return not missing


def check_compliance_atemporal(rules: Iterable[Rule], graph: Graph) -> ComplianceStatus:
    """Атемпоральное соответствие набора правил."""
    ok = all(check_rule_compliance_atemporal(rule, graph) for rule in rules)
    return ComplianceStatus.COMPLIANT if ok else ComplianceStatus.NON_COMPLIANT


def active_rules_atemporal(
    rules: PolicyDocument | Iterable[Rule],
    graph: Graph,
    entity: Term | None = None,
) -> list[ActiveRule]:
    """Требования: конкретизации правил, условия которых выполнены в графе.

    Args:
        rules: Документ политики или набор правил
        graph: Граф знаний
        entity: Ограничить требованиями к одному исполнителю
    """
    result: list[ActiveRule] = []
    for rule in getattr(rules, "rules", rules):
        result.extend(_ground_actions(rule, graph))
    if entity is not None:
        result = [active for active in result if active.action.subject == entity]
    return sorted(result, key=ActiveRule.sort_key)
