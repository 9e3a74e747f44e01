"""Правила-обязательства и шаблоны действий."""

from dataclasses import dataclass

from gucon_obligations.algebra.patterns import GraphPattern, TriplePattern, in_scope_variables
from gucon_obligations.core.terms import Literal, Term, Variable, term_variables
from gucon_obligations.exceptions import RuleValidationError
from gucon_obligations.vocab import XSD_DATETIME


@dataclass(frozen=True, slots=True)
class ActionPattern:
    """Шаблон действия: исполнитель, действие и ресурс.

    Args:
        entity: Исполнитель (np)
        action: Действие (cp)
        resource: Ресурс (rp)
    """

    entity: Term
    action: Term
    resource: Term

    def variables(self) -> set[Variable]:
        """Переменные шаблона."""
        result: set[Variable] = set()
        for term in (self.entity, self.action, self.resource):
            result.update(term_variables(term))
        return result

    def as_triple_pattern(self) -> TriplePattern:
        """Тот же шаблон как тройка-шаблон."""
        return TriplePattern(self.entity, self.action, self.resource)


@dataclass(frozen=True, slots=True)
class ExtendedActionPattern:
    """Шаблон действия с границами: отсутствующее начало - минус бесконечность, срок - плюс бесконечность.

    Args:
        action: Шаблон действия
        start: Терм начала (переменная или литерал dateTime) либо None
        deadline: Терм срока либо None
    """

    action: ActionPattern
    start: Term | None = None
    deadline: Term | None = None

    def variables(self) -> set[Variable]:
        """Переменные действия и временных термов."""
        result = self.action.variables()
        for term in (self.start, self.deadline):
            if term is not None:
                result.update(term_variables(term))
        return result


@dataclass(frozen=True, slots=True)
class ObligationRule:
    """Правило cond -> O {ea} с расширенным шаблоном действия.

    Args:
        rule_iri: IRI правила
        condition: Условие
        action: Расширенный шаблон действия
        policy_iri: IRI политики, к которой относится правило
    """

    rule_iri: str
    condition: GraphPattern
    action: ExtendedActionPattern
    policy_iri: str | None = None

    @property
    def local_name(self) -> str:
        """Последний сегмент IRI правила."""
        return local_name(self.rule_iri)


@dataclass(frozen=True, slots=True)
class AtemporalRule:
    """Правило без временных границ: действие - обычная тройка-шаблон.

    Args:
        rule_iri: IRI правила
        condition: Условие
        action: Шаблон действия
        policy_iri: IRI политики
    """

    rule_iri: str
    condition: GraphPattern
    action: ActionPattern
    policy_iri: str | None = None

    @property
    def local_name(self) -> str:
        """Последний сегмент IRI правила."""
        return local_name(self.rule_iri)


Rule = ObligationRule | AtemporalRule


def local_name(iri: str) -> str:
    """Последний сегмент IRI после '#' или '/'."""
    for separator in ("#", "/"):
        if separator in iri:
            iri = iri.rsplit(separator, 1)[1] or iri
    return iri


def validate_rule(rule: Rule) -> Rule:
    """Проверка безопасности правила.

    Все переменные действия и временных термов должны связываться условием.
    У правила-обязательства не могут одновременно отсутствовать начало и срок.

    Returns:
        То же правило

    Raises:
        RuleValidationError: Нарушено одно из требований
    """
    bound = in_scope_variables(rule.condition)
    unsafe = rule.action.variables() - bound
    if unsafe:
        raise RuleValidationError(
            rule.rule_iri,
            "переменные действия не связаны условием",
            {var.name for var in unsafe},
        )
    if isinstance(rule, ObligationRule):
        if rule.action.start is None and rule.action.deadline is None:
            raise RuleValidationError(rule.rule_iri, "не заданы ни начало, ни срок обязательства")
        for term in (rule.action.start, rule.action.deadline):
            if term is None or isinstance(term, Variable):
                continue
            if not (isinstance(term, Literal) and term.datatype == XSD_DATETIME and term.as_instant() is not None):
                raise RuleValidationError(rule.rule_iri, f"временная граница должна быть dateTime: {term}")
    return rule
