"""Состояния обязательств на момент времени."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import StrEnum
from typing import TYPE_CHECKING, Iterable

from gucon_obligations.algebra.evaluate import EMPTY_MAPPING, evaluate, substitute
from gucon_obligations.algebra.patterns import GraphPattern, Opt, SolutionMapping, TriplePattern, pattern_variables
from gucon_obligations.core.graph import Graph
from gucon_obligations.core.terms import Iri, Literal, QuotedTriple, Term, Variable, term_sort_key
from gucon_obligations.core.timeline import NEG_INF, POS_INF, TimeInstant
from gucon_obligations.engine.rules import ObligationRule, Rule
from gucon_obligations.exceptions import ClassificationError, SubstitutionError
from gucon_obligations.kb.temporal import TemporalKB, snapshot
from gucon_obligations.vocab import EXECUTION_TIME, GUCON

if TYPE_CHECKING:
    from gucon_obligations.io.policy import PolicyDocument

logger = logging.getLogger(__name__)

EXEC_VARIABLE_PREFIX = "__exec"


class ObligationState(StrEnum):
    """Состояние обязательства."""

    ACTIVE = "ACTIVE"
    FULFILLED = "FULFILLED"
    VIOLATED = "VIOLATED"
    EXPIRED = "EXPIRED"
    NOT_SATISFIED = "NOT_SATISFIED"

    @property
    def iri(self) -> str:
        """IRI состояния в пространстве имен gucon."""
        return str(GUCON[self.value])


@dataclass(frozen=True, slots=True)
class GroundedObligation:
    """Обязательство, конкретизированное одним отображением.

    Равенство и хеш определяются правилом, действием и границами.

    Args:
        rule_iri: IRI исходного правила
        entity: Исполнитель
        action: Действие
        resource: Ресурс
        start: Начало
        deadline: Срок
        exec_times: Моменты выполнения из среза
        mapping: Отображение условия
    """

    rule_iri: str
    entity: Term
    action: Term
    resource: Term
    start: TimeInstant
    deadline: TimeInstant
    exec_times: frozenset[TimeInstant] = field(default=frozenset(), compare=False)
    mapping: SolutionMapping = field(default=EMPTY_MAPPING, compare=False)

    @property
    def action_triple(self) -> QuotedTriple:
        """Основная тройка действия."""
        return QuotedTriple(self.entity, self.action, self.resource)

    @property
    def executed(self) -> bool:
        """Есть ли хотя бы одно выполнение."""
        return bool(self.exec_times)

    def sort_key(self) -> tuple:
        """Канонический порядок обязательств."""
        return (
            self.rule_iri,
            term_sort_key(self.entity),
            term_sort_key(self.action),
            term_sort_key(self.resource),
            self.start.kind,
            self.start.value.timestamp() if self.start.is_finite else 0.0,
            self.deadline.kind,
            self.deadline.value.timestamp() if self.deadline.is_finite else 0.0,
        )


@dataclass(frozen=True, slots=True)
class ObligationStates:
    """Пять множеств состояний на момент t."""

    active: frozenset[GroundedObligation] = frozenset()
    fulfilled: frozenset[GroundedObligation] = frozenset()
    violated: frozenset[GroundedObligation] = frozenset()
    expired: frozenset[GroundedObligation] = frozenset()
    not_satisfied: frozenset[GroundedObligation] = frozenset()

    @classmethod
    def from_classified(cls, classified: dict[GroundedObligation, frozenset[ObligationState]]) -> ObligationStates:
        """Сборка множеств из состояний каждого обязательства."""
        buckets: dict[ObligationState, set[GroundedObligation]] = {state: set() for state in ObligationState}
        for obligation, states in classified.items():
            for state in states:
                buckets[state].add(obligation)
        return cls(
            active=frozenset(buckets[ObligationState.ACTIVE]),
            fulfilled=frozenset(buckets[ObligationState.FULFILLED]),
            violated=frozenset(buckets[ObligationState.VIOLATED]),
            expired=frozenset(buckets[ObligationState.EXPIRED]),
            not_satisfied=frozenset(buckets[ObligationState.NOT_SATISFIED]),
        )

    def by_state(self) -> dict[ObligationState, frozenset[GroundedObligation]]:
        """Множества по состояниям."""
        return {
            ObligationState.ACTIVE: self.active,
            ObligationState.FULFILLED: self.fulfilled,
            ObligationState.VIOLATED: self.violated,
            ObligationState.EXPIRED: self.expired,
            ObligationState.NOT_SATISFIED: self.not_satisfied,
        }

    def all(self) -> list[GroundedObligation]:
        """Все обязательства в каноническом порядке."""
        union = self.active | self.fulfilled | self.violated | self.expired | self.not_satisfied
        return sorted(union, key=GroundedObligation.sort_key)

    def states_of(self, obligation: GroundedObligation) -> frozenset[ObligationState]:
        """Состояния одного обязательства."""
        return frozenset(state for state, members in self.by_state().items() if obligation in members)

    def for_entity(self, entity: Term) -> ObligationStates:
        """Множества, ограниченные обязательствами одного исполнителя."""
        return ObligationStates(
            **{
                state.name.lower(): frozenset(ob for ob in members if ob.entity == entity)
                for state, members in self.by_state().items()
            }
        )

    def is_empty(self) -> bool:
        """Пусты ли все множества."""
        return not self.all()

    def __len__(self) -> int:
        """Число различных обязательств."""
        return len(self.all())


def classify(
    start: TimeInstant,
    deadline: TimeInstant,
    exec_times: Iterable[TimeInstant],
    t: TimeInstant,
) -> frozenset[ObligationState]:
    """Состояния обязательства по границам, выполнениям и моменту t."""
    active = start <= t <= deadline
    expired = t > deadline
    fulfilled = any(start <= e <= deadline for e in exec_times)
    states: set[ObligationState] = set()
    if active:
        states.add(ObligationState.ACTIVE)
    if expired:
        states.add(ObligationState.EXPIRED)
    if fulfilled:
        states.add(ObligationState.FULFILLED)
    if expired and not fulfilled:
        states.add(ObligationState.VIOLATED)
    if active and not fulfilled:
        states.add(ObligationState.NOT_SATISFIED)
    return frozenset(states)


def exec_variable(rule: ObligationRule) -> Variable:
    """Новая переменная для момента выполнения, отсутствующая в условии."""
    taken = {var.name for var in pattern_variables(rule.condition)}
    name = EXEC_VARIABLE_PREFIX
    suffix = 0
    while name in taken:
        suffix += 1
        name = f"{EXEC_VARIABLE_PREFIX}_{suffix}"
    return Variable(name)


def augment_rule(rule: ObligationRule) -> GraphPattern:
    """Условие с необязательной привязкой момента выполнения действия."""
    action = rule.action.action
    exec_pattern = TriplePattern(
        QuotedTriple(action.entity, action.action, action.resource),
        Iri(EXECUTION_TIME),
        exec_variable(rule),
    )
    return Opt(rule.condition, exec_pattern)


def _bound(rule: ObligationRule, term: Term | None, mapping: SolutionMapping, default: TimeInstant) -> TimeInstant:
    if term is None:
        return default
    try:
        value = substitute(mapping, term)
    except SubstitutionError as e:
        raise ClassificationError(rule.rule_iri, f"временная граница {term} не связана", mapping) from e
    instant = value.as_instant() if isinstance(value, Literal) else None
    if instant is None:
        raise ClassificationError(rule.rule_iri, f"временная граница {value} не является dateTime", mapping)
    return instant


def ground_rule(rule: ObligationRule, graph: Graph) -> list[GroundedObligation]:
    """Конкретизация правила над срезом с объединением моментов выполнения.

    Raises:
        ClassificationError: Граница не приводится к моменту времени
    """
    exec_var = exec_variable(rule)
    action = rule.action.action
    mappings = sorted(evaluate(augment_rule(rule), graph), key=SolutionMapping.sort_key)

    grouped: dict[GroundedObligation, tuple[set[TimeInstant], SolutionMapping]] = {}
    for mapping in mappings:
        condition_mapping = SolutionMapping((var, value) for var, value in mapping.items() if var != exec_var)
        try:
            entity = substitute(condition_mapping, action.entity)
            verb = substitute(condition_mapping, action.action)
            resource = substitute(condition_mapping, action.resource)
        except SubstitutionError as e:
            logger.warning(f"[Движок] Правило {rule.rule_iri}: действие не конкретизировано ({e}), отображение пропущено")
            continue
        start = _bound(rule, rule.action.start, condition_mapping, NEG_INF)
        deadline = _bound(rule, rule.action.deadline, condition_mapping, POS_INF)
        if start == POS_INF or deadline == NEG_INF:
            raise ClassificationError(rule.rule_iri, "начало +INF или срок -INF", condition_mapping)
        if deadline < start:
            logger.warning(f"[Движок] Правило {rule.rule_iri}: начало {start} позже срока {deadline}")

        key = GroundedObligation(rule.rule_iri, entity, verb, resource, start, deadline)
        times, first_mapping = grouped.setdefault(key, (set(), condition_mapping))
        exec_value = mapping.get(exec_var)
        if isinstance(exec_value, Literal) and exec_value.as_instant() is not None:
            times.add(exec_value.as_instant())

    result = [
        GroundedObligation(
            key.rule_iri,
            key.entity,
            key.action,
            key.resource,
            key.start,
            key.deadline,
            frozenset(times),
            first_mapping,
        )
        for key, (times, first_mapping) in grouped.items()
    ]
    logger.debug(f"[Движок] Правило {rule.rule_iri}: {len(mappings)} отображений, {len(result)} обязательств")
    return result


def _rules_of(policy: PolicyDocument | Iterable[Rule]) -> list[Rule]:
    rules = getattr(policy, "rules", policy)
    return list(rules)


def get_obligation_states(
    policy: PolicyDocument | Iterable[Rule],
    kb: TemporalKB,
    t: TimeInstant,
    workers: int = 1,
) -> ObligationStates:
    """Состояния всех обязательств политики на момент t.

    Args:
        policy: Документ политики или набор правил
        kb: База знаний
        t: Конечный момент оценки
        workers: Число потоков для обработки правил

    Raises:
        ClassificationError: Граница обязательства не приводится к моменту времени
    """
    graph = snapshot(kb, t)
    all_rules = _rules_of(policy)
    rules = [rule for rule in all_rules if isinstance(rule, ObligationRule)]
    skipped = len(all_rules) - len(rules)
    if skipped:
        logger.debug(f"[Движок] Пропущено правил без временных границ: {skipped}")

    if workers > 1 and len(rules) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_rule = list(pool.map(lambda rule: ground_rule(rule, graph), rules))
    else:
        per_rule = [ground_rule(rule, graph) for rule in rules]

    classified: dict[GroundedObligation, frozenset[ObligationState]] = {}
    for obligations in per_rule:
        for obligation in obligations:
            if obligation in classified:
                logger.warning(f"[Движок] Повторное обязательство правила {obligation.rule_iri}")
                continue
            classified[obligation] = classify(obligation.start, obligation.deadline, obligation.exec_times, t)

    states = ObligationStates.from_classified(classified)
    logger.info(
        f"[Движок] t={t}: обязательств {len(classified)}, активных {len(states.active)}, "
        f"нарушенных {len(states.violated)}"
    )
    return states
