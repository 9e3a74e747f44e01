"""Правила по шаблону и события к ним."""

import logging
import random
from dataclasses import dataclass, field
from datetime import datetime, timedelta

from gucon_obligations.algebra.patterns import And, Bind, TermExpr, TriplePattern
from gucon_obligations.bench.generator import GenerationConfig, pair_match_count, rule_predicate_pairs
from gucon_obligations.bench.selectivity import Selectivity, SelectivityThresholds
from gucon_obligations.core.graph import Graph
from gucon_obligations.core.terms import Iri, Literal, Variable, triple_sort_key
from gucon_obligations.core.timeline import TimeInstant
from gucon_obligations.engine.rules import ActionPattern, ExtendedActionPattern, ObligationRule, validate_rule
from gucon_obligations.exceptions import ConfigError
from gucon_obligations.io.policy import PolicyDocument, PolicyMetadata
from gucon_obligations.kb.temporal import Event
from gucon_obligations.vocab import EXP, GUCON

logger = logging.getLogger(__name__)

DEFAULT_POLICY_IRI = str(EXP["policy-synthetic"])

ENTITY = Variable("e")
RESOURCE = Variable("r")
VALUE = Variable("v")
START = Variable("startTime")
DEADLINE = Variable("deadline")


@dataclass(frozen=True, slots=True)
class RuleCandidate:
    """Пара предикатов шаблона с числом совпадений."""

    cls: Iri
    first: Iri
    second: Iri
    matches: int
    selectivity: Selectivity


@dataclass(slots=True)
class GeneratedPolicy:
    """Результат генерации правил.

    Args:
        document: Политика
        events: События для части конкретизаций
        candidates: Выбранные пары предикатов в порядке правил
    """

    document: PolicyDocument
    events: list[Event] = field(default_factory=list)
    candidates: list[RuleCandidate] = field(default_factory=list)


def rule_candidates(graph: Graph, thresholds: SelectivityThresholds) -> list[RuleCandidate]:
    """Все выполнимые пары предикатов с классами избирательности."""
    result = []
    for cls, first, second in rule_predicate_pairs():
        matches = pair_match_count(graph, first, second)
        if matches:
            result.append(RuleCandidate(cls, first, second, matches, thresholds.classify(matches)))
    return result


def _moment(config: GenerationConfig, seconds: int) -> datetime:
    return config.time_origin.value + timedelta(seconds=seconds)


def _window(rng: random.Random, config: GenerationConfig, ordinal: int) -> tuple[datetime, datetime]:
    """Окно правила: треть содержит момент оценки, треть в прошлом, треть в будущем."""
    middle = int((config.evaluation_time.value - config.time_origin.value).total_seconds())
    end = int(config.horizon.total_seconds())
    match ordinal % 3:
        case 1:
            start, deadline = rng.randrange(0, middle), rng.randrange(middle + 1, end + 1)
        case 2:
            start, deadline = sorted(rng.sample(range(0, middle), 2))
        case _:
            start, deadline = sorted(rng.sample(range(middle + 1, end + 1), 2))
    return _moment(config, start), _moment(config, deadline)


def template_rule(
    ordinal: int,
    candidate: RuleCandidate,
    start: datetime,
    deadline: datetime,
    policy_iri: str,
) -> ObligationRule:
    """Правило по шаблону: две тройки с общим субъектом, BIND границ и действие gucon:action-NN."""
    condition = And(
        TriplePattern(ENTITY, candidate.first, RESOURCE),
        TriplePattern(ENTITY, candidate.second, VALUE),
    )
    condition = Bind(condition, START, TermExpr(Literal.of_instant(TimeInstant.finite(start))))
    condition = Bind(condition, DEADLINE, TermExpr(Literal.of_instant(TimeInstant.finite(deadline))))
    action = ExtendedActionPattern(
        ActionPattern(ENTITY, Iri(str(GUCON[f"action-{ordinal:02d}"])), RESOURCE),
        START,
        DEADLINE,
    )
    rule = ObligationRule(f"{policy_iri}/rule-{ordinal:02d}", condition, action, policy_iri)
    return validate_rule(rule)


def generate_rules(
    graph: Graph,
    n: int,
    config: GenerationConfig,
    selectivity: Selectivity = Selectivity.HIGH,
    thresholds: SelectivityThresholds | None = None,
    policy_iri: str = DEFAULT_POLICY_IRI,
) -> GeneratedPolicy:
    """Набор из n правил одного класса избирательности и события для части конкретизаций.

    Первые k правил не зависят от n, поэтому набор растет префиксами.

    Raises:
        ConfigError: В классе меньше n пар предикатов
    """
    thresholds = thresholds or SelectivityThresholds.scaled(len(graph))
    available = sorted(
        (c for c in rule_candidates(graph, thresholds) if c.selectivity == selectivity),
        key=lambda c: (c.first.value, c.second.value),
    )
    if n > len(available):
        raise ConfigError(f"в классе {selectivity} доступно не более {len(available)} правил, запрошено {n}")
    random.Random(config.seed).shuffle(available)

    rules: list[ObligationRule] = []
    events: list[Event] = []
    for ordinal, candidate in enumerate(available[:n], start=1):
        rng = random.Random(f"{config.seed}:rule:{ordinal}")
        start, deadline = _window(rng, config, ordinal)
        rule = template_rule(ordinal, candidate, start, deadline, policy_iri)
        rules.append(rule)

        action = rule.action.action.action
        span = int((deadline - start).total_seconds())
        for triple in sorted(graph.match(None, candidate.first, None), key=triple_sort_key):
            if rng.random() >= config.event_fraction:
                continue
            exec_time = TimeInstant.finite(start + timedelta(seconds=rng.randrange(span + 1)))
            events.append(Event(triple.subject, action, triple.object, exec_time))
        logger.debug(
            f"[Генератор] Правило {ordinal:02d}: {candidate.first.value} / {candidate.second.value}, "
            f"{candidate.matches} совпадений"
        )

    document = PolicyDocument(
        rules=list(rules),
        metadata={policy_iri: PolicyMetadata(policy_iri, description=f"synthetic {selectivity} policy")},
    )
    logger.info(f"[Генератор] Правил {len(rules)} ({selectivity}), событий {len(events)}")
    return GeneratedPolicy(document, events, available[:n])
