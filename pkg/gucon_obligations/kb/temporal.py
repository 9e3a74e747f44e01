"""База знаний: факты (DKB), события (EKB) и срезы на момент времени."""

import logging
from bisect import bisect_right
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable

from gucon_obligations.core.graph import Graph
from gucon_obligations.core.terms import Iri, Literal, QuotedTriple, Term, Triple
from gucon_obligations.core.timeline import TimeInstant
from gucon_obligations.exceptions import KnowledgeBaseError
from gucon_obligations.vocab import EXECUTION_TIME, XSD_DATETIME

logger = logging.getLogger(__name__)

EXECUTION_TIME_IRI = Iri(EXECUTION_TIME)


@dataclass(frozen=True, slots=True)
class Event:
    """Выполненное действие (n, c, r, t_exec).

    Args:
        actor: Исполнитель
        action: Действие
        resource: Ресурс
        exec_time: Конечный момент выполнения
    """

    actor: Term
    action: Term
    resource: Term
    exec_time: TimeInstant

    def __post_init__(self):
        """Проверка, что момент выполнения конечен."""
        if not self.exec_time.is_finite:
            raise KnowledgeBaseError("момент выполнения события должен быть конечным", self)

    @property
    def action_triple(self) -> QuotedTriple:
        """Основная тройка действия."""
        return QuotedTriple(self.actor, self.action, self.resource)

    def as_triple(self) -> Triple:
        """Утверждение '<<n c r>> gucon:executionTime t'."""
        return Triple(self.action_triple, EXECUTION_TIME_IRI, Literal.of_instant(self.exec_time))


@dataclass(frozen=True, eq=False)
class TemporalKB:
    """Разделенная база знаний.

    Args:
        dkb: Атемпоральные факты
        events: События
        kb_iri: IRI базы для отчетов
    """

    dkb: Graph
    events: frozenset[Event] = frozenset()
    kb_iri: str = ""
    _index: dict[QuotedTriple, list[TimeInstant]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        """Построение индекса событий по тройке действия."""
        index: defaultdict[QuotedTriple, list[TimeInstant]] = defaultdict(list)
        for event in self.events:
            index[event.action_triple].append(event.exec_time)
        for times in index.values():
            times.sort()
        object.__setattr__(self, "_index", dict(index))

    @property
    def ekb(self) -> frozenset[Event]:
        """События базы."""
        return self.events

    def execution_times(self, action: QuotedTriple | Triple, t: TimeInstant | None = None) -> list[TimeInstant]:
        """Моменты выполнения действия, не позже t (если задан), по возрастанию."""
        if isinstance(action, Triple):
            action = action.as_term()
        times = self._index.get(action, [])
        if t is None:
            return list(times)
        return times[: bisect_right(times, t)]

    def with_events(self, events: Iterable[Event]) -> "TemporalKB":
        """Новая база с дополнительными событиями."""
        return TemporalKB(self.dkb, self.events | frozenset(events), self.kb_iri)

    def __eq__(self, other: object) -> bool:
        """Равенство по фактам, событиям и IRI."""
        if not isinstance(other, TemporalKB):
            return NotImplemented
        return self.dkb == other.dkb and self.events == other.events and self.kb_iri == other.kb_iri

    __hash__ = None

    def __repr__(self):
        """Возвращает строковое представление базы."""
        return f"<TemporalKB {self.kb_iri or '-'}: {len(self.dkb)} фактов, {len(self.events)} событий>"


def load_kb(graph: Graph, kb_iri: str = "") -> TemporalKB:
    """Разделение графа на факты и события.

    Raises:
        KnowledgeBaseError: gucon:executionTime не у вложенной тройки или не с dateTime
    """
    dkb = Graph(prefixes=graph.prefixes)
    events: set[Event] = set()
    for triple in graph:
        if triple.predicate != EXECUTION_TIME_IRI:
            dkb.add(triple)
            continue
        if not isinstance(triple.subject, QuotedTriple):
            raise KnowledgeBaseError("субъект gucon:executionTime должен быть вложенной тройкой", triple)
        instant = triple.object.as_instant() if isinstance(triple.object, Literal) else None
        if instant is None or triple.object.datatype != XSD_DATETIME:
            raise KnowledgeBaseError("объект gucon:executionTime должен быть литералом xsd:dateTime", triple)
        if not instant.is_finite:
            raise KnowledgeBaseError("момент выполнения должен быть конечным", triple)
        action = triple.subject
        events.add(Event(action.subject, action.predicate, action.object, instant))
    logger.info(f"[БЗ] База {kb_iri or '-'}: {len(dkb)} фактов, {len(events)} событий")
    return TemporalKB(dkb, frozenset(events), kb_iri)


def snapshot(kb: TemporalKB, t: TimeInstant) -> Graph:
    """Срез базы на момент t: все факты и события с t_exec <= t (граница включается).

    Raises:
        ValueError: Момент не конечен
    """
    if not t.is_finite:
        raise ValueError("срез берется только на конечный момент времени")
    graph = kb.dkb.copy()
    included = 0
    for event in kb.events:
        if event.exec_time <= t:
            graph.add(event.as_triple())
            included += 1
    logger.debug(f"[БЗ] Срез на {t}: {included} из {len(kb.events)} событий")
    return graph


def render_kb(kb: TemporalKB) -> Graph:
    """Обратное к load_kb: факты и все события одним графом."""
    graph = kb.dkb.copy()
    graph.update(event.as_triple() for event in kb.events)
    return graph
