"""Отчет о соответствии в RDF-star и его обратное чтение."""

import hashlib
import logging
from dataclasses import dataclass, field
from datetime import datetime

import pytz

from gucon_obligations.core.graph import Graph
from gucon_obligations.core.terms import Iri, Literal, Term, Triple
from gucon_obligations.core.timeline import NEG_INF, POS_INF, TimeInstant
from gucon_obligations.engine.compliance import ComplianceStatus
from gucon_obligations.engine.rules import local_name
from gucon_obligations.engine.states import GroundedObligation, ObligationState, ObligationStates
from gucon_obligations.exceptions import ReportFormatError
from gucon_obligations.vocab import DEFAULT_PREFIXES, EXP, GC, GUCON, RDF_TYPE

logger = logging.getLogger(__name__)

TYPE = Iri(RDF_TYPE)

MAPPED_RULE = Iri(str(GC.MappedObligationRule))
REPORT = Iri(str(GC.Report))
KNOWLEDGE_BASE = Iri(str(GC.KnowledgeBase))
EVENT = Iri(str(GUCON.Event))
EXTENDED_ACTION = Iri(str(GUCON.ExtendedAction))

HAS_EXTENDED_ACTION = Iri(str(GUCON.hasExtendedAction))
IS_DERIVED_FROM = Iri(str(GUCON.isDerivedFrom))
HAS_OBLIGATION_STATE = Iri(str(GUCON.hasObligationState))
HAS_ENTITY = Iri(str(GUCON.hasEntity))
HAS_ACTION = Iri(str(GUCON.hasAction))
HAS_RESOURCE = Iri(str(GUCON.hasResource))
HAS_START_TIME = Iri(str(GUCON.hasStartTime))
HAS_DEADLINE = Iri(str(GUCON.hasDeadline))
HAS_EXECUTION_TIME = Iri(str(GUCON.hasExecutionTime))
HAS_EVALUATION_TIME = Iri(str(GUCON.hasEvaluationTime))
HAS_REPORT_TIME = Iri(str(GUCON.hasReportTime))
IS_GENERATED_FOR = Iri(str(GUCON.isGeneratedFor))
IS_GENERATED_FROM = Iri(str(GUCON.isGeneratedFrom))
INCLUDES = Iri(str(GUCON.includes))
HAS_COMPLIANCE_STATUS = Iri(str(GUCON.hasComplianceStatus))

_STATE_BY_IRI = {Iri(state.iri): state for state in ObligationState}
_STATUS_BY_IRI = {Iri(status.iri): status for status in ComplianceStatus}


@dataclass(frozen=True, slots=True)
class ReportMeta:
    """Сведения об отчете.

    Args:
        policy_iris: Политики, для которых строится отчет
        kb_iri: IRI базы знаний
        evaluation_time: Момент среза
        report_time: Момент формирования отчета
        base_namespace: Пространство имен для новых IRI
        report_iri: Явный IRI отчета (иначе по моменту формирования)
    """

    policy_iris: tuple[str, ...]
    kb_iri: str
    evaluation_time: TimeInstant
    report_time: TimeInstant
    base_namespace: str = str(EXP)
    report_iri: str | None = None

    def __post_init__(self):
        """Оба момента отчета должны быть конечными."""
        if not (self.evaluation_time.is_finite and self.report_time.is_finite):
            raise ValueError("моменты оценки и формирования отчета должны быть конечными")

    @classmethod
    def now(
        cls,
        policy_iris: tuple[str, ...],
        kb_iri: str,
        evaluation_time: TimeInstant,
        base_namespace: str = str(EXP),
        tz: pytz.BaseTzInfo = pytz.utc,
    ) -> "ReportMeta":
        """Сведения с текущим временем в заданном часовом поясе."""
        report_time = TimeInstant.finite(datetime.now(tz).replace(microsecond=0))
        return cls(policy_iris, kb_iri, evaluation_time, report_time, base_namespace)

    def resolved_report_iri(self) -> str:
        """IRI отчета: явный либо 'report-<UTC момент>'."""
        if self.report_iri:
            return self.report_iri
        stamp = self.report_time.value.astimezone(pytz.utc).strftime("%Y%m%dT%H%M%SZ")
        return f"{self.base_namespace}report-{stamp}"


@dataclass(frozen=True, slots=True)
class ReportContents:
    """Содержимое отчета, прочитанное из графа."""

    states: ObligationStates
    status: ComplianceStatus
    policy_iris: tuple[str, ...]
    kb_iri: str
    evaluation_time: TimeInstant
    report_time: TimeInstant
    report_iri: str = field(default="")


def _grounding_digest(rule_iri: str, obligation: GroundedObligation) -> str:
    parts = (
        rule_iri,
        str(obligation.entity),
        str(obligation.action),
        str(obligation.resource),
        str(obligation.start),
        str(obligation.deadline),
    )
    return hashlib.sha256("\x1f".join(parts).encode("utf-8")).hexdigest()[:10]


def mint_mapped_rule_iri(
    rule_iri: str,
    obligation: GroundedObligation,
    sequence: int,
    base_namespace: str = str(EXP),
) -> str:
    """Детерминированный IRI конкретизированного правила: имя правила, хеш конкретизации и номер."""
    return f"{base_namespace}instance/{local_name(rule_iri)}-{_grounding_digest(rule_iri, obligation)}-{sequence:02d}"


def build_report(states: ObligationStates, status: ComplianceStatus, meta: ReportMeta) -> Graph:
    """Граф отчета о состояниях обязательств и соответствии базы.

    Args:
        states: Состояния на момент meta.evaluation_time
        status: Итог проверки соответствия
        meta: Сведения об отчете

    Returns:
        Граф отчета с префиксами по умолчанию
    """
    graph = Graph(prefixes=dict(DEFAULT_PREFIXES))
    report = Iri(meta.resolved_report_iri())
    kb = Iri(meta.kb_iri or f"{meta.base_namespace}kb")

    graph.add(Triple(report, TYPE, REPORT))
    graph.add(Triple(report, HAS_EVALUATION_TIME, Literal.of_instant(meta.evaluation_time)))
    graph.add(Triple(report, HAS_REPORT_TIME, Literal.of_instant(meta.report_time)))
    for policy_iri in meta.policy_iris:
        graph.add(Triple(report, IS_GENERATED_FOR, Iri(policy_iri)))
    graph.add(Triple(report, IS_GENERATED_FROM, kb))
    graph.add(Triple(kb, TYPE, KNOWLEDGE_BASE))
    graph.add(Triple(kb, HAS_COMPLIANCE_STATUS, Iri(status.iri)))

    sequences: dict[str, int] = {}
    for obligation in states.all():
        sequence = sequences[obligation.rule_iri] = sequences.get(obligation.rule_iri, 0) + 1
        mapped_iri = mint_mapped_rule_iri(obligation.rule_iri, obligation, sequence, meta.base_namespace)
        mapped = Iri(mapped_iri)
        action = Iri(f"{mapped_iri}/action")

        graph.add(Triple(report, INCLUDES, mapped))
        graph.add(Triple(mapped, TYPE, MAPPED_RULE))
        graph.add(Triple(mapped, HAS_EXTENDED_ACTION, action))
        graph.add(Triple(mapped, IS_DERIVED_FROM, Iri(obligation.rule_iri)))
        for state in states.states_of(obligation):
            graph.add(Triple(mapped, HAS_OBLIGATION_STATE, Iri(state.iri)))

        graph.add(Triple(action, TYPE, EVENT if obligation.executed else EXTENDED_ACTION))
        graph.add(Triple(action, HAS_ENTITY, obligation.entity))
        graph.add(Triple(action, HAS_ACTION, obligation.action))
        graph.add(Triple(action, HAS_RESOURCE, obligation.resource))
        if obligation.start.is_finite:
            graph.add(Triple(action, HAS_START_TIME, Literal.of_instant(obligation.start)))
        if obligation.deadline.is_finite:
            graph.add(Triple(action, HAS_DEADLINE, Literal.of_instant(obligation.deadline)))
        for exec_time in sorted(obligation.exec_times):
            graph.add(Triple(action, HAS_EXECUTION_TIME, Literal.of_instant(exec_time)))

    logger.info(f"[Отчет] {report.value}: {len(states)} обязательств, статус {status}")
    return graph


def _objects(graph: Graph, subject: Term, predicate: Iri) -> list[Term]:
    return sorted((triple.object for triple in graph.match(subject, predicate, None)), key=str)


def _single(graph: Graph, subject: Term, predicate: Iri) -> Term | None:
    values = _objects(graph, subject, predicate)
    if len(values) > 1:
        raise ReportFormatError(f"{subject}: несколько значений {predicate}")
    return values[0] if values else None


def _required(graph: Graph, subject: Term, predicate: Iri) -> Term:
    value = _single(graph, subject, predicate)
    if value is None:
        raise ReportFormatError(f"{subject}: нет обязательного свойства {predicate}")
    return value


def _instant(value: Term | None, default: TimeInstant) -> TimeInstant:
    if value is None:
        return default
    instant = value.as_instant() if isinstance(value, Literal) else None
    if instant is None:
        raise ReportFormatError(f"ожидался литерал dateTime: {value}")
    return instant


def extract_report(graph: Graph) -> ReportContents:
    """Чтение отчета обратно в состояния и статус.

    Raises:
        ReportFormatError: В графе нет ровно одного отчета или нарушена его структура
    """
    reports = [triple.subject for triple in graph.match(None, TYPE, REPORT)]
    if len(reports) != 1:
        raise ReportFormatError(f"ожидался ровно один отчет, найдено {len(reports)}")
    report = reports[0]

    kb = _required(graph, report, IS_GENERATED_FROM)
    status_iri = _required(graph, kb, HAS_COMPLIANCE_STATUS)
    if status_iri not in _STATUS_BY_IRI:
        raise ReportFormatError(f"неизвестный статус соответствия {status_iri}")

    classified: dict[GroundedObligation, frozenset[ObligationState]] = {}
    for mapped in _objects(graph, report, INCLUDES):
        action = _required(graph, mapped, HAS_EXTENDED_ACTION)
        rule_iri = _required(graph, mapped, IS_DERIVED_FROM)
        states = set()
        for state_iri in _objects(graph, mapped, HAS_OBLIGATION_STATE):
            if state_iri not in _STATE_BY_IRI:
                raise ReportFormatError(f"{mapped}: неизвестное состояние {state_iri}")
            states.add(_STATE_BY_IRI[state_iri])
        obligation = GroundedObligation(
            rule_iri=str(rule_iri.value) if isinstance(rule_iri, Iri) else str(rule_iri),
            entity=_required(graph, action, HAS_ENTITY),
            action=_required(graph, action, HAS_ACTION),
            resource=_required(graph, action, HAS_RESOURCE),
            start=_instant(_single(graph, action, HAS_START_TIME), NEG_INF),
            deadline=_instant(_single(graph, action, HAS_DEADLINE), POS_INF),
            exec_times=frozenset(
                _instant(value, NEG_INF) for value in _objects(graph, action, HAS_EXECUTION_TIME)
            ),
        )
        classified[obligation] = frozenset(states)

    contents = ReportContents(
        states=ObligationStates.from_classified(classified),
        status=_STATUS_BY_IRI[status_iri],
        policy_iris=tuple(sorted(str(v.value) for v in _objects(graph, report, IS_GENERATED_FOR) if isinstance(v, Iri))),
        kb_iri=kb.value if isinstance(kb, Iri) else str(kb),
        evaluation_time=_instant(_required(graph, report, HAS_EVALUATION_TIME), NEG_INF),
        report_time=_instant(_required(graph, report, HAS_REPORT_TIME), NEG_INF),
        report_iri=report.value if isinstance(report, Iri) else str(report),
    )
    logger.debug(f"[Отчет] Прочитано обязательств: {len(classified)}")
    return contents
