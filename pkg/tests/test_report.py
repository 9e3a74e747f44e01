import pytest

from gucon_obligations.core import NEG_INF, POS_INF, Graph, Iri, Literal, Triple
from gucon_obligations.core import parse_datetime as at
from gucon_obligations.engine import ComplianceStatus, GroundedObligation, ObligationStates, check_compliance, get_obligation_states
from gucon_obligations.exceptions import ReportFormatError
from gucon_obligations.io import parse_turtle_star, serialize_turtle_star
from gucon_obligations.report import ReportMeta, build_report, extract_report, mint_mapped_rule_iri
from gucon_obligations.report.builder import (
    EVENT,
    EXTENDED_ACTION,
    HAS_COMPLIANCE_STATUS,
    HAS_EXECUTION_TIME,
    HAS_OBLIGATION_STATE,
    INCLUDES,
    REPORT,
    TYPE,
)
from gucon_obligations.vocab import EX, EXP, GUCON

EVALUATION_TIME = "2025-07-21T10:00:00+02:00"


def _meta(kb, policy, **overrides):
    values = dict(
        policy_iris=tuple(policy.policy_iris),
        kb_iri=kb.kb_iri,
        evaluation_time=at(EVALUATION_TIME),
        report_time=at("2025-07-21T10:05:00+02:00"),
    )
    values.update(overrides)
    return ReportMeta(**values)


@pytest.fixture
def signed_report(sign_policy, signed_kb):
    t = at(EVALUATION_TIME)
    states = get_obligation_states(sign_policy, signed_kb, t)
    status = check_compliance(sign_policy, signed_kb, t, states)
    return states, status, build_report(states, status, _meta(signed_kb, sign_policy))


def test_report_structure(signed_report, signed_kb):
    _, status, graph = signed_report
    assert status is ComplianceStatus.COMPLIANT
    (report,) = [triple.subject for triple in graph.match(None, TYPE, REPORT)]
    assert report == Iri(str(EXP["report-20250721T080500Z"]))
    (mapped,) = [triple.object for triple in graph.match(report, INCLUDES, None)]
    states = {triple.object for triple in graph.match(mapped, HAS_OBLIGATION_STATE, None)}
    assert states == {Iri(str(GUCON.EXPIRED)), Iri(str(GUCON.FULFILLED))}
    action = Iri(f"{mapped.value}/action")
    assert Triple(action, TYPE, EVENT) in graph
    assert Triple(action, HAS_EXECUTION_TIME, Literal.of_instant(at("2025-07-20T12:30:00+02:00"))) in graph
    assert Triple(Iri(signed_kb.kb_iri), HAS_COMPLIANCE_STATUS, Iri(str(GUCON.COMPLIANT))) in graph
    assert len(graph) == 20


def test_unexecuted_action_is_extended_action(sign_policy, unsigned_kb):
    t = at(EVALUATION_TIME)
    states = get_obligation_states(sign_policy, unsigned_kb, t)
    status = check_compliance(sign_policy, unsigned_kb, t, states)
    graph = build_report(states, status, _meta(unsigned_kb, sign_policy))
    assert status is ComplianceStatus.NON_COMPLIANT
    assert len(list(graph.match(None, TYPE, EXTENDED_ACTION))) == 1
    assert not list(graph.match(None, HAS_EXECUTION_TIME, None))


def test_round_trip_through_turtle(signed_report, signed_kb, sign_policy):
    states, status, graph = signed_report
    contents = extract_report(parse_turtle_star(serialize_turtle_star(graph)))
    assert contents.states == states
    assert contents.status is status
    assert contents.kb_iri == signed_kb.kb_iri
    assert contents.policy_iris == tuple(sign_policy.policy_iris)
    assert contents.evaluation_time == at(EVALUATION_TIME)
    (obligation,) = contents.states.all()
    assert obligation.exec_times == frozenset({at("2025-07-20T12:30:00+02:00")})


def test_empty_report(signed_kb):
    meta = ReportMeta((), signed_kb.kb_iri, at(EVALUATION_TIME), at(EVALUATION_TIME), report_iri=str(EX["report-1"]))
    graph = build_report(ObligationStates(), ComplianceStatus.COMPLIANT, meta)
    assert len(graph) == 6
    contents = extract_report(graph)
    assert contents.states.is_empty()
    assert contents.report_iri == str(EX["report-1"])


def test_infinite_bounds_are_omitted():
    obligation = GroundedObligation(str(EXP.rule), Iri(str(EX.a)), Iri(str(GUCON.sign)), Iri(str(EX.b)), NEG_INF, POS_INF)
    states = ObligationStates(active=frozenset({obligation}), not_satisfied=frozenset({obligation}))
    meta = ReportMeta((), "", at(EVALUATION_TIME), at(EVALUATION_TIME))
    contents = extract_report(build_report(states, ComplianceStatus.COMPLIANT, meta))
    assert contents.states == states
    assert contents.kb_iri == str(EXP.kb)


def test_meta_requires_finite_times():
    with pytest.raises(ValueError):
        ReportMeta((), "", POS_INF, at(EVALUATION_TIME))


def test_mint_is_deterministic():
    obligation = GroundedObligation(
        str(EXP["rule-a"]), Iri(str(EX.a)), Iri(str(GUCON.sign)), Iri(str(EX.b)), at(EVALUATION_TIME), POS_INF
    )
    first = mint_mapped_rule_iri(obligation.rule_iri, obligation, 1)
    assert first == mint_mapped_rule_iri(obligation.rule_iri, obligation, 1)
    assert first.startswith(f"{EXP}instance/rule-a-")
    assert first.endswith("-01")
    assert first != mint_mapped_rule_iri(obligation.rule_iri, obligation, 2)


def test_mint_has_no_collisions():
    minted = set()
    for i in range(10_000):
        obligation = GroundedObligation(
            str(EXP["rule-a"]), Iri(str(EX[f"n{i}"])), Iri(str(GUCON.sign)), Iri(str(EX.b)), NEG_INF, POS_INF
        )
        minted.add(mint_mapped_rule_iri(obligation.rule_iri, obligation, 1))
    assert len(minted) == 10_000


@pytest.mark.parametrize(
    "text",
    [
        "",
        "ex:r a gc:Report . ex:s a gc:Report .",
        "ex:r a gc:Report ; gucon:isGeneratedFrom ex:kb .",
        "ex:r a gc:Report ; gucon:isGeneratedFrom ex:kb . ex:kb gucon:hasComplianceStatus gucon:MAYBE .",
    ],
)
def test_malformed_reports(text):
    with pytest.raises(ReportFormatError):
        extract_report(parse_turtle_star(text) if text else Graph())
