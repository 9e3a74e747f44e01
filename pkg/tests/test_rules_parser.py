import pytest

from gucon_obligations.algebra import And, Bind, Filter, Minus, Opt, TermExpr, TriplePattern, Union_
from gucon_obligations.algebra.patterns import ArithExpr, CompareExpr, LogicalExpr, NotExpr
from gucon_obligations.core import Iri, Literal, Variable
from gucon_obligations.engine import ActionPattern, AtemporalRule, ExtendedActionPattern, ObligationRule
from gucon_obligations.exceptions import GuconError, ParseError, PolicyLoadError, RuleValidationError
from gucon_obligations.io import (
    detect_policy_format,
    encode_ucp,
    format_policy_text,
    load_policy_file,
    parse_action_text,
    parse_condition_text,
    parse_policy_text,
    parse_rule_text,
    parse_turtle_star,
    serialize_turtle_star,
)
from gucon_obligations.io.policy import parse_policy_graph
from gucon_obligations.vocab import EXP, GUCON, HC, XSD_DATETIME, XSD_DURATION

S2_RULE = """
{ ?admission a hc:Admission ; hc:hasPatient ?patient ; hc:hasScheduledAdmissionEndDate ?deadline .
  ?dischargeForm a hc:DischargeForm ; hc:hasAdmission ?admission . }
-> O { <<?patient gucon:sign ?dischargeForm>> gucon:deadline ?deadline . }
"""


def _triples(pattern):
    """Тройки-шаблоны левоглубокой цепочки соединений."""
    if isinstance(pattern, TriplePattern):
        return [pattern]
    if isinstance(pattern, And):
        return _triples(pattern.left) + _triples(pattern.right)
    if isinstance(pattern, Bind):
        return _triples(pattern.inner)
    return []


class TestArrowSyntax:
    def test_sign_report_rule_structure(self, sign_policy):
        (rule,) = sign_policy.rules
        assert isinstance(rule, ObligationRule)
        assert rule.rule_iri == str(EXP["rule-obligation-sign-diagnosis-report"])
        assert rule.policy_iri == str(EXP["policy-sign-report-policy"])
        assert len(_triples(rule.condition)) == 8

        outer = rule.condition
        assert isinstance(outer, Bind) and outer.var == Variable("deadline")
        assert outer.expr == ArithExpr(
            "+", TermExpr(Variable("startTime")), TermExpr(Literal("PT12H", XSD_DURATION))
        )
        inner = outer.inner
        assert isinstance(inner, Bind) and inner.var == Variable("startTime")
        assert inner.expr == TermExpr(Variable("actualAdmissionEndDate"))

        action = rule.action
        assert action.action == ActionPattern(Variable("doctor"), Iri(str(GUCON.sign)), Variable("diagnosisReport"))
        assert action.start == Variable("startTime")
        assert action.deadline == Variable("deadline")

    def test_deadline_only_rule(self):
        rule = parse_rule_text(S2_RULE)
        assert rule.rule_iri == str(EXP["rule-01"])
        assert rule.action.start is None
        assert rule.action.deadline == Variable("deadline")
        triples = _triples(rule.condition)
        assert len(triples) == 5
        assert triples[2] == TriplePattern(
            Variable("admission"), Iri(str(HC.hasScheduledAdmissionEndDate)), Variable("deadline")
        )

    def test_literal_bounds(self):
        rule = parse_rule_text(
            '{ ?p a hc:Patient } -> O { <<?p gucon:sign ex:form>> '
            'gucon:startTime "2025-07-18T09:00:00+02:00"^^xsd:dateTime }'
        )
        assert rule.action.start == Literal("2025-07-18T09:00:00+02:00", XSD_DATETIME)
        assert rule.action.deadline is None

    def test_policy_with_several_rules(self):
        rules = parse_policy_text(
            "{ ?p a hc:Patient } -> O { <<?p gucon:sign ex:a>> gucon:deadline \"2025-01-01T00:00:00Z\"^^xsd:dateTime }\n"
            "ex:second { ?p a hc:Doctor } -> O { <<?p gucon:sign ex:b>> gucon:startTime \"2025-01-01T00:00:00Z\"^^xsd:dateTime }\n",
            policy_iri="https://example.org/policy",
        )
        assert [rule.rule_iri for rule in rules] == [
            "https://example.org/policy/rule-01",
            "https://example.org/data/second",
        ]
        assert all(rule.policy_iri == "https://example.org/policy" for rule in rules)

    def test_group_operators(self):
        pattern = parse_condition_text(
            "?a ex:p ?b . OPTIONAL { ?b ex:q ?c } MINUS { ?a ex:r ?d } "
            "{ ?a ex:s ?e } UNION { ?a ex:t ?e } FILTER(?b != ex:x)"
        )
        assert isinstance(pattern, Filter)
        assert isinstance(pattern.expr, CompareExpr) and pattern.expr.op == "!="
        joined = pattern.inner
        assert isinstance(joined, And) and isinstance(joined.right, Union_)
        assert isinstance(joined.left, Minus)
        assert isinstance(joined.left.left, Opt)

    def test_expression_precedence(self):
        pattern = parse_condition_text("?a ex:p ?b FILTER(!?b || ?b > 1 + 2 * 3 && true)")
        expr = pattern.expr
        assert isinstance(expr, LogicalExpr) and expr.op == "||"
        assert isinstance(expr.left, NotExpr)
        conjunction = expr.right
        assert isinstance(conjunction, LogicalExpr) and conjunction.op == "&&"
        comparison = conjunction.left
        assert isinstance(comparison, CompareExpr) and comparison.op == ">"
        assert isinstance(comparison.right, ArithExpr) and comparison.right.op == "+"
        assert isinstance(comparison.right.right, ArithExpr) and comparison.right.right.op == "*"

    def test_comparisons_without_spaces(self):
        pattern = parse_condition_text("?x ex:p ?y . ?y ex:p ?z FILTER(?x<?y&&?y>?z)")
        expr = pattern.expr
        assert isinstance(expr, LogicalExpr) and expr.op == "&&"
        assert isinstance(expr.left, CompareExpr) and expr.left.op == "<"
        assert isinstance(expr.right, CompareExpr) and expr.right.op == ">"

        query_iri = parse_condition_text("?x ex:p <https://example.org/find?a=1&b=2>")
        assert query_iri.object == Iri("https://example.org/find?a=1&b=2")

    def test_atemporal_action(self):
        action = parse_action_text("?d gucon:sign ?r", temporal=False)
        assert action == ActionPattern(Variable("d"), Iri(str(GUCON.sign)), Variable("r"))

    def test_temporal_detection(self):
        assert isinstance(parse_action_text("<<?d gucon:sign ?r>>", temporal=None), ActionPattern)
        assert isinstance(
            parse_action_text("<<?d gucon:sign ?r>> gucon:deadline ?t", temporal=None), ExtendedActionPattern
        )


class TestRuleErrors:
    def test_unsafe_action_variable(self):
        with pytest.raises(RuleValidationError) as info:
            parse_rule_text("{ ?p a hc:Patient ; hc:hasDeadline ?t } -> O { <<?doctor gucon:sign ?p>> gucon:deadline ?t }")
        assert info.value.variables == ("doctor",)

    def test_unsafe_bound_variable(self):
        with pytest.raises(RuleValidationError) as info:
            parse_rule_text("{ ?p a hc:Patient } -> O { <<?p gucon:sign ex:form>> gucon:deadline ?t }")
        assert info.value.variables == ("t",)

    def test_variable_bound_only_in_minus_is_unsafe(self):
        with pytest.raises(RuleValidationError):
            parse_rule_text(
                "{ ?p a hc:Patient MINUS { ?p ex:due ?t } } -> O { <<?p gucon:sign ex:form>> gucon:deadline ?t }"
            )

    def test_missing_bounds(self):
        with pytest.raises(RuleValidationError):
            parse_rule_text("{ ?p a hc:Patient } -> O { <<?p gucon:sign ex:form>> }")

    def test_non_datetime_bound(self):
        with pytest.raises(RuleValidationError):
            parse_rule_text('{ ?p a hc:Patient } -> O { <<?p gucon:sign ex:form>> gucon:deadline "tomorrow" }')

    def test_rebinding_in_scope_variable(self):
        with pytest.raises(ParseError):
            parse_condition_text("?p ex:due ?t . BIND(?p AS ?t)")

    def test_unknown_operator(self):
        with pytest.raises(ParseError):
            parse_rule_text("{ ?p a hc:Patient } -> P { <<?p gucon:sign ex:form>> gucon:deadline ?p }")

    def test_plain_triple_for_obligation(self):
        with pytest.raises(ParseError):
            parse_rule_text("{ ?p ex:due ?t } -> O { ?p gucon:sign ex:form }")

    def test_duplicated_bound(self):
        with pytest.raises(ParseError):
            parse_rule_text("{ ?p ex:due ?t } -> O { <<?p gucon:sign ex:form>> gucon:deadline ?t ; gucon:deadline ?t }")

    def test_mutated_rule_text_only_raises_library_errors(self, fixtures_dir):
        text = (fixtures_dir / "sign-report-policy.gucon").read_text(encoding="utf-8")
        variants = [text[:i] + text[i + 1 :] for i in range(len(text))]
        variants += [text[:i] for i in range(0, len(text), 7)]
        for variant in variants:
            try:
                parse_policy_text(variant)
            except GuconError:
                pass


class TestUcpEncoding:
    def test_ucp_fixture_matches_arrow_fixture(self, sign_policy, sign_ucp_policy):
        (arrow,) = sign_policy.rules
        (ucp,) = sign_ucp_policy.rules
        assert ucp.rule_iri == arrow.rule_iri
        assert ucp.condition == arrow.condition
        assert ucp.action == arrow.action
        assert ucp.policy_iri == str(EXP["policy-obligation-sign-diagnosis-report"])

    def test_ucp_metadata(self, sign_ucp_policy):
        meta = sign_ucp_policy.metadata[str(EXP["policy-obligation-sign-diagnosis-report"])]
        assert meta.creator == Iri("https://example.org/data/ines-akaichi")
        assert meta.description == "an example policy"
        assert meta.modified == Literal("2025-07-20T10:30:00+02:00", XSD_DATETIME)

    def test_format_detection(self, fixtures_dir):
        assert detect_policy_format((fixtures_dir / "sign-report-policy.ttl").read_text(encoding="utf-8")) == "ucp"
        assert detect_policy_format((fixtures_dir / "sign-report-policy.gucon").read_text(encoding="utf-8")) == "arrow"

    def test_ucp_round_trip(self, sign_ucp_policy):
        graph = parse_turtle_star(serialize_turtle_star(encode_ucp(sign_ucp_policy)))
        document = parse_policy_graph(graph)
        assert document.rules == sign_ucp_policy.rules
        meta = document.metadata[str(EXP["policy-obligation-sign-diagnosis-report"])]
        assert meta.description == "an example policy"

    def test_atemporal_rule_in_ucp(self):
        graph = parse_turtle_star(
            "ex:r a ucp:ObligationRule ; ucp:hasConditionPattern \"?d a hc:Doctor\" ;\n"
            "    ucp:hasActionPattern \"?d gucon:sign ex:form\" ; ucp:isPartOfPolicy ex:policy .\n"
        )
        (rule,) = parse_policy_graph(graph).rules
        assert isinstance(rule, AtemporalRule)

    def test_missing_action_property(self):
        graph = parse_turtle_star('ex:r a ucp:ObligationRule ; ucp:hasConditionPattern "?d a hc:Doctor" ; ucp:isPartOfPolicy ex:p .')
        with pytest.raises(PolicyLoadError):
            parse_policy_graph(graph)

    def test_bad_payload_keeps_inner_error(self):
        graph = parse_turtle_star(
            'ex:r a ucp:ObligationRule ; ucp:hasConditionPattern "?d a" ;\n'
            '    ucp:hasActionPattern "<<?d gucon:sign ex:f>> gucon:deadline ?d" ; ucp:isPartOfPolicy ex:p .'
        )
        with pytest.raises(PolicyLoadError) as info:
            parse_policy_graph(graph)
        assert isinstance(info.value.inner, ParseError)

    def test_arrow_text_round_trip(self, sign_policy, tmp_path):
        target = tmp_path / "copy.gucon"
        target.write_text(format_policy_text(sign_policy.rules), encoding="utf-8")
        reloaded = load_policy_file(target, policy_iri=sign_policy.rules[0].policy_iri)
        assert reloaded.rules == sign_policy.rules

    def test_empty_policy(self, fixtures_dir):
        document = load_policy_file(fixtures_dir / "empty.gucon")
        assert len(document) == 0
