import itertools
import random

from gucon_obligations.algebra import And, SolutionMapping, TriplePattern, in_scope_variables, substitute
from gucon_obligations.core import Graph, Iri, Triple, Variable
from gucon_obligations.engine import (
    ActionPattern,
    AtemporalRule,
    ComplianceStatus,
    active_rules_atemporal,
    check_compliance_atemporal,
    check_rule_compliance_atemporal,
)
from gucon_obligations.io import parse_rule_text, parse_turtle_star
from gucon_obligations.vocab import EX, GUCON

RULE = "{ ?doctor a hc:Doctor ; hc:treats ?patient } -> O { ?doctor gucon:inform ?patient }"

GRAPH = """
ex:doctor-1 a hc:Doctor ; hc:treats ex:patient-1, ex:patient-2 .
ex:doctor-2 a hc:Doctor ; hc:treats ex:patient-3 .
ex:doctor-1 gucon:inform ex:patient-1 .
ex:doctor-2 gucon:inform ex:patient-3 .
"""


def test_requirements_and_compliance():
    rule = parse_rule_text(RULE, temporal=False)
    graph = parse_turtle_star(GRAPH)
    required = active_rules_atemporal([rule], graph)
    assert len(required) == 3
    assert not check_rule_compliance_atemporal(rule, graph)
    assert check_compliance_atemporal([rule], graph) is ComplianceStatus.NON_COMPLIANT

    graph.add(Triple(Iri(str(EX["doctor-1"])), Iri(str(GUCON.inform)), Iri(str(EX["patient-2"]))))
    assert check_compliance_atemporal([rule], graph) is ComplianceStatus.COMPLIANT


def test_requirements_for_one_entity():
    rule = parse_rule_text(RULE, temporal=False)
    graph = parse_turtle_star(GRAPH)
    doctor = Iri(str(EX["doctor-2"]))
    (only,) = active_rules_atemporal([rule], graph, entity=doctor)
    assert only.action == Triple(doctor, Iri(str(GUCON.inform)), Iri(str(EX["patient-3"])))


def test_no_rules_is_compliant():
    assert check_compliance_atemporal([], Graph()) is ComplianceStatus.COMPLIANT


# Эталон: перебор присваиваний для условий из троек-шаблонов

X, Y = Variable("x"), Variable("y")
NODES = [Iri(str(EX[f"n{i}"])) for i in range(3)]
PREDICATES = [Iri(str(EX.p)), Iri(str(EX.q)), Iri(str(EX.done))]


def _conjuncts(pattern):
    if isinstance(pattern, And):
        return _conjuncts(pattern.left) + _conjuncts(pattern.right)
    return [pattern]


def brute_compliant(rule: AtemporalRule, graph: Graph) -> bool:
    triples = _conjuncts(rule.condition)
    variables = sorted(in_scope_variables(rule.condition), key=lambda var: var.name)
    for values in itertools.product(sorted(graph.terms(), key=str), repeat=len(variables)):
        mapping = SolutionMapping(zip(variables, values))
        if all(substitute(mapping, tp) in graph for tp in triples):
            if substitute(mapping, rule.action.as_triple_pattern()) not in graph:
                return False
    return True


def _random_rule(rng: random.Random) -> AtemporalRule:
    condition = TriplePattern(X, rng.choice(PREDICATES[:2]), rng.choice([Y, *NODES]))
    if rng.random() < 0.5:
        condition = And(condition, TriplePattern(rng.choice([X, Y]), rng.choice(PREDICATES[:2]), rng.choice(NODES)))
    bound = sorted(in_scope_variables(condition), key=lambda var: var.name)
    action = ActionPattern(rng.choice(bound), PREDICATES[2], rng.choice([*bound, *NODES]))
    return AtemporalRule(str(EX["rule"]), condition, action)


def test_atemporal_compliance_matches_brute_force():
    rng = random.Random(11)
    for _ in range(100):
        graph = Graph(
            Triple(rng.choice(NODES), rng.choice(PREDICATES), rng.choice(NODES)) for _ in range(rng.randint(1, 8))
        )
        rule = _random_rule(rng)
        assert check_rule_compliance_atemporal(rule, graph) == brute_compliant(rule, graph), rule
