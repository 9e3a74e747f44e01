import itertools
import random

import pytest

from gucon_obligations.algebra import (
    EXPR_ERROR,
    And,
    Bind,
    EmptyPattern,
    Filter,
    Minus,
    Opt,
    SolutionMapping,
    TermExpr,
    TriplePattern,
    Union_,
    eval_filter_expr,
    evaluate,
    filter_holds,
    in_scope_variables,
    substitute,
)
from gucon_obligations.algebra.patterns import ArithExpr, CompareExpr, LogicalExpr, NegateExpr, NotExpr
from gucon_obligations.core import Graph, Iri, Literal, QuotedTriple, Triple, Variable
from gucon_obligations.exceptions import SubstitutionError
from gucon_obligations.io import parse_condition_text, parse_turtle_star
from gucon_obligations.vocab import EX, XSD_DATETIME, XSD_DURATION

X, Y, Z, W = Variable("x"), Variable("y"), Variable("z"), Variable("w")
P, Q = Iri(str(EX.p)), Iri(str(EX.q))
NODES = [Iri(str(EX[name])) for name in ("a", "b", "c")]
NUMBERS = [Literal.of_integer(n) for n in (1, 2, 3)]
TRUE = Literal.of_boolean(True)
FALSE = Literal.of_boolean(False)


def m(**bindings):
    return SolutionMapping({Variable(name): value for name, value in bindings.items()})


@pytest.fixture
def people():
    return parse_turtle_star(
        "ex:alice ex:knows ex:bob, ex:carol ; ex:age 30 .\n"
        "ex:bob ex:knows ex:carol ; ex:age 25 .\n"
        "ex:carol ex:age 41 .\n"
        "<< ex:alice ex:knows ex:bob >> ex:since \"2020-01-01T00:00:00Z\"^^xsd:dateTime .\n"
    )


class TestEvaluate:
    def test_triple_pattern(self, people):
        result = evaluate(parse_condition_text("?x ex:knows ?y"), people)
        assert len(result) == 3
        assert m(x=Iri(str(EX.alice)), y=Iri(str(EX.bob))) in result

    def test_join(self, people):
        result = evaluate(parse_condition_text("?x ex:knows ?y . ?y ex:knows ?z"), people)
        assert result == {m(x=Iri(str(EX.alice)), y=Iri(str(EX.bob)), z=Iri(str(EX.carol)))}

    def test_optional_keeps_unmatched(self, people):
        result = evaluate(parse_condition_text("?x ex:age ?a OPTIONAL { ?x ex:knows ?y }"), people)
        carol = [mapping for mapping in result if mapping[X] == Iri(str(EX.carol))]
        assert carol == [m(x=Iri(str(EX.carol)), a=Literal.of_integer(41))]
        assert len(result) == 4

    def test_minus_needs_shared_variable(self, people):
        shared = evaluate(parse_condition_text("?x ex:age ?a MINUS { ?x ex:knows ex:carol }"), people)
        assert {mapping[X] for mapping in shared} == {Iri(str(EX.carol))}
        disjoint = evaluate(parse_condition_text("?x ex:age ?a MINUS { ?u ex:knows ?v }"), people)
        assert len(disjoint) == 3

    def test_union(self, people):
        result = evaluate(parse_condition_text("{ ?x ex:knows ex:bob } UNION { ?x ex:age 41 }"), people)
        assert {mapping[X] for mapping in result} == {Iri(str(EX.alice)), Iri(str(EX.carol))}

    def test_filter_and_bind(self, people):
        result = evaluate(parse_condition_text("?x ex:age ?a BIND(?a + 1 AS ?next) FILTER(?next > 30)"), people)
        assert {mapping[Variable("next")] for mapping in result} == {Literal.of_integer(31), Literal.of_integer(42)}

    def test_quoted_triple_pattern(self, people):
        result = evaluate(parse_condition_text("<< ?x ex:knows ?y >> ex:since ?t"), people)
        (mapping,) = result
        assert mapping[Variable("t")] == Literal("2020-01-01T00:00:00Z", XSD_DATETIME)

    def test_empty_pattern(self, people):
        assert evaluate(EmptyPattern(), people) == {SolutionMapping()}

    def test_bind_error_leaves_variable_unbound(self, people):
        result = evaluate(parse_condition_text("?x ex:knows ?y BIND(?y + 1 AS ?n)"), people)
        assert all(Variable("n") not in mapping for mapping in result)
        assert len(result) == 3

    def test_duration_arithmetic(self):
        value = eval_filter_expr(
            ArithExpr(
                "+",
                TermExpr(Literal("2025-07-20T10:30:00+02:00", XSD_DATETIME)),
                TermExpr(Literal("PT12H", XSD_DURATION)),
            ),
            SolutionMapping(),
        )
        assert value == Literal("2025-07-20T22:30:00+02:00", XSD_DATETIME)


class TestExpressions:
    @pytest.mark.parametrize(
        "left, right, conjunction, disjunction",
        [
            (TRUE, TRUE, TRUE, TRUE),
            (TRUE, FALSE, FALSE, TRUE),
            (FALSE, FALSE, FALSE, FALSE),
            (TRUE, EXPR_ERROR, EXPR_ERROR, TRUE),
            (FALSE, EXPR_ERROR, FALSE, EXPR_ERROR),
            (EXPR_ERROR, EXPR_ERROR, EXPR_ERROR, EXPR_ERROR),
        ],
    )
    def test_three_valued_logic(self, left, right, conjunction, disjunction):
        def operand(value):
            return TermExpr(Variable("unbound")) if value is EXPR_ERROR else TermExpr(value)

        empty = SolutionMapping()
        for a, b in ((left, right), (right, left)):
            assert eval_filter_expr(LogicalExpr("&&", operand(a), operand(b)), empty) == conjunction
            assert eval_filter_expr(LogicalExpr("||", operand(a), operand(b)), empty) == disjunction

    def test_not_of_error_is_error(self):
        assert eval_filter_expr(NotExpr(TermExpr(X)), SolutionMapping()) is EXPR_ERROR

    def test_error_filters_out(self):
        assert not filter_holds(TermExpr(X), SolutionMapping())

    def test_mixed_type_comparison(self):
        empty = SolutionMapping()
        assert eval_filter_expr(CompareExpr("<", TermExpr(NODES[0]), TermExpr(NUMBERS[0])), empty) is EXPR_ERROR
        assert eval_filter_expr(CompareExpr("=", TermExpr(NODES[0]), TermExpr(NUMBERS[0])), empty) == FALSE
        assert eval_filter_expr(CompareExpr("!=", TermExpr(NODES[0]), TermExpr(NUMBERS[0])), empty) == TRUE

    def test_datetime_comparison_across_offsets(self):
        early = Literal("2025-07-20T10:30:00+02:00", XSD_DATETIME)
        late = Literal("2025-07-20T09:00:00Z", XSD_DATETIME)
        assert eval_filter_expr(CompareExpr("<", TermExpr(early), TermExpr(late)), SolutionMapping()) == TRUE

    def test_numeric_operations(self):
        empty = SolutionMapping()
        assert eval_filter_expr(ArithExpr("*", TermExpr(NUMBERS[1]), TermExpr(NUMBERS[2])), empty) == Literal.of_integer(6)
        assert eval_filter_expr(ArithExpr("/", TermExpr(NUMBERS[0]), TermExpr(Literal.of_integer(0))), empty) is EXPR_ERROR
        assert eval_filter_expr(NegateExpr(TermExpr(NUMBERS[0])), empty) == Literal.of_integer(-1)


class TestSubstitute:
    def test_nested_substitution(self):
        pattern = TriplePattern(QuotedTriple(X, P, Y), Q, Z)
        result = substitute(m(x=NODES[0], y=NODES[1], z=NUMBERS[0]), pattern)
        assert result == Triple(QuotedTriple(NODES[0], P, NODES[1]), Q, NUMBERS[0])

    def test_unbound_variable(self):
        with pytest.raises(SubstitutionError) as info:
            substitute(m(x=NODES[0]), TriplePattern(X, P, Y))
        assert info.value.variable == "y"


class TestMapping:
    def test_compatibility_and_merge(self):
        left = m(x=NODES[0], y=NODES[1])
        assert left.compatible(m(y=NODES[1], z=NODES[2]))
        assert not left.compatible(m(y=NODES[2]))
        assert left.merge(m(z=NODES[2])) == m(x=NODES[0], y=NODES[1], z=NODES[2])

    def test_hash_consistent_with_equality(self):
        assert hash(m(x=NODES[0], y=NODES[1])) == hash(m(y=NODES[1], x=NODES[0]))
        assert m(x=NODES[0]).get(Y) is None


# Эталонное вычисление перебором всех присваиваний


def _brute_triple(pattern: TriplePattern, graph: Graph) -> set[SolutionMapping]:
    variables = sorted(
        {term for term in (pattern.subject, pattern.predicate, pattern.object) if isinstance(term, Variable)},
        key=lambda var: var.name,
    )
    terms = sorted(graph.terms(), key=str)
    result = set()
    for values in itertools.product(terms, repeat=len(variables)):
        mapping = SolutionMapping(zip(variables, values))
        if substitute(mapping, pattern) in graph:
            result.add(mapping)
    return result


def _brute_join(left, right):
    return {a.merge(b) for a in left for b in right if a.compatible(b)}


def brute_evaluate(pattern, graph: Graph) -> set[SolutionMapping]:
    if isinstance(pattern, TriplePattern):
        return _brute_triple(pattern, graph)
    if isinstance(pattern, EmptyPattern):
        return {SolutionMapping()}
    left = brute_evaluate(pattern.inner if isinstance(pattern, (Filter, Bind)) else pattern.left, graph)
    if isinstance(pattern, Filter):
        return {mapping for mapping in left if filter_holds(pattern.expr, mapping)}
    if isinstance(pattern, Bind):
        result = set()
        for mapping in left:
            value = eval_filter_expr(pattern.expr, mapping)
            result.add(mapping if pattern.var in mapping or value is EXPR_ERROR else mapping.extend(pattern.var, value))
        return result
    right = brute_evaluate(pattern.right, graph)
    if isinstance(pattern, And):
        return _brute_join(left, right)
    if isinstance(pattern, Union_):
        return left | right
    if isinstance(pattern, Opt):
        return _brute_join(left, right) | {a for a in left if not any(a.compatible(b) for b in right)}
    if isinstance(pattern, Minus):
        return {a for a in left if not any(a.domain & b.domain and a.compatible(b) for b in right)}
    raise TypeError(pattern)


def _random_graph(rng: random.Random) -> Graph:
    graph = Graph()
    for _ in range(rng.randint(1, 9)):
        obj = rng.choice(NODES + NUMBERS)
        graph.add(Triple(rng.choice(NODES), rng.choice((P, Q)), obj))
    return graph


def _random_term(rng: random.Random, variables):
    return rng.choice(variables) if rng.random() < 0.6 else rng.choice(NODES)


def _random_expr(rng: random.Random, depth: int = 0):
    if depth < 1 and rng.random() < 0.3:
        return LogicalExpr(rng.choice(("&&", "||")), _random_expr(rng, depth + 1), _random_expr(rng, depth + 1))
    left = TermExpr(rng.choice((X, Y, Z)))
    right = TermExpr(rng.choice((X, Y, Z, *NODES, *NUMBERS)))
    return CompareExpr(rng.choice(("=", "!=", "<", ">=")), left, right)


def _random_pattern(rng: random.Random, depth: int = 0):
    if depth >= 2 or rng.random() < 0.3:
        return TriplePattern(_random_term(rng, [X, Y, Z]), rng.choice((P, Q, W)), _random_term(rng, [X, Y, Z]))
    kind = rng.choice(("and", "union", "opt", "minus", "filter", "bind"))
    left = _random_pattern(rng, depth + 1)
    if kind == "filter":
        return Filter(left, _random_expr(rng))
    if kind == "bind":
        free = [var for var in (X, Y, Z) if var not in in_scope_variables(left)]
        if not free:
            return Filter(left, _random_expr(rng))
        source = TermExpr(rng.choice((X, Y, Z)))
        return Bind(left, rng.choice(free), ArithExpr("+", source, TermExpr(NUMBERS[0])))
    right = _random_pattern(rng, depth + 1)
    return {"and": And, "union": Union_, "opt": Opt, "minus": Minus}[kind](left, right)


def test_evaluate_matches_brute_force():
    rng = random.Random(20250720)
    for _ in range(200):
        graph = _random_graph(rng)
        pattern = _random_pattern(rng)
        assert evaluate(pattern, graph) == brute_evaluate(pattern, graph), pattern
