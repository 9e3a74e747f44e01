"""Вычисление графовых шаблонов над графом в композиционной семантике."""

import logging
from collections import defaultdict
from typing import Iterable

from gucon_obligations.algebra.expressions import EXPR_ERROR, eval_filter_expr, filter_holds
from gucon_obligations.algebra.patterns import (
    And,
    Bind,
    EmptyPattern,
    Filter,
    GraphPattern,
    Minus,
    Opt,
    SolutionMapping,
    TriplePattern,
    Union_,
)
from gucon_obligations.core.graph import Graph
from gucon_obligations.core.terms import QuotedTriple, Term, Triple, Variable, is_ground
from gucon_obligations.exceptions import SubstitutionError

logger = logging.getLogger(__name__)

EMPTY_MAPPING = SolutionMapping()


def evaluate(pattern: GraphPattern, graph: Graph) -> set[SolutionMapping]:
    """Множество отображений шаблона над графом.

    AND - соединение совместимых отображений, UNION - объединение, OPT -
    левое соединение, MINUS - разность SPARQL, FILTER - отбор по истинности
    выражения, BIND - расширение вычисленным значением.
    """
    if isinstance(pattern, TriplePattern):
        return set(match_triple_pattern(pattern, graph, EMPTY_MAPPING))
    if isinstance(pattern, EmptyPattern):
        return {EMPTY_MAPPING}
    if isinstance(pattern, And):
        return _evaluate_conjunction(pattern, graph)
    if isinstance(pattern, Union_):
        return evaluate(pattern.left, graph) | evaluate(pattern.right, graph)
    if isinstance(pattern, Opt):
        return left_join(evaluate(pattern.left, graph), evaluate(pattern.right, graph))
    if isinstance(pattern, Minus):
        return minus(evaluate(pattern.left, graph), evaluate(pattern.right, graph))
    if isinstance(pattern, Filter):
        return {mapping for mapping in evaluate(pattern.inner, graph) if filter_holds(pattern.expr, mapping)}
    if isinstance(pattern, Bind):
        return {bind_value(mapping, pattern) for mapping in evaluate(pattern.inner, graph)}
    raise TypeError(f"неизвестный шаблон: {pattern!r}")


def bind_value(mapping: SolutionMapping, pattern: Bind) -> SolutionMapping:
    """Расширение отображения значением BIND; при ошибке переменная остается несвязанной."""
    if pattern.var in mapping:
        return mapping
    value = eval_filter_expr(pattern.expr, mapping)
    if value is EXPR_ERROR:
        return mapping
    return mapping.extend(pattern.var, value)


def _flatten_and(pattern: GraphPattern, operands: list[GraphPattern]) -> list[GraphPattern]:
    if isinstance(pattern, And):
        _flatten_and(pattern.left, operands)
        _flatten_and(pattern.right, operands)
    else:
        operands.append(pattern)
    return operands


def _evaluate_conjunction(pattern: And, graph: Graph) -> set[SolutionMapping]:
    operands = _flatten_and(pattern, [])
    triples = [operand for operand in operands if isinstance(operand, TriplePattern)]
    others = [operand for operand in operands if not isinstance(operand, TriplePattern)]

    result = evaluate_bgp(triples, graph) if triples else {EMPTY_MAPPING}
    for operand in others:
        if not result:
            return set()
        result = hash_join(result, evaluate(operand, graph))
    return result


def evaluate_bgp(triples: list[TriplePattern], graph: Graph) -> set[SolutionMapping]:
    """Базовый графовый шаблон: связывающие соединения в жадном порядке."""
    remaining = list(triples)
    estimates = {
        id(tp): graph.count(*(term if is_ground(term) else None for term in (tp.subject, tp.predicate, tp.object)))
        for tp in remaining
    }
    bound: set[Variable] = set()
    mappings: list[SolutionMapping] = [EMPTY_MAPPING]
    while remaining:
        remaining.sort(key=lambda tp: (-_bound_positions(tp, bound), estimates[id(tp)]))
        current = remaining.pop(0)
        extended: set[SolutionMapping] = set()
        for mapping in mappings:
            extended.update(match_triple_pattern(current, graph, mapping))
        if not extended:
            return set()
        mappings = list(extended)
        for term in (current.subject, current.predicate, current.object):
            bound.update(_variables(term))
    return set(mappings)


def _bound_positions(tp: TriplePattern, bound: set[Variable]) -> int:
    return sum(1 for term in (tp.subject, tp.predicate, tp.object) if _variables(term) <= bound)


def _variables(term: Term) -> set[Variable]:
    if isinstance(term, Variable):
        return {term}
    if isinstance(term, QuotedTriple):
        return _variables(term.subject) | _variables(term.predicate) | _variables(term.object)
    return set()


def match_triple_pattern(pattern: TriplePattern, graph: Graph, mapping: SolutionMapping) -> Iterable[SolutionMapping]:
    """Отображения, расширяющие данное и сопоставляющие шаблон с утверждениями графа."""
    positions = [apply_mapping(term, mapping) for term in (pattern.subject, pattern.predicate, pattern.object)]
    keys = [term if is_ground(term) else None for term in positions]
    for triple in graph.match(*keys):
        bindings: dict[Variable, Term] = {}
        if (
            unify(positions[0], triple.subject, bindings)
            and unify(positions[1], triple.predicate, bindings)
            and unify(positions[2], triple.object, bindings)
        ):
            yield mapping.merge(SolutionMapping(bindings)) if bindings else mapping


def apply_mapping(term: Term, mapping: SolutionMapping) -> Term:
    """Подстановка связанных переменных; несвязанные остаются на месте."""
    if isinstance(term, Variable):
        return mapping.get(term, term)
    if isinstance(term, QuotedTriple) and not is_ground(term):
        return QuotedTriple(
            apply_mapping(term.subject, mapping),
            apply_mapping(term.predicate, mapping),
            apply_mapping(term.object, mapping),
        )
    return term


def unify(pattern: Term, data: Term, bindings: dict[Variable, Term]) -> bool:
    """Рекурсивное сопоставление терма-шаблона с основным термом."""
    if isinstance(pattern, Variable):
        bound = bindings.get(pattern)
        if bound is None:
            bindings[pattern] = data
            return True
        return bound == data
    if isinstance(pattern, QuotedTriple):
        if not isinstance(data, QuotedTriple):
            return False
        return (
            unify(pattern.subject, data.subject, bindings)
            and unify(pattern.predicate, data.predicate, bindings)
            and unify(pattern.object, data.object, bindings)
        )
    return pattern == data


def _certain(mappings: set[SolutionMapping]) -> frozenset[Variable]:
    domains = iter(mappings)
    first = next(domains, None)
    if first is None:
        return frozenset()
    result = set(first.domain)
    for mapping in domains:
        result &= mapping.domain
        if not result:
            break
    return frozenset(result)


def _partition(mappings: set[SolutionMapping], keys: tuple[Variable, ...]) -> dict[tuple, list[SolutionMapping]]:
    buckets: defaultdict[tuple, list[SolutionMapping]] = defaultdict(list)
    for mapping in mappings:
        buckets[tuple(mapping[var] for var in keys)].append(mapping)
    return buckets


def _join_keys(left: set[SolutionMapping], right: set[SolutionMapping]) -> tuple[Variable, ...]:
    return tuple(sorted(_certain(left) & _certain(right), key=lambda var: var.name))


def hash_join(left: set[SolutionMapping], right: set[SolutionMapping]) -> set[SolutionMapping]:
    """Соединение совместимых отображений по переменным, определенным с обеих сторон."""
    if not left or not right:
        return set()
    keys = _join_keys(left, right)
    buckets = _partition(right, keys)
    result: set[SolutionMapping] = set()
    for mapping in left:
        for candidate in buckets.get(tuple(mapping[var] for var in keys), ()):
            if mapping.compatible(candidate):
                result.add(mapping.merge(candidate))
    return result


def left_join(left: set[SolutionMapping], right: set[SolutionMapping]) -> set[SolutionMapping]:
    """OPT: соединение плюс левые отображения без совместимой пары."""
    keys = _join_keys(left, right)
    buckets = _partition(right, keys)
    result: set[SolutionMapping] = set()
    for mapping in left:
        matched = False
        for candidate in buckets.get(tuple(mapping[var] for var in keys), ()):
            if mapping.compatible(candidate):
                result.add(mapping.merge(candidate))
                matched = True
        if not matched:
            result.add(mapping)
    return result


def minus(left: set[SolutionMapping], right: set[SolutionMapping]) -> set[SolutionMapping]:
    """MINUS: удаление левых отображений, совместимых с правым при общей переменной."""
    result: set[SolutionMapping] = set()
    for mapping in left:
        excluded = any(
            mapping.domain & candidate.domain and mapping.compatible(candidate) for candidate in right
        )
        if not excluded:
            result.add(mapping)
    return result


def substitute(mapping: SolutionMapping, target: Term | TriplePattern) -> Term | Triple:
    """Подстановка отображения в терм или тройку-шаблон.

    Raises:
        SubstitutionError: В шаблоне есть переменная вне домена отображения
    """
    if isinstance(target, TriplePattern):
        return Triple(
            substitute(mapping, target.subject),
            substitute(mapping, target.predicate),
            substitute(mapping, target.object),
        )
    if isinstance(target, Variable):
        value = mapping.get(target)
        if value is None:
            raise SubstitutionError(target.name)
        return value
    if isinstance(target, QuotedTriple) and not is_ground(target):
        return QuotedTriple(
            substitute(mapping, target.subject),
            substitute(mapping, target.predicate),
            substitute(mapping, target.object),
        )
    return target
