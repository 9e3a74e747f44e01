"""Алгебра графовых шаблонов, выражения фильтров и решения-отображения."""

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union

from gucon_obligations.core.terms import Term, Variable, term_sort_key, term_variables


@dataclass(frozen=True, slots=True)
class TriplePattern:
    """Тройка-шаблон; субъект и объект могут быть вложенными тройками-шаблонами."""

    subject: Term
    predicate: Term
    object: Term

    def __str__(self) -> str:
        """Запись шаблона."""
        return f"{self.subject} {self.predicate} {self.object}"


@dataclass(frozen=True, slots=True)
class EmptyPattern:
    """Единичный шаблон: ровно одно пустое отображение."""


@dataclass(frozen=True, slots=True)
class And:
    """Соединение совместимых отображений."""

    left: "GraphPattern"
    right: "GraphPattern"


@dataclass(frozen=True, slots=True)
class Union_:
    """Объединение множеств отображений."""

    left: "GraphPattern"
    right: "GraphPattern"


@dataclass(frozen=True, slots=True)
class Opt:
    """Левое внешнее соединение (OPTIONAL)."""

    left: "GraphPattern"
    right: "GraphPattern"


@dataclass(frozen=True, slots=True)
class Minus:
    """Разность в семантике SPARQL MINUS."""

    left: "GraphPattern"
    right: "GraphPattern"


@dataclass(frozen=True, slots=True)
class Filter:
    """Отбор отображений, на которых выражение истинно."""

    inner: "GraphPattern"
    expr: "FilterExpr"


@dataclass(frozen=True, slots=True)
class Bind:
    """Расширение отображений вычисленным значением."""

    inner: "GraphPattern"
    var: Variable
    expr: "FilterExpr"


GraphPattern = Union[TriplePattern, EmptyPattern, And, Union_, Opt, Minus, Filter, Bind]


@dataclass(frozen=True, slots=True)
class TermExpr:
    """Константа или переменная внутри выражения."""

    term: Term


@dataclass(frozen=True, slots=True)
class NotExpr:
    """Логическое отрицание."""

    operand: "FilterExpr"


@dataclass(frozen=True, slots=True)
class LogicalExpr:
    """Логическая связка: op - '&&' или '||'."""

    op: str
    left: "FilterExpr"
    right: "FilterExpr"


@dataclass(frozen=True, slots=True)
class CompareExpr:
    """Сравнение: op - один из '=', '!=', '<', '<=', '>', '>='."""

    op: str
    left: "FilterExpr"
    right: "FilterExpr"


@dataclass(frozen=True, slots=True)
class ArithExpr:
    """Арифметика: op - один из '+', '-', '*', '/'."""

    op: str
    left: "FilterExpr"
    right: "FilterExpr"


@dataclass(frozen=True, slots=True)
class NegateExpr:
    """Унарный минус."""

    operand: "FilterExpr"


FilterExpr = Union[TermExpr, NotExpr, LogicalExpr, CompareExpr, ArithExpr, NegateExpr]

COMPARISON_OPS = frozenset({"=", "!=", "<", "<=", ">", ">="})
ARITHMETIC_OPS = frozenset({"+", "-", "*", "/"})
LOGICAL_OPS = frozenset({"&&", "||"})


class SolutionMapping(Mapping[Variable, Term]):
    """Частичное отображение переменных в основные термы.

    Неизменяемо и хешируемо. Обращение к переменной вне домена через
    `get` возвращает None, что отличимо от любого терма.
    """

    __slots__ = ("_data", "_hash")

    def __init__(self, data: Mapping[Variable, Term] | Iterable[tuple[Variable, Term]] = ()):
        self._data: dict[Variable, Term] = dict(data)
        self._hash: int | None = None

    def __getitem__(self, key: Variable) -> Term:
        """Значение переменной."""
        return self._data[key]

    def __iter__(self) -> Iterator[Variable]:
        """Итерация по домену."""
        return iter(self._data)

    def __len__(self) -> int:
        """Размер домена."""
        return len(self._data)

    def __hash__(self) -> int:
        """Хеш по множеству пар."""
        if self._hash is None:
            self._hash = hash(frozenset(self._data.items()))
        return self._hash

    def __eq__(self, other: object) -> bool:
        """Равенство отображений."""
        if isinstance(other, SolutionMapping):
            return self._data == other._data
        return NotImplemented

    def __repr__(self):
        """Возвращает строковое представление отображения."""
        inner = ", ".join(f"{var}→{self._data[var]}" for var in sorted(self._data, key=lambda v: v.name))
        return "{" + inner + "}"

    @property
    def domain(self) -> frozenset[Variable]:
        """Домен отображения."""
        return frozenset(self._data)

    def compatible(self, other: "SolutionMapping") -> bool:
        """Совпадают ли отображения на общих переменных."""
        small, large = (self._data, other._data) if len(self._data) <= len(other._data) else (other._data, self._data)
        for var, value in small.items():
            found = large.get(var)
            if found is not None and found != value:
                return False
        return True

    def merge(self, other: "SolutionMapping") -> "SolutionMapping":
        """Объединение совместимых отображений."""
        if not other._data:
            return self
        if not self._data:
            return other
        merged = dict(self._data)
        merged.update(other._data)
        return SolutionMapping(merged)

    def extend(self, var: Variable, value: Term) -> "SolutionMapping":
        """Новое отображение с дополнительной переменной."""
        merged = dict(self._data)
        merged[var] = value
        return SolutionMapping(merged)

    def sort_key(self) -> tuple:
        """Канонический ключ порядка отображений."""
        return tuple(
            (var.name, term_sort_key(self._data[var])) for var in sorted(self._data, key=lambda v: v.name)
        )


def pattern_variables(pattern: GraphPattern) -> set[Variable]:
    """Все переменные, синтаксически присутствующие в шаблоне."""
    if isinstance(pattern, TriplePattern):
        result: set[Variable] = set()
        for position in (pattern.subject, pattern.predicate, pattern.object):
            result.update(term_variables(position))
        return result
    if isinstance(pattern, EmptyPattern):
        return set()
    if isinstance(pattern, (And, Union_, Opt, Minus)):
        return pattern_variables(pattern.left) | pattern_variables(pattern.right)
    if isinstance(pattern, Filter):
        return pattern_variables(pattern.inner) | expr_variables(pattern.expr)
    if isinstance(pattern, Bind):
        return pattern_variables(pattern.inner) | {pattern.var} | expr_variables(pattern.expr)
    raise TypeError(f"неизвестный шаблон: {pattern!r}")


def in_scope_variables(pattern: GraphPattern) -> set[Variable]:
    """Переменные, которые шаблон может связать."""
    if isinstance(pattern, TriplePattern):
        return pattern_variables(pattern)
    if isinstance(pattern, EmptyPattern):
        return set()
    if isinstance(pattern, (And, Union_, Opt)):
        return in_scope_variables(pattern.left) | in_scope_variables(pattern.right)
    if isinstance(pattern, Minus):
        return in_scope_variables(pattern.left)
    if isinstance(pattern, Filter):
        return in_scope_variables(pattern.inner)
    if isinstance(pattern, Bind):
        return in_scope_variables(pattern.inner) | {pattern.var}
    raise TypeError(f"неизвестный шаблон: {pattern!r}")


def expr_variables(expr: FilterExpr) -> set[Variable]:
    """Переменные выражения."""
    if isinstance(expr, TermExpr):
        return set(term_variables(expr.term))
    if isinstance(expr, (NotExpr, NegateExpr)):
        return expr_variables(expr.operand)
    return expr_variables(expr.left) | expr_variables(expr.right)


def sorted_mappings(mappings: Iterable[SolutionMapping]) -> list[SolutionMapping]:
    """Отображения в каноническом порядке."""
    return sorted(mappings, key=SolutionMapping.sort_key)
