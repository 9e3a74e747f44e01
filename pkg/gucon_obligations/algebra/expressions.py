"""Вычисление выражений FILTER и BIND над отображением.

Ошибка типа - значение `EXPR_ERROR`, а не исключение: FILTER считает ее
ложью, BIND оставляет переменную несвязанной.
"""

import operator
from datetime import timedelta
from decimal import Decimal, DivisionByZero, InvalidOperation

from gucon_obligations.algebra.patterns import (
    ArithExpr,
    CompareExpr,
    FilterExpr,
    LogicalExpr,
    NegateExpr,
    NotExpr,
    SolutionMapping,
    TermExpr,
)
from gucon_obligations.core.terms import Literal, QuotedTriple, Term, Variable, is_ground
from gucon_obligations.core.timeline import TimeInstant, add_duration, parse_duration
from gucon_obligations.exceptions import GuconError
from gucon_obligations.vocab import (
    DURATION_DATATYPES,
    NUMERIC_DATATYPES,
    XSD_BOOLEAN,
    XSD_DATETIME,
    XSD_DAYTIME_DURATION,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    XSD_STRING,
)


class ExprError:
    """Маркер ошибки вычисления."""

    _instance = None

    def __new__(cls):
        """Единственный экземпляр."""
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        """Возвращает строковое представление маркера."""
        return "EXPR_ERROR"


EXPR_ERROR = ExprError()

ExprValue = Term | ExprError

TRUE = Literal.of_boolean(True)
FALSE = Literal.of_boolean(False)


def _numeric(term: Term) -> Decimal | None:
    if isinstance(term, Literal) and term.datatype in NUMERIC_DATATYPES:
        value = term.as_number()
        if value is not None and value.is_finite():
            return value
    return None


def _instant(term: Term) -> TimeInstant | None:
    if isinstance(term, Literal):
        return term.as_instant()
    return None


def _duration(term: Term) -> timedelta | None:
    if isinstance(term, Literal) and term.datatype in DURATION_DATATYPES:
        try:
            return parse_duration(term.lexical)
        except GuconError:
            return None
    return None


def _boolean(term: Term) -> bool | None:
    if isinstance(term, Literal) and term.datatype == XSD_BOOLEAN:
        if term.lexical in ("true", "1"):
            return True
        if term.lexical in ("false", "0"):
            return False
    return None


def effective_boolean_value(value: ExprValue) -> bool | ExprError:
    """Эффективное логическое значение по правилам SPARQL."""
    if value is EXPR_ERROR or not isinstance(value, Literal):
        return EXPR_ERROR
    if value.datatype == XSD_BOOLEAN:
        result = _boolean(value)
        return EXPR_ERROR if result is None else result
    if value.datatype in NUMERIC_DATATYPES:
        number = _numeric(value)
        return EXPR_ERROR if number is None else number != 0
    if value.datatype == XSD_STRING:
        return value.lexical != ""
    return EXPR_ERROR


def eval_filter_expr(expr: FilterExpr, mapping: SolutionMapping) -> ExprValue:
    """Значение выражения при данном отображении.

    Returns:
        Основной терм (логические значения - литералы xsd:boolean) либо EXPR_ERROR
    """
    if isinstance(expr, TermExpr):
        return _resolve(expr.term, mapping)
    if isinstance(expr, NotExpr):
        value = effective_boolean_value(eval_filter_expr(expr.operand, mapping))
        if value is EXPR_ERROR:
            return EXPR_ERROR
        return FALSE if value else TRUE
    if isinstance(expr, LogicalExpr):
        return _logical(expr, mapping)
    if isinstance(expr, CompareExpr):
        left = eval_filter_expr(expr.left, mapping)
        right = eval_filter_expr(expr.right, mapping)
        if left is EXPR_ERROR or right is EXPR_ERROR:
            return EXPR_ERROR
        return compare_values(expr.op, left, right)
    if isinstance(expr, ArithExpr):
        left = eval_filter_expr(expr.left, mapping)
        right = eval_filter_expr(expr.right, mapping)
        if left is EXPR_ERROR or right is EXPR_ERROR:
            return EXPR_ERROR
        return arithmetic(expr.op, left, right)
    if isinstance(expr, NegateExpr):
        value = eval_filter_expr(expr.operand, mapping)
        if value is EXPR_ERROR:
            return EXPR_ERROR
        return _negate(value)
    raise TypeError(f"неизвестное выражение: {expr!r}")


def filter_holds(expr: FilterExpr, mapping: SolutionMapping) -> bool:
    """Истинно ли выражение; ошибка трактуется как ложь."""
    value = effective_boolean_value(eval_filter_expr(expr, mapping))
    return value is not EXPR_ERROR and value is True


def _resolve(term: Term, mapping: SolutionMapping) -> ExprValue:
    if isinstance(term, Variable):
        value = mapping.get(term)
        return EXPR_ERROR if value is None else value
    if isinstance(term, QuotedTriple) and not is_ground(term):
        parts = [_resolve(part, mapping) for part in (term.subject, term.predicate, term.object)]
        if any(part is EXPR_ERROR for part in parts):
            return EXPR_ERROR
        return QuotedTriple(*parts)
    return term


def _logical(expr: LogicalExpr, mapping: SolutionMapping) -> ExprValue:
    left = effective_boolean_value(eval_filter_expr(expr.left, mapping))
    right = effective_boolean_value(eval_filter_expr(expr.right, mapping))
    if expr.op == "&&":
        if left is False or right is False:
            return FALSE
        if left is EXPR_ERROR or right is EXPR_ERROR:
            return EXPR_ERROR
        return TRUE
    if left is True or right is True:
        return TRUE
    if left is EXPR_ERROR or right is EXPR_ERROR:
        return EXPR_ERROR
    return FALSE


_COMPARATORS = {
    "=": operator.eq,
    "!=": operator.ne,
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
}


def _ordering(op: str, left, right) -> Literal:
    return TRUE if _COMPARATORS[op](left, right) else FALSE


def compare_values(op: str, left: Term, right: Term) -> ExprValue:
    """Сравнение двух основных термов.

    Моменты времени сравниваются на оси времени, числа - по значению.
    Несопоставимые типы дают ошибку.
    """
    left_instant, right_instant = _instant(left), _instant(right)
    if left_instant is not None and right_instant is not None:
        return _ordering(op, left_instant, right_instant)
    left_number, right_number = _numeric(left), _numeric(right)
    if left_number is not None and right_number is not None:
        return _ordering(op, left_number, right_number)
    left_duration, right_duration = _duration(left), _duration(right)
    if left_duration is not None and right_duration is not None:
        return _ordering(op, left_duration, right_duration)
    left_bool, right_bool = _boolean(left), _boolean(right)
    if left_bool is not None and right_bool is not None:
        return _ordering(op, left_bool, right_bool)
    if isinstance(left, Literal) and isinstance(right, Literal):
        if left.datatype == right.datatype == XSD_STRING:
            return _ordering(op, left.lexical, right.lexical)
        if left.datatype == right.datatype and left.datatype not in _TYPED_VALUES and op in ("=", "!="):
            return _ordering(op, left.lexical, right.lexical)
        return EXPR_ERROR
    if op in ("=", "!="):
        return _ordering(op, left, right) if type(left) is type(right) else (FALSE if op == "=" else TRUE)
    return EXPR_ERROR


_TYPED_VALUES = NUMERIC_DATATYPES | DURATION_DATATYPES | {XSD_DATETIME, XSD_BOOLEAN}


def _number_literal(value: Decimal, left: Literal, right: Literal, op: str) -> Literal:
    if XSD_DOUBLE in (left.datatype, right.datatype):
        return Literal(repr(float(value)), XSD_DOUBLE)
    if left.datatype == right.datatype == XSD_INTEGER and op != "/":
        return Literal.of_integer(int(value))
    return Literal.of_decimal(value)


def arithmetic(op: str, left: Term, right: Term) -> ExprValue:
    """Числовая арифметика и арифметика моментов и длительностей."""
    left_number, right_number = _numeric(left), _numeric(right)
    if left_number is not None and right_number is not None:
        try:
            value = {
                "+": lambda: left_number + right_number,
                "-": lambda: left_number - right_number,
                "*": lambda: left_number * right_number,
                "/": lambda: left_number / right_number,
            }[op]()
        except (DivisionByZero, InvalidOperation, ZeroDivisionError):
            return EXPR_ERROR
        return _number_literal(value, left, right, op)

    left_instant, right_instant = _instant(left), _instant(right)
    left_duration, right_duration = _duration(left), _duration(right)
    try:
        if left_instant is not None and right_duration is not None and op in ("+", "-"):
            delta = right_duration if op == "+" else -right_duration
            return Literal.of_instant(add_duration(left_instant, delta))
        if left_duration is not None and right_instant is not None and op == "+":
            return Literal.of_instant(add_duration(right_instant, left_duration))
        if left_instant is not None and right_instant is not None and op == "-":
            if not (left_instant.is_finite and right_instant.is_finite):
                return EXPR_ERROR
            return _duration_literal(left_instant.value - right_instant.value)
        if left_duration is not None and right_duration is not None and op in ("+", "-"):
            delta = left_duration + right_duration if op == "+" else left_duration - right_duration
            return _duration_literal(delta)
    except (GuconError, OverflowError, ValueError):
        return EXPR_ERROR
    return EXPR_ERROR


def _duration_literal(delta: timedelta) -> Literal:
    literal = Literal.of_duration(delta)
    return Literal(literal.lexical, XSD_DAYTIME_DURATION)


def _negate(value: Term) -> ExprValue:
    number = _numeric(value)
    if number is not None:
        if value.datatype == XSD_INTEGER:
            return Literal.of_integer(int(-number))
        if value.datatype == XSD_DOUBLE:
            return Literal(repr(float(-number)), XSD_DOUBLE)
        return Literal(format(-number, "f"), XSD_DECIMAL)
    duration = _duration(value)
    if duration is not None:
        return _duration_literal(-duration)
    return EXPR_ERROR


__all__ = [
    "EXPR_ERROR",
    "ExprError",
    "ExprValue",
    "arithmetic",
    "compare_values",
    "effective_boolean_value",
    "eval_filter_expr",
    "filter_holds",
]
