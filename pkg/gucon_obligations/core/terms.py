"""Термы RDF-star: IRI, литералы, переменные и вложенные тройки."""

from dataclasses import dataclass, field
from datetime import timedelta
from decimal import Decimal, InvalidOperation
from typing import Iterator, Union

from gucon_obligations.core.timeline import (
    InstantKind,
    TimeInstant,
    format_duration,
    format_instant,
    parse_datetime,
)
from gucon_obligations.exceptions import GuconError
from gucon_obligations.vocab import (
    XSD_BOOLEAN,
    XSD_DATETIME,
    XSD_DECIMAL,
    XSD_DURATION,
    XSD_INTEGER,
    XSD_STRING,
)


@dataclass(frozen=True, slots=True)
class Iri:
    """IRI.

    Args:
        value: Полный IRI
    """

    value: str

    def __str__(self) -> str:
        """Запись IRI в угловых скобках."""
        return f"<{self.value}>"


@dataclass(frozen=True, slots=True, eq=False)
class Literal:
    """Типизированный литерал.

    Литералы xsd:dateTime сравниваются по моменту на оси времени,
    остальные - по паре (лексическая форма, тип данных).

    Args:
        lexical: Лексическая форма
        datatype: IRI типа данных
    """

    lexical: str
    datatype: str = XSD_STRING
    _key: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        """Вычисление ключа равенства."""
        key: tuple = (self.datatype, self.lexical)
        if self.datatype == XSD_DATETIME:
            try:
                key = (XSD_DATETIME, parse_datetime(self.lexical))
            except GuconError:
                pass
        object.__setattr__(self, "_key", key)

    def __eq__(self, other) -> bool:
        """Равенство по ключу литерала."""
        if not isinstance(other, Literal):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        """Хеш, согласованный с равенством."""
        return hash(self._key)

    def __str__(self) -> str:
        """Запись литерала в стиле N-Triples."""
        return f'"{escape_string(self.lexical)}"^^<{self.datatype}>'

    @classmethod
    def of_string(cls, value: str) -> "Literal":
        """Строковый литерал."""
        return cls(value, XSD_STRING)

    @classmethod
    def of_integer(cls, value: int) -> "Literal":
        """Целочисленный литерал."""
        return cls(str(value), XSD_INTEGER)

    @classmethod
    def of_decimal(cls, value: Decimal) -> "Literal":
        """Десятичный литерал."""
        text = format(value, "f")
        if "." not in text:
            text += ".0"
        return cls(text, XSD_DECIMAL)

    @classmethod
    def of_boolean(cls, value: bool) -> "Literal":
        """Логический литерал."""
        return cls("true" if value else "false", XSD_BOOLEAN)

    @classmethod
    def of_instant(cls, value: TimeInstant) -> "Literal":
        """Литерал xsd:dateTime."""
        return cls(format_instant(value), XSD_DATETIME)

    @classmethod
    def of_duration(cls, value: timedelta) -> "Literal":
        """Литерал xsd:duration."""
        return cls(format_duration(value), XSD_DURATION)

    def as_instant(self) -> TimeInstant | None:
        """Момент времени для литерала xsd:dateTime, иначе None."""
        if self.datatype == XSD_DATETIME and isinstance(self._key[1], TimeInstant):
            return self._key[1]
        return None

    def as_number(self) -> Decimal | None:
        """Числовое значение для целых и десятичных литералов."""
        try:
            return Decimal(self.lexical)
        except InvalidOperation:
            return None


@dataclass(frozen=True, slots=True)
class Variable:
    """Переменная графового шаблона (без префикса '?').

    Args:
        name: Имя переменной
    """

    name: str

    def __str__(self) -> str:
        """Запись переменной."""
        return f"?{self.name}"


@dataclass(frozen=True, slots=True)
class QuotedTriple:
    """Вложенная тройка RDF-star, используемая как терм.

    Args:
        subject: Субъект
        predicate: Предикат
        object: Объект
    """

    subject: "Term"
    predicate: "Term"
    object: "Term"

    def __str__(self) -> str:
        """Запись вложенной тройки."""
        return f"<< {self.subject} {self.predicate} {self.object} >>"

    def as_triple(self) -> "Triple":
        """Та же тройка как утверждение графа."""
        return Triple(self.subject, self.predicate, self.object)


Term = Union[Iri, Literal, Variable, QuotedTriple]


@dataclass(frozen=True, slots=True)
class Triple:
    """Утверждение графа RDF-star.

    Args:
        subject: IRI или вложенная тройка
        predicate: IRI
        object: Любой основной терм
    """

    subject: Term
    predicate: Term
    object: Term

    def __str__(self) -> str:
        """Запись утверждения в стиле N-Triples."""
        return f"{self.subject} {self.predicate} {self.object} ."

    def as_term(self) -> QuotedTriple:
        """Та же тройка как вложенный терм."""
        return QuotedTriple(self.subject, self.predicate, self.object)


def escape_string(value: str) -> str:
    """Экранирование строки для записи в кавычках."""
    return (
        value.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
        .replace("\t", "\\t")
    )


def is_ground(term: Term) -> bool:
    """Не содержит ли терм переменных."""
    if isinstance(term, Variable):
        return False
    if isinstance(term, QuotedTriple):
        return is_ground(term.subject) and is_ground(term.predicate) and is_ground(term.object)
    return True


def term_variables(term: Term) -> Iterator[Variable]:
    """Переменные терма, включая вложенные тройки."""
    if isinstance(term, Variable):
        yield term
    elif isinstance(term, QuotedTriple):
        yield from term_variables(term.subject)
        yield from term_variables(term.predicate)
        yield from term_variables(term.object)


def subterms(term: Term) -> Iterator[Term]:
    """Сам терм и все его вложенные термы."""
    yield term
    if isinstance(term, QuotedTriple):
        yield from subterms(term.subject)
        yield from subterms(term.predicate)
        yield from subterms(term.object)


def term_sort_key(term: Term) -> tuple:
    """Канонический ключ порядка термов.

    Литералы xsd:dateTime упорядочиваются по нормализованному в UTC моменту,
    чтобы порядок был согласован с равенством. "-INF" идет раньше конечных
    моментов, "+INF" позже.
    """
    if isinstance(term, Iri):
        return (0, term.value)
    if isinstance(term, Literal):
        instant = term.as_instant()
        if instant is not None:
            timestamp = instant.value.timestamp() if instant.is_finite else 0.0
            return (1, term.datatype, int(instant.kind), timestamp, "")
        return (1, term.datatype, len(InstantKind), 0.0, term.lexical)
    if isinstance(term, QuotedTriple):
        return (2, term_sort_key(term.subject), term_sort_key(term.predicate), term_sort_key(term.object))
    return (3, term.name)


def triple_sort_key(triple: Triple) -> tuple:
    """Канонический ключ порядка утверждений."""
    return (
        term_sort_key(triple.subject),
        term_sort_key(triple.predicate),
        term_sort_key(triple.object),
    )
