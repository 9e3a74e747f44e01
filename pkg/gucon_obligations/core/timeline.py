"""Моменты времени с бесконечными границами и арифметика длительностей."""

import re
from dataclasses import dataclass
from datetime import datetime, timedelta
from enum import IntEnum
from functools import total_ordering

import isodate
import pytz

from gucon_obligations.exceptions import ParseError, UnsupportedDurationError

NEG_INF_TOKEN = "-INF"
POS_INF_TOKEN = "+INF"

# Компоненты xsd:dateTime: (шаблон, обязательность, причина ошибки)
_DATETIME_PARTS: tuple[tuple[re.Pattern, bool, str], ...] = (
    (re.compile(r"\d{4}"), True, "ожидался год из четырех цифр"),
    (re.compile(r"-"), True, "ожидался '-' после года"),
    (re.compile(r"\d{2}"), True, "ожидался месяц из двух цифр"),
    (re.compile(r"-"), True, "ожидался '-' после месяца"),
    (re.compile(r"\d{2}"), True, "ожидался день из двух цифр"),
    (re.compile(r"T"), True, "ожидался разделитель 'T'"),
    (re.compile(r"\d{2}"), True, "ожидался час из двух цифр"),
    (re.compile(r":"), True, "ожидался ':' после часа"),
    (re.compile(r"\d{2}"), True, "ожидались минуты из двух цифр"),
    (re.compile(r":"), True, "ожидался ':' после минут"),
    (re.compile(r"\d{2}"), True, "ожидались секунды из двух цифр"),
    (re.compile(r"\.\d+"), False, ""),
    (re.compile(r"Z|[+-]\d{2}:\d{2}"), True, "ожидалось явное смещение часового пояса"),
)


class InstantKind(IntEnum):
    """Вид момента времени. Порядок значений задает порядок на оси времени."""

    NEG_INFINITY = 0
    FINITE = 1
    POS_INFINITY = 2


@total_ordering
@dataclass(frozen=True, slots=True)
class TimeInstant:
    """Момент времени: конечный (с часовым поясом) либо одна из бесконечностей.

    Args:
        kind: Вид момента
        value: Дата и время с часовым поясом (только для конечных моментов)
    """

    kind: InstantKind
    value: datetime | None = None

    @classmethod
    def finite(cls, value: datetime) -> "TimeInstant":
        """Конечный момент из datetime с часовым поясом."""
        if value.tzinfo is None or value.utcoffset() is None:
            raise ValueError("момент времени требует явного часового пояса")
        return cls(InstantKind.FINITE, value)

    @property
    def is_finite(self) -> bool:
        """Является ли момент конечным."""
        return self.kind is InstantKind.FINITE

    def __lt__(self, other: "TimeInstant") -> bool:
        """Сравнение на абсолютной оси времени."""
        if not isinstance(other, TimeInstant):
            return NotImplemented
        if self.kind != other.kind:
            return self.kind < other.kind
        if self.kind is InstantKind.FINITE:
            return self.value < other.value
        return False

    def __str__(self) -> str:
        """Лексическая форма момента."""
        return format_instant(self)


NEG_INF = TimeInstant(InstantKind.NEG_INFINITY)
POS_INF = TimeInstant(InstantKind.POS_INFINITY)


def parse_datetime(lexical: str) -> TimeInstant:
    """Разбор xsd:dateTime с обязательным смещением либо маркеров "-INF"/"+INF".

    Доли секунды усекаются до миллисекунд.

    Args:
        lexical: Лексическая форма

    Returns:
        Соответствующий момент времени

    Raises:
        ParseError: Лексическая форма некорректна (столбец указывает позицию)
    """
    text = lexical.strip()
    if text == NEG_INF_TOKEN:
        return NEG_INF
    if text == POS_INF_TOKEN:
        return POS_INF

    pieces: list[str] = []
    pos = 0
    for pattern, required, reason in _DATETIME_PARTS:
        match = pattern.match(text, pos)
        if match is None:
            if required:
                raise ParseError(f"некорректный dateTime '{lexical}': {reason}", 1, pos + 1)
            pieces.append("")
            continue
        pieces.append(match.group(0))
        pos = match.end()
    if pos != len(text):
        raise ParseError(f"некорректный dateTime '{lexical}': лишние символы", 1, pos + 1)

    year, _, month, _, day, _, hour, _, minute, _, second, fraction, offset = pieces
    millis = int((fraction[1:] + "000")[:3]) if fraction else 0
    if offset == "Z":
        tz = pytz.utc
    else:
        sign = -1 if offset[0] == "-" else 1
        minutes = int(offset[1:3]) * 60 + int(offset[4:6])
        if minutes >= 24 * 60:
            raise ParseError(f"некорректный dateTime '{lexical}': смещение вне диапазона", 1, len(text) - 5)
        tz = pytz.FixedOffset(sign * minutes)
    try:
        if hour == "24" and minute == "00" and second == "00" and millis == 0:
            value = datetime(int(year), int(month), int(day), tzinfo=tz) + timedelta(days=1)
        else:
            value = datetime(
                int(year),
                int(month),
                int(day),
                int(hour),
                int(minute),
                int(second),
                millis * 1000,
                tzinfo=tz,
            )
    except ValueError as e:
        raise ParseError(f"некорректный dateTime '{lexical}': {e}", 1, 1) from e
    return TimeInstant.finite(value)


def format_instant(instant: TimeInstant) -> str:
    """Лексическая форма момента (смещение сохраняется, нулевое пишется как 'Z')."""
    if instant.kind is InstantKind.NEG_INFINITY:
        return NEG_INF_TOKEN
    if instant.kind is InstantKind.POS_INFINITY:
        return POS_INF_TOKEN
    value = instant.value
    timespec = "milliseconds" if value.microsecond else "seconds"
    text = value.isoformat(timespec=timespec)
    if value.utcoffset() == timedelta(0):
        text = text[: -len("+00:00")] + "Z"
    return text


def parse_duration(lexical: str) -> timedelta:
    """Разбор xsd:duration / xsd:dayTimeDuration без лет и месяцев.

    Raises:
        ParseError: Лексическая форма некорректна
        UnsupportedDurationError: Длительность содержит годы или месяцы
    """
    try:
        parsed = isodate.parse_duration(lexical.strip())
    except (isodate.ISO8601Error, ValueError) as e:
        raise ParseError(f"некорректная длительность '{lexical}': {e}", 1, 1) from e
    if isinstance(parsed, isodate.Duration):
        if parsed.years or parsed.months:
            raise UnsupportedDurationError(
                f"длительность '{lexical}' содержит годы или месяцы"
            )
        return parsed.tdelta
    return parsed


def format_duration(delta: timedelta) -> str:
    """Лексическая форма длительности."""
    return isodate.duration_isoformat(delta)


def add_duration(instant: TimeInstant, duration: timedelta | str) -> TimeInstant:
    """Сдвиг момента на длительность; бесконечности поглощают сложение."""
    if isinstance(duration, str):
        duration = parse_duration(duration)
    if not instant.is_finite:
        return instant
    return TimeInstant.finite(instant.value + duration)


class Ordering(IntEnum):
    """Результат сравнения двух моментов."""

    LESS = -1
    EQUAL = 0
    GREATER = 1


def compare_instants(a: TimeInstant, b: TimeInstant) -> Ordering:
    """Полный порядок: -INF < любой конечный момент < +INF."""
    if a < b:
        return Ordering.LESS
    if b < a:
        return Ordering.GREATER
    return Ordering.EQUAL
