"""Классы избирательности правил."""

from dataclasses import dataclass
from enum import StrEnum

from gucon_obligations.algebra.evaluate import evaluate
from gucon_obligations.core.timeline import TimeInstant
from gucon_obligations.engine.rules import Rule
from gucon_obligations.kb.temporal import TemporalKB, render_kb, snapshot

FULL_SCALE_TRIPLES = 2_400_000
FULL_SCALE_LOW_MAX = 400
FULL_SCALE_MEDIUM_MAX = 1488


class Selectivity(StrEnum):
    """Класс по числу совпадений условия."""

    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


@dataclass(frozen=True, slots=True)
class SelectivityThresholds:
    """Верхние границы классов low и medium (включительно).

    Args:
        low_max: Наибольшее число совпадений для low
        medium_max: Наибольшее число совпадений для medium
    """

    low_max: float = FULL_SCALE_LOW_MAX
    medium_max: float = FULL_SCALE_MEDIUM_MAX

    @classmethod
    def scaled(cls, triples: int) -> "SelectivityThresholds":
        """Границы, линейно пересчитанные на размер базы."""
        factor = triples / FULL_SCALE_TRIPLES
        return cls(FULL_SCALE_LOW_MAX * factor, FULL_SCALE_MEDIUM_MAX * factor)

    def classify(self, count: int) -> Selectivity:
        """Класс для числа совпадений."""
        if count <= self.low_max:
            return Selectivity.LOW
        if count <= self.medium_max:
            return Selectivity.MEDIUM
        return Selectivity.HIGH


def classify_selectivity(
    rule: Rule,
    kb: TemporalKB,
    thresholds: SelectivityThresholds | None = None,
    at: TimeInstant | None = None,
) -> tuple[Selectivity, int]:
    """Класс и число совпадений условия правила.

    Args:
        rule: Правило
        kb: База знаний
        thresholds: Границы классов; по умолчанию пересчитанные на размер фактов базы
        at: Момент среза; по умолчанию база со всеми событиями
    """
    thresholds = thresholds or SelectivityThresholds.scaled(len(kb.dkb))
    graph = snapshot(kb, at) if at is not None else render_kb(kb)
    count = len(evaluate(rule.condition, graph))
    return thresholds.classify(count), count
