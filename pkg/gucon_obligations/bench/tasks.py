"""Задачи бенчмарка: рост числа правил и рост объема базы."""

from dataclasses import dataclass

from gucon_obligations.bench.selectivity import Selectivity
from gucon_obligations.exceptions import ConfigError

RULE_STEPS = (5, 9, 13, 17, 21)
RULE_STEPS_KB_SIZE = 406_000
KB_STEPS = (100_000, 208_000, 406_000, 604_000, 802_000, 1_000_000)
KB_STEPS_RULE_COUNT = 13


@dataclass(frozen=True, slots=True)
class BenchmarkTask:
    """Задача бенчмарка.

    Args:
        task_id: 1 - растет число правил при фиксированной базе, 2 - растет база при фиксированном числе правил
        steps: Размеры по шагам (число правил или число утверждений)
        fixed_size: Фиксированный размер второй оси
        selectivity: Класс избирательности правил
    """

    task_id: int
    steps: tuple[int, ...]
    fixed_size: int
    selectivity: Selectivity = Selectivity.HIGH

    def __post_init__(self):
        """Проверка номера задачи и шагов."""
        if self.task_id not in (1, 2):
            raise ConfigError(f"номер задачи должен быть 1 или 2: {self.task_id}")
        if not self.steps or any(step <= 0 for step in self.steps):
            raise ConfigError(f"шаги должны быть положительными: {self.steps}")
        if list(self.steps) != sorted(set(self.steps)):
            raise ConfigError(f"шаги должны строго возрастать: {self.steps}")
        if self.fixed_size <= 0:
            raise ConfigError(f"fixed_size должен быть положительным: {self.fixed_size}")

    @classmethod
    def default(cls, task_id: int) -> "BenchmarkTask":
        """Задача с шагами полного масштаба."""
        if task_id == 1:
            return cls(1, RULE_STEPS, RULE_STEPS_KB_SIZE)
        return cls(task_id, KB_STEPS, KB_STEPS_RULE_COUNT)

    @property
    def varies_rules(self) -> bool:
        """Растет ли на шагах число правил."""
        return self.task_id == 1

    def rule_count(self, step_size: int) -> int:
        """Число правил на шаге."""
        return step_size if self.varies_rules else self.fixed_size

    def kb_size(self, step_size: int) -> int:
        """Целевой размер базы на шаге."""
        return self.fixed_size if self.varies_rules else step_size
