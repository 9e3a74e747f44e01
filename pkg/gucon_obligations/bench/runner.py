"""Прогон задач бенчмарка: подготовка файлов, замеры, статистика."""

import csv
import logging
import subprocess
import sys
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from gucon_obligations.bench.generator import GenerationConfig, generate_dataset
from gucon_obligations.bench.rules import generate_rules
from gucon_obligations.bench.tasks import BenchmarkTask
from gucon_obligations.config import BenchConfig
from gucon_obligations.core.timeline import TimeInstant, format_instant
from gucon_obligations.engine.compliance import check_compliance
from gucon_obligations.engine.states import get_obligation_states
from gucon_obligations.exceptions import FixtureMissingError, GuconError
from gucon_obligations.io.policy import load_policy_file
from gucon_obligations.io.rules import format_policy_text
from gucon_obligations.io.turtle import load_graph_file, write_graph_file
from gucon_obligations.kb.temporal import TemporalKB, load_kb, render_kb

logger = logging.getLogger(__name__)

SAMPLE_COLUMNS = ("step", "size", "run_index", "elapsed_ms")
SUMMARY_COLUMNS = ("step", "size", "trimmed_mean_ms", "min", "max", "fit_slope", "fit_intercept", "r2")


@dataclass(frozen=True, slots=True)
class StepFixture:
    """Файлы одного шага.

    Args:
        step: Номер шага (с единицы)
        size: Размер на шаге
        kb_path: Файл базы
        policy_path: Файл политики
        evaluation_time: Момент оценки
    """

    step: int
    size: int
    kb_path: Path
    policy_path: Path
    evaluation_time: TimeInstant


@dataclass(frozen=True, slots=True)
class Sample:
    """Один замер."""

    step: int
    size: int
    run_index: int
    elapsed_ms: float


@dataclass(frozen=True, slots=True)
class StepSummary:
    """Итог шага: усеченное среднее, минимум и максимум."""

    step: int
    size: int
    trimmed_mean_ms: float
    min_ms: float
    max_ms: float


@dataclass(frozen=True, slots=True)
class LinearFit:
    """Прямая наименьших квадратов и коэффициент детерминации."""

    slope: float
    intercept: float
    r2: float


@dataclass(slots=True)
class BenchmarkResult:
    """Результат прогона задачи."""

    task: BenchmarkTask
    samples: list[Sample] = field(default_factory=list)
    summaries: list[StepSummary] = field(default_factory=list)
    fit: LinearFit | None = None


def fixture_paths(out_dir: Path, step: int) -> tuple[Path, Path]:
    """Пути файлов базы и политики для шага."""
    return out_dir / f"step-{step:02d}-kb.ttls", out_dir / f"step-{step:02d}-policy.gucon"


def _write_step(out_dir: Path, step: int, size: int, kb: TemporalKB, rules, evaluation_time) -> StepFixture:
    kb_path, policy_path = fixture_paths(out_dir, step)
    write_graph_file(render_kb(kb), kb_path)
    policy_path.write_text(format_policy_text(list(rules)), encoding="utf-8")
    return StepFixture(step, size, kb_path, policy_path, evaluation_time)


def prepare_fixtures(task: BenchmarkTask, config: BenchConfig, out_dir: str | Path) -> list[StepFixture]:
    """Генерация файлов базы и политики для всех шагов задачи.

    В задаче 1 база одна, а политики растут префиксами одного набора правил;
    события шага относятся только к его правилам.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    generation = config.generation
    fixtures: list[StepFixture] = []

    if task.varies_rules:
        step_generation = replace(generation, triple_target=task.fixed_size)
        dataset = generate_dataset(step_generation)
        generated = generate_rules(dataset, max(task.steps), step_generation, task.selectivity)
        for step, size in enumerate(task.steps, start=1):
            rules = generated.document.rules[:size]
            actions = {rule.action.action.action for rule in rules}
            events = [event for event in generated.events if event.action in actions]
            kb = TemporalKB(dataset, frozenset(events))
            fixtures.append(_write_step(out_dir, step, size, kb, rules, generation.evaluation_time))
    else:
        for step, size in enumerate(task.steps, start=1):
            step_generation = replace(generation, triple_target=size)
            dataset = generate_dataset(step_generation)
            generated = generate_rules(dataset, task.fixed_size, step_generation, task.selectivity)
            kb = TemporalKB(dataset, frozenset(generated.events))
            fixtures.append(
                _write_step(out_dir, step, size, kb, generated.document.rules, generation.evaluation_time)
            )

    logger.info(f"[Бенчмарк] Задача {task.task_id}: подготовлено шагов {len(fixtures)} в {out_dir}")
    return fixtures


def load_fixtures(task: BenchmarkTask, generation: GenerationConfig, out_dir: str | Path) -> list[StepFixture]:
    """Уже подготовленные файлы шагов.

    Raises:
        FixtureMissingError: Нет файла для одного из шагов
    """
    out_dir = Path(out_dir)
    fixtures = []
    for step, size in enumerate(task.steps, start=1):
        kb_path, policy_path = fixture_paths(out_dir, step)
        for path in (kb_path, policy_path):
            if not path.is_file():
                raise FixtureMissingError(step, path)
        fixtures.append(StepFixture(step, size, kb_path, policy_path, generation.evaluation_time))
    return fixtures


def measure_once(kb_path: Path, policy_path: Path, t: TimeInstant, workers: int = 1) -> float:
    """Один замер от чтения файлов до вердикта соответствия, мс."""
    start = time.perf_counter()
    kb = load_kb(load_graph_file(kb_path), kb_iri=kb_path.resolve().as_uri())
    policy = load_policy_file(policy_path)
    states = get_obligation_states(policy, kb, t, workers=workers)
    check_compliance(policy, kb, t, states=states)
    return (time.perf_counter() - start) * 1000.0


def _measure_in_process(fixture: StepFixture, workers: int) -> float:
    command = [
        sys.executable,
        "-m",
        "gucon_obligations.bench.probe",
        str(fixture.kb_path),
        str(fixture.policy_path),
        format_instant(fixture.evaluation_time),
        "--workers",
        str(workers),
    ]
    completed = subprocess.run(command, capture_output=True, text=True)
    if completed.returncode != 0:
        raise GuconError(f"шаг {fixture.step}: замер завершился с кодом {completed.returncode}: {completed.stderr.strip()}")
    return float(completed.stdout.strip().splitlines()[-1])


def timing_stats(samples: Sequence[float], trim: int = 2) -> tuple[float, float, float]:
    """Среднее без trim самых быстрых и trim самых медленных замеров, минимум и максимум.

    Raises:
        ValueError: Замеров не больше, чем отбрасывается
    """
    if len(samples) <= 2 * trim:
        raise ValueError(f"нужно больше {2 * trim} замеров, получено {len(samples)}")
    ordered = sorted(samples)
    kept = ordered[trim : len(ordered) - trim]
    return float(np.mean(kept)), float(ordered[0]), float(ordered[-1])


def linear_fit(xs: Sequence[float], ys: Sequence[float]) -> LinearFit:
    """Линейная аппроксимация методом наименьших квадратов."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if len(x) < 2:
        raise ValueError("для аппроксимации нужно хотя бы две точки")
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sum((y - (slope * x + intercept)) ** 2))
    total = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if total == 0.0 else 1.0 - residual / total
    return LinearFit(float(slope), float(intercept), r2)


def run_benchmark(task: BenchmarkTask, fixtures: Sequence[StepFixture], config: BenchConfig) -> BenchmarkResult:
    """Замеры по всем шагам задачи.

    Raises:
        FixtureMissingError: Нет файла шага
    """
    result = BenchmarkResult(task)
    for fixture in fixtures:
        for path in (fixture.kb_path, fixture.policy_path):
            if not path.is_file():
                raise FixtureMissingError(fixture.step, path)

        elapsed: list[float] = []
        for run_index in range(config.runs):
            if config.isolation == "process":
                value = _measure_in_process(fixture, config.workers)
            else:
                value = measure_once(fixture.kb_path, fixture.policy_path, fixture.evaluation_time, config.workers)
            elapsed.append(value)
            result.samples.append(Sample(fixture.step, fixture.size, run_index, value))

        mean, low, high = timing_stats(elapsed, config.trim)
        result.summaries.append(StepSummary(fixture.step, fixture.size, mean, low, high))
        logger.info(f"[Бенчмарк] Шаг {fixture.step} (размер {fixture.size}): {mean:.1f} мс [{low:.1f}; {high:.1f}]")

    if len(result.summaries) >= 2:
        result.fit = linear_fit(
            [summary.size for summary in result.summaries],
            [summary.trimmed_mean_ms for summary in result.summaries],
        )
        logger.info(f"[Бенчмарк] Аппроксимация: наклон {result.fit.slope:.4f}, R2 {result.fit.r2:.3f}")
    return result


def write_csv(result: BenchmarkResult, samples_path: str | Path, summary_path: str | Path) -> None:
    """Запись замеров и итогов шагов в CSV."""
    with Path(samples_path).open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(SAMPLE_COLUMNS)
        for sample in result.samples:
            writer.writerow((sample.step, sample.size, sample.run_index, f"{sample.elapsed_ms:.3f}"))

    fit = result.fit
    fit_columns = (
        (f"{fit.slope:.6f}", f"{fit.intercept:.6f}", f"{fit.r2:.6f}") if fit is not None else ("", "", "")
    )
    with Path(summary_path).open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(SUMMARY_COLUMNS)
        for summary in result.summaries:
            writer.writerow(
                (
                    summary.step,
                    summary.size,
                    f"{summary.trimmed_mean_ms:.3f}",
                    f"{summary.min_ms:.3f}",
                    f"{summary.max_ms:.3f}",
                    *fit_columns,
                )
            )
    logger.info(f"[Бенчмарк] CSV записаны: {samples_path}, {summary_path}")
