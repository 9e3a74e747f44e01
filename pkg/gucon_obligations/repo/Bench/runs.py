"""Репозиторий прогонов бенчмарка."""

import logging
from typing import Iterable, Sequence

from sqlalchemy import select
from sqlalchemy.exc import SQLAlchemyError

from gucon_obligations.models.Bench.run import BenchmarkRun, BenchmarkSample
from gucon_obligations.repo.base import BaseRepo

logger = logging.getLogger(__name__)


class BenchmarkRunRepo(BaseRepo):
    """Репозиторий для работы с прогонами и замерами."""

    async def create_run(
        self,
        task_id: int,
        selectivity: str,
        seed: int,
        steps: Iterable[int],
        fixed_size: int,
        isolation: str,
    ) -> BenchmarkRun | None:
        """Создать запись о прогоне."""
        run = BenchmarkRun(
            task_id=task_id,
            selectivity=selectivity,
            seed=seed,
            steps=",".join(str(step) for step in steps),
            fixed_size=fixed_size,
            isolation=isolation,
        )

        self.session.add(run)
        if not await self.commit_or_rollback(f"создания прогона задачи {task_id}"):
            return None
        await self.session.refresh(run)
        return run

    async def add_samples(
        self,
        run_id: int,
        samples: Iterable[tuple[int, int, int, float]],
    ) -> bool:
        """Добавить замеры (шаг, размер, номер замера, мс)."""
        rows = [
            BenchmarkSample(run_id=run_id, step=step, size=size, run_index=run_index, elapsed_ms=elapsed_ms)
            for step, size, run_index, elapsed_ms in samples
        ]

        self.session.add_all(rows)
        return await self.commit_or_rollback(f"записи замеров прогона {run_id}")

    async def get_run(self, run_id: int) -> BenchmarkRun | None:
        """Получить прогон по идентификатору."""
        try:
            return await self.session.get(BenchmarkRun, run_id)
        except SQLAlchemyError as e:
            logger.error(f"[БД] Ошибка получения прогона {run_id}: {e}")
            return None

    async def finish_run(self, run_id: int, slope: float, intercept: float, r2: float) -> BenchmarkRun | None:
        """Сохранить линейную аппроксимацию прогона."""
        run = await self.get_run(run_id)

        if not run:
            return None

        run.fit_slope = slope
        run.fit_intercept = intercept
        run.fit_r2 = r2

        if not await self.commit_or_rollback(f"завершения прогона {run_id}"):
            return None
        await self.session.refresh(run)
        return run

    async def get_runs(self, task_id: int | None = None, limit: int | None = None) -> Sequence[BenchmarkRun]:
        """Получить прогоны, новые первыми."""
        filters = []

        if task_id is not None:
            filters.append(BenchmarkRun.task_id == task_id)

        query = select(BenchmarkRun).where(*filters).order_by(BenchmarkRun.id.desc())
        if limit is not None:
            query = query.limit(limit)

        try:
            result = await self.session.execute(query)
            return result.scalars().all()
        except SQLAlchemyError as e:
            logger.error(f"[БД] Ошибка получения списка прогонов: {e}")
            return []

    async def get_samples(self, run_id: int) -> Sequence[BenchmarkSample]:
        """Получить замеры прогона по порядку шагов."""
        query = (
            select(BenchmarkSample)
            .where(BenchmarkSample.run_id == run_id)
            .order_by(BenchmarkSample.step, BenchmarkSample.run_index)
        )

        try:
            result = await self.session.execute(query)
            return result.scalars().all()
        except SQLAlchemyError as e:
            logger.error(f"[БД] Ошибка получения замеров прогона {run_id}: {e}")
            return []

    async def delete_run(self, run_id: int) -> bool:
        """Удалить прогон вместе с замерами."""
        run = await self.get_run(run_id)

        if not run:
            return False

        await self.session.delete(run)
        return await self.commit_or_rollback(f"удаления прогона {run_id}")
