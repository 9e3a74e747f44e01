"""Агрегатор репозиториев Bench."""

from dataclasses import dataclass

from sqlalchemy.ext.asyncio import AsyncSession

from gucon_obligations.repo.Bench.runs import BenchmarkRunRepo


@dataclass
class BenchRequestsRepo:
    """Репозиторий для обработки операций с БД Bench."""

    session: AsyncSession

    @property
    def runs(self) -> BenchmarkRunRepo:
        return BenchmarkRunRepo(self.session)
