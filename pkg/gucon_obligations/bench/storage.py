"""Сохранение результатов бенчмарка в БД."""

import logging

from gucon_obligations.bench.runner import BenchmarkResult
from gucon_obligations.config import BenchConfig, DbConfig
from gucon_obligations.repo.Bench.requests import BenchRequestsRepo
from gucon_obligations.setup import create_engine, create_session_pool, init_schema

logger = logging.getLogger(__name__)


async def store_result(result: BenchmarkResult, config: BenchConfig, db_config: DbConfig) -> int | None:
    """Записывает прогон, его замеры и аппроксимацию.

    Returns:
        Идентификатор прогона или None, если запись не удалась
    """
    engine = create_engine(db_config)
    try:
        await init_schema(engine)
        session_pool = create_session_pool(engine)
        async with session_pool() as session:
            repo = BenchRequestsRepo(session)
            run = await repo.runs.create_run(
                task_id=result.task.task_id,
                selectivity=str(result.task.selectivity),
                seed=config.generation.seed,
                steps=result.task.steps,
                fixed_size=result.task.fixed_size,
                isolation=config.isolation,
            )
            if run is None:
                return None
            samples = [(s.step, s.size, s.run_index, s.elapsed_ms) for s in result.samples]
            if not await repo.runs.add_samples(run.id, samples):
                return None
            if result.fit is not None:
                await repo.runs.finish_run(run.id, result.fit.slope, result.fit.intercept, result.fit.r2)
            logger.info(f"[БД] Прогон {run.id} сохранен: {len(samples)} замеров")
            return run.id
    finally:
        await engine.dispose()
