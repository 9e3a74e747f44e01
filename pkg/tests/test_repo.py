import asyncio

import pytest

from gucon_obligations.bench import BenchmarkTask, GenerationConfig
from gucon_obligations.bench.runner import BenchmarkResult, LinearFit, Sample, StepSummary
from gucon_obligations.bench.storage import store_result
from gucon_obligations.config import BenchConfig, DbConfig
from gucon_obligations.repo.Bench.requests import BenchRequestsRepo
from gucon_obligations.setup import create_engine, create_session_pool, init_schema


@pytest.fixture
def db_config(tmp_path):
    return DbConfig(database=str(tmp_path / "runs.sqlite3"))


async def _with_repo(db_config, action):
    engine = create_engine(db_config)
    try:
        await init_schema(engine)
        session_pool = create_session_pool(engine)
        async with session_pool() as session:
            return await action(BenchRequestsRepo(session))
    finally:
        await engine.dispose()


def test_run_lifecycle(db_config):
    async def scenario(repo):
        run = await repo.runs.create_run(1, "high", 42, (5, 9, 13), 406_000, "process")
        assert run is not None
        assert run.steps == "5,9,13"
        assert run.fit_r2 is None

        samples = [(1, 5, 0, 12.5), (1, 5, 1, 11.0), (2, 9, 0, 20.25)]
        assert await repo.runs.add_samples(run.id, samples)
        stored = await repo.runs.get_samples(run.id)
        assert [(s.step, s.size, s.run_index, s.elapsed_ms) for s in stored] == samples

        finished = await repo.runs.finish_run(run.id, 2.0, 1.0, 0.99)
        assert (finished.fit_slope, finished.fit_intercept, finished.fit_r2) == (2.0, 1.0, 0.99)

        other = await repo.runs.create_run(2, "high", 42, (100_000, 208_000), 13, "inline")
        assert [r.id for r in await repo.runs.get_runs()] == [other.id, run.id]
        assert [r.id for r in await repo.runs.get_runs(task_id=1)] == [run.id]
        assert len(await repo.runs.get_runs(limit=1)) == 1

        assert await repo.runs.delete_run(other.id)
        assert await repo.runs.get_run(other.id) is None
        assert not await repo.runs.delete_run(other.id)
        assert await repo.runs.finish_run(other.id, 0.0, 0.0, 0.0) is None

    asyncio.run(_with_repo(db_config, scenario))


def test_store_result(db_config):
    task = BenchmarkTask(1, (1, 2), 2000)
    result = BenchmarkResult(
        task,
        samples=[Sample(1, 1, i, 10.0 + i) for i in range(3)] + [Sample(2, 2, i, 20.0 + i) for i in range(3)],
        summaries=[StepSummary(1, 1, 11.0, 10.0, 12.0), StepSummary(2, 2, 21.0, 20.0, 22.0)],
        fit=LinearFit(10.0, 1.0, 1.0),
    )
    config = BenchConfig(generation=GenerationConfig(seed=5), task=task, runs=3, trim=1, isolation="inline")

    run_id = asyncio.run(store_result(result, config, db_config))
    assert run_id is not None

    async def scenario(repo):
        run = await repo.runs.get_run(run_id)
        assert (run.task_id, run.seed, run.isolation, run.fit_slope) == (1, 5, "inline", 10.0)
        assert len(await repo.runs.get_samples(run_id)) == 6

    asyncio.run(_with_repo(db_config, scenario))
