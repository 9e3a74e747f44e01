"""Репозитории Bench."""

from gucon_obligations.repo.Bench.requests import BenchRequestsRepo
from gucon_obligations.repo.Bench.runs import BenchmarkRunRepo

__all__ = [
    "BenchmarkRunRepo",
    "BenchRequestsRepo",
]
