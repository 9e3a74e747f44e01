"""Модели Bench"""

from gucon_obligations.models.Bench.run import BenchmarkRun, BenchmarkSample

__all__ = [
    "BenchmarkRun",
    "BenchmarkSample",
]
