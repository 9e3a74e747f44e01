"""Модели SQLAlchemy для хранения результатов бенчмарка."""

from gucon_obligations.models.base import Base
from gucon_obligations.models.Bench import BenchmarkRun, BenchmarkSample

__all__ = ["Base", "BenchmarkRun", "BenchmarkSample"]
