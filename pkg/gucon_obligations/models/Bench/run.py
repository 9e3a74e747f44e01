"""Модели прогонов бенчмарка и отдельных замеров."""

from sqlalchemy import Float, ForeignKey, Integer, String
from sqlalchemy.orm import Mapped, mapped_column, relationship

from gucon_obligations.models.base import Base, TimestampMixin, int_pk


class BenchmarkRun(Base, TimestampMixin):
    """Прогон одной задачи бенчмарка.

    Methods:
        __repr__(): Возвращает строковое представление объекта BenchmarkRun.
    """

    __tablename__ = "benchmark_runs"

    __table_args__ = {
        "mysql_charset": "utf8mb4",
        "mysql_collate": "utf8mb4_unicode_ci",
    }

    id: Mapped[int_pk]
    task_id: Mapped[int] = mapped_column(Integer, nullable=False, comment="Номер задачи (1 или 2)")
    selectivity: Mapped[str] = mapped_column(String(16), nullable=False, comment="Класс избирательности правил")
    seed: Mapped[int] = mapped_column(Integer, nullable=False, comment="Зерно генерации")
    steps: Mapped[str] = mapped_column(String(255), nullable=False, comment="Размеры шагов через запятую")
    fixed_size: Mapped[int] = mapped_column(Integer, nullable=False, comment="Фиксированный размер второй оси")
    isolation: Mapped[str] = mapped_column(String(16), nullable=False, comment="Режим изоляции замеров")

    fit_slope: Mapped[float | None] = mapped_column(Float, nullable=True)
    fit_intercept: Mapped[float | None] = mapped_column(Float, nullable=True)
    fit_r2: Mapped[float | None] = mapped_column(Float, nullable=True)

    samples: Mapped[list["BenchmarkSample"]] = relationship(
        back_populates="run",
        cascade="all, delete-orphan",
        lazy="selectin",
    )

    def __repr__(self):
        """Возвращает строковое представление объекта BenchmarkRun."""
        return f"<BenchmarkRun {self.id} task={self.task_id} {self.selectivity} r2={self.fit_r2}>"


class BenchmarkSample(Base):
    """Один замер времени на шаге прогона."""

    __tablename__ = "benchmark_samples"

    id: Mapped[int_pk]
    run_id: Mapped[int] = mapped_column(
        Integer,
        ForeignKey("benchmark_runs.id", ondelete="CASCADE"),
        nullable=False,
    )
    step: Mapped[int] = mapped_column(Integer, nullable=False, comment="Номер шага")
    size: Mapped[int] = mapped_column(Integer, nullable=False, comment="Размер на шаге")
    run_index: Mapped[int] = mapped_column(Integer, nullable=False, comment="Номер замера на шаге")
    elapsed_ms: Mapped[float] = mapped_column(Float, nullable=False)

    run: Mapped[BenchmarkRun] = relationship(back_populates="samples")

    def __repr__(self):
        """Возвращает строковое представление объекта BenchmarkSample."""
        return f"<BenchmarkSample run={self.run_id} step={self.step} #{self.run_index} {self.elapsed_ms:.1f}ms>"
