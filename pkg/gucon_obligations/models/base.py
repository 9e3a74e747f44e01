"""Базовые классы моделей результатов бенчмарка."""

from datetime import datetime
from typing import Annotated

from sqlalchemy import DateTime
from sqlalchemy.orm import DeclarativeBase, Mapped, mapped_column
from sqlalchemy.sql.functions import func

int_pk = Annotated[int, mapped_column(primary_key=True, autoincrement=True)]


class Base(DeclarativeBase):
    """Базовый класс для наследования в моделях."""

    pass


class TimestampMixin:
    """Миксин для даты создания."""

    created_at: Mapped[datetime] = mapped_column(DateTime, server_default=func.now())
