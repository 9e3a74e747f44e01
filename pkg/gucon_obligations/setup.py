"""Создание движков и сессий."""

import logging

from sqlalchemy.ext.asyncio import (
    AsyncEngine,
    AsyncSession,
    async_sessionmaker,
    create_async_engine,
)

from gucon_obligations.config import DbConfig
from gucon_obligations.models.base import Base

logger = logging.getLogger(__name__)


def create_engine(db_config: DbConfig, echo: bool = False) -> AsyncEngine:
    """Создает асинхронный движок SQLAlchemy для подключения к базе данных.

    Args:
        db_config (DbConfig): Конфигурация подключения.
        echo (bool, optional): Включить логирование SQL-запросов. По умолчанию False.

    Returns:
        AsyncEngine: Асинхронный движок SQLAlchemy; для MySQL с настроенным пулом соединений.
    """
    sqlalchemy_url = db_config.construct_sqlalchemy_url()

    if db_config.is_sqlite:
        return create_async_engine(sqlalchemy_url, echo=echo)

    engine = create_async_engine(
        sqlalchemy_url,
        echo=echo,
        pool_size=5,
        max_overflow=10,
        pool_timeout=15,
        pool_pre_ping=True,
        pool_recycle=1800,
        connect_args={
            "connect_timeout": 10,
            "autocommit": False,
        },
    )
    return engine


def create_session_pool(engine: AsyncEngine) -> async_sessionmaker[AsyncSession]:
    """Создает пул асинхронных сессий SQLAlchemy.

    Args:
        engine (AsyncEngine): Асинхронный движок SQLAlchemy.

    Returns:
        Фабрика для создания асинхронных сессий базы данных.
    """
    session_pool = async_sessionmaker(
        bind=engine,
        expire_on_commit=False,
        autoflush=False,
        autocommit=False,
    )
    return session_pool


async def init_schema(engine: AsyncEngine) -> None:
    """Создает таблицы результатов, если их еще нет."""
    async with engine.begin() as conn:
        await conn.run_sync(Base.metadata.create_all)
    logger.info(f"[БД] Схема готова: {engine.url.render_as_string(hide_password=True)}")
