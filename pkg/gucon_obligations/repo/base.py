"""Базовый класс для репозиториев."""

import logging

from sqlalchemy.exc import SQLAlchemyError
from sqlalchemy.ext.asyncio import AsyncSession

logger = logging.getLogger(__name__)


class BaseRepo:
    """Базовый репозиторий поверх асинхронной сессии БД результатов."""

    def __init__(self, session: AsyncSession):
        """Инициализация асинхронной сессии."""
        self.session: AsyncSession = session

    async def commit_or_rollback(self, context: str) -> bool:
        """Фиксирует транзакцию, при ошибке откатывает ее.

        Args:
            context: Что именно сохранялось (для журнала)

        Returns:
            True, если транзакция зафиксирована
        """
        try:
            await self.session.commit()
            return True
        except SQLAlchemyError as e:
            logger.error(f"[БД] Ошибка {context}: {e}")
            await self.session.rollback()
            return False

    async def __aenter__(self):
        return self

    async def __aexit__(self, exc_type, exc_val, exc_tb):
        await self.session.close()
