"""Конфигурация отчетов, бенчмарка и подключения к БД результатов."""

import os
import tomllib
from dataclasses import dataclass, field, fields
from datetime import datetime
from pathlib import Path
from typing import Any, Literal

import pytz
from pytz.tzinfo import BaseTzInfo
from sqlalchemy import URL, make_url
from sqlalchemy.exc import ArgumentError

from gucon_obligations.bench.generator import GenerationConfig
from gucon_obligations.bench.selectivity import Selectivity
from gucon_obligations.bench.tasks import BenchmarkTask
from gucon_obligations.core.timeline import TimeInstant, parse_datetime, parse_duration
from gucon_obligations.exceptions import ConfigError, GuconError
from gucon_obligations.vocab import EXP

ENV_BASE_NAMESPACE = "GUCON_BASE_NAMESPACE"
ENV_TZ = "GUCON_TZ"

Isolation = Literal["process", "inline"]


@dataclass
class DbConfig:
    """Конфигурация подключения к базе данных результатов.

    Attributes:
        driver: Драйвер: "aiosqlite" для локального файла или "aiomysql" для общего сервера
        database: Путь к файлу SQLite либо имя базы MySQL
        host: Хост сервера MySQL
        user: Логин для авторизации в базе данных
        password: Пароль для авторизации в базе данных
        port: Порт для подключения к базе данных (по умолчанию 3306)
    """

    driver: str = "aiosqlite"
    database: str = "gucon-bench.sqlite3"
    host: str = "localhost"
    user: str = "root"
    password: str = ""
    port: int = 3306

    @property
    def is_sqlite(self) -> bool:
        """Локальная ли это база SQLite."""
        return self.driver == "aiosqlite"

    def construct_sqlalchemy_url(self) -> URL:
        """Создание SQLAlchemy URL для подключения к базе данных.

        Returns:
            Объект SQLAlchemy URL для подключения к базе данных

        Raises:
            ConfigError: Неизвестный драйвер
        """
        if self.is_sqlite:
            return URL.create("sqlite+aiosqlite", database=self.database)
        if self.driver != "aiomysql":
            raise ConfigError(f"неизвестный драйвер БД: {self.driver}")

        connection_url = URL.create(
            f"mysql+{self.driver}",
            username=self.user,
            password=self.password,
            host=self.host,
            port=self.port,
            database=self.database,
            query={
                "charset": "utf8mb4",
                "use_unicode": "1",
            },
        )

        return connection_url

    @classmethod
    def from_url(cls, value: str) -> "DbConfig":
        """Конфигурация из URL вида mysql+aiomysql://... либо из пути к файлу SQLite."""
        if "://" not in value:
            return cls(database=value)
        try:
            url = make_url(value)
        except ArgumentError as e:
            raise ConfigError(f"некорректный URL БД: {e}") from e
        if url.get_backend_name() == "sqlite":
            return cls(database=url.database or "")
        return cls(
            driver=url.get_driver_name() or "aiomysql",
            database=url.database or "",
            host=url.host or "localhost",
            user=url.username or "root",
            password=url.password or "",
            port=url.port or 3306,
        )


@dataclass
class ReportConfig:
    """Параметры отчетов о соответствии.

    Attributes:
        base_namespace: Пространство имен новых IRI
        tz: Часовой пояс момента формирования отчета
    """

    base_namespace: str = str(EXP)
    tz: BaseTzInfo = pytz.utc

    @classmethod
    def from_env(cls) -> "ReportConfig":
        """Конфигурация с учетом переменных GUCON_BASE_NAMESPACE и GUCON_TZ."""
        config = cls()
        if namespace := os.environ.get(ENV_BASE_NAMESPACE):
            config.base_namespace = namespace
        if tz := os.environ.get(ENV_TZ):
            try:
                config.tz = pytz.timezone(tz)
            except pytz.UnknownTimeZoneError as e:
                raise ConfigError(f"неизвестный часовой пояс {tz}") from e
        return config


@dataclass
class BenchConfig:
    """Конфигурация запуска бенчмарка.

    Attributes:
        generation: Параметры генерации данных
        task: Задача
        runs: Замеров на шаг
        trim: Отбрасываемых замеров с каждого края
        isolation: "process" - новый интерпретатор на замер, "inline" - тот же процесс
        workers: Потоков для правил внутри движка
        database: Куда сохранять прогоны (необязательно)
    """

    generation: GenerationConfig = field(default_factory=GenerationConfig)
    task: BenchmarkTask = field(default_factory=lambda: BenchmarkTask.default(1))
    runs: int = 10
    trim: int = 2
    isolation: Isolation = "process"
    workers: int = 1
    database: DbConfig | None = None

    def __post_init__(self):
        """Проверка протокола замеров."""
        if self.trim < 0 or self.runs <= 2 * self.trim:
            raise ConfigError(f"замеров ({self.runs}) должно быть больше, чем отбрасывается ({2 * self.trim})")
        if self.isolation not in ("process", "inline"):
            raise ConfigError(f"неизвестный режим изоляции: {self.isolation}")
        if self.workers < 1:
            raise ConfigError(f"workers должен быть положительным: {self.workers}")

    @classmethod
    def from_file(cls, path: str | Path) -> "BenchConfig":
        """Чтение конфигурации из файла TOML.

        Таблицы: [generation], [task], [run], [database]. Неизвестные ключи - ошибка.

        Raises:
            ConfigError: Файл не читается или содержит некорректные значения
        """
        path = Path(path)
        try:
            data = tomllib.loads(path.read_text(encoding="utf-8"))
        except (OSError, tomllib.TOMLDecodeError) as e:
            raise ConfigError(f"{path}: {e}") from e
        try:
            return cls.from_dict(data)
        except (TypeError, ValueError, GuconError) as e:
            raise ConfigError(f"{path}: {e}") from e

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "BenchConfig":
        """Сборка конфигурации из разобранных таблиц."""
        _check_keys("", data, {"generation", "task", "run", "database"})
        generation = _generation(data.get("generation", {}))
        task = _task(data.get("task", {}))
        run = data.get("run", {})
        _check_keys("run", run, {"runs", "trim", "isolation", "workers"})
        database = data.get("database")
        if database is not None:
            _check_keys("database", database, {f.name for f in fields(DbConfig)})
            database = DbConfig(**database)
        return cls(generation=generation, task=task, database=database, **run)


def _check_keys(table: str, data: dict[str, Any], allowed: set[str]) -> None:
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"неизвестные ключи в [{table or '-'}]: {', '.join(sorted(unknown))}")


def _generation(data: dict[str, Any]) -> GenerationConfig:
    _check_keys("generation", data, {f.name for f in fields(GenerationConfig)})
    values = dict(data)
    origin = values.get("time_origin")
    if isinstance(origin, datetime):
        values["time_origin"] = TimeInstant.finite(origin)
    elif origin is not None:
        values["time_origin"] = parse_datetime(str(origin))
    if "horizon" in values:
        values["horizon"] = parse_duration(str(values["horizon"]))
    for key in ("admissions_per_patient", "admission_weights", "codes_per_admission"):
        if key in values:
            values[key] = tuple(values[key])
    return GenerationConfig(**values)


def _task(data: dict[str, Any]) -> BenchmarkTask:
    _check_keys("task", data, {"id", "steps", "fixed_size", "selectivity"})
    default = BenchmarkTask.default(int(data.get("id", 1)))
    return BenchmarkTask(
        task_id=default.task_id,
        steps=tuple(data.get("steps", default.steps)),
        fixed_size=int(data.get("fixed_size", default.fixed_size)),
        selectivity=Selectivity(data.get("selectivity", default.selectivity)),
    )
