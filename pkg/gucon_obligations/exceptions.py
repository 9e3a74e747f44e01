"""Исключения пакета."""


class GuconError(Exception):
    """Базовое исключение для всех ошибок пакета."""


class ParseError(GuconError):
    """Синтаксическая ошибка с позицией во входном тексте.

    Args:
        message: Причина ошибки
        line: Номер строки (с единицы)
        column: Номер столбца (с единицы)
    """

    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")


class UnsupportedDurationError(GuconError):
    """Длительность содержит годы или месяцы (календарная арифметика не поддерживается)."""


class RuleValidationError(GuconError):
    """Правило не прошло проверку корректности.

    Args:
        rule_iri: IRI правила (если известен)
        message: Описание нарушения
        variables: Переменные, вызвавшие ошибку
    """

    def __init__(self, rule_iri: str | None, message: str, variables=()):
        self.rule_iri = rule_iri
        self.variables = tuple(sorted(variables))
        names = ", ".join(f"?{name}" for name in self.variables)
        details = f" ({names})" if names else ""
        super().__init__(f"{rule_iri or '<правило>'}: {message}{details}")


class SubstitutionError(GuconError):
    """Подстановка встретила несвязанную переменную."""

    def __init__(self, variable: str):
        self.variable = variable
        super().__init__(f"переменная ?{variable} не связана отображением")


class KnowledgeBaseError(GuconError):
    """Некорректное утверждение при загрузке базы знаний."""

    def __init__(self, message: str, statement=None):
        self.statement = statement
        suffix = f": {statement}" if statement is not None else ""
        super().__init__(f"{message}{suffix}")


class PolicyLoadError(GuconError):
    """Ошибка загрузки политики в кодировке UCP."""

    def __init__(self, rule_iri: str, message: str, inner: ParseError | None = None):
        self.rule_iri = rule_iri
        self.inner = inner
        super().__init__(f"{rule_iri}: {message}")


class ClassificationError(GuconError):
    """Границы обязательства не удалось привести к моменту времени."""

    def __init__(self, rule_iri: str, message: str, mapping=None):
        self.rule_iri = rule_iri
        self.mapping = mapping
        super().__init__(f"{rule_iri}: {message} (отображение {mapping})")


class ConfigError(GuconError):
    """Некорректная конфигурация генератора или бенчмарка."""


class FixtureMissingError(GuconError):
    """Нет файлов для шага бенчмарка."""

    def __init__(self, step: int, path):
        self.step = step
        self.path = path
        super().__init__(f"шаг {step}: отсутствует файл {path}")


class ReportFormatError(GuconError):
    """Граф не является корректным отчетом о соответствии."""
