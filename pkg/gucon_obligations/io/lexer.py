"""Лексер для Turtle-star и синтаксиса правил, базовый класс парсеров."""

import re
from dataclasses import dataclass
from decimal import Decimal

from gucon_obligations.core.terms import Iri, Literal, QuotedTriple, Term, Variable, escape_string
from gucon_obligations.exceptions import ParseError
from gucon_obligations.vocab import (
    DEFAULT_PREFIXES,
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    XSD_STRING,
)

# Локальная часть имени с префиксом: точки допустимы только внутри
PNAME_LOCAL = r"[\w\-/]+(?:\.[\w\-/]+)*"
PNAME_LOCAL_RE = re.compile(PNAME_LOCAL)

_TOKEN_SPEC: tuple[tuple[str, str], ...] = (
    ("WS", r"[ \t\r\f]+"),
    ("NEWLINE", r"\n"),
    ("COMMENT", r"#[^\n]*"),
    ("LQUOTE", r"<<"),
    ("RQUOTE", r">>"),
    ("IRIREF", r"<(?:[A-Za-z][A-Za-z0-9+.\-]*:[^\s<>\"{}|^`\\]*)?>"),
    ("STRING", r'"(?:[^"\\\n]|\\.)*"|\'(?:[^\'\\\n]|\\.)*\''),
    ("DTYPE", r"\^\^"),
    ("ARROW", r"->"),
    ("PREFIX_DECL", r"@prefix\b"),
    ("OP", r"<=|>=|!=|&&|\|\||[=<>!+\-*/]"),
    ("PUNCT", r"[{}().;,]"),
    ("VAR", r"[?$][A-Za-z_]\w*"),
    ("NUMBER", r"\d+(?:\.\d+)?(?:[eE][+-]?\d+)?"),
    ("PNAME", rf"(?:[A-Za-z][\w\-]*)?:(?:{PNAME_LOCAL})?"),
    ("WORD", r"[A-Za-z_]\w*"),
)
_MASTER_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPEC))

_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "b": "\b", "f": "\f", '"': '"', "'": "'", "\\": "\\"}
_ESCAPE_RE = re.compile(r"\\(?:u([0-9A-Fa-f]{4})|U([0-9A-Fa-f]{8})|(.))")


@dataclass(frozen=True, slots=True)
class Token:
    """Лексема с позицией начала.

    Args:
        kind: Вид лексемы
        value: Текст лексемы
        line: Строка (с единицы)
        column: Столбец (с единицы)
    """

    kind: str
    value: str
    line: int
    column: int

    def describe(self) -> str:
        """Описание лексемы для сообщений об ошибках."""
        if self.kind == "EOF":
            return "конец текста"
        return f"'{self.value}'"


def tokenize(text: str) -> list[Token]:
    """Разбиение текста на лексемы; последняя лексема всегда EOF.

    Raises:
        ParseError: Недопустимый символ
    """
    tokens: list[Token] = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(text):
        match = _MASTER_RE.match(text, pos)
        if match is None:
            raise ParseError(f"недопустимый символ '{text[pos]}'", line, pos - line_start + 1)
        kind = match.lastgroup
        if kind == "NEWLINE":
            line += 1
            line_start = match.end()
        elif kind not in ("WS", "COMMENT"):
            tokens.append(Token(kind, match.group(0), line, pos - line_start + 1))
        pos = match.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


def unescape_string(token: Token) -> str:
    """Содержимое строкового литерала без кавычек и экранирования."""
    body = token.value[1:-1]

    def replace(match: re.Match) -> str:
        if match.group(1) or match.group(2):
            return chr(int(match.group(1) or match.group(2), 16))
        char = match.group(3)
        if char not in _ESCAPES:
            raise ParseError(f"неизвестная escape-последовательность '\\{char}'", token.line, token.column)
        return _ESCAPES[char]

    return _ESCAPE_RE.sub(replace, body)


class ParserBase:
    """Общая часть парсеров: поток лексем, префиксы и разбор термов.

    Args:
        text: Исходный текст
        prefixes: Дополнительные префиксы поверх предопределенных
        allow_variables: Допускаются ли переменные на месте термов
    """

    def __init__(self, text: str, prefixes: dict[str, str] | None = None, allow_variables: bool = False):
        self.tokens = tokenize(text)
        self.index = 0
        self.prefixes: dict[str, str] = dict(DEFAULT_PREFIXES)
        if prefixes:
            self.prefixes.update(prefixes)
        self.declared: dict[str, str] = {}
        self.allow_variables = allow_variables

    @property
    def nt(self) -> Token:
        """Следующая лексема."""
        return self.tokens[self.index]

    @property
    def ct(self) -> Token:
        """Последняя принятая лексема."""
        return self.tokens[self.index - 1] if self.index else self.tokens[0]

    def advance(self) -> Token:
        """Переход к следующей лексеме."""
        token = self.nt
        if token.kind != "EOF":
            self.index += 1
        return token

    def peek(self, kind: str, value: str | None = None, offset: int = 0) -> bool:
        """Совпадает ли лексема впереди с видом (и значением)."""
        position = min(self.index + offset, len(self.tokens) - 1)
        token = self.tokens[position]
        return token.kind == kind and (value is None or token.value == value)

    def peek_kw(self, word: str) -> bool:
        """Является ли следующая лексема ключевым словом (без учета регистра)."""
        return self.nt.kind == "WORD" and self.nt.value.upper() == word.upper()

    def peek_eof(self) -> bool:
        """Достигнут ли конец текста."""
        return self.nt.kind == "EOF"

    def match(self, kind: str, value: str | None = None) -> Token:
        """Принятие ожидаемой лексемы.

        Raises:
            ParseError: Впереди другая лексема
        """
        if not self.peek(kind, value):
            self.error(f"ожидалось {value or kind}, найдено {self.nt.describe()}")
        return self.advance()

    def match_kw(self, word: str) -> Token:
        """Принятие ключевого слова."""
        if not self.peek_kw(word):
            self.error(f"ожидалось {word}, найдено {self.nt.describe()}")
        return self.advance()

    def match_eof(self) -> None:
        """Проверка, что текст разобран полностью."""
        if not self.peek_eof():
            self.error(f"ожидался конец текста, найдено {self.nt.describe()}")

    def error(self, message: str, token: Token | None = None):
        """Ошибка с позицией лексемы (по умолчанию - следующей)."""
        token = token or self.nt
        raise ParseError(message, token.line, token.column)

    def parse_prefix_directive(self) -> bool:
        """Разбор '@prefix p: <iri> .' или 'PREFIX p: <iri>'.

        Returns:
            True если директива была разобрана
        """
        if self.peek("PREFIX_DECL"):
            self.advance()
            terminated = True
        elif self.peek_kw("PREFIX") and self.peek("PNAME", offset=1):
            self.advance()
            terminated = False
        else:
            return False
        name_token = self.match("PNAME")
        if not name_token.value.endswith(":"):
            self.error("ожидалось имя префикса с двоеточием", name_token)
        iri_token = self.match("IRIREF")
        name = name_token.value[:-1]
        self.prefixes[name] = iri_token.value[1:-1]
        self.declared[name] = iri_token.value[1:-1]
        if terminated:
            self.match("PUNCT", ".")
        return True

    def expand_pname(self, token: Token) -> Iri:
        """Раскрытие имени с префиксом."""
        prefix, _, local = token.value.partition(":")
        if prefix not in self.prefixes:
            self.error(f"неизвестный префикс '{prefix}:'", token)
        return Iri(self.prefixes[prefix] + local)

    def parse_iri(self, allow_a: bool = False) -> Iri:
        """IRI в угловых скобках, имя с префиксом или (для предиката) 'a'."""
        if self.peek("IRIREF"):
            return Iri(self.advance().value[1:-1])
        if self.peek("PNAME"):
            return self.expand_pname(self.advance())
        if allow_a and self.peek("WORD", "a"):
            self.advance()
            return Iri(RDF_TYPE)
        self.error(f"ожидался IRI, найдено {self.nt.describe()}")

    def parse_variable(self) -> Variable:
        """Переменная '?x' или '$x'."""
        token = self.match("VAR")
        if not self.allow_variables:
            self.error(f"переменная {token.value} недопустима в данных", token)
        return Variable(token.value[1:])

    def parse_literal(self) -> Literal:
        """Строка (с необязательным типом), число или логическое значение."""
        if self.peek("STRING"):
            lexical = unescape_string(self.advance())
            if self.peek("DTYPE"):
                self.advance()
                return Literal(lexical, self.parse_iri().value)
            return Literal(lexical, XSD_STRING)
        negative = False
        if self.peek("OP", "-") and self.peek("NUMBER", offset=1):
            self.advance()
            negative = True
        elif self.peek("OP", "+") and self.peek("NUMBER", offset=1):
            self.advance()
        if self.peek("NUMBER"):
            text = self.advance().value
            sign = "-" if negative else ""
            if "e" in text or "E" in text:
                return Literal(sign + text, XSD_DOUBLE)
            if "." in text:
                return Literal(sign + text, XSD_DECIMAL)
            return Literal(str(Decimal(sign + text)), XSD_INTEGER)
        if self.peek("WORD", "true") or self.peek("WORD", "false"):
            return Literal(self.advance().value, XSD_BOOLEAN)
        self.error(f"ожидался литерал, найдено {self.nt.describe()}")

    def peek_literal(self) -> bool:
        """Начинается ли впереди литерал."""
        if self.peek("STRING") or self.peek("NUMBER"):
            return True
        if (self.peek("OP", "-") or self.peek("OP", "+")) and self.peek("NUMBER", offset=1):
            return True
        return self.peek("WORD", "true") or self.peek("WORD", "false")

    def parse_quoted_triple(self) -> QuotedTriple:
        """Вложенная тройка '<< s p o >>'."""
        self.match("LQUOTE")
        subject = self.parse_subject()
        predicate = self.parse_predicate()
        obj = self.parse_object()
        self.match("RQUOTE")
        return QuotedTriple(subject, predicate, obj)

    def parse_subject(self) -> Term:
        """Субъект: IRI, вложенная тройка или переменная."""
        if self.peek("LQUOTE"):
            return self.parse_quoted_triple()
        if self.peek("VAR"):
            return self.parse_variable()
        if self.peek_literal():
            self.error("литерал не может быть субъектом")
        return self.parse_iri()

    def parse_predicate(self) -> Term:
        """Предикат: IRI, 'a' или переменная."""
        if self.peek("VAR"):
            return self.parse_variable()
        return self.parse_iri(allow_a=True)

    def parse_object(self) -> Term:
        """Объект: любой терм."""
        if self.peek("LQUOTE"):
            return self.parse_quoted_triple()
        if self.peek("VAR"):
            return self.parse_variable()
        if self.peek_literal():
            return self.parse_literal()
        return self.parse_iri()


def compact_iri(value: str, prefixes: dict[str, str]) -> str:
    """Запись IRI в виде имени с префиксом, если это возможно."""
    best: tuple[str, str] | None = None
    for name, namespace in prefixes.items():
        if value.startswith(namespace) and (best is None or len(namespace) > len(prefixes[best[0]])):
            local = value[len(namespace):]
            if local == "" or PNAME_LOCAL_RE.fullmatch(local):
                best = (name, local)
    if best is None:
        return f"<{value}>"
    return f"{best[0]}:{best[1]}"


def format_term(term: Term, prefixes: dict[str, str], predicate: bool = False) -> str:
    """Запись терма в синтаксисе Turtle-star с сокращением IRI."""
    if isinstance(term, Iri):
        if predicate and term.value == RDF_TYPE:
            return "a"
        return compact_iri(term.value, prefixes)
    if isinstance(term, Literal):
        quoted = f'"{escape_string(term.lexical)}"'
        if term.datatype == XSD_STRING:
            return quoted
        return f"{quoted}^^{compact_iri(term.datatype, prefixes)}"
    if isinstance(term, Variable):
        return f"?{term.name}"
    return (
        f"<< {format_term(term.subject, prefixes)} "
        f"{format_term(term.predicate, prefixes, predicate=True)} "
        f"{format_term(term.object, prefixes)} >>"
    )
