"""Разбор и запись правил в стрелочном синтаксисе '{ cond } -> O { ea }'.

Условие записывается групповым шаблоном в стиле SPARQL-star: тройки-шаблоны,
OPTIONAL, MINUS, UNION, вложенные группы, FILTER и BIND. Фильтры группы
применяются ко всей группе после остальных элементов.
"""

import logging

from gucon_obligations.algebra.patterns import (
    And,
    ArithExpr,
    Bind,
    CompareExpr,
    EmptyPattern,
    Filter,
    FilterExpr,
    GraphPattern,
    LogicalExpr,
    Minus,
    NegateExpr,
    NotExpr,
    Opt,
    TermExpr,
    TriplePattern,
    Union_,
    in_scope_variables,
)
from gucon_obligations.core.terms import Iri, Term
from gucon_obligations.engine.rules import (
    ActionPattern,
    AtemporalRule,
    ExtendedActionPattern,
    ObligationRule,
    Rule,
    validate_rule,
)
from gucon_obligations.io.lexer import ParserBase, format_term
from gucon_obligations.vocab import DEADLINE, DEFAULT_PREFIXES, EXP, START_TIME

logger = logging.getLogger(__name__)

_RELATIONAL = ("=", "!=", "<", "<=", ">", ">=")


class RuleParser(ParserBase):
    """Рекурсивный спуск по грамматике правил."""

    def __init__(self, text: str, prefixes: dict[str, str] | None = None):
        super().__init__(text, prefixes, allow_variables=True)

    # Правила

    def parse_rules(self, policy_iri: str | None, temporal: bool | None) -> list[Rule]:
        """Последовательность правил с необязательными IRI-метками."""
        rules: list[Rule] = []
        while not self.peek_eof():
            if self.parse_prefix_directive():
                continue
            ordinal = len(rules) + 1
            rules.append(self.parse_rule(default_rule_iri(policy_iri, ordinal), policy_iri, temporal))
        return rules

    def parse_rule(self, rule_iri: str, policy_iri: str | None, temporal: bool | None) -> Rule:
        """Одно правило."""
        if not self.peek("PUNCT", "{"):
            rule_iri = self.parse_iri().value
        self.match("PUNCT", "{")
        condition = self.parse_group_body()
        self.match("PUNCT", "}")
        self.match("ARROW")
        operator = self.match("WORD")
        if operator.value != "O":
            self.error(f"ожидался деонтический оператор O, найдено '{operator.value}'", operator)
        action = self.parse_action_block(temporal)
        return build_rule(rule_iri, condition, action, policy_iri)

    def parse_action_block(self, temporal: bool | None) -> ActionPattern | ExtendedActionPattern:
        """Действие в фигурных скобках или без них."""
        if self.peek("PUNCT", "{"):
            self.advance()
            action = self.parse_action(temporal)
            self.match("PUNCT", "}")
            return action
        return self.parse_action(temporal)

    def parse_action(self, temporal: bool | None) -> ActionPattern | ExtendedActionPattern:
        """Шаблон действия и (для обязательств) временные привязки.

        Args:
            temporal: True - обязательство с границами, False - обычная тройка,
                None - определяется по наличию привязок
        """
        quoted = self.peek("LQUOTE")
        if quoted:
            triple = self.parse_quoted_triple()
            action = ActionPattern(triple.subject, triple.predicate, triple.object)
        else:
            if temporal:
                self.error("действие обязательства должно быть вложенной тройкой '<< ... >>'")
            action = ActionPattern(self.parse_subject(), self.parse_predicate(), self.parse_object())

        bindings: dict[str, Term] = {}
        if quoted and temporal is not False:
            while self.peek("IRIREF") or self.peek("PNAME"):
                token = self.nt
                predicate = self.parse_iri().value
                if predicate not in (START_TIME, DEADLINE):
                    self.error("ожидался gucon:startTime или gucon:deadline", token)
                if predicate in bindings:
                    self.error("временная граница указана повторно", token)
                bindings[predicate] = self.parse_object()
                if self.peek("PUNCT", ";"):
                    self.advance()
        if self.peek("PUNCT", "."):
            self.advance()

        if temporal is False or (temporal is None and not bindings):
            return action
        return ExtendedActionPattern(action, bindings.get(START_TIME), bindings.get(DEADLINE))

    # Групповые шаблоны

    def parse_group_body(self) -> GraphPattern:
        """Содержимое группы до закрывающей скобки или конца текста."""
        pattern: GraphPattern = EmptyPattern()
        filters: list[FilterExpr] = []
        while not (self.peek("PUNCT", "}") or self.peek_eof()):
            if self.peek_kw("OPTIONAL"):
                self.advance()
                pattern = Opt(pattern, self.parse_group())
            elif self.peek_kw("MINUS"):
                self.advance()
                pattern = Minus(pattern, self.parse_group())
            elif self.peek_kw("FILTER"):
                self.advance()
                filters.append(self.parse_bracketted())
            elif self.peek_kw("BIND"):
                self.advance()
                pattern = self.parse_bind(pattern)
            elif self.peek("PUNCT", "{"):
                pattern = join(pattern, self.parse_group_or_union())
            else:
                for triple in self.parse_triples_block():
                    pattern = join(pattern, triple)
                continue
            if self.peek("PUNCT", "."):
                self.advance()
        for expr in filters:
            pattern = Filter(pattern, expr)
        return pattern

    def parse_group(self) -> GraphPattern:
        """Группа в фигурных скобках."""
        self.match("PUNCT", "{")
        pattern = self.parse_group_body()
        self.match("PUNCT", "}")
        return pattern

    def parse_group_or_union(self) -> GraphPattern:
        """Группа или левоассоциативная цепочка UNION."""
        pattern = self.parse_group()
        while self.peek_kw("UNION"):
            self.advance()
            pattern = Union_(pattern, self.parse_group())
        return pattern

    def parse_bind(self, pattern: GraphPattern) -> GraphPattern:
        """BIND(expr AS ?v) с проверкой, что переменная еще не связана."""
        self.match("PUNCT", "(")
        expr = self.parse_expression()
        self.match_kw("AS")
        var_token = self.nt
        var = self.parse_variable()
        self.match("PUNCT", ")")
        if var in in_scope_variables(pattern):
            self.error(f"переменная ?{var.name} в BIND уже связана в группе", var_token)
        return Bind(pattern, var, expr)

    def parse_triples_block(self) -> list[TriplePattern]:
        """Субъект со списками предикатов и объектов, необязательная точка в конце."""
        subject = self.parse_subject()
        triples: list[TriplePattern] = []
        while True:
            predicate = self.parse_predicate()
            while True:
                triples.append(TriplePattern(subject, predicate, self.parse_object()))
                if not self.peek("PUNCT", ","):
                    break
                self.advance()
            if not self.peek("PUNCT", ";"):
                break
            while self.peek("PUNCT", ";"):
                self.advance()
            if self.peek("PUNCT", ".") or self.peek("PUNCT", "}"):
                break
        if self.peek("PUNCT", "."):
            self.advance()
        return triples

    # Выражения

    def parse_bracketted(self) -> FilterExpr:
        """Выражение в круглых скобках."""
        self.match("PUNCT", "(")
        expr = self.parse_expression()
        self.match("PUNCT", ")")
        return expr

    def parse_expression(self) -> FilterExpr:
        """Дизъюнкция."""
        expr = self.parse_conjunction()
        while self.peek("OP", "||"):
            self.advance()
            expr = LogicalExpr("||", expr, self.parse_conjunction())
        return expr

    def parse_conjunction(self) -> FilterExpr:
        """Конъюнкция."""
        expr = self.parse_relation()
        while self.peek("OP", "&&"):
            self.advance()
            expr = LogicalExpr("&&", expr, self.parse_relation())
        return expr

    def parse_relation(self) -> FilterExpr:
        """Не более одного сравнения."""
        expr = self.parse_additive()
        if self.nt.kind == "OP" and self.nt.value in _RELATIONAL:
            op = self.advance().value
            expr = CompareExpr(op, expr, self.parse_additive())
        return expr

    def parse_additive(self) -> FilterExpr:
        """Сложение и вычитание."""
        expr = self.parse_multiplicative()
        while self.peek("OP", "+") or self.peek("OP", "-"):
            op = self.advance().value
            expr = ArithExpr(op, expr, self.parse_multiplicative())
        return expr

    def parse_multiplicative(self) -> FilterExpr:
        """Умножение и деление."""
        expr = self.parse_unary()
        while self.peek("OP", "*") or self.peek("OP", "/"):
            op = self.advance().value
            expr = ArithExpr(op, expr, self.parse_unary())
        return expr

    def parse_unary(self) -> FilterExpr:
        """Отрицание и унарные знаки."""
        if self.peek("OP", "!"):
            self.advance()
            return NotExpr(self.parse_unary())
        if self.peek("OP", "-"):
            self.advance()
            return NegateExpr(self.parse_unary())
        if self.peek("OP", "+"):
            self.advance()
            return self.parse_unary()
        return self.parse_primary()

    def parse_primary(self) -> FilterExpr:
        """Скобки, переменная, IRI, литерал или вложенная тройка."""
        if self.peek("PUNCT", "("):
            return self.parse_bracketted()
        if self.peek("VAR"):
            return TermExpr(self.parse_variable())
        if self.peek("LQUOTE"):
            return TermExpr(self.parse_quoted_triple())
        if self.peek("STRING") or self.peek("NUMBER") or self.peek("WORD", "true") or self.peek("WORD", "false"):
            return TermExpr(self.parse_literal())
        if self.peek("IRIREF") or self.peek("PNAME"):
            return TermExpr(self.parse_iri())
        self.error(f"ожидалось выражение, найдено {self.nt.describe()}")


def join(left: GraphPattern, right: GraphPattern) -> GraphPattern:
    """Соединение с заменой пустого левого шаблона."""
    if isinstance(left, EmptyPattern):
        return right
    return And(left, right)


def default_rule_iri(policy_iri: str | None, ordinal: int) -> str:
    """IRI правила без метки: '<политика>/rule-NN'."""
    if policy_iri:
        return f"{policy_iri}/rule-{ordinal:02d}"
    return str(EXP[f"rule-{ordinal:02d}"])


def build_rule(
    rule_iri: str,
    condition: GraphPattern,
    action: ActionPattern | ExtendedActionPattern,
    policy_iri: str | None,
) -> Rule:
    """Сборка и проверка правила."""
    if isinstance(action, ExtendedActionPattern):
        rule: Rule = ObligationRule(rule_iri, condition, action, policy_iri)
    else:
        rule = AtemporalRule(rule_iri, condition, action, policy_iri)
    return validate_rule(rule)


def parse_rule_text(
    text: str,
    rule_iri: str | None = None,
    policy_iri: str | None = None,
    temporal: bool | None = True,
    prefixes: dict[str, str] | None = None,
) -> Rule:
    """Разбор одного правила в стрелочном синтаксисе.

    Args:
        text: Текст правила
        rule_iri: IRI правила, если текст не содержит метки
        policy_iri: IRI политики
        temporal: True - обязательство с границами, False - правило без времени,
            None - по наличию временных привязок
        prefixes: Дополнительные префиксы

    Raises:
        ParseError: Синтаксическая ошибка
        RuleValidationError: Правило небезопасно или без границ
    """
    parser = RuleParser(text, prefixes)
    while parser.parse_prefix_directive():
        pass
    rule = parser.parse_rule(rule_iri or default_rule_iri(policy_iri, 1), policy_iri, temporal)
    parser.match_eof()
    return rule


def parse_policy_text(
    text: str,
    policy_iri: str | None = None,
    temporal: bool | None = True,
    prefixes: dict[str, str] | None = None,
) -> list[Rule]:
    """Разбор файла .gucon с несколькими правилами."""
    rules = RuleParser(text, prefixes).parse_rules(policy_iri, temporal)
    seen: set[str] = set()
    for rule in rules:
        if rule.rule_iri in seen:
            logger.warning(f"[Парсер] Повторяющийся IRI правила {rule.rule_iri}")
        seen.add(rule.rule_iri)
    logger.debug(f"[Парсер] Разобрано правил: {len(rules)}")
    return rules


def parse_condition_text(text: str, prefixes: dict[str, str] | None = None) -> GraphPattern:
    """Разбор условия (внешние фигурные скобки необязательны)."""
    parser = RuleParser(text, prefixes)
    pattern = parser.parse_group_body()
    parser.match_eof()
    return pattern


def parse_action_text(
    text: str, temporal: bool | None = True, prefixes: dict[str, str] | None = None
) -> ActionPattern | ExtendedActionPattern:
    """Разбор действия (внешние фигурные скобки необязательны)."""
    parser = RuleParser(text, prefixes)
    action = parser.parse_action_block(temporal)
    parser.match_eof()
    return action


def format_expr(expr: FilterExpr, prefixes: dict[str, str] | None = None) -> str:
    """Запись выражения с полной расстановкой скобок."""
    prefixes = prefixes or DEFAULT_PREFIXES
    if isinstance(expr, TermExpr):
        return format_term(expr.term, prefixes)
    if isinstance(expr, NotExpr):
        return f"(!{format_expr(expr.operand, prefixes)})"
    if isinstance(expr, NegateExpr):
        return f"(-{format_expr(expr.operand, prefixes)})"
    return f"({format_expr(expr.left, prefixes)} {expr.op} {format_expr(expr.right, prefixes)})"


def format_condition(pattern: GraphPattern, prefixes: dict[str, str] | None = None) -> str:
    """Запись условия в синтаксисе групп (без внешних скобок)."""
    return " ".join(_group_body(pattern, prefixes or DEFAULT_PREFIXES))


def _group_body(pattern: GraphPattern, prefixes: dict[str, str]) -> list[str]:
    filters: list[FilterExpr] = []
    while isinstance(pattern, Filter):
        filters.insert(0, pattern.expr)
        pattern = pattern.inner
    parts = _elements(pattern, prefixes)
    parts.extend(f"FILTER {format_expr(expr, prefixes)}" for expr in filters)
    return parts


def _nested(pattern: GraphPattern, prefixes: dict[str, str]) -> str:
    return "{ " + " ".join(_group_body(pattern, prefixes)) + " }"


def _left(pattern: GraphPattern, prefixes: dict[str, str]) -> list[str]:
    if isinstance(pattern, Filter):
        return [_nested(pattern, prefixes)]
    return _elements(pattern, prefixes)


def _elements(pattern: GraphPattern, prefixes: dict[str, str]) -> list[str]:
    if isinstance(pattern, EmptyPattern):
        return []
    if isinstance(pattern, TriplePattern):
        return [_triple(pattern, prefixes)]
    if isinstance(pattern, And):
        if isinstance(pattern.right, TriplePattern):
            right = [_triple(pattern.right, prefixes)]
        elif isinstance(pattern.right, Union_):
            right = _elements(pattern.right, prefixes)
        else:
            right = [_nested(pattern.right, prefixes)]
        return _left(pattern.left, prefixes) + right
    if isinstance(pattern, Union_):
        return [f"{_nested(pattern.left, prefixes)} UNION {_nested(pattern.right, prefixes)}"]
    if isinstance(pattern, Opt):
        return _left(pattern.left, prefixes) + [f"OPTIONAL {_nested(pattern.right, prefixes)}"]
    if isinstance(pattern, Minus):
        return _left(pattern.left, prefixes) + [f"MINUS {_nested(pattern.right, prefixes)}"]
    if isinstance(pattern, Bind):
        bind = f"BIND({format_expr(pattern.expr, prefixes)} AS ?{pattern.var.name})"
        return _left(pattern.inner, prefixes) + [bind]
    if isinstance(pattern, Filter):
        return [_nested(pattern, prefixes)]
    raise TypeError(f"неизвестный шаблон: {pattern!r}")


def _triple(pattern: TriplePattern, prefixes: dict[str, str]) -> str:
    return (
        f"{format_term(pattern.subject, prefixes)} "
        f"{format_term(pattern.predicate, prefixes, predicate=True)} "
        f"{format_term(pattern.object, prefixes)} ."
    )


def format_action(action: ActionPattern | ExtendedActionPattern, prefixes: dict[str, str] | None = None) -> str:
    """Запись действия (без внешних скобок)."""
    prefixes = prefixes or DEFAULT_PREFIXES
    if isinstance(action, ActionPattern):
        return (
            f"{format_term(action.entity, prefixes)} "
            f"{format_term(action.action, prefixes, predicate=True)} "
            f"{format_term(action.resource, prefixes)}"
        )
    inner = action.action
    text = (
        f"<< {format_term(inner.entity, prefixes)} "
        f"{format_term(inner.action, prefixes, predicate=True)} "
        f"{format_term(inner.resource, prefixes)} >>"
    )
    bindings = []
    if action.start is not None:
        bindings.append(f"{format_term(Iri(START_TIME), prefixes)} {format_term(action.start, prefixes)}")
    if action.deadline is not None:
        bindings.append(f"{format_term(Iri(DEADLINE), prefixes)} {format_term(action.deadline, prefixes)}")
    if bindings:
        text += " " + " ; ".join(bindings)
    return text


def format_rule(rule: Rule, prefixes: dict[str, str] | None = None) -> str:
    """Запись правила в стрелочном синтаксисе с IRI-меткой."""
    prefixes = prefixes or DEFAULT_PREFIXES
    label = format_term(Iri(rule.rule_iri), prefixes)
    condition = format_condition(rule.condition, prefixes)
    action = format_action(rule.action, prefixes)
    return f"{label} {{ {condition} }}\n-> O {{ {action} . }}\n"


def format_policy_text(rules: list[Rule], prefixes: dict[str, str] | None = None) -> str:
    """Запись набора правил в файл .gucon."""
    return "\n".join(format_rule(rule, prefixes) for rule in rules)


__all__ = [
    "RuleParser",
    "format_action",
    "format_condition",
    "format_expr",
    "format_policy_text",
    "format_rule",
    "parse_action_text",
    "parse_condition_text",
    "parse_policy_text",
    "parse_rule_text",
]
