"""Политики: кодировка словарем UCP и загрузка файлов политик."""

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal as TypingLiteral

from gucon_obligations.core.graph import Graph
from gucon_obligations.core.terms import Iri, Literal, Term, Triple
from gucon_obligations.engine.rules import AtemporalRule, ExtendedActionPattern, ObligationRule, Rule, validate_rule
from gucon_obligations.exceptions import ParseError, PolicyLoadError
from gucon_obligations.io.rules import (
    format_action,
    format_condition,
    parse_action_text,
    parse_condition_text,
    parse_policy_text,
)
from gucon_obligations.io.turtle import parse_turtle_star
from gucon_obligations.vocab import DCAT_CREATOR, DCAT_DESCRIPTION, DCAT_MODIFIED, DEFAULT_PREFIXES, EXP, RDF_TYPE, UCP

logger = logging.getLogger(__name__)

PolicyFormat = TypingLiteral["arrow", "ucp"]

_UCP_MARKER = re.compile(r"hasConditionPattern|ObligationRule\s*[;.]")


@dataclass(slots=True)
class PolicyMetadata:
    """Метаданные политики из словаря DCAT.

    Args:
        policy_iri: IRI политики
        creator: Автор
        description: Описание
        modified: Дата изменения (литерал dateTime)
    """

    policy_iri: str
    creator: Term | None = None
    description: str | None = None
    modified: Literal | None = None


@dataclass(slots=True)
class PolicyDocument:
    """Набор правил-обязательств и метаданные их политик.

    Args:
        rules: Правила в порядке загрузки
        metadata: Метаданные по IRI политики
    """

    rules: list[Rule] = field(default_factory=list)
    metadata: dict[str, PolicyMetadata] = field(default_factory=dict)

    @property
    def policy_iris(self) -> list[str]:
        """IRI всех политик документа."""
        iris = set(self.metadata)
        iris.update(rule.policy_iri for rule in self.rules if rule.policy_iri)
        return sorted(iris)

    @property
    def obligation_rules(self) -> list[ObligationRule]:
        """Правила с временными границами."""
        return [rule for rule in self.rules if isinstance(rule, ObligationRule)]

    @property
    def atemporal_rules(self) -> list[AtemporalRule]:
        """Правила без временных границ."""
        return [rule for rule in self.rules if isinstance(rule, AtemporalRule)]

    def __len__(self) -> int:
        """Количество правил."""
        return len(self.rules)


def _single(graph: Graph, subject: Iri, predicate: str, rule_iri: str, mandatory: bool = True) -> Term | None:
    values = sorted(graph.match(subject, Iri(predicate), None), key=lambda t: str(t.object))
    if not values:
        if mandatory:
            raise PolicyLoadError(rule_iri, f"отсутствует обязательное свойство <{predicate}>")
        return None
    if len(values) > 1:
        logger.warning(f"[Парсер] Правило {rule_iri}: несколько значений <{predicate}>, взято первое")
    return values[0].object


def parse_policy_graph(graph: Graph) -> PolicyDocument:
    """Загрузка правил из графа в кодировке UCP.

    Строки условий и действий разбираются грамматикой стрелочного синтаксиса
    с префиксами документа.

    Raises:
        PolicyLoadError: Нет обязательного свойства или строка шаблона не разбирается
        RuleValidationError: Правило небезопасно
    """
    prefixes = dict(DEFAULT_PREFIXES)
    prefixes.update(graph.prefixes)
    document = PolicyDocument()

    rule_nodes = sorted(
        (t.subject for t in graph.match(None, Iri(RDF_TYPE), Iri(str(UCP.ObligationRule)))),
        key=lambda term: getattr(term, "value", ""),
    )
    for node in rule_nodes:
        if not isinstance(node, Iri):
            raise PolicyLoadError(str(node), "правило должно быть IRI")
        rule_iri = node.value
        condition_text = _payload(graph, node, str(UCP.hasConditionPattern), rule_iri)
        action_text = _payload(graph, node, str(UCP.hasActionPattern), rule_iri)
        policy = _single(graph, node, str(UCP.isPartOfPolicy), rule_iri)
        if not isinstance(policy, Iri):
            raise PolicyLoadError(rule_iri, "ucp:isPartOfPolicy должно указывать на IRI политики")

        try:
            condition = parse_condition_text(condition_text, prefixes)
        except ParseError as e:
            raise PolicyLoadError(rule_iri, f"условие не разобрано: {e}", e) from e
        try:
            action = parse_action_text(action_text, None, prefixes)
        except ParseError as e:
            raise PolicyLoadError(rule_iri, f"действие не разобрано: {e}", e) from e

        if isinstance(action, ExtendedActionPattern):
            rule: Rule = ObligationRule(rule_iri, condition, action, policy.value)
        else:
            rule = AtemporalRule(rule_iri, condition, action, policy.value)
        document.rules.append(validate_rule(rule))
        document.metadata.setdefault(policy.value, PolicyMetadata(policy.value))

    for triple in graph.match(None, Iri(RDF_TYPE), Iri(str(UCP.Policy))):
        if isinstance(triple.subject, Iri):
            document.metadata.setdefault(triple.subject.value, PolicyMetadata(triple.subject.value))
    for policy_iri, meta in document.metadata.items():
        node = Iri(policy_iri)
        meta.creator = _single(graph, node, DCAT_CREATOR, policy_iri, mandatory=False)
        description = _single(graph, node, DCAT_DESCRIPTION, policy_iri, mandatory=False)
        meta.description = description.lexical if isinstance(description, Literal) else None
        modified = _single(graph, node, DCAT_MODIFIED, policy_iri, mandatory=False)
        meta.modified = modified if isinstance(modified, Literal) else None

    logger.info(f"[Парсер] Загружено правил UCP: {len(document.rules)}")
    return document


def _payload(graph: Graph, node: Iri, predicate: str, rule_iri: str) -> str:
    value = _single(graph, node, predicate, rule_iri)
    if not isinstance(value, Literal):
        raise PolicyLoadError(rule_iri, f"значение <{predicate}> должно быть строкой")
    return value.lexical


def encode_ucp(document: PolicyDocument) -> Graph:
    """Кодировка документа политики словарем UCP."""
    graph = Graph(prefixes=dict(DEFAULT_PREFIXES))
    rdf_type = Iri(RDF_TYPE)
    for rule in document.rules:
        node = Iri(rule.rule_iri)
        graph.add(Triple(node, rdf_type, Iri(str(UCP.ObligationRule))))
        graph.add(Triple(node, Iri(str(UCP.hasConditionPattern)), Literal.of_string(format_condition(rule.condition))))
        graph.add(Triple(node, Iri(str(UCP.hasActionPattern)), Literal.of_string(format_action(rule.action))))
        graph.add(Triple(node, Iri(str(UCP.hasDeonticOperator)), Iri(str(UCP.Obligation))))
        policy_iri = rule.policy_iri or str(EXP["policy"])
        graph.add(Triple(node, Iri(str(UCP.isPartOfPolicy)), Iri(policy_iri)))

    policies = set(document.policy_iris)
    if any(rule.policy_iri is None for rule in document.rules):
        policies.add(str(EXP["policy"]))
    for policy_iri in sorted(policies):
        node = Iri(policy_iri)
        graph.add(Triple(node, rdf_type, Iri(str(UCP.Policy))))
        meta = document.metadata.get(policy_iri)
        if meta is None:
            continue
        if meta.creator is not None:
            graph.add(Triple(node, Iri(DCAT_CREATOR), meta.creator))
        if meta.description is not None:
            graph.add(Triple(node, Iri(DCAT_DESCRIPTION), Literal.of_string(meta.description)))
        if meta.modified is not None:
            graph.add(Triple(node, Iri(DCAT_MODIFIED), meta.modified))
    return graph


def detect_policy_format(text: str) -> PolicyFormat:
    """Определение кодировки политики по содержимому."""
    return "ucp" if _UCP_MARKER.search(text) else "arrow"


def default_policy_iri(path: Path) -> str:
    """IRI политики по имени файла."""
    return str(EXP[f"policy-{path.stem}"])


def load_policy_file(
    path: str | Path,
    policy_format: PolicyFormat | None = None,
    policy_iri: str | None = None,
) -> PolicyDocument:
    """Загрузка политики из файла в стрелочном синтаксисе или в кодировке UCP.

    Args:
        path: Путь к файлу
        policy_format: Явная кодировка; по умолчанию определяется по содержимому
        policy_iri: IRI политики для стрелочного синтаксиса
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    policy_format = policy_format or detect_policy_format(text)
    if policy_format == "ucp":
        document = parse_policy_graph(parse_turtle_star(text))
    else:
        policy_iri = policy_iri or default_policy_iri(path)
        document = PolicyDocument(
            rules=parse_policy_text(text, policy_iri),
            metadata={policy_iri: PolicyMetadata(policy_iri)},
        )
    logger.info(f"[Парсер] Политика {path.name} ({policy_format}): {len(document.rules)} правил")
    return document
