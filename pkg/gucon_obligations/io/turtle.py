"""Разбор и запись документов Turtle-star."""

import logging
from collections import defaultdict
from pathlib import Path

from gucon_obligations.core.graph import Graph
from gucon_obligations.core.terms import Term, Triple, term_sort_key, triple_sort_key
from gucon_obligations.io.lexer import ParserBase, format_term
from gucon_obligations.vocab import DEFAULT_PREFIXES

logger = logging.getLogger(__name__)


class TurtleParser(ParserBase):
    """Парсер подмножества Turtle-star без пустых узлов и коллекций."""

    def __init__(self, text: str, prefixes: dict[str, str] | None = None):
        super().__init__(text, prefixes, allow_variables=False)
        self.graph = Graph()

    def parse_document(self) -> Graph:
        """Разбор документа целиком."""
        while not self.peek_eof():
            if self.parse_prefix_directive():
                continue
            self.parse_statement()
        self.graph.prefixes = dict(self.declared)
        return self.graph

    def parse_statement(self) -> None:
        """Субъект со списком предикатов, завершенный точкой."""
        subject = self.parse_subject()
        while True:
            predicate = self.parse_predicate()
            while True:
                self.graph.add(Triple(subject, predicate, self.parse_object()))
                if not self.peek("PUNCT", ","):
                    break
                self.advance()
            if not self.peek("PUNCT", ";"):
                break
            while self.peek("PUNCT", ";"):
                self.advance()
            if self.peek("PUNCT", "."):
                break
        self.match("PUNCT", ".")


def parse_turtle_star(text: str, prefixes: dict[str, str] | None = None) -> Graph:
    """Разбор документа Turtle-star в основной граф.

    Args:
        text: Текст документа
        prefixes: Префиксы, доступные помимо предопределенных

    Returns:
        Граф; объявленные в документе префиксы сохраняются в `Graph.prefixes`

    Raises:
        ParseError: Синтаксическая ошибка или переменная в данных
    """
    return TurtleParser(text, prefixes).parse_document()


def serialize_turtle_star(graph: Graph, prefixes: dict[str, str] | None = None) -> str:
    """Детерминированная запись графа в Turtle-star.

    Утверждения сгруппированы по субъекту и предикату и упорядочены
    каноническим порядком термов.
    """
    namespaces = dict(DEFAULT_PREFIXES)
    namespaces.update(graph.prefixes)
    if prefixes:
        namespaces.update(prefixes)

    lines = [f"@prefix {name}: <{namespaces[name]}> ." for name in sorted(namespaces)]
    lines.append("")

    grouped: defaultdict[Term, defaultdict[Term, list[Term]]] = defaultdict(lambda: defaultdict(list))
    for triple in sorted(graph, key=triple_sort_key):
        grouped[triple.subject][triple.predicate].append(triple.object)

    for subject in sorted(grouped, key=term_sort_key):
        by_predicate = grouped[subject]
        chunks = []
        for predicate in sorted(by_predicate, key=term_sort_key):
            objects = ", ".join(format_term(obj, namespaces) for obj in by_predicate[predicate])
            chunks.append(f"{format_term(predicate, namespaces, predicate=True)} {objects}")
        lines.append(f"{format_term(subject, namespaces)}\n    " + " ;\n    ".join(chunks) + " .")
        lines.append("")
    return "\n".join(lines)


def load_graph_file(path: str | Path) -> Graph:
    """Чтение файла Turtle-star (.ttls или .ttl) в кодировке UTF-8."""
    path = Path(path)
    graph = parse_turtle_star(path.read_text(encoding="utf-8"))
    logger.info(f"[Парсер] Загружен граф {path.name}: {len(graph)} утверждений")
    return graph


def write_graph_file(graph: Graph, path: str | Path, prefixes: dict[str, str] | None = None) -> None:
    """Запись графа в файл Turtle-star."""
    path = Path(path)
    path.write_text(serialize_turtle_star(graph, prefixes), encoding="utf-8")
    logger.info(f"[Парсер] Записан граф {path.name}: {len(graph)} утверждений")
