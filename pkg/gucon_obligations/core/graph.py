"""Граф RDF-star с индексами по позициям."""

from collections import defaultdict
from typing import Iterable, Iterator

from gucon_obligations.core.terms import Term, Triple, is_ground, subterms


class Graph:
    """Конечное множество основных утверждений.

    Вставка существующего утверждения ничего не меняет. Словарь префиксов
    хранит объявления исходного документа и не участвует в равенстве графов.

    Args:
        triples: Начальные утверждения
        prefixes: Префиксы исходного документа
    """

    def __init__(self, triples: Iterable[Triple] = (), prefixes: dict[str, str] | None = None):
        self._triples: set[Triple] = set()
        self._by_subject: defaultdict[Term, set[Triple]] = defaultdict(set)
        self._by_predicate: defaultdict[Term, set[Triple]] = defaultdict(set)
        self._by_object: defaultdict[Term, set[Triple]] = defaultdict(set)
        self.prefixes: dict[str, str] = dict(prefixes or {})
        self.update(triples)

    def add(self, triple: Triple) -> bool:
        """Добавление утверждения.

        Returns:
            True если утверждение было новым

        Raises:
            ValueError: Утверждение содержит переменные
        """
        if triple in self._triples:
            return False
        if not (is_ground(triple.subject) and is_ground(triple.predicate) and is_ground(triple.object)):
            raise ValueError(f"в граф можно добавить только основные утверждения: {triple}")
        self._triples.add(triple)
        self._by_subject[triple.subject].add(triple)
        self._by_predicate[triple.predicate].add(triple)
        self._by_object[triple.object].add(triple)
        return True

    def update(self, triples: Iterable[Triple]) -> None:
        """Добавление нескольких утверждений."""
        for triple in triples:
            self.add(triple)

    def match(
        self,
        subject: Term | None = None,
        predicate: Term | None = None,
        object: Term | None = None,
    ) -> Iterator[Triple]:
        """Утверждения, совпадающие с заданными позициями (None - любое значение)."""
        candidates = self._candidates(subject, predicate, object)
        for triple in candidates:
            if subject is not None and triple.subject != subject:
                continue
            if predicate is not None and triple.predicate != predicate:
                continue
            if object is not None and triple.object != object:
                continue
            yield triple

    def count(
        self,
        subject: Term | None = None,
        predicate: Term | None = None,
        object: Term | None = None,
    ) -> int:
        """Верхняя оценка числа совпадений по индексам."""
        return len(self._candidates(subject, predicate, object))

    def _candidates(self, subject, predicate, object) -> set[Triple]:
        buckets = []
        if subject is not None:
            buckets.append(self._by_subject.get(subject, set()))
        if predicate is not None:
            buckets.append(self._by_predicate.get(predicate, set()))
        if object is not None:
            buckets.append(self._by_object.get(object, set()))
        if not buckets:
            return self._triples
        return min(buckets, key=len)

    def terms(self) -> set[Term]:
        """Все термы графа, включая термы внутри вложенных троек."""
        result: set[Term] = set()
        for triple in self._triples:
            for position in (triple.subject, triple.predicate, triple.object):
                result.update(subterms(position))
        return result

    def copy(self) -> "Graph":
        """Независимая копия графа."""
        return Graph(self._triples, self.prefixes)

    def union(self, other: Iterable[Triple]) -> "Graph":
        """Новый граф из утверждений обоих графов."""
        result = self.copy()
        result.update(other)
        return result

    def issubset(self, other: "Graph") -> bool:
        """Содержатся ли все утверждения в другом графе."""
        return self._triples <= other._triples

    def __contains__(self, triple: object) -> bool:
        """Проверка наличия утверждения."""
        return triple in self._triples

    def __iter__(self) -> Iterator[Triple]:
        """Итерация по утверждениям."""
        return iter(self._triples)

    def __len__(self) -> int:
        """Количество утверждений."""
        return len(self._triples)

    def __eq__(self, other: object) -> bool:
        """Равенство как множеств утверждений."""
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples

    __hash__ = None

    def __repr__(self):
        """Возвращает строковое представление графа."""
        return f"<Graph {len(self._triples)} утверждений>"
