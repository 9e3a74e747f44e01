"""Синтетические данные, правила по шаблону и прогон задач бенчмарка."""

from .generator import GenerationConfig, generate_dataset, pair_match_count, rule_predicate_pairs
from .rules import GeneratedPolicy, RuleCandidate, generate_rules, rule_candidates
from .selectivity import Selectivity, SelectivityThresholds, classify_selectivity
from .tasks import BenchmarkTask

__all__ = [
    "GenerationConfig",
    "generate_dataset",
    "pair_match_count",
    "rule_predicate_pairs",
    "GeneratedPolicy",
    "RuleCandidate",
    "generate_rules",
    "rule_candidates",
    "Selectivity",
    "SelectivityThresholds",
    "classify_selectivity",
    "BenchmarkTask",
]
