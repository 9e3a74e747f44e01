"""Отчеты о соответствии."""

from .builder import ReportContents, ReportMeta, build_report, extract_report, mint_mapped_rule_iri

__all__ = ["ReportContents", "ReportMeta", "build_report", "extract_report", "mint_mapped_rule_iri"]
