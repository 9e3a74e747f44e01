"""Темпоральная база знаний и ее срезы."""

from .temporal import Event, TemporalKB, load_kb, render_kb, snapshot

__all__ = ["Event", "TemporalKB", "load_kb", "render_kb", "snapshot"]
