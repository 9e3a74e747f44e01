"""Один холодный замер в отдельном процессе; печатает время в мс."""

import argparse
from pathlib import Path

from gucon_obligations.bench.runner import measure_once
from gucon_obligations.core.timeline import parse_datetime


def main(argv: list[str] | None = None) -> int:
    """Точка входа замера."""
    parser = argparse.ArgumentParser(prog="gucon_obligations.bench.probe")
    parser.add_argument("kb", type=Path)
    parser.add_argument("policy", type=Path)
    parser.add_argument("time")
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args(argv)

    elapsed = measure_once(args.kb, args.policy, parse_datetime(args.time), args.workers)
    print(f"{elapsed:.3f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
