"""Запуск через python -m gucon_obligations."""

from gucon_obligations.cli import main

raise SystemExit(main())
