"""Командная строка: состояния обязательств, проверка соответствия, генерация и бенчмарк.

Коды выхода: 0 - успех или соответствие, 1 - несоответствие, 2 - ошибка.
"""

import argparse
import asyncio
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import TextIO

from gucon_obligations.bench.runner import prepare_fixtures, run_benchmark, write_csv
from gucon_obligations.bench.storage import store_result
from gucon_obligations.config import BenchConfig, DbConfig, ReportConfig
from gucon_obligations.core.terms import Iri
from gucon_obligations.core.timeline import TimeInstant, format_instant, parse_datetime
from gucon_obligations.engine.compliance import ComplianceStatus, check_compliance
from gucon_obligations.engine.states import ObligationStates, get_obligation_states
from gucon_obligations.exceptions import ConfigError, GuconError
from gucon_obligations.io.lexer import ParserBase, format_term
from gucon_obligations.io.policy import PolicyDocument, load_policy_file
from gucon_obligations.io.turtle import load_graph_file, write_graph_file
from gucon_obligations.kb.temporal import TemporalKB, load_kb
from gucon_obligations.report.builder import ReportMeta, build_report, extract_report
from gucon_obligations.vocab import DEFAULT_PREFIXES, EXP

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NON_COMPLIANT = 1
EXIT_ERROR = 2

TABLE_COLUMNS = ("rule", "entity", "action", "resource", "start", "deadline", "states")


def _instant(value: str) -> TimeInstant:
    try:
        instant = parse_datetime(value)
    except GuconError as e:
        raise argparse.ArgumentTypeError(str(e)) from e
    if not instant.is_finite:
        raise argparse.ArgumentTypeError("момент оценки должен быть конечным")
    return instant


def _iri(value: str) -> Iri:
    parser = ParserBase(value)
    term = parser.parse_iri()
    parser.match_eof()
    return term


def _load_inputs(args: argparse.Namespace) -> tuple[TemporalKB, PolicyDocument]:
    kb_iri = args.kb_iri or str(EXP[f"kb-{args.kb.stem}"])
    kb = load_kb(load_graph_file(args.kb), kb_iri=kb_iri)
    policy = load_policy_file(args.policy, args.policy_format, args.policy_iri)
    return kb, policy


def _write_report(
    path: Path,
    states: ObligationStates,
    status: ComplianceStatus,
    kb: TemporalKB,
    policy: PolicyDocument,
    t: TimeInstant,
) -> None:
    report_config = ReportConfig.from_env()
    meta = ReportMeta.now(
        tuple(policy.policy_iris),
        kb.kb_iri,
        t,
        base_namespace=report_config.base_namespace,
        tz=report_config.tz,
    )
    write_graph_file(build_report(states, status, meta), path)


def _format_states_table(states: ObligationStates) -> list[str]:
    rows = [TABLE_COLUMNS]
    for obligation in states.all():
        rows.append(
            (
                format_term(Iri(obligation.rule_iri), DEFAULT_PREFIXES),
                format_term(obligation.entity, DEFAULT_PREFIXES),
                format_term(obligation.action, DEFAULT_PREFIXES),
                format_term(obligation.resource, DEFAULT_PREFIXES),
                format_instant(obligation.start),
                format_instant(obligation.deadline),
                ",".join(sorted(states.states_of(obligation))),
            )
        )
    widths = [max(len(row[i]) for row in rows) for i in range(len(TABLE_COLUMNS))]
    return ["  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() for row in rows]


def _open_output(path: Path | None) -> TextIO:
    if path is None:
        return sys.stdout
    return path.open("w", encoding="utf-8")


def _emit(lines: list[str], path: Path | None) -> None:
    stream = _open_output(path)
    try:
        for line in lines:
            print(line, file=stream)
    finally:
        if stream is not sys.stdout:
            stream.close()


def cmd_states(args: argparse.Namespace) -> int:
    """Таблица пяти множеств состояний и, при --report, отчет."""
    kb, policy = _load_inputs(args)
    states = get_obligation_states(policy, kb, args.time, workers=args.workers)
    shown = states.for_entity(_iri(args.entity)) if args.entity else states
    _emit(_format_states_table(shown), args.out)
    if args.report:
        _write_report(args.report, states, check_compliance(policy, kb, args.time, states=states), kb, policy, args.time)
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    """Вердикт соответствия; отчет пишется при --report."""
    kb, policy = _load_inputs(args)
    states = get_obligation_states(policy, kb, args.time, workers=args.workers)
    if args.entity:
        states = states.for_entity(_iri(args.entity))
    status = check_compliance(policy, kb, args.time, states=states)
    _emit([str(status)], args.out)
    if args.report:
        _write_report(args.report, states, status, kb, policy, args.time)
    return EXIT_OK if status is ComplianceStatus.COMPLIANT else EXIT_NON_COMPLIANT


def cmd_validate(args: argparse.Namespace) -> int:
    """Разбор входных файлов и краткая сводка."""
    if not (args.kb or args.policy or args.report):
        raise ConfigError("нужен хотя бы один из --kb, --policy, --report")
    lines = []
    if args.kb:
        kb = load_kb(load_graph_file(args.kb))
        lines.append(f"kb: {args.kb} facts={len(kb.dkb)} events={len(kb.events)}")
    if args.policy:
        policy = load_policy_file(args.policy, args.policy_format, args.policy_iri)
        lines.append(
            f"policy: {args.policy} rules={len(policy)} obligations={len(policy.obligation_rules)} "
            f"atemporal={len(policy.atemporal_rules)}"
        )
    if args.report:
        contents = extract_report(load_graph_file(args.report))
        lines.append(
            f"report: {args.report} obligations={len(contents.states)} status={contents.status} "
            f"evaluated={format_instant(contents.evaluation_time)}"
        )
    _emit(lines, None)
    return EXIT_OK


def _bench_config(args: argparse.Namespace) -> BenchConfig:
    config = BenchConfig.from_file(args.config) if args.config else BenchConfig()
    if args.seed is not None:
        config.generation = replace(config.generation, seed=args.seed)
    if getattr(args, "isolation", None):
        config.isolation = args.isolation
    if getattr(args, "db", None):
        config.database = DbConfig.from_url(args.db)
    if getattr(args, "workers", None):
        config.workers = args.workers
    return config


def cmd_generate(args: argparse.Namespace) -> int:
    """Файлы базы и политики для всех шагов задачи из конфигурации."""
    config = _bench_config(args)
    fixtures = prepare_fixtures(config.task, config, args.out)
    _emit([f"{f.step}\t{f.size}\t{f.kb_path}\t{f.policy_path}" for f in fixtures], None)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    """Подготовка файлов, замеры и CSV; при --db прогон сохраняется в БД."""
    config = _bench_config(args)
    out_dir = Path(args.out)
    fixtures = prepare_fixtures(config.task, config, out_dir / "fixtures")
    result = run_benchmark(config.task, fixtures, config)
    write_csv(result, out_dir / "samples.csv", out_dir / "summary.csv")
    if config.database is not None:
        run_id = asyncio.run(store_result(result, config, config.database))
        if run_id is None:
            logger.error("[БД] Прогон не сохранен")
    lines = [f"{s.step}\t{s.size}\t{s.trimmed_mean_ms:.3f}" for s in result.summaries]
    if result.fit is not None:
        lines.append(f"r2\t{result.fit.r2:.4f}")
    _emit(lines, None)
    return EXIT_OK


def _add_inputs(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument("--kb", type=Path, required=required, help="база знаний в Turtle-star")
    parser.add_argument("--policy", type=Path, required=required, help="политика (.gucon или UCP)")
    parser.add_argument("--policy-format", choices=("arrow", "ucp"), help="кодировка политики")
    parser.add_argument("--policy-iri", help="IRI политики для стрелочного синтаксиса")


def _add_evaluation(parser: argparse.ArgumentParser) -> None:
    _add_inputs(parser)
    parser.add_argument("--time", type=_instant, required=True, help="момент оценки (xsd:dateTime)")
    parser.add_argument("--kb-iri", help="IRI базы в отчете")
    parser.add_argument("--entity", help="ограничить одним исполнителем")
    parser.add_argument("--workers", type=int, default=1, help="потоков для правил")
    parser.add_argument("--report", type=Path, help="куда записать отчет Turtle-star")
    parser.add_argument("--out", type=Path, help="куда записать вывод вместо stdout")


def build_parser() -> argparse.ArgumentParser:
    """Разбор аргументов командной строки."""
    parser = argparse.ArgumentParser(prog="gucon-obligations", description=__doc__)
    parser.add_argument("--verbose", "-v", action="store_true", help="отладочный журнал")
    commands = parser.add_subparsers(dest="command", required=True)

    states = commands.add_parser("states", help="состояния обязательств на момент времени")
    _add_evaluation(states)
    states.set_defaults(handler=cmd_states)

    check = commands.add_parser("check", help="проверка соответствия базы политике")
    _add_evaluation(check)
    check.set_defaults(handler=cmd_check)

    validate = commands.add_parser("validate", help="разбор и проверка входных файлов")
    _add_inputs(validate, required=False)
    validate.add_argument("--report", type=Path, help="отчет для обратного чтения")
    validate.set_defaults(handler=cmd_validate)

    generate = commands.add_parser("generate", help="синтетические базы и политики по шагам задачи")
    generate.add_argument("--config", type=Path, help="конфигурация TOML")
    generate.add_argument("--seed", type=int, help="зерно генерации")
    generate.add_argument("--out", type=Path, required=True, help="каталог для файлов")
    generate.set_defaults(handler=cmd_generate)

    bench = commands.add_parser("bench", help="замеры задачи бенчмарка")
    bench.add_argument("--config", type=Path, help="конфигурация TOML")
    bench.add_argument("--seed", type=int, help="зерно генерации")
    bench.add_argument("--out", type=Path, required=True, help="каталог для файлов и CSV")
    bench.add_argument("--isolation", choices=("process", "inline"), help="изоляция замеров")
    bench.add_argument("--workers", type=int, help="потоков для правил")
    bench.add_argument("--db", help="URL БД или путь к файлу SQLite для сохранения прогона")
    bench.set_defaults(handler=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    """Точка входа."""
    args = build_parser().parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        return args.handler(args)
    except (GuconError, OSError, ValueError) as e:
        print(f"ошибка: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
