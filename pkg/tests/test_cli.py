import pytest

from gucon_obligations.cli import EXIT_ERROR, EXIT_NON_COMPLIANT, EXIT_OK, main
from gucon_obligations.engine import ComplianceStatus
from gucon_obligations.io import load_graph_file
from gucon_obligations.report import extract_report
from gucon_obligations.vocab import EXP

AFTER_DEADLINE = "2025-07-21T10:00:00+02:00"


def _check(fixtures_dir, kb, policy="sign-report-policy.gucon", *extra):
    return main(
        ["check", "--kb", str(fixtures_dir / kb), "--policy", str(fixtures_dir / policy), "--time", AFTER_DEADLINE, *extra]
    )


def test_check_compliant(fixtures_dir, capsys):
    assert _check(fixtures_dir, "signed-kb.ttls") == EXIT_OK
    assert capsys.readouterr().out.strip() == "COMPLIANT"


def test_check_non_compliant(fixtures_dir, capsys):
    assert _check(fixtures_dir, "unsigned-kb.ttls") == EXIT_NON_COMPLIANT
    assert capsys.readouterr().out.strip() == "NON_COMPLIANT"


def test_check_ucp_policy(fixtures_dir):
    assert _check(fixtures_dir, "unsigned-kb.ttls", "sign-report-policy.ttl") == EXIT_NON_COMPLIANT


def test_check_for_other_entity(fixtures_dir):
    assert _check(fixtures_dir, "unsigned-kb.ttls", "sign-report-policy.gucon", "--entity", "<https://example.org/data/x>") == EXIT_OK


def test_empty_policy(fixtures_dir):
    assert _check(fixtures_dir, "unsigned-kb.ttls", "empty.gucon") == EXIT_OK


def test_errors_exit_with_two(fixtures_dir, capsys):
    assert _check(fixtures_dir, "absent.ttls") == EXIT_ERROR
    assert _check(fixtures_dir, "broken-kb.ttls") == EXIT_ERROR
    assert "ошибка" in capsys.readouterr().err


def test_bad_time_is_rejected(fixtures_dir):
    with pytest.raises(SystemExit) as e:
        main(["check", "--kb", str(fixtures_dir / "signed-kb.ttls"), "--policy", str(fixtures_dir / "sign-report-policy.gucon"),
              "--time", "2025-07-21T10:00:00"])
    assert e.value.code == 2


def test_states_table(fixtures_dir, capsys):
    code = main(
        ["states", "--kb", str(fixtures_dir / "signed-kb.ttls"), "--policy", str(fixtures_dir / "sign-report-policy.gucon"),
         "--time", AFTER_DEADLINE]
    )
    assert code == EXIT_OK
    header, row = capsys.readouterr().out.strip().splitlines()
    assert header.split() == ["rule", "entity", "action", "resource", "start", "deadline", "states"]
    assert row.endswith("EXPIRED,FULFILLED")
    assert "ex:doctor-angelika-smith" in row


def test_report_written_and_validated(fixtures_dir, tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("GUCON_BASE_NAMESPACE", raising=False)
    report = tmp_path / "report.ttls"
    assert _check(fixtures_dir, "unsigned-kb.ttls", "sign-report-policy.gucon", "--report", str(report)) == EXIT_NON_COMPLIANT
    contents = extract_report(load_graph_file(report))
    assert contents.status is ComplianceStatus.NON_COMPLIANT
    assert contents.kb_iri == str(EXP["kb-unsigned-kb"])
    assert contents.report_iri.startswith(f"{EXP}report-")
    capsys.readouterr()

    assert main(["validate", "--report", str(report)]) == EXIT_OK
    assert "status=NON_COMPLIANT" in capsys.readouterr().out


def test_validate_inputs(fixtures_dir, capsys):
    code = main(["validate", "--kb", str(fixtures_dir / "signed-kb.ttls"), "--policy", str(fixtures_dir / "sign-report-policy.ttl")])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "facts=11 events=1" in out
    assert "rules=1 obligations=1 atemporal=0" in out


def test_validate_needs_input():
    assert main(["validate"]) == EXIT_ERROR


def test_generate(tmp_path, capsys):
    config = tmp_path / "bench.toml"
    config.write_text(
        "[generation]\ntriple_target = 2000\n\n[task]\nid = 1\nsteps = [1, 2]\nfixed_size = 2000\n",
        encoding="utf-8",
    )
    assert main(["generate", "--config", str(config), "--out", str(tmp_path / "out")]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2
    assert (tmp_path / "out" / "step-02-policy.gucon").is_file()


def test_bench_writes_csv_and_database(tmp_path, capsys):
    config = tmp_path / "bench.toml"
    config.write_text(
        "[generation]\ntriple_target = 2000\n\n[task]\nid = 2\nsteps = [1000, 2000]\nfixed_size = 2\n\n"
        "[run]\nruns = 3\ntrim = 1\n",
        encoding="utf-8",
    )
    out = tmp_path / "out"
    db = tmp_path / "runs.sqlite3"
    code = main(["bench", "--config", str(config), "--out", str(out), "--isolation", "inline", "--db", str(db)])
    assert code == EXIT_OK
    assert (out / "samples.csv").is_file()
    assert (out / "summary.csv").is_file()
    assert db.is_file()
    assert capsys.readouterr().out.strip().splitlines()[-1].startswith("r2\t")
