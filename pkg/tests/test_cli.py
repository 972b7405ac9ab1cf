import subprocess
import sys

import pytest

from unitalbound.verify.cli import main
from unitalbound.verify.campaigns import run_suite
from unitalbound.verify.records import SUITES, CampaignConfig, SuiteReport



@pytest.mark.parametrize("suite", SUITES)
def test_small_runs_exit_zero(suite, tmp_path):
    out = tmp_path / f"{suite}.csv"
    assert main(["verify", suite, "--trials", "8", "--n-max", "3", "--out", str(out)]) == 0
    assert out.read_text().count("\n") >= 1


def test_bound_sweep_output_shape(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["verify", "bound-sweep", "--trials", "10", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("trial,n,q,channel_kind")
    assert len(lines) == 11


def test_same_seed_same_bytes(tmp_path):
    a, b, c = tmp_path / "a.json", tmp_path / "b.json", tmp_path / "c.json"
    argv = ["verify", "appendix", "--trials", "10", "--format", "json", "--seed", "4"]
    assert main([*argv, "--out", str(a)]) == 0
    assert main([*argv, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert main(["verify", "appendix", "--trials", "10", "--format", "json", "--seed", "5", "--out", str(c)]) == 0
    assert a.read_bytes() != c.read_bytes()


def test_parallel_jobs_match_serial(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["verify", "bound-sweep", "--trials", "24"]
    assert main([*argv, "--out", str(a)]) == 0
    assert main([*argv, "--jobs", "2", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("trials = 5\nn-max = 3\nformat = json\n")
    out = tmp_path / "o.csv"
    assert main(["verify", "bound-sweep", "--config", str(cfg), "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 6 and lines[0].startswith("trial,")


def test_stdout_when_no_out(capsys):
    assert main(["verify", "envariance", "--trials", "3"]) == 0
    captured = capsys.readouterr()
    assert captured.out.startswith("check,trial,n,")
    assert "0 violations" in captured.err


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "entropy", "--n-min", "5", "--n-max", "3"],
        ["verify", "entropy", "--trials", "0"],
        ["verify", "entropy", "--config", "/nonexistent/cfg.ini"],
    ],
)
def test_bad_config_exits_two(argv, capsys):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_unwritable_out_exits_two(tmp_path, capsys):
    bad = tmp_path / "no" / "such" / "dir.csv"
    assert main(["verify", "envariance", "--trials", "2", "--out", str(bad)]) == 2
    assert str(bad) in capsys.readouterr().err


def test_usage_errors_exit_two():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "not-a-suite"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify", "entropy", "--format", "xml"])
    assert exc.value.code == 2


def test_violation_exits_one(monkeypatch, tmp_path):
    def fake(cfg, jobs=1):
        rep = SuiteReport(cfg.suite)
        rep.add_check("forced", 0, 2, 1.0, 0.0, 1e-9)
        return rep

    monkeypatch.setattr("unitalbound.verify.cli.run_suite", fake)
    assert main(["verify", "entropy", "--out", str(tmp_path / "x.csv")]) == 1


def test_module_entry_point(tmp_path):
    out = tmp_path / "e.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "unitalbound", "verify", "entropy", "--trials", "3", "--out", str(out)],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.exists()


def test_run_suite_report_is_clean():
    rep = run_suite(CampaignConfig("counterexamples", n_min=2, n_max=4))
    assert rep.ok and rep.records
