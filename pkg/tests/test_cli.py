"""CLI flag parsing, config-file merging, and exit codes."""
import xml.etree.ElementTree as ET

import pytest

from selfcma import cli
from selfcma.runlog import RunLog


def _run_args(out, extra=()):
    return [
        "run",
        "--problem",
        "sphere",
        "--dim",
        "4",
        "--mode",
        "plain",
        "--lambda",
        "8",
        "--runs",
        "2",
        "--seed",
        "17",
        "--budget",
        "8000",
        "--target",
        "1e-6",
        "--out",
        str(out),
        *extra,
    ]


def test_run_writes_logs_and_returns_zero(tmp_path, capsys):
    code = cli.main(_run_args(tmp_path / "out"))
    assert code == 0
    assert (tmp_path / "out" / "run_001.csv").exists()
    assert "2/2 runs" in capsys.readouterr().out


def test_mode_alias_self_means_self_adaptive(tmp_path):
    args = _run_args(tmp_path / "out")
    args[args.index("plain")] = "self"
    assert cli.main(args) == 0
    config = (tmp_path / "out" / "config.txt").read_text()
    assert "mode=self_adaptive" in config


def test_plot_and_compare_round_trip(tmp_path, capsys):
    a = tmp_path / "a"
    b = tmp_path / "b"
    assert cli.main(_run_args(a)) == 0
    assert cli.main(_run_args(b)) == 0
    capsys.readouterr()

    fig = tmp_path / "fig.svg"
    assert cli.main(["plot", "--in", str(a), "--out", str(fig)]) == 0
    ET.parse(fig)

    assert cli.main(["compare", "--a", str(a), "--b", str(b)]) == 0
    out = capsys.readouterr().out
    ratio_line = [l for l in out.splitlines() if l.startswith("ratio")][0]
    assert float(ratio_line.split("=")[1]) == pytest.approx(1.0)


def test_config_file_supplies_defaults_cli_wins(tmp_path, capsys):
    conf = tmp_path / "exp.conf"
    conf.write_text(
        "problem=sphere\ndim=4\nmode=plain\nlam=8\nruns=2\nseed=17\n"
        "budget=8000\ntarget=1e-6\nout_dir=" + str(tmp_path / "from_conf") + "\n"
    )
    assert cli.main(["run", "--config", str(conf)]) == 0
    assert (tmp_path / "from_conf" / "summary.csv").exists()

    # a flag overrides the same key from the file
    assert (
        cli.main(["run", "--config", str(conf), "--out", str(tmp_path / "cli_out")])
        == 0
    )
    assert (tmp_path / "cli_out" / "summary.csv").exists()
    assert "seed=17" in (tmp_path / "cli_out" / "config.txt").read_text()


def test_missing_required_field_is_config_error(tmp_path, capsys):
    code = cli.main(["run", "--problem", "sphere", "--dim", "4", "--mode", "plain"])
    assert code == 1
    assert "out_dir" in capsys.readouterr().err


def test_unknown_flag_and_bad_value_exit_one(tmp_path, capsys):
    assert cli.main(_run_args(tmp_path / "x", extra=["--bogus"])) == 1
    args = _run_args(tmp_path / "x")
    args[args.index("4")] = "four"
    assert cli.main(args) == 1
    assert cli.main(["frobnicate"]) == 1
    assert cli.main([]) == 1


def test_bad_config_file_path_exit_one(tmp_path, capsys):
    assert cli.main(["run", "--config", str(tmp_path / "nope.conf")]) == 1
    assert "not found" in capsys.readouterr().err


def test_plot_missing_directory_exit_one(tmp_path, capsys):
    code = cli.main(["plot", "--in", str(tmp_path / "void"), "--out", "x.svg"])
    assert code == 1


def test_plot_unwritable_output_exit_two(tmp_path, capsys):
    a = tmp_path / "a"
    assert cli.main(_run_args(a)) == 0
    code = cli.main(
        ["plot", "--in", str(a), "--out", str(tmp_path / "no_dir" / "fig.svg")]
    )
    assert code == 2


def test_csv_logs_loadable_after_cli_run(tmp_path):
    assert cli.main(_run_args(tmp_path / "out")) == 0
    log = RunLog.from_csv(tmp_path / "out" / "run_000.csv")
    assert len(log) > 0
    assert log.records[-1].stop_reason != ""
