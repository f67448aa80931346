"""Command-line interface.

Three subcommands: `run` executes a seeded experiment and writes CSV logs,
`plot` turns a results directory into an SVG trajectory chart, `compare`
prints the median evals-to-target ratio of two result directories. Exit
codes: 0 success, 1 configuration error, 2 runtime failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from . import harness, runlog, svgplot
from .errors import ConfigError, SelfCmaError

# CLI flag name -> ExperimentConfig field for the `run` subcommand
_RUN_FIELDS = {
    "problem": "problem",
    "dim": "dim",
    "mode": "mode",
    "out": "out_dir",
    "lam": "lam",
    "runs": "runs",
    "seed": "seed",
    "budget": "budget",
    "target": "target",
    "sigma0": "sigma0",
    "lambda_h": "lambda_h",
    "tol_hist_fun": "tol_hist_fun",
    "tol_x": "tol_x",
    "max_cond": "max_cond",
    "stagnation_gens": "stagnation_gens",
}

_REQUIRED = ("problem", "dim", "mode", "out_dir")

# accepted spellings of the adaptive mode
_MODE_ALIASES = {"self": "self_adaptive", "self_adaptive": "self_adaptive",
                 "plain": "plain"}


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as ConfigError instead of exiting."""

    def error(self, message):
        raise ConfigError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="selfcma", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(
        dest="command", metavar="{run,plot,compare}", parser_class=_Parser
    )

    run = sub.add_parser("run", help="execute a seeded batch of optimization runs")
    run.add_argument("--problem", choices=harness.benchmarks.PROBLEM_NAMES)
    run.add_argument("--dim", type=int)
    run.add_argument("--mode", choices=sorted(_MODE_ALIASES))
    run.add_argument("--lambda", dest="lam", type=int)
    run.add_argument("--runs", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--budget", type=int)
    run.add_argument("--target", type=float)
    run.add_argument("--sigma0", type=float)
    run.add_argument("--lambda-h", dest="lambda_h", type=int)
    run.add_argument("--tol-hist-fun", dest="tol_hist_fun", type=float)
    run.add_argument("--tol-x", dest="tol_x", type=float)
    run.add_argument("--max-cond", dest="max_cond", type=float)
    run.add_argument("--stagnation-gens", dest="stagnation_gens", type=int)
    run.add_argument("--out", help="output directory for CSV logs")
    run.add_argument("--config", help="key=value file; command line wins")

    plot = sub.add_parser("plot", help="render a results directory as an SVG chart")
    plot.add_argument("--in", dest="in_dir", required=True)
    plot.add_argument("--out", required=True, help="SVG file to write")
    plot.add_argument("--title", default="")

    compare = sub.add_parser(
        "compare", help="median evals-to-target ratio of two runs"
    )
    compare.add_argument("--a", required=True)
    compare.add_argument("--b", required=True)

    return parser


def _merged_run_config(args) -> harness.ExperimentConfig:
    """Combine config-file values and CLI flags; flags take precedence."""
    merged: dict = {}
    if args.config is not None:
        path = Path(args.config)
        if not path.is_file():
            raise ConfigError(f"config: {path} not found")
        merged.update(harness.parse_config_text(path.read_text()))
    for attr, field in _RUN_FIELDS.items():
        value = getattr(args, attr, None)
        if value is not None:
            merged[field] = value
    if "mode" in merged:
        mode = merged["mode"]
        if mode not in _MODE_ALIASES:
            raise ConfigError(
                f"mode: expected one of {sorted(_MODE_ALIASES)}, got {mode!r}"
            )
        merged["mode"] = _MODE_ALIASES[mode]
    missing = [name for name in _REQUIRED if name not in merged]
    if missing:
        raise ConfigError(f"{missing[0]}: required (give a flag or config entry)")
    return harness.ExperimentConfig(**merged)


def _cmd_run(args) -> int:
    cfg = _merged_run_config(args)
    reports = harness.run_experiment(cfg)
    hits = sum(
        1 for r in reports
        if harness.evals_to_target(r.log, cfg.target) is not None
    )
    print(f"{cfg.problem} dim={cfg.dim} mode={cfg.mode}: "
          f"{hits}/{cfg.runs} runs hit {cfg.target:g}; logs in {cfg.out_dir}")
    return 0


def _cmd_plot(args) -> int:
    logs = harness.load_run_logs(args.in_dir)
    median = runlog.aggregate_medians(logs)
    title = args.title or f"median of {len(logs)} runs"
    svgplot.emit_plot(median, args.out, title=title)
    print(f"wrote {args.out}")
    return 0


def _cmd_compare(args) -> int:
    result = harness.compare_dirs(args.a, args.b)
    print(f"a: median evals to target = {result['median_a']:g} ({args.a})")
    print(f"b: median evals to target = {result['median_b']:g} ({args.b})")
    print(f"ratio (a/b) = {result['ratio']:.6g}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise ConfigError("missing subcommand (run, plot, or compare)")
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "plot":
            return _cmd_plot(args)
        return _cmd_compare(args)
    except ConfigError as exc:
        print(f"selfcma: config error: {exc}", file=sys.stderr)
        return 1
    except SelfCmaError as exc:
        print(f"selfcma: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"selfcma: i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
