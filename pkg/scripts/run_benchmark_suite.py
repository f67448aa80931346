#!/usr/bin/env python3
"""Run every benchmark problem in both modes and summarize the comparison.

Writes one experiment directory per (problem, mode) cell under --out, an
aggregate-median SVG per cell, and prints the self/plain ratio of median
evaluations-to-target for each problem. All output is a pure function of
the flags, so re-running with the same flags reproduces every byte.
"""
import argparse
from pathlib import Path

from selfcma import harness, runlog, svgplot
from selfcma.benchmarks import PROBLEM_NAMES


def parse_args():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results", help="output root directory")
    parser.add_argument("--dim", type=int, default=10)
    parser.add_argument("--lambda", dest="lam", type=int, default=100)
    parser.add_argument("--runs", type=int, default=15)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--budget", type=int, default=300_000)
    parser.add_argument("--target", type=float, default=1e-8)
    parser.add_argument(
        "--problems", nargs="+", default=list(PROBLEM_NAMES), choices=PROBLEM_NAMES
    )
    return parser.parse_args()


def run_cell(args, root, problem, mode):
    out = root / f"{problem}_{mode}"
    cfg = harness.ExperimentConfig(
        problem=problem,
        dim=args.dim,
        mode=mode,
        out_dir=str(out),
        lam=args.lam,
        runs=args.runs,
        seed=args.seed,
        budget=args.budget,
        target=args.target,
    )
    print(f"running {problem} {mode} ...", flush=True)
    harness.run_experiment(cfg)
    median = runlog.aggregate_medians(harness.load_run_logs(out))
    svgplot.emit_plot(
        median,
        out / "median.svg",
        title=f"{problem} dim={args.dim} {mode} (median of {args.runs} runs)",
    )
    return out


def main():
    args = parse_args()
    root = Path(args.out)
    cells = {}
    for problem in args.problems:
        for mode in harness.MODES:
            cells[problem, mode] = run_cell(args, root, problem, mode)

    print()
    print(f"median evaluations to reach {args.target:g} (lower median of runs):")
    for problem in args.problems:
        result = harness.compare_dirs(
            cells[problem, "self_adaptive"], cells[problem, "plain"]
        )
        print(
            f"  {problem:<12} self {result['median_a']:>9g}"
            f"  plain {result['median_b']:>9g}"
            f"  ratio (self/plain) {result['ratio']:.3f}"
        )


if __name__ == "__main__":
    main()
