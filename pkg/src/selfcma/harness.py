"""Seeded batch experiments: many runs, CSV logs, one summary table.

Run i of an experiment consumes stream child i of the master seed and is
completely independent of every other run, so the batch can execute inline
or in a process pool and still produce byte-identical output files.
"""
from __future__ import annotations

import dataclasses
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import adapt, benchmarks, core, restart
from .errors import ConfigError, EmptyInput
from .restart import RestartReport, StopConfig
from .rng import RngStream
from .runlog import RunLog, format_float, lower_median

MODES = ("plain", "self_adaptive")

SUMMARY_NAME = "summary.csv"
CONFIG_NAME = "config.txt"
SUMMARY_HEADER = "run,evals_to_target,total_evals,best_f,gens,restarts,stop_reason"

# Environment variable capping worker processes; unset or "1" means inline.
THREADS_ENV = "SELFCMA_THREADS"


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that defines one experiment cell.

    The flat key=value config-file format mirrors these field names
    one-to-one; see `parse_config_text`.
    """

    problem: str
    dim: int
    mode: str
    out_dir: str
    lam: int = 100
    runs: int = 15
    seed: int = 42
    budget: int = 500_000
    target: float = 1e-10
    sigma0: float = core.INIT_SIGMA
    lambda_h: int = adapt.DEFAULT_LAMBDA_H
    tol_hist_fun: float = 1e-12
    tol_x: float | None = None
    max_cond: float = 1e14
    stagnation_gens: int | None = None

    def __post_init__(self):
        if self.problem not in benchmarks.PROBLEM_NAMES:
            raise ConfigError(
                f"problem: expected one of {benchmarks.PROBLEM_NAMES}, "
                f"got {self.problem!r}"
            )
        if self.dim < 2:
            raise ConfigError(f"dim: must be >= 2, got {self.dim}")
        if self.mode not in MODES:
            raise ConfigError(f"mode: expected one of {MODES}, got {self.mode!r}")
        if self.lam < 2:
            raise ConfigError(f"lam: must be >= 2, got {self.lam}")
        if self.runs < 1:
            raise ConfigError(f"runs: must be >= 1, got {self.runs}")
        if self.budget < 1:
            raise ConfigError(f"budget: must be >= 1, got {self.budget}")
        if not math.isfinite(self.target):
            raise ConfigError(f"target: must be finite, got {self.target}")
        if not (math.isfinite(self.sigma0) and self.sigma0 > 0):
            raise ConfigError(f"sigma0: must be > 0, got {self.sigma0}")
        if self.lambda_h < 2:
            raise ConfigError(f"lambda_h: must be >= 2, got {self.lambda_h}")

    def stop_config(self) -> StopConfig:
        return StopConfig(
            max_evals=self.budget,
            target_f=self.target,
            tol_hist_fun=self.tol_hist_fun,
            tol_x=self.tol_x,
            max_cond=self.max_cond,
            stagnation_gens=self.stagnation_gens,
        )

    def to_text(self) -> str:
        """The config as flat key=value lines (one field per line)."""
        lines = []
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if value is None:
                continue
            if isinstance(value, float):
                value = format_float(value)
            lines.append(f"{field.name}={value}")
        return "\n".join(lines) + "\n"


_INT_FIELDS = {"dim", "lam", "runs", "seed", "budget", "lambda_h", "stagnation_gens"}
_FLOAT_FIELDS = {"target", "sigma0", "tol_hist_fun", "tol_x", "max_cond"}


def parse_config_text(text: str) -> dict:
    """Parse flat key=value lines into typed config keyword arguments.

    Blank lines and lines starting with '#' are ignored. Unknown keys and
    unparsable values raise ConfigError naming the key.
    """
    known = {f.name for f in dataclasses.fields(ExperimentConfig)}
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in known:
            raise ConfigError(f"{key}: unknown config key")
        try:
            if key in _INT_FIELDS:
                out[key] = int(value)
            elif key in _FLOAT_FIELDS:
                out[key] = float(value)
            else:
                out[key] = value
        except ValueError as exc:
            raise ConfigError(f"{key}: cannot parse {value!r}") from exc
    return out


def run_name(index: int) -> str:
    return f"run_{index:03d}.csv"


def single_run(cfg: ExperimentConfig, index: int) -> RestartReport:
    """Execute run `index` of the experiment; pure apart from the report."""
    if not 0 <= index < cfg.runs:
        raise ConfigError(f"runs: run index {index} outside 0..{cfg.runs - 1}")
    run_rng = RngStream(cfg.seed).child(index)
    problem = benchmarks.make_problem(cfg.problem, cfg.dim, run_rng)
    return restart.ipop_run(
        problem,
        cfg.dim,
        cfg.mode,
        cfg.lam,
        cfg.stop_config(),
        run_rng,
        sigma0=cfg.sigma0,
        lambda_h=cfg.lambda_h,
    )


def evals_to_target(log: RunLog, target: float) -> int | None:
    """Evaluations consumed up to the first generation whose best hit target."""
    for record in log:
        if record.best_f <= target:
            return record.evals
    return None


def _summary_row(index: int, cfg: ExperimentConfig, report: RestartReport) -> str:
    hit = evals_to_target(report.log, cfg.target)
    return ",".join(
        [
            str(index),
            "" if hit is None else str(hit),
            str(report.total_evals),
            format_float(report.best_f),
            str(len(report.log)),
            str(report.restarts),
            str(report.final_reason),
        ]
    )


def _worker_count(n_jobs: int) -> int:
    raw = os.environ.get(THREADS_ENV, "").strip()
    if not raw:
        return 1
    try:
        workers = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{THREADS_ENV}: cannot parse {raw!r}") from exc
    if workers < 1:
        raise ConfigError(f"{THREADS_ENV}: must be >= 1, got {workers}")
    return min(workers, n_jobs)


def run_experiment(cfg: ExperimentConfig) -> list[RestartReport]:
    """Run the whole experiment and write its output directory.

    Produces run_000.csv .. run_NNN.csv (one per run), summary.csv, and
    config.txt inside cfg.out_dir. Reports come back in run order. Worker
    processes, if the environment enables them, each own whole runs, so
    scheduling cannot influence any numeric result.
    """
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    workers = _worker_count(cfg.runs)
    indices = list(range(cfg.runs))
    if workers <= 1:
        reports = [single_run(cfg, i) for i in indices]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(single_run, [cfg] * cfg.runs, indices))

    for i, report in zip(indices, reports):
        report.log.to_csv(out_dir / run_name(i))
    summary_lines = [SUMMARY_HEADER]
    summary_lines += [_summary_row(i, cfg, r) for i, r in zip(indices, reports)]
    (out_dir / SUMMARY_NAME).write_text("\n".join(summary_lines) + "\n")
    (out_dir / CONFIG_NAME).write_text(cfg.to_text())
    return reports


def load_run_logs(directory) -> list[RunLog]:
    """All run_*.csv logs in a directory, sorted by run index."""
    directory = Path(directory)
    if not directory.is_dir():
        raise ConfigError(f"out_dir: {directory} is not a directory")
    paths = sorted(directory.glob("run_*.csv"))
    if not paths:
        raise EmptyInput(f"no run_*.csv files in {directory}")
    return [RunLog.from_csv(p) for p in paths]


def read_summary_column(directory, column: str) -> list[str]:
    """One column of a directory's summary.csv, as raw strings."""
    path = Path(directory) / SUMMARY_NAME
    if not path.is_file():
        raise ConfigError(f"out_dir: {path} not found")
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    if column not in header:
        raise ConfigError(f"{column}: no such summary column")
    pos = header.index(column)
    return [line.split(",")[pos] for line in lines[1:] if line]


def median_evals_to_target(directory) -> float:
    """Lower median of per-run evals-to-target; misses count as infinity."""
    cells = read_summary_column(directory, "evals_to_target")
    values = [float(c) if c else math.inf for c in cells]
    return float(lower_median(values))


def compare_dirs(dir_a, dir_b) -> dict:
    """Median evals-to-target of two experiment directories and their ratio."""
    med_a = median_evals_to_target(dir_a)
    med_b = median_evals_to_target(dir_b)
    if med_b == 0:
        raise EmptyInput("second directory has zero median evals-to-target")
    ratio = med_a / med_b if math.isfinite(med_a) or math.isfinite(med_b) else math.nan
    return {"median_a": med_a, "median_b": med_b, "ratio": ratio}
