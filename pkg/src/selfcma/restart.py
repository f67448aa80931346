"""Stopping criteria and the restart driver with doubling population size.

A run is a sequence of segments. Each segment optimizes until one of the
stopping criteria fires; hitting the target or exhausting the budget ends
the run, anything else doubles lambda and restarts from a freshly drawn
mean with the initial step-size.
"""
from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass

import numpy as np

from . import adapt, core
from .core import CmaState, StrategyParams
from .errors import ConfigError
from .rng import RngStream
from .runlog import GenRecord, RunLog


class StopReason(str, enum.Enum):
    """Why a segment (or the whole run) stopped."""

    TARGET_HIT = "target_hit"
    TOL_HIST_FUN = "tol_hist_fun"
    TOL_X = "tol_x"
    CONDITION_COV = "condition_cov"
    STAGNATION = "stagnation"
    BUDGET_EXHAUSTED = "budget_exhausted"

    def __str__(self) -> str:  # so CSV cells carry the bare value
        return self.value

    @property
    def ends_run(self) -> bool:
        return self in (StopReason.TARGET_HIT, StopReason.BUDGET_EXHAUSTED)


@dataclass(frozen=True)
class StopConfig:
    """Stopping thresholds. None fields are resolved per segment.

    tol_x defaults to 1e-12 times the initial step-size; stagnation_gens to
    100 + ceil(100 n / lam). The function-history window is always
    10 + ceil(30 n / lam) generations.
    """

    max_evals: int
    target_f: float
    tol_hist_fun: float = 1e-12
    tol_x: float | None = None
    max_cond: float = 1e14
    stagnation_gens: int | None = None

    def __post_init__(self):
        if self.max_evals < 1:
            raise ConfigError(f"max_evals: must be >= 1, got {self.max_evals}")
        if not math.isfinite(self.target_f):
            raise ConfigError(f"target_f: must be finite, got {self.target_f}")
        if self.tol_hist_fun < 0:
            raise ConfigError(f"tol_hist_fun: must be >= 0, got {self.tol_hist_fun}")
        if self.tol_x is not None and self.tol_x <= 0:
            raise ConfigError(f"tol_x: must be > 0, got {self.tol_x}")
        if self.max_cond <= 1:
            raise ConfigError(f"max_cond: must be > 1, got {self.max_cond}")
        if self.stagnation_gens is not None and self.stagnation_gens < 1:
            raise ConfigError(
                f"stagnation_gens: must be >= 1, got {self.stagnation_gens}"
            )

    def resolved(self, n: int, lam: int, sigma0: float) -> "StopConfig":
        """Fill the None fields for a segment with this population size."""
        tol_x = self.tol_x if self.tol_x is not None else 1e-12 * sigma0
        stagnation = (
            self.stagnation_gens
            if self.stagnation_gens is not None
            else 100 + math.ceil(100.0 * n / lam)
        )
        return dataclasses.replace(self, tol_x=tol_x, stagnation_gens=stagnation)


def hist_window(n: int, lam: int) -> int:
    """Length of the best-fitness history window for the flatness check."""
    return 10 + math.ceil(30.0 * n / lam)


def check_stop(
    state: CmaState, best_history, cfg: StopConfig
) -> StopReason | None:
    """First stopping criterion triggered by the segment so far, or None.

    `best_history` holds the per-generation best fitness of the current
    segment, oldest first; `cfg` must already be resolved. Criteria are
    checked in a fixed priority order, target first, budget last.
    """
    hist = np.asarray(best_history, dtype=float)
    if hist.size < 1:
        raise ValueError("best_history must contain at least one generation")
    if cfg.tol_x is None or cfg.stagnation_gens is None:
        raise ConfigError("cfg: unresolved fields; call resolved() first")
    p = state.params

    if float(hist.min()) <= cfg.target_f:
        return StopReason.TARGET_HIT

    window = hist_window(p.n, p.lam)
    if hist.size >= window:
        tail = hist[-window:]
        if float(tail.max() - tail.min()) <= cfg.tol_hist_fun:
            return StopReason.TOL_HIST_FUN

    if state.sigma * math.sqrt(float(state.eigen.eigenvalues[-1])) <= cfg.tol_x:
        return StopReason.TOL_X

    if state.eigen.condition() > cfg.max_cond:
        return StopReason.CONDITION_COV

    if hist.size > cfg.stagnation_gens:
        running = np.minimum.accumulate(hist)
        # generations since the running best last improved
        improved = np.flatnonzero(np.diff(running) < 0)
        last = int(improved[-1]) + 1 if improved.size else 0
        if hist.size - 1 - last >= cfg.stagnation_gens:
            return StopReason.STAGNATION

    if state.eval_count >= cfg.max_evals:
        return StopReason.BUDGET_EXHAUSTED

    return None


@dataclass
class RestartReport:
    """Outcome of a full run across all restart segments."""

    restarts: int
    lambdas: list[int]
    total_evals: int
    best_f: float
    stop_reasons: list[StopReason]
    log: RunLog

    @property
    def final_reason(self) -> StopReason:
        return self.stop_reasons[-1]


def _record(
    gen: int, evals: int, best_f: float, state: CmaState, reason
) -> GenRecord:
    p = state.params
    pop = state.last_pop
    return GenRecord(
        gen=gen,
        evals=evals,
        best_f=best_f,
        median_f=pop.median_fitness,
        sigma=state.sigma,
        c1=p.c_1,
        cmu=p.c_mu,
        cc=p.c_c,
        stop_reason="" if reason is None else str(reason),
    )


def _segment_states(objective, mode, params, mean0, sigma0, seg_rng, lambda_h):
    """Yield the post-generation states of one segment, first generation included."""
    if mode == "plain":
        state = core.initial_state(params, mean0, sigma0)
        step_rng = seg_rng.child(0)
        while True:
            state = core.generation(objective, state, step_rng)
            yield state
    else:
        driver = adapt.init_driver(
            objective, params, mean0, sigma0, seg_rng, lambda_h=lambda_h
        )
        yield driver.primary
        while True:
            driver = adapt.self_step(driver, objective)
            yield driver.primary


def ipop_run(
    objective,
    n: int,
    mode: str,
    lambda0: int,
    cfg: StopConfig,
    rng: RngStream,
    sigma0: float = core.INIT_SIGMA,
    lambda_h: int = adapt.DEFAULT_LAMBDA_H,
) -> RestartReport:
    """Optimize until the target or the budget is hit, doubling lambda per restart.

    `mode` is "plain" for fixed default learning rates or "self_adaptive"
    for online rate adaptation. Segment s draws its starting mean uniformly
    in the initial box from stream child s of `rng`; within a segment the
    primary optimizer consumes grandchild 0 (and the adaptive mode's
    auxiliary optimizer grandchild 1), so a plain run and a self-adaptive
    run with the same stream see identical primary sampling noise.
    """
    if mode not in ("plain", "self_adaptive"):
        raise ConfigError(f"mode: expected 'plain' or 'self_adaptive', got {mode!r}")
    if lambda0 < 2:
        raise ConfigError(f"lambda0: must be >= 2, got {lambda0}")

    records: list[GenRecord] = []
    reasons: list[StopReason] = []
    lambdas: list[int] = []
    best_ever = math.inf
    evals_before = 0
    global_gen = 0
    lam = lambda0
    segment = 0

    while True:
        seg_rng = rng.child(segment)
        mean0 = seg_rng.uniform_vector(core.INIT_BOX[0], core.INIT_BOX[1], n)
        params = core.default_params(n, lam)
        seg_cfg = dataclasses.replace(
            cfg, max_evals=max(1, cfg.max_evals - evals_before)
        ).resolved(n, lam, sigma0)
        lambdas.append(lam)

        best_history: list[float] = []
        reason = None
        for state in _segment_states(
            objective, mode, params, mean0, sigma0, seg_rng, lambda_h
        ):
            best_ever = min(best_ever, state.last_pop.best_fitness)
            best_history.append(state.last_pop.best_fitness)
            global_gen += 1
            reason = check_stop(state, best_history, seg_cfg)
            records.append(
                _record(
                    global_gen,
                    evals_before + state.eval_count,
                    best_ever,
                    state,
                    reason,
                )
            )
            if reason is not None:
                break

        reasons.append(reason)
        evals_before += state.eval_count
        if reason.ends_run:
            break
        lam *= 2
        segment += 1

    return RestartReport(
        restarts=segment,
        lambdas=lambdas,
        total_evals=evals_before,
        best_f=best_ever,
        stop_reasons=reasons,
        log=RunLog(records=records),
    )
