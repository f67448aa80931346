"""The (mu/mu_w, lambda) CMA-ES state machine.

States are immutable values: `update_distribution` consumes a state plus an
evaluated population and returns a fresh state. That purity is what makes it
possible to re-run a distribution update from an earlier state under
different learning rates, which is exactly the replay the hyper-parameter
adaptation layer is built on.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    DimensionMismatch,
    InvalidDimension,
    InvalidLambda,
    NonFiniteFitness,
    NonFiniteState,
)
from .linalg import EigenDecomp
from .rng import RngStream

# Benchmark-convention initial distribution: mean uniform in INIT_BOX^n,
# step-size INIT_SIGMA, identity covariance.
INIT_SIGMA = 2.0
INIT_BOX = (-4.0, 4.0)


def default_lambda(n: int) -> int:
    """4 + floor(3 ln n), the standard population size for dimension n."""
    if n < 1:
        raise InvalidDimension(f"n must be >= 1, got {n}")
    return 4 + int(math.floor(3.0 * math.log(n)))


def expected_norm(n: int) -> float:
    """E||N(0, I_n)|| via sqrt(n) * (1 - 1/(4n) + 1/(21 n^2))."""
    if n < 1:
        raise InvalidDimension(f"n must be >= 1, got {n}")
    return math.sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n))


@dataclass(frozen=True, eq=False)
class StrategyParams:
    """Scalar hyper-parameters of one CMA-ES instance.

    Attributes:
        n: search-space dimension.
        lam: population size (number of candidates per generation).
        mu: number of selected parents.
        weights: (mu,) positive recombination weights, non-increasing, sum 1.
        mu_w: variance-effective selection mass, 1 / sum(weights^2).
        c_sigma: step-size path learning rate, in (0, 1].
        d_sigma: step-size damping, > 0.
        c_c: covariance path learning rate, in (0, 1].
        c_1: rank-one covariance learning rate, >= 0.
        c_mu: rank-mu covariance learning rate, >= 0; c_1 + c_mu <= 1.
    """

    n: int
    lam: int
    mu: int
    weights: np.ndarray
    mu_w: float
    c_sigma: float
    d_sigma: float
    c_c: float
    c_1: float
    c_mu: float

    def __post_init__(self):
        if self.n < 1:
            raise InvalidDimension(f"n must be >= 1, got {self.n}")
        if self.lam < 2:
            raise InvalidLambda(f"lam must be >= 2, got {self.lam}")
        if not 1 <= self.mu <= self.lam:
            raise InvalidLambda(f"mu must lie in [1, lam], got mu={self.mu}")
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", w)
        if w.shape != (self.mu,):
            raise DimensionMismatch(f"weights shape {w.shape} != ({self.mu},)")
        if np.any(w <= 0.0):
            raise ValueError("recombination weights must be strictly positive")
        if np.any(np.diff(w) > 0.0):
            raise ValueError("recombination weights must be non-increasing")
        if abs(float(w.sum()) - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {float(w.sum())!r}")
        if not 0.0 < self.c_sigma <= 1.0:
            raise ValueError(f"c_sigma must lie in (0, 1], got {self.c_sigma}")
        if not self.d_sigma > 0.0:
            raise ValueError(f"d_sigma must be > 0, got {self.d_sigma}")
        if not 0.0 < self.c_c <= 1.0:
            raise ValueError(f"c_c must lie in (0, 1], got {self.c_c}")
        if self.c_1 < 0.0 or self.c_mu < 0.0:
            raise ValueError("c_1 and c_mu must be >= 0")
        if self.c_1 + self.c_mu > 1.0:
            raise ValueError(
                f"c_1 + c_mu must be <= 1, got {self.c_1 + self.c_mu}"
            )

    def with_cov_rates(self, c_1: float, c_mu: float, c_c: float) -> "StrategyParams":
        """Copy of these parameters with the three covariance rates replaced."""
        return dataclasses.replace(
            self, c_1=float(c_1), c_mu=float(c_mu), c_c=float(c_c)
        )


def default_weights(mu: int) -> np.ndarray:
    """Log-linear recombination weights w_i ~ ln(mu + 1/2) - ln(i), normalized."""
    if mu < 1:
        raise InvalidLambda(f"mu must be >= 1, got {mu}")
    raw = math.log(mu + 0.5) - np.log(np.arange(1, mu + 1, dtype=float))
    return raw / raw.sum()


def default_params(n: int, lam: int | None = None) -> StrategyParams:
    """Standard parameter set for dimension n.

    lam defaults to 4 + floor(3 ln n); mu is floor(lam / 2); the remaining
    scalars follow the usual cumulation and rank-based update constants.
    """
    if lam is None:
        lam = default_lambda(n)
    if lam < 2:
        raise InvalidLambda(f"lam must be >= 2, got {lam}")
    mu = lam // 2
    weights = default_weights(mu)
    mu_w = 1.0 / float(np.sum(weights**2))
    c_sigma = (mu_w + 2.0) / (n + mu_w + 3.0)
    d_sigma = 1.0 + c_sigma + 2.0 * max(
        0.0, math.sqrt((mu_w - 1.0) / (n + 1.0)) - 1.0
    )
    c_c = 4.0 / (n + 4.0)
    c_1 = 2.0 / ((n + 1.3) ** 2 + mu_w)
    # Cap keeps the covariance decay factor non-negative for any (n, lam);
    # it only binds for very large populations in very low dimension.
    c_mu = min(
        1.0 - c_1,
        2.0 * (mu_w - 2.0 + 1.0 / mu_w) / ((n + 2.0) ** 2 + mu_w),
    )
    return StrategyParams(
        n=n,
        lam=lam,
        mu=mu,
        weights=weights,
        mu_w=mu_w,
        c_sigma=c_sigma,
        d_sigma=d_sigma,
        c_c=c_c,
        c_1=c_1,
        c_mu=c_mu,
    )


@dataclass(frozen=True, eq=False)
class EvaluatedPopulation:
    """A generation's candidates, their fitness, and a stable ascending ranking.

    `order` is the permutation that sorts fitness ascending; ties keep the
    lower candidate index first, so the ranking is reproducible bit for bit.
    """

    candidates: np.ndarray  # (lam, n)
    fitness: np.ndarray  # (lam,)
    order: np.ndarray  # (lam,) permutation of 0..lam-1

    @classmethod
    def from_fitness(cls, candidates, fitness) -> "EvaluatedPopulation":
        candidates = np.asarray(candidates, dtype=float)
        fitness = np.asarray(fitness, dtype=float)
        if candidates.ndim != 2 or fitness.shape != (candidates.shape[0],):
            raise DimensionMismatch(
                f"candidates {candidates.shape} and fitness {fitness.shape} disagree"
            )
        if np.any(np.isnan(fitness)):
            bad = int(np.flatnonzero(np.isnan(fitness))[0])
            raise NonFiniteFitness(f"objective returned NaN for candidate {bad}")
        order = np.argsort(fitness, kind="stable")
        return cls(candidates=candidates, fitness=fitness, order=order)

    @property
    def lam(self) -> int:
        return self.candidates.shape[0]

    @property
    def n(self) -> int:
        return self.candidates.shape[1]

    @property
    def best(self) -> np.ndarray:
        return self.candidates[self.order[0]]

    @property
    def best_fitness(self) -> float:
        return float(self.fitness[self.order[0]])

    @property
    def median_fitness(self) -> float:
        """Lower median of the fitness values."""
        ranked = self.fitness[self.order]
        return float(ranked[(self.lam - 1) // 2])

    def ranked(self, k: int) -> np.ndarray:
        """The k best candidates as rows, ascending fitness."""
        return self.candidates[self.order[:k]]


@dataclass(frozen=True, eq=False)
class CmaState:
    """Full strategy state after `gen` completed generations.

    `eigen` always decomposes `cov`; it is carried along so samplers and
    replays never recompute it. `last_pop` is the population whose update
    produced this state (None for an initial state). `eval_count` counts
    objective evaluations actually spent; distribution replays do not touch
    the objective and therefore never increment it.
    """

    params: StrategyParams
    mean: np.ndarray
    sigma: float
    cov: np.ndarray
    path_sigma: np.ndarray
    path_c: np.ndarray
    gen: int
    eigen: EigenDecomp
    last_pop: EvaluatedPopulation | None
    eval_count: int


def initial_state(params: StrategyParams, mean, sigma: float) -> CmaState:
    """Fresh state: identity covariance, zero evolution paths, generation 0."""
    mean = np.asarray(mean, dtype=float)
    if mean.shape != (params.n,):
        raise DimensionMismatch(f"mean shape {mean.shape} != ({params.n},)")
    if not (math.isfinite(sigma) and sigma > 0.0):
        raise ValueError(f"sigma must be a positive finite number, got {sigma}")
    cov = np.eye(params.n)
    return CmaState(
        params=params,
        mean=mean,
        sigma=float(sigma),
        cov=cov,
        path_sigma=np.zeros(params.n),
        path_c=np.zeros(params.n),
        gen=0,
        eigen=linalg.sym_eigen(cov),
        last_pop=None,
        eval_count=0,
    )


def sample_population(state: CmaState, rng: RngStream) -> np.ndarray:
    """Draw lam candidates x_k = m + sigma * B diag(sqrt(w)) z_k, z_k ~ N(0, I).

    Returns a (lam, n) array; candidate k consumes the k-th n-vector of
    standard normals from `rng`.
    """
    p = state.params
    z = rng.standard_normal_matrix(p.lam, p.n)
    scaled = z * np.sqrt(state.eigen.eigenvalues)
    return state.mean + state.sigma * (scaled @ state.eigen.basis.T)


def update_distribution(state: CmaState, pop: EvaluatedPopulation) -> CmaState:
    """One full distribution update from an evaluated population.

    In order: weighted recombination of the mean, conjugate evolution path
    and step-size update, the stall indicator h_sigma, the covariance
    evolution path, and the rank-one plus rank-mu covariance update. The
    step-size path is whitened with the inverse square root of the current
    (pre-update) covariance.

    Does not call the objective and does not advance `eval_count`; replaying
    an update from a stored population is therefore free in terms of budget.

    Raises:
        NonFiniteState: if any updated field is NaN or infinite.
        NonPositiveDefinite: if the updated covariance is degenerate.
    """
    p = state.params
    if pop.lam != p.lam or pop.n != p.n:
        raise DimensionMismatch(
            f"population ({pop.lam}, {pop.n}) does not match params "
            f"({p.lam}, {p.n})"
        )

    selected = pop.candidates[pop.order[: p.mu]]
    new_mean = p.weights @ selected
    step = (new_mean - state.mean) / state.sigma

    chi_n = expected_norm(p.n)
    inv_sqrt_c = linalg.inv_sqrt(state.eigen)
    path_sigma = (1.0 - p.c_sigma) * state.path_sigma + math.sqrt(
        p.c_sigma * (2.0 - p.c_sigma)
    ) * math.sqrt(p.mu_w) * (inv_sqrt_c @ step)
    ps_norm = float(np.linalg.norm(path_sigma))

    t_next = state.gen + 1
    threshold = (
        math.sqrt(1.0 - (1.0 - p.c_sigma) ** (2 * t_next))
        * (1.4 + 2.0 / (p.n + 1.0))
        * chi_n
    )
    h_sigma = 1.0 if ps_norm < threshold else 0.0

    path_c = (1.0 - p.c_c) * state.path_c + h_sigma * math.sqrt(
        p.c_c * (2.0 - p.c_c)
    ) * math.sqrt(p.mu_w) * step

    steps = (selected - state.mean) / state.sigma
    rank_mu = (steps.T * p.weights) @ steps
    new_cov = (
        (1.0 - p.c_1 - p.c_mu) * state.cov
        + p.c_1 * np.outer(path_c, path_c)
        + p.c_mu * rank_mu
    )

    new_sigma = state.sigma * math.exp(
        (p.c_sigma / p.d_sigma) * (ps_norm / chi_n - 1.0)
    )

    if not (
        np.all(np.isfinite(new_mean))
        and np.all(np.isfinite(path_sigma))
        and np.all(np.isfinite(path_c))
        and np.all(np.isfinite(new_cov))
        and math.isfinite(new_sigma)
        and new_sigma > 0.0
    ):
        raise NonFiniteState(f"strategy state diverged at generation {t_next}")

    eigen = linalg.sym_eigen(new_cov)
    return CmaState(
        params=p,
        mean=new_mean,
        sigma=new_sigma,
        cov=linalg.symmetrize(new_cov),
        path_sigma=path_sigma,
        path_c=path_c,
        gen=t_next,
        eigen=eigen,
        last_pop=pop,
        eval_count=state.eval_count,
    )


def generation(objective, state: CmaState, rng: RngStream) -> CmaState:
    """Sample, evaluate, rank, update; advances `eval_count` by lam."""
    candidates = sample_population(state, rng)
    fitness = np.array([float(objective(x)) for x in candidates])
    pop = EvaluatedPopulation.from_fitness(candidates, fitness)
    updated = update_distribution(state, pop)
    return dataclasses.replace(
        updated, eval_count=state.eval_count + state.params.lam
    )
