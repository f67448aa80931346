"""Straight-line re-implementations used as test oracles.

Deliberately independent of the package internals: plain numpy, explicit
loops, np.diag instead of broadcasting tricks, every formula written out
once more. If the library and these transcriptions agree, a shared typo is
about the only way both can be wrong.
"""
import numpy as np


def reference_default_params(n, lam=None):
    """Dimension-derived strategy constants, written out term by term."""
    if lam is None:
        lam = 4 + int(np.floor(3 * np.log(n)))
    mu = lam // 2
    raw = np.array([np.log(mu + 0.5) - np.log(i) for i in range(1, mu + 1)])
    weights = raw / np.sum(raw)
    mu_w = 1.0 / np.sum(weights**2)
    c_sigma = (mu_w + 2.0) / (n + mu_w + 3.0)
    d_sigma = 1.0 + c_sigma + 2.0 * max(0.0, np.sqrt((mu_w - 1.0) / (n + 1.0)) - 1.0)
    c_c = 4.0 / (n + 4.0)
    c_1 = 2.0 / ((n + 1.3) ** 2 + mu_w)
    c_mu = min(
        1.0 - c_1, 2.0 * (mu_w - 2.0 + 1.0 / mu_w) / ((n + 2.0) ** 2 + mu_w)
    )
    return {
        "lam": lam,
        "mu": mu,
        "weights": weights,
        "mu_w": mu_w,
        "c_sigma": c_sigma,
        "d_sigma": d_sigma,
        "c_c": c_c,
        "c_1": c_1,
        "c_mu": c_mu,
    }


def reference_update(
    n,
    mu,
    weights,
    mu_w,
    c_sigma,
    d_sigma,
    c_c,
    c_1,
    c_mu,
    mean,
    sigma,
    cov,
    p_sigma,
    p_c,
    t,
    candidates,
    fitness,
):
    """One full distribution update, transcribed line by line.

    `t` is the number of generations completed before this update;
    `candidates` is (lam, n), `fitness` (lam,). Returns every updated field.
    """
    order = np.argsort(fitness, kind="stable")
    xs = candidates[order[:mu]]

    new_mean = np.zeros(n)
    for i in range(mu):
        new_mean = new_mean + weights[i] * xs[i]

    chi = np.sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n))
    sym = (cov + cov.T) / 2.0
    eigvals, eigvecs = np.linalg.eigh(sym)
    inv_sqrt = eigvecs @ np.diag(eigvals**-0.5) @ eigvecs.T

    shift = (new_mean - mean) / sigma
    new_p_sigma = (1.0 - c_sigma) * p_sigma + np.sqrt(
        c_sigma * (2.0 - c_sigma)
    ) * np.sqrt(mu_w) * (inv_sqrt @ shift)

    norm_ps = np.linalg.norm(new_p_sigma)
    rhs = (
        np.sqrt(1.0 - (1.0 - c_sigma) ** (2.0 * (t + 1)))
        * (1.4 + 2.0 / (n + 1.0))
        * chi
    )
    h_sigma = 1.0 if norm_ps < rhs else 0.0

    new_p_c = (1.0 - c_c) * p_c + h_sigma * np.sqrt(c_c * (2.0 - c_c)) * np.sqrt(
        mu_w
    ) * shift

    rank_mu = np.zeros((n, n))
    for i in range(mu):
        y = (xs[i] - mean) / sigma
        rank_mu = rank_mu + weights[i] * np.outer(y, y)

    new_cov = (
        (1.0 - c_1 - c_mu) * cov
        + c_1 * np.outer(new_p_c, new_p_c)
        + c_mu * rank_mu
    )

    new_sigma = sigma * np.exp((c_sigma / d_sigma) * (norm_ps / chi - 1.0))

    return {
        "mean": new_mean,
        "p_sigma": new_p_sigma,
        "h_sigma": h_sigma,
        "p_c": new_p_c,
        "cov": new_cov,
        "sigma": new_sigma,
        "gen": t + 1,
    }


def reference_h(
    c_triple,
    prev,
    pop_used_candidates,
    pop_used_fitness,
    pop_new_candidates,
    pop_new_fitness,
    sel_weights,
):
    """Brute-force rank-agreement score.

    `c_triple` is (c_1, c_mu, c_c); `prev` is a dict with the previous
    state's fields (n, mu, weights, mu_w, c_sigma, d_sigma, mean, sigma,
    cov, p_sigma, p_c, t). Ranks are assigned by an explicit stable sort.
    """
    c_1, c_mu, c_c = (float(v) for v in c_triple)
    viol = 0.0
    for c in (c_1, c_mu, c_c):
        viol += max(0.0, -c) + max(0.0, c - 0.9)
    viol += max(0.0, c_1 + c_mu - 0.9)
    if viol > 0.0:
        return -1e9 * viol

    rep = reference_update(
        n=prev["n"],
        mu=prev["mu"],
        weights=prev["weights"],
        mu_w=prev["mu_w"],
        c_sigma=prev["c_sigma"],
        d_sigma=prev["d_sigma"],
        c_c=c_c,
        c_1=c_1,
        c_mu=c_mu,
        mean=prev["mean"],
        sigma=prev["sigma"],
        cov=prev["cov"],
        p_sigma=prev["p_sigma"],
        p_c=prev["p_c"],
        t=prev["t"],
        candidates=pop_used_candidates,
        fitness=pop_used_fitness,
    )

    sym = (rep["cov"] + rep["cov"].T) / 2.0
    eigvals, eigvecs = np.linalg.eigh(sym)
    inv_sqrt = eigvecs @ np.diag(eigvals**-0.5) @ eigvecs.T

    lam = pop_new_candidates.shape[0]
    d = [
        float(np.linalg.norm(inv_sqrt @ (pop_new_candidates[i] - rep["mean"])))
        for i in range(lam)
    ]
    by_distance = sorted(range(lam), key=lambda i: (-d[i], i))
    rank_of = [0] * lam
    for position, i in enumerate(by_distance, start=1):
        rank_of[i] = position

    by_fitness = sorted(range(lam), key=lambda i: (pop_new_fitness[i], i))
    mu_sel = len(sel_weights)
    return sum(
        sel_weights[i] * rank_of[by_fitness[i]] for i in range(mu_sel)
    )
