"""Seeded random instances for property harnesses and the self-test."""

from __future__ import annotations

import numpy as np

from .coopgame import ClassicalGame, core_min_coordinate, core_nonempty, full_mask, incidence, is_convex
from .distributions import AlphaCutUniform, DiscreteUniform, Gamma, Normal, Uniform
from .newsvendor import NewsvendorProblem
from .ssdcore import StochasticGame


def rng_for(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def monotone_values(rng: np.random.Generator, n: int, low: float = 0.0, high: float = 10.0) -> np.ndarray:
    """Cumulative ``U[low, high]`` increments on top of the best maximal subcoalition."""
    v = np.zeros(1 << n)
    for mask in range(1, 1 << n):
        best = max((v[mask & ~(1 << i)] for i in range(n) if mask >> i & 1), default=0.0)
        v[mask] = best + rng.uniform(low, high)
    return v


def random_normal_game(rng: np.random.Generator, n: int) -> StochasticGame:
    mu = monotone_values(rng, n)
    sigma = rng.uniform(0.1, 3.0, size=1 << n)
    return StochasticGame(n, tuple([None] + [Normal(mu[m], sigma[m] ** 2) for m in range(1, 1 << n)]))


def convex_values(rng: np.random.Generator, n: int, density: float = 0.5) -> np.ndarray:
    """Sum of nonnegative unanimity games plus an additive part; always supermodular."""
    inc = incidence(n)
    v = inc @ rng.uniform(-2.0, 2.0, size=n)
    for t in range(1, 1 << n):
        if bin(t).count("1") > 1 and rng.random() < density:
            lam = rng.uniform(0.0, 2.0)
            contains = (np.arange(1 << n) & t) == t
            v[contains] += lam
    v[0] = 0.0
    return v


def random_uniform_game(rng: np.random.Generator, n: int) -> StochasticGame:
    """Uniform game whose lower bound game is convex about half of the time.

    The other half is balanced by construction (an additive game minus
    nonnegative slack, tight at ``N``) and usually not convex.
    """
    if rng.random() < 0.5:
        a = convex_values(rng, n)
    else:
        slack = rng.uniform(0.0, 3.0, size=1 << n) * (rng.random(1 << n) < 0.7)
        slack[-1] = 0.0
        a = incidence(n) @ rng.uniform(-1.0, 4.0, size=n) - slack
        a[0] = 0.0
    width = rng.uniform(0.2, 6.0, size=1 << n)
    # a wide grand coalition makes the mean game balanced more often
    width[-1] += rng.uniform(0.0, 4.0 * n)
    return StochasticGame(
        n, tuple([None] + [Uniform(a[m], a[m] + width[m]) for m in range(1, 1 << n)])
    )


def random_pair(rng: np.random.Generator, family: str):
    """Two laws of one family, biased so that dominance holds in about half the draws."""
    if family == "normal":
        mu = rng.uniform(-5, 5, 2)
        s2 = rng.uniform(0.1, 4, 2)
        return Normal(mu[0], s2[0]), Normal(mu[1], s2[1])
    if family == "uniform":
        a = rng.uniform(-5, 5, 2)
        w = rng.uniform(0.1, 5, 2)
        return Uniform(a[0], a[0] + w[0]), Uniform(a[1], a[1] + w[1])
    if family == "alpha_cut_uniform":
        alpha = rng.uniform(0.05, 0.95)
        a = rng.uniform(-5, 5, 2)
        w = rng.uniform(0.1, 5, 2)
        return (
            AlphaCutUniform(a[0], a[0] + w[0], alpha),
            AlphaCutUniform(a[1], a[1] + w[1], alpha),
        )
    if family == "discrete_uniform":
        t = int(rng.integers(1, 7))
        x = np.sort(rng.normal(0, 2, t))
        y = x + rng.normal(0.3, 1.0, t) if rng.random() < 0.5 else rng.normal(0, 2, t)
        return DiscreteUniform(tuple(x)), DiscreteUniform(tuple(y))
    if family == "gamma":
        k = rng.uniform(0.5, 5, 2)
        theta = rng.uniform(0.2, 3, 2)
        return Gamma(k[0], theta[0]), Gamma(k[1], theta[1])
    raise ValueError(f"unknown family {family!r}")


def random_newsvendor(rng: np.random.Generator, n: int) -> NewsvendorProblem:
    p = rng.uniform(1.0, 10.0)
    c = rng.uniform(0.05, 0.95) * p
    single = rng.uniform(0.0, 5.0, size=n)
    single_w = rng.uniform(1.0, 10.0, size=n)
    inc = incidence(n)
    demand = {}
    for mask in range(1, 1 << n):
        row = inc[mask].astype(bool)
        # pooled demand: sums of the members' ranges, randomly tightened
        a = single[row].sum() + rng.uniform(0.0, 1.0) * single_w[row].min() * (row.sum() > 1)
        w = single_w[row].sum() * rng.uniform(0.4, 1.0)
        demand[mask] = (float(a), float(a + w))
    return NewsvendorProblem.from_mapping(n, demand, c, p)


def balanced_nonconvex_lower_game(
    rng: np.random.Generator, n: int, max_tries: int = 10_000
) -> tuple[ClassicalGame, int]:
    """A balanced, non-convex game ``a`` and a player ``i`` whose core minimum exceeds ``a_i``."""
    if n < 3:
        raise ValueError("need at least three players for a balanced non-convex game")
    inc = incidence(n)
    for _ in range(max_tries):
        x = rng.uniform(0.0, 5.0, size=n)
        slack = rng.uniform(0.0, 3.0, size=1 << n)
        slack[rng.random(1 << n) < 0.3] = 0.0
        slack[-1] = 0.0
        slack[0] = 0.0
        a = ClassicalGame(n, inc @ x - slack)
        if is_convex(a) or core_nonempty(a) is None:
            continue
        for i in range(n):
            if core_min_coordinate(a, i) > a[1 << i] + 1e-3:
                return a, i
    raise RuntimeError("no suitable game found")


def blocking_mean_game(
    rng: np.random.Generator, lower: ClassicalGame, i: int
) -> ClassicalGame:
    """Mean game that pins ``d_i`` below every core point of ``lower``.

    ``mu_i = a_i + eps`` with ``eps`` half the gap to the core minimum,
    ``mu_{N-i} = mu_N - mu_i`` and ``mu_S > a_S`` elsewhere.
    """
    n = lower.n
    full = full_mask(n)
    eps = 0.5 * (core_min_coordinate(lower, i) - lower[1 << i])
    mu = lower.values + rng.uniform(0.1, 2.0, size=1 << n)
    mu[0] = 0.0
    mu[1 << i] = lower[1 << i] + eps
    mu[full & ~(1 << i)] = mu[full] - mu[1 << i]
    return ClassicalGame(n, mu)
