"""Multiple risk-averse newsvendors with a centralized, pooled order.

Each coalition faces uniform demand ``Y_S ~ U[a_S, b_S]`` and orders the
critical-fractile quantity. Its profit under that order follows an
alpha-cut uniform law with ``alpha = (p - c) / p``. Cooperation of all
vendors is possible without transfer payments iff some ``r >= 0`` with
``r(N) = 1`` satisfies, for every coalition ``S``,

    r(S) * protection(N)     >= protection(S)
    r(S) * market_quality(N) >= market_quality(S)

where ``protection(S) = p a_S - c (b_S - a_S)`` and
``market_quality(S) = p (a_S + b_S) / 2 - c (b_S - a_S) / 2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from . import lp
from .coopgame import coalition_key, full_mask, incidence
from .distributions import AlphaCutUniform, cdf
from .errors import InvalidParameters
from .ssdcore import DEFAULT_TOL, StochasticGame, r_type_system


@dataclass(frozen=True, eq=False)
class NewsvendorProblem:
    n: int
    demand: tuple  # mask-indexed (a_S, b_S); entry 0 is None
    c: float
    p: float

    def __post_init__(self):
        if not 0 < self.c < self.p:
            raise InvalidParameters(f"need 0 < c < p, got c={self.c}, p={self.p}")
        demand = tuple(self.demand)
        if len(demand) != 1 << self.n:
            raise InvalidParameters(f"need {1 << self.n} demand entries (mask-indexed)")
        for mask in range(1, 1 << self.n):
            if demand[mask] is None:
                raise InvalidParameters(f"missing demand for coalition {coalition_key(mask)}")
            a, b = demand[mask]
            if not 0 <= a < b:
                raise InvalidParameters(
                    f"coalition {coalition_key(mask)}: need 0 <= a < b, got [{a}, {b}]"
                )
        object.__setattr__(
            self, "demand", (None,) + tuple((float(a), float(b)) for a, b in demand[1:])
        )

    @classmethod
    def from_mapping(
        cls, n: int, demand: Mapping[int, tuple[float, float]], c: float, p: float
    ) -> "NewsvendorProblem":
        return cls(n, tuple([None] + [demand.get(m) for m in range(1, 1 << n)]), c, p)

    @property
    def alpha(self) -> float:
        return (self.p - self.c) / self.p

    def __eq__(self, other) -> bool:
        return isinstance(other, NewsvendorProblem) and (self.n, self.demand, self.c, self.p) == (
            other.n,
            other.demand,
            other.c,
            other.p,
        )

    def __hash__(self):
        return hash((self.n, self.demand, self.c, self.p))


def optimal_order(prob: NewsvendorProblem, mask: int) -> float:
    a, b = prob.demand[mask]
    return a + (b - a) * prob.alpha


def profit_law(prob: NewsvendorProblem, mask: int) -> AlphaCutUniform:
    """Law of ``p min(Y_S, q*) - c q*``."""
    a, _ = prob.demand[mask]
    q = optimal_order(prob, mask)
    return AlphaCutUniform(prob.p * a - prob.c * q, (prob.p - prob.c) * q, prob.alpha)


def build_game(prob: NewsvendorProblem) -> StochasticGame:
    return StochasticGame(prob.n, tuple([None] + [profit_law(prob, m) for m in range(1, 1 << prob.n)]))


def protection(prob: NewsvendorProblem, mask: int) -> float:
    a, b = prob.demand[mask]
    return a * prob.p - (b - a) * prob.c


def market_quality(prob: NewsvendorProblem, mask: int) -> float:
    a, b = prob.demand[mask]
    return prob.p * (a + b) / 2 - prob.c * (b - a) / 2


@dataclass(frozen=True)
class CoalitionMetrics:
    mask: int
    protection: float
    market_quality: float
    protection_slack: Optional[float] = None
    quality_slack: Optional[float] = None

    @property
    def key(self) -> str:
        return coalition_key(self.mask)


@dataclass(frozen=True)
class CooperationReport:
    feasible: bool
    r: Optional[np.ndarray]
    metrics: list
    binding: list

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "r": None if self.r is None else [float(v) for v in self.r],
            "binding": [coalition_key(m) for m in self.binding],
            "coalitions": [
                {
                    "coalition": m.key,
                    "protection": m.protection,
                    "market_quality": m.market_quality,
                    "protection_slack": m.protection_slack,
                    "quality_slack": m.quality_slack,
                }
                for m in self.metrics
            ],
        }


def _report(prob: NewsvendorProblem, r: Optional[np.ndarray], tol: float) -> CooperationReport:
    inc = incidence(prob.n)
    full = full_mask(prob.n)
    prot_n, mq_n = protection(prob, full), market_quality(prob, full)
    scale = max(1.0, abs(prot_n), abs(mq_n))
    metrics, binding = [], []
    for mask in range(1, full + 1):
        prot, mq = protection(prob, mask), market_quality(prob, mask)
        if r is None:
            metrics.append(CoalitionMetrics(mask, prot, mq))
            continue
        share = float(inc[mask] @ r)
        ps, qs = share * prot_n - prot, share * mq_n - mq
        metrics.append(CoalitionMetrics(mask, prot, mq, ps, qs))
        if mask != full and min(ps, qs) <= tol * scale:
            binding.append(mask)
    return CooperationReport(r is not None, r, metrics, binding)


def cooperation_feasible(prob: NewsvendorProblem, tol: float = DEFAULT_TOL) -> CooperationReport:
    """Decide the no-transfer SSD-core from the protection and market-quality inequalities."""
    n = prob.n
    inc = incidence(n)
    full = full_mask(n)
    prot_n, mq_n = protection(prob, full), market_quality(prob, full)
    sys = lp.LinearSystem(n)
    sys.add_eq(inc[-1], 1.0, label="r(N)")
    for i in range(n):
        sys.set_bounds(i, lower=0.0)
    for mask in range(1, full):
        sys.add_ge(prot_n * inc[mask], protection(prob, mask), label=("protection", mask))
        sys.add_ge(mq_n * inc[mask], market_quality(prob, mask), label=("market quality", mask))
    out = lp.solve(sys, tol)
    return _report(prob, np.maximum(out.x, 0.0) if out else None, tol)


def cooperation_feasible_direct(
    prob: NewsvendorProblem, tol: float = DEFAULT_TOL
) -> CooperationReport:
    """Same question posed on the profit game through the alpha-cut dominance conditions."""
    out = lp.solve(r_type_system(build_game(prob)), tol)
    return _report(prob, np.maximum(out.x, 0.0) if out else None, tol)


def cdf_table(prob: NewsvendorProblem, mask: int, points: int) -> list[tuple[float, float]]:
    """``points + 1`` samples of the profit CDF over the support padded by 5% each side."""
    if points < 1:
        raise InvalidParameters("need at least one grid interval")
    law = profit_law(prob, mask)
    pad = 0.05 * (law.b - law.a)
    xs = np.linspace(law.a - pad, law.b + pad, points + 1)
    return [(float(x), float(f)) for x, f in zip(xs, cdf(law, xs))]
