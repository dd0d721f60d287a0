"""SSD-core of stochastic TU-games.

A stochastic game assigns every nonempty coalition a distribution from one
family. An efficient stochastic payoff lies in the SSD-core when each
coalition's aggregate payoff dominates the coalition value in the second
order and the grand coalition's payoff has the law of ``v(N)``.

Four payoff structures are supported:

* ``RType``: ``x_i = r_i v(N)`` with ``r >= 0``;
* ``DRType``: ``x_i = d_i + r_i (v(N) - E v(N))`` with ``r >= 0``;
* ``DRSignedType``: as ``DRType`` with ``r`` unrestricted in sign;
* ``Unstructured``: multivariate normal payoff with mean vector and covariance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from . import distributions as dm
from . import lp
from .coopgame import (
    ClassicalGame,
    coalition_key,
    coalition_sums,
    core_nonempty,
    cost_core_nonempty,
    full_mask,
    incidence,
    is_convex,
)
from .distributions import (
    AlphaCutUniform,
    DiscreteUniform,
    Distribution,
    Gamma,
    Normal,
    Uniform,
)
from .errors import (
    AlphaMismatch,
    DimensionMismatch,
    FamilyMismatch,
    IncompatibleAllocationType,
    InvalidGap,
    InvalidParameters,
    IterationCapExceeded,
    LengthMismatch,
    NotConvex,
    NotSymmetric,
    UnsupportedFamily,
    ZeroGrandVariance,
)
from .ssd import condition_margins, strictly_dominates

DEFAULT_TOL = 1e-9
# LP witnesses may carry tiny negative round-off in sign-constrained entries
CLIP_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class StochasticGame:
    n: int
    dists: tuple  # indexed by mask; entry 0 is None

    def __post_init__(self):
        dists = tuple(self.dists)
        if len(dists) != 1 << self.n:
            raise InvalidParameters(f"need {1 << self.n} entries (mask-indexed), got {len(dists)}")
        family = None
        for mask in range(1, len(dists)):
            d = dists[mask]
            if d is None:
                raise InvalidParameters(f"missing distribution for coalition {coalition_key(mask)}")
            if family is None:
                family = type(d)
            elif type(d) is not family:
                raise FamilyMismatch(
                    f"coalition {coalition_key(mask)} is {d.family}, expected {family.family}"
                )
        if family is AlphaCutUniform:
            alphas = {d.alpha for d in dists[1:]}
            if max(alphas) - min(alphas) > 1e-12:
                raise AlphaMismatch("alpha-cut games need one common alpha")
        object.__setattr__(self, "dists", (None,) + dists[1:])

    @classmethod
    def from_mapping(cls, n: int, dists: Mapping[int, Distribution]) -> "StochasticGame":
        return cls(n, tuple([None] + [dists.get(m) for m in range(1, 1 << n)]))

    @property
    def family(self) -> str:
        return self.dists[1].family

    @property
    def grand(self) -> Distribution:
        return self.dists[-1]

    def __getitem__(self, mask: int) -> Distribution:
        return self.dists[mask]

    def __eq__(self, other) -> bool:
        return isinstance(other, StochasticGame) and self.n == other.n and self.dists == other.dists

    def __hash__(self):
        return hash((self.n, self.dists))

    def permuted(self, perm: Sequence[int]) -> "StochasticGame":
        """Relabel players: old player ``i`` becomes ``perm[i]``."""
        out = [None] * (1 << self.n)
        for mask in range(1, 1 << self.n):
            out[_permute_mask(mask, perm)] = self.dists[mask]
        return StochasticGame(self.n, tuple(out))


def _permute_mask(mask: int, perm: Sequence[int]) -> int:
    out = 0
    for i, j in enumerate(perm):
        if mask >> i & 1:
            out |= 1 << j
    return out


def _vector(v, name: str) -> np.ndarray:
    arr = np.array(v, dtype=float).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise InvalidParameters(f"{name} must be finite")
    arr.flags.writeable = False
    return arr


def _nonneg(v, name: str) -> np.ndarray:
    arr = np.array(v, dtype=float).reshape(-1)
    if np.any(arr < -CLIP_TOL):
        raise InvalidParameters(f"{name} must be >= 0, got {arr.tolist()}")
    return _vector(np.maximum(arr, 0.0), name)


@dataclass(frozen=True, eq=False)
class RType:
    r: np.ndarray

    kind = "r"

    def __post_init__(self):
        object.__setattr__(self, "r", _nonneg(self.r, "r"))


@dataclass(frozen=True, eq=False)
class DRType:
    d: np.ndarray
    r: np.ndarray

    kind = "dr"

    def __post_init__(self):
        object.__setattr__(self, "d", _vector(self.d, "d"))
        object.__setattr__(self, "r", _nonneg(self.r, "r"))
        if self.d.shape != self.r.shape:
            raise DimensionMismatch("d and r must have equal length")


@dataclass(frozen=True, eq=False)
class DRSignedType:
    d: np.ndarray
    r: np.ndarray

    kind = "dr-signed"

    def __post_init__(self):
        object.__setattr__(self, "d", _vector(self.d, "d"))
        object.__setattr__(self, "r", _vector(self.r, "r"))
        if self.d.shape != self.r.shape:
            raise DimensionMismatch("d and r must have equal length")


@dataclass(frozen=True, eq=False)
class Unstructured:
    mean: np.ndarray
    cov: np.ndarray

    kind = "unstructured"

    def __post_init__(self):
        object.__setattr__(self, "mean", _vector(self.mean, "mean"))
        cov = np.array(self.cov, dtype=float)
        if cov.shape != (len(self.mean), len(self.mean)):
            raise DimensionMismatch("covariance must be n x n")
        if not np.all(np.isfinite(cov)):
            raise InvalidParameters("covariance must be finite")
        cov.flags.writeable = False
        object.__setattr__(self, "cov", cov)


Allocation = Union[RType, DRType, DRSignedType, Unstructured]


@dataclass(frozen=True)
class DerivedGames:
    mean: ClassicalGame
    deviation: Optional[ClassicalGame] = None
    lower: Optional[ClassicalGame] = None


def mean_game(g: StochasticGame) -> ClassicalGame:
    return ClassicalGame(g.n, np.array([0.0] + [dm.mean(d) for d in g.dists[1:]]))


def deviation_game(g: StochasticGame) -> ClassicalGame:
    sigma_n = dm.std(g.grand)
    if sigma_n == 0:
        raise ZeroGrandVariance("deviation game needs a nondegenerate grand coalition")
    return ClassicalGame(g.n, np.array([0.0] + [dm.std(d) / sigma_n for d in g.dists[1:]]))


def lower_bound_game(g: StochasticGame) -> ClassicalGame:
    if not isinstance(g.grand, Uniform):
        raise UnsupportedFamily(f"lower bound game needs a uniform game, got {g.family}")
    return ClassicalGame(g.n, np.array([0.0] + [d.a for d in g.dists[1:]]))


def derive_games(g: StochasticGame) -> DerivedGames:
    deviation = deviation_game(g) if dm.variance(g.grand) > 0 else None
    lower = lower_bound_game(g) if isinstance(g.grand, Uniform) else None
    return DerivedGames(mean_game(g), deviation, lower)


# ---------------------------------------------------------------- membership


@dataclass(frozen=True)
class CoalitionCheck:
    mask: int
    holds: bool
    failed: Optional[str] = None
    margin: Optional[float] = None

    @property
    def key(self) -> str:
        return coalition_key(self.mask)


@dataclass(frozen=True)
class MembershipReport:
    efficient: bool
    efficiency_failures: list
    coalitions: list = field(default_factory=list)

    @property
    def member(self) -> bool:
        return self.efficient and all(c.holds for c in self.coalitions)

    @property
    def first_violation(self) -> Optional[CoalitionCheck]:
        return next((c for c in self.coalitions if not c.holds), None)

    def __bool__(self) -> bool:
        return self.member


def _game_scale(g: StochasticGame) -> float:
    scale = 1.0
    for d in g.dists[1:]:
        scale = max(scale, abs(dm.mean(d)), dm.std(d))
    return scale


_DR_FAMILIES = (Normal, Uniform, AlphaCutUniform)


def _payoff_law(g: StochasticGame, alloc: Allocation, mask: int, row: np.ndarray) -> Distribution:
    grand = g.grand
    if isinstance(alloc, RType):
        return dm.scale(grand, float(row @ alloc.r))
    d_s, r_s = float(row @ alloc.d), float(row @ alloc.r)
    if r_s < 0 and isinstance(grand, Uniform):
        # d + r (X - EX) with a symmetric law of X - EX
        r_s = -r_s
    return dm.affine_image(grand, d_s, r_s)


def _check_compatible(g: StochasticGame, alloc: Allocation) -> None:
    if len(alloc.r if not isinstance(alloc, Unstructured) else alloc.mean) != g.n:
        raise DimensionMismatch(f"allocation length does not match {g.n} players")
    grand = g.grand
    if isinstance(alloc, RType):
        return
    if isinstance(alloc, (DRType, DRSignedType)):
        if not isinstance(grand, _DR_FAMILIES):
            raise IncompatibleAllocationType(
                f"{alloc.kind} allocations need a location-scale family, got {g.family}"
            )
        if isinstance(alloc, DRSignedType) and isinstance(grand, AlphaCutUniform):
            if np.any(coalition_sums(alloc.r)[1:] < 0):
                raise IncompatibleAllocationType(
                    "negative risk shares are not representable for alpha-cut games"
                )
        return
    if isinstance(alloc, Unstructured) and not isinstance(grand, Normal):
        raise IncompatibleAllocationType("unstructured allocations need a normal game")


def membership_report(
    g: StochasticGame, alloc: Allocation, tol: float = DEFAULT_TOL
) -> MembershipReport:
    """Per-coalition verdicts for ``alloc``; the first failed condition is named."""
    _check_compatible(g, alloc)
    if isinstance(alloc, Unstructured):
        return _unstructured_report(g, alloc, tol)
    eps = tol * _game_scale(g)
    failures = []
    if abs(alloc.r.sum() - 1) > tol:
        failures.append(f"r(N) = {alloc.r.sum():.12g} != 1")
    if not isinstance(alloc, RType):
        mu_n = dm.mean(g.grand)
        if abs(alloc.d.sum() - mu_n) > eps:
            failures.append(f"d(N) = {alloc.d.sum():.12g} != E v(N) = {mu_n:.12g}")
    inc = incidence(g.n)
    checks = []
    for mask in range(1, 1 << g.n):
        law = _payoff_law(g, alloc, mask, inc[mask])
        margins = condition_margins(law, g[mask])
        bad = next(((name, m) for name, m in margins if m < -eps), None)
        if bad is None:
            checks.append(CoalitionCheck(mask, True))
        else:
            checks.append(CoalitionCheck(mask, False, bad[0], float(bad[1])))
    return MembershipReport(not failures, failures, checks)


def dc_membership(g: StochasticGame, alloc: Allocation, tol: float = DEFAULT_TOL) -> bool:
    return membership_report(g, alloc, tol).member


# --------------------------------------------------------------- unstructured


def _unstructured_report(g: StochasticGame, alloc: Unstructured, tol: float) -> MembershipReport:
    cov = alloc.cov
    scale = _game_scale(g)
    if not np.allclose(cov, cov.T, rtol=0, atol=tol * max(1.0, float(np.abs(cov).max()))):
        raise NotSymmetric("covariance matrix is not symmetric")
    failures = []
    eig_min = float(np.linalg.eigvalsh(0.5 * (cov + cov.T)).min())
    if eig_min < -tol * max(1.0, float(np.abs(cov).max())):
        failures.append(f"covariance not PSD (min eigenvalue {eig_min:.6g})")
    grand = g.grand
    eps = tol * max(scale, scale * scale)
    if abs(alloc.mean.sum() - grand.mu) > eps:
        failures.append(f"mean total {alloc.mean.sum():.12g} != {grand.mu:.12g}")
    if abs(cov.sum() - grand.sigma2) > eps:
        failures.append(f"covariance total {cov.sum():.12g} != {grand.sigma2:.12g}")
    inc = incidence(g.n)
    checks = []
    for mask in range(1, 1 << g.n):
        row = inc[mask]
        mean_gap = float(row @ alloc.mean) - g[mask].mu
        var_gap = g[mask].sigma2 - float(row @ cov @ row)
        if mean_gap < -eps:
            checks.append(CoalitionCheck(mask, False, "mean", mean_gap))
        elif var_gap < -eps:
            checks.append(CoalitionCheck(mask, False, "variance", var_gap))
        else:
            checks.append(CoalitionCheck(mask, True))
    return MembershipReport(not failures, failures, checks)


def unstructured_membership(
    g: StochasticGame, alloc: Unstructured, tol: float = DEFAULT_TOL
) -> bool:
    if not isinstance(g.grand, Normal):
        raise UnsupportedFamily("unstructured allocations need a normal game")
    return _unstructured_report(g, alloc, tol).member


# ------------------------------------------------------------ nonemptiness


def dc_nonempty_dr_normal(g: StochasticGame, tol: float = DEFAULT_TOL) -> Optional[DRType]:
    """Witness of a nonempty (d, r) SSD-core for a normal game, or ``None``.

    With ``sigma_N > 0`` the core of the mean game supplies ``d`` and the
    nonnegative cost core of the deviation game supplies ``r``. With a
    degenerate grand coalition only the mean conditions bind.
    """
    if not isinstance(g.grand, Normal):
        raise UnsupportedFamily(f"expected a normal game, got {g.family}")
    d = core_nonempty(mean_game(g), tol)
    if d is None:
        return None
    if g.grand.sigma2 == 0:
        return DRType(d, np.full(g.n, 1.0 / g.n))
    r = cost_core_nonempty(deviation_game(g), tol)
    if r is None:
        return None
    return DRType(d, r)


def dr_condition_feasible(
    mean: ClassicalGame, lower: ClassicalGame, tol: float = DEFAULT_TOL
) -> Optional[DRType]:
    """Exact (d, r) decision for uniform games from their mean and lower bound games.

    Solves ``d(S) >= mu(S)``, ``d(S) >= a(S) + r(S)(mu_N - a_N)``,
    ``d(N) = mu_N``, ``r(N) = 1``, ``r >= 0``.
    """
    if mean.n != lower.n:
        raise DimensionMismatch("mean and lower games differ in player count")
    n = mean.n
    gap = mean.grand - lower.grand
    if gap < -tol * max(1.0, abs(mean.grand)):
        raise InvalidGap(f"mu_N - a_N = {gap} < 0")
    inc = incidence(n)
    zeros = np.zeros(n)
    sys = lp.LinearSystem(2 * n)
    sys.add_eq(np.concatenate([inc[-1], zeros]), mean.grand, label="d(N)")
    sys.add_eq(np.concatenate([zeros, inc[-1]]), 1.0, label="r(N)")
    for mask in range(1, full_mask(n)):
        row = inc[mask]
        sys.add_ge(np.concatenate([row, zeros]), mean[mask], label=("mean", mask))
        sys.add_ge(np.concatenate([row, -gap * row]), lower[mask], label=("lower", mask))
    for i in range(n):
        sys.set_bounds(n + i, lower=0.0)
    out = lp.solve(sys, tol)
    if not out:
        return None
    return DRType(out.x[:n], out.x[n:])


@dataclass(frozen=True)
class DecisionReport:
    nonempty: bool
    witness: Optional[DRType]
    mean_core_nonempty: bool
    lower_core_nonempty: bool
    lower_convex: bool
    theorem_consistent: bool
    constructive_witness: Optional[DRType] = None


def decide_dr_uniform(mean: ClassicalGame, lower: ClassicalGame, tol: float = DEFAULT_TOL) -> DecisionReport:
    """``dc_nonempty_dr_uniform`` on explicitly supplied derived games."""
    witness = dr_condition_feasible(mean, lower, tol)
    d = core_nonempty(mean, tol)
    mean_ok = d is not None
    lower_ok = core_nonempty(lower, tol) is not None
    convex = is_convex(lower)
    nonempty = witness is not None
    consistent = (not nonempty or (mean_ok and lower_ok)) and (
        not (convex and mean_ok) or nonempty
    )
    constructive = None
    if convex and mean_ok and mean.grand > lower.grand:
        _, r = process_p(d, lower, mean.grand, tol)
        constructive = DRType(d, np.maximum(r, 0.0))
    return DecisionReport(nonempty, witness, mean_ok, lower_ok, convex, consistent, constructive)


def dc_nonempty_dr_uniform(g: StochasticGame, tol: float = DEFAULT_TOL) -> DecisionReport:
    if not isinstance(g.grand, Uniform):
        raise UnsupportedFamily(f"expected a uniform game, got {g.family}")
    return decide_dr_uniform(mean_game(g), lower_bound_game(g), tol)


def process_p(
    d: Sequence[float], lower: ClassicalGame, mean_total: float, tol: float = DEFAULT_TOL
) -> tuple[np.ndarray, np.ndarray]:
    """Walk ``d`` down to a point ``x`` of the lower game's core.

    Each step picks the smallest-index player all of whose coalitions have
    strictly positive surplus ``x(S) - a(S)`` and lowers that player's entry
    by the smallest such surplus. Stops once ``x(N) = a(N)``. Returns ``x``
    and the risk shares ``r = (d - x) / (mean_total - a(N))``.
    """
    d = np.asarray(d, dtype=float)
    n = lower.n
    if d.shape != (n,):
        raise DimensionMismatch(f"d has length {d.shape}, expected {n}")
    if not is_convex(lower):
        raise NotConvex("process P needs a convex lower bound game")
    scale = max(1.0, float(np.abs(d).max()), float(np.abs(lower.values).max()))
    eps = tol * scale
    if abs(d.sum() - mean_total) > eps:
        raise InvalidParameters(f"d(N) = {d.sum()} differs from the mean total {mean_total}")
    gap = mean_total - lower.grand
    if gap < -eps:
        raise InvalidGap(f"mean total below a(N): gap {gap}")

    inc = incidence(n)
    x = d.copy()
    for _ in range(n * (1 << n) + 1):
        if abs(x.sum() - lower.grand) <= eps:
            break
        surplus = inc @ x - lower.values
        k = next(
            (i for i in range(n) if np.all(surplus[1:][inc[1:, i] == 1] > eps)),
            None,
        )
        if k is None:
            raise IterationCapExceeded("no player with slack in every coalition; precondition violated")
        x[k] -= float(surplus[1:][inc[1:, k] == 1].min())
    else:
        raise IterationCapExceeded(f"process P did not reach a(N) within {n * (1 << n)} steps")

    if gap <= eps:
        return x, np.full(n, 1.0 / n)
    return x, (d - x) / gap


def dc_nonempty_dr_signed(
    g: StochasticGame, tol: float = DEFAULT_TOL
) -> Optional[DRSignedType]:
    """Witness of a nonempty (d, r) SSD-core with sign-unrestricted ``r``."""
    if isinstance(g.grand, Normal):
        return _dr_signed_normal(g, tol)
    if isinstance(g.grand, Uniform):
        return dr_signed_condition_feasible(mean_game(g), lower_bound_game(g), tol)
    raise UnsupportedFamily(f"signed (d, r) allocations need normal or uniform, got {g.family}")


def _dr_signed_normal(g: StochasticGame, tol: float) -> Optional[DRSignedType]:
    n = g.n
    mu = mean_game(g)
    if g.grand.sigma2 == 0:
        d = core_nonempty(mu, tol)
        return None if d is None else DRSignedType(d, np.full(n, 1.0 / n))
    dev = deviation_game(g)
    inc = incidence(n)
    zeros = np.zeros(n)
    sys = lp.LinearSystem(2 * n)
    sys.add_eq(np.concatenate([inc[-1], zeros]), mu.grand, label="d(N)")
    sys.add_eq(np.concatenate([zeros, inc[-1]]), 1.0, label="r(N)")
    for mask in range(1, full_mask(n)):
        row = inc[mask]
        sys.add_ge(np.concatenate([row, zeros]), mu[mask], label=("mean", mask))
        sys.add_le(np.concatenate([zeros, row]), dev[mask], label=("deviation+", mask))
        sys.add_ge(np.concatenate([zeros, row]), -dev[mask], label=("deviation-", mask))
    out = lp.solve(sys, tol)
    return DRSignedType(out.x[:n], out.x[n:]) if out else None


def dr_signed_condition_feasible(
    mean: ClassicalGame, lower: ClassicalGame, tol: float = DEFAULT_TOL
) -> Optional[DRSignedType]:
    """Signed (d, r) decision for uniform games from their derived games.

    Tries ``r = (d - x) / (mu_N - a_N)`` for interior points ``d`` of the
    mean core and ``x`` of the lower core first. When that candidate fails
    a coalition condition, falls back to the exact program
    ``|r(S)| (mu_N - a_N) <= d(S) - a(S)``, ``d(S) >= mu(S)``.
    """
    n = mean.n
    gap = mean.grand - lower.grand
    if gap <= 0:
        raise InvalidGap(f"mu_N - a_N = {gap} must be positive")
    d = core_nonempty(mean, tol)
    x = core_nonempty(lower, tol)
    if d is None or x is None:
        return None
    candidate = DRSignedType(d, (d - x) / gap)
    if _signed_uniform_ok(mean, lower, candidate, tol):
        return candidate

    inc = incidence(n)
    zeros = np.zeros(n)
    sys = lp.LinearSystem(2 * n)
    sys.add_eq(np.concatenate([inc[-1], zeros]), mean.grand, label="d(N)")
    sys.add_eq(np.concatenate([zeros, inc[-1]]), 1.0, label="r(N)")
    for mask in range(1, full_mask(n)):
        row = inc[mask]
        sys.add_ge(np.concatenate([row, zeros]), mean[mask], label=("mean", mask))
        sys.add_ge(np.concatenate([row, -gap * row]), lower[mask], label=("lower+", mask))
        sys.add_ge(np.concatenate([row, gap * row]), lower[mask], label=("lower-", mask))
    out = lp.solve(sys, tol)
    return DRSignedType(out.x[:n], out.x[n:]) if out else None


def _signed_uniform_ok(
    mean: ClassicalGame, lower: ClassicalGame, alloc: DRSignedType, tol: float
) -> bool:
    gap = mean.grand - lower.grand
    eps = tol * max(1.0, float(np.abs(mean.values).max()), float(np.abs(lower.values).max()))
    d_s = coalition_sums(alloc.d)
    spread = np.abs(coalition_sums(alloc.r)) * gap
    return bool(
        np.all(d_s[1:] >= mean.values[1:] - eps)
        and np.all(d_s[1:] - spread[1:] >= lower.values[1:] - eps)
    )


def r_type_system(g: StochasticGame) -> lp.LinearSystem:
    """Product-form constraints on ``r`` for the no-transfer SSD-core."""
    n = g.n
    grand = g.grand
    inc = incidence(n)
    sys = lp.LinearSystem(n)
    sys.add_eq(inc[-1], 1.0, label="r(N)")
    for i in range(n):
        sys.set_bounds(i, lower=0.0)

    def ge(mask, coef, rhs, name):
        sys.add_ge(coef * inc[mask], rhs, label=(name, mask))

    for mask in range(1, full_mask(n)):
        v = g[mask]
        if isinstance(grand, Normal):
            ge(mask, grand.mu, v.mu, "mean")
            sys.add_le(grand.sigma * inc[mask], v.sigma, label=("deviation", mask))
        elif isinstance(grand, Uniform):
            ge(mask, dm.mean(grand), dm.mean(v), "mean")
            ge(mask, grand.a, v.a, "lower bound")
        elif isinstance(grand, Gamma):
            ge(mask, grand.k * grand.theta, v.k * v.theta, "mean")
            ge(mask, grand.theta, v.theta, "scale")
        elif isinstance(grand, DiscreteUniform):
            if v.size != grand.size:
                raise LengthMismatch("discrete games need one realization count throughout")
            pn = np.cumsum(grand.realizations)
            ps = np.cumsum(v.realizations)
            for k in range(grand.size):
                ge(mask, pn[k], ps[k], f"prefix {k + 1}")
        elif isinstance(grand, AlphaCutUniform):
            alpha = grand.alpha
            ge(mask, grand.a, v.a, "lower bound")
            ge(
                mask,
                (2 - alpha) * grand.b + alpha * grand.a,
                (2 - alpha) * v.b + alpha * v.a,
                "weighted upper bound",
            )
        else:
            raise UnsupportedFamily(g.family)
    return sys


def dc_nonempty_r(g: StochasticGame, tol: float = DEFAULT_TOL) -> Optional[RType]:
    out = lp.solve(r_type_system(g), tol)
    return RType(out.x) if out else None


def udc_membership_dr(
    g: StochasticGame, d: Sequence[float], r: Sequence[float], tol: float = DEFAULT_TOL
) -> bool:
    """Undominated SSD-core membership of a (d, r) payoff in a normal game.

    A coalition blocks when its value strictly dominates its aggregate
    payoff: ``v(S)`` dominates ``x(S)`` and ``x(S)`` does not dominate ``v(S)``.
    """
    if not isinstance(g.grand, Normal):
        raise UnsupportedFamily("undominated core is decided for normal games only")
    alloc = DRType(d, r)
    _check_compatible(g, alloc)
    eps = tol * _game_scale(g)
    if abs(alloc.r.sum() - 1) > tol or abs(alloc.d.sum() - g.grand.mu) > eps:
        return False
    inc = incidence(g.n)
    for mask in range(1, 1 << g.n):
        law = _payoff_law(g, alloc, mask, inc[mask])
        if strictly_dominates(g[mask], law, eps):
            return False
    return True

