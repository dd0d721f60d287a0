"""Second-order stochastic dominance between distributions.

``dominates_closed_form`` applies the per-family characterizations and is
the authoritative decision inside the package. ``dominates_numeric``
integrates the CDF difference on a grid and serves as an independent
oracle, including across families.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import distributions as dist_mod
from .distributions import (
    AlphaCutUniform,
    DiscreteUniform,
    Distribution,
    Gamma,
    Normal,
    Uniform,
)
from .errors import AlphaMismatch, FamilyMismatch, LengthMismatch

ALPHA_MATCH_TOL = 1e-12


class SsdVerdict(enum.Enum):
    LEFT_DOMINATES = "left_dominates"
    RIGHT_DOMINATES = "right_dominates"
    EQUIVALENT = "equivalent"
    INCOMPARABLE = "incomparable"


class NumericVerdict(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    BORDERLINE = "borderline"


@dataclass(frozen=True)
class OracleConfig:
    points: int = 20001
    tail: float = 1e-7
    rel_tol: float = 1e-6
    # relative band on G_x / G_y, and the deepest quantile probed for normal tails
    ratio_tol: float = 1e-3
    deep_tail: float = 1e-290
    floor: float = 1e-300


@dataclass(frozen=True)
class NumericResult:
    verdict: NumericVerdict
    max_integral: float
    argmax: float
    tolerance: float

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "max_integral": self.max_integral,
            "argmax": self.argmax,
            "tolerance": self.tolerance,
        }


def uniform_margins(a_x: float, b_x: float, a_y: float, b_y: float) -> tuple[float, float]:
    """Slack of the two uniform conditions; both ``>= 0`` iff ``U[a_x,b_x]`` dominates.

    The second margin is twice the mean difference so that it lines up
    term by term with ``alpha_cut_margins`` at ``alpha = 1``.
    """
    return a_x - a_y, (b_x + a_x) - (b_y + a_y)


def alpha_cut_margins(
    a_x: float, b_x: float, a_y: float, b_y: float, alpha: float
) -> tuple[float, float]:
    """Slack of the two alpha-cut conditions for a common ``alpha``."""
    return a_x - a_y, ((2 - alpha) * b_x + alpha * a_x) - ((2 - alpha) * b_y + alpha * a_y)


def _check_pair(x: Distribution, y: Distribution) -> None:
    if type(x) is not type(y):
        raise FamilyMismatch(f"cannot compare {x.family} with {y.family} in closed form")
    if isinstance(x, AlphaCutUniform) and abs(x.alpha - y.alpha) > ALPHA_MATCH_TOL:
        raise AlphaMismatch(f"alpha-cut laws need a common alpha, got {x.alpha} and {y.alpha}")
    if isinstance(x, DiscreteUniform) and x.size != y.size:
        raise LengthMismatch(f"discrete laws need equal counts, got {x.size} and {y.size}")


def condition_margins(x: Distribution, y: Distribution) -> list[tuple[str, float]]:
    """Named slacks of the closed-form conditions for ``x`` dominating ``y``.

    ``x`` dominates ``y`` iff every margin is ``>= 0``.
    """
    _check_pair(x, y)
    if isinstance(x, Normal):
        return [("mean", x.mu - y.mu), ("variance", y.sigma2 - x.sigma2)]
    if isinstance(x, Uniform):
        low, mid = uniform_margins(x.a, x.b, y.a, y.b)
        return [("lower bound", low), ("mean", mid)]
    if isinstance(x, AlphaCutUniform):
        low, upper = alpha_cut_margins(x.a, x.b, y.a, y.b, x.alpha)
        return [("lower bound", low), ("weighted upper bound", upper)]
    if isinstance(x, Gamma):
        return [("mean", x.k * x.theta - y.k * y.theta), ("scale", x.theta - y.theta)]
    if isinstance(x, DiscreteUniform):
        diff = np.cumsum(np.asarray(x.realizations) - np.asarray(y.realizations))
        return [(f"prefix sum {k + 1}", float(m)) for k, m in enumerate(diff)]
    raise FamilyMismatch(type(x).__name__)


def dominates_closed_form(x: Distribution, y: Distribution, tol: float = 0.0) -> bool:
    """True iff ``x`` dominates ``y`` in the second order, each inequality within ``tol``."""
    return all(m >= -tol for _, m in condition_margins(x, y))


def strictly_dominates(x: Distribution, y: Distribution, tol: float = 0.0) -> bool:
    return dominates_closed_form(x, y, tol) and not dominates_closed_form(y, x, tol)


def compare(x: Distribution, y: Distribution, tol: float = 0.0) -> SsdVerdict:
    fwd = dominates_closed_form(x, y, tol)
    bwd = dominates_closed_form(y, x, tol)
    if fwd and bwd:
        return SsdVerdict.EQUIVALENT
    if fwd:
        return SsdVerdict.LEFT_DOMINATES
    if bwd:
        return SsdVerdict.RIGHT_DOMINATES
    return SsdVerdict.INCOMPARABLE


def _breakpoints(d: Distribution) -> list[float]:
    if isinstance(d, DiscreteUniform):
        return list(d.realizations)
    if isinstance(d, (Uniform, AlphaCutUniform)):
        return [d.a, d.b]
    if d.is_degenerate:
        return [dist_mod.support(d)[0]]
    return []


def _left_tail_nodes(x: Distribution, y: Distribution, lo: float, cfg: OracleConfig):
    """Extra nodes left of the window, and the coordinate used to extrapolate there.

    Normal laws get a dense grid down to the ``cfg.deep_tail`` quantile; gamma
    laws get geometric nodes towards 0, where the CDF behaves like a power.
    """
    deep = [
        dist_mod.quantile(d, cfg.deep_tail)
        for d in (x, y)
        if isinstance(d, Normal) and not d.is_degenerate
    ]
    if deep and min(deep) < lo:
        return np.linspace(min(deep), lo, cfg.points)[:-1], "linear"
    if any(isinstance(d, Gamma) and not d.is_degenerate for d in (x, y)) and lo <= 0:
        # sub-grid between 0 and the first regular node
        return np.geomspace(1e-14, 1.0, cfg.points // 4), "log"
    return np.empty(0), None


def _tail_crossing_predicted(s: np.ndarray, log_ratio: np.ndarray) -> bool:
    """Whether a quadratic fit of ``log(G_x / G_y)`` in ``s`` reaches 0 as ``s`` decreases."""
    if len(s) < 8:
        return True
    span = s.max() - s.min()
    t = (s - s.min()) / span
    c2, c1, c0 = np.polyfit(t, log_ratio, 2)
    rng = float(np.ptp(log_ratio))
    if c2 > max(0.05, 1e-3 * rng):
        return True
    if c2 < 0:
        # maximum over t <= 0 sits at the vertex when it lies left of the data
        vertex = -c1 / (2 * c2)
        peak = c0 - c1 * c1 / (4 * c2) if vertex < 0 else c0
        return peak > -1e-3
    # flat or slightly convex: read as a line
    return c1 < 0 or c0 > -1e-3


def dominates_numeric(
    x: Distribution, y: Distribution, cfg: OracleConfig | None = None
) -> NumericResult:
    """Grid test of ``I(u) = int_{-inf}^u (F_x - F_y) dz <= 0`` for all ``u``.

    The running integrals ``G_x``, ``G_y`` use the trapezoid rule with left
    limits at atoms, which is exact for piecewise-linear CDFs whose
    breakpoints lie on the grid; support endpoints and atoms are always
    nodes. The grid covers the union of the ``tail`` quantile windows and
    is extended into the deep left tail for normal and gamma laws.

    With ``tau = rel_tol * max(1, width)``:

    * FAILS when dominance still fails with ``x`` shifted up by ``tau``
      (``max(I - tau F_x) > tau / 10``) or when ``G_x > (1 + ratio_tol) G_y``
      anywhere the integrals are representable;
    * HOLDS when it still holds with ``x`` shifted down by ``tau``, and
      where ``G_y <= tau`` the ratio ``G_x / G_y`` stays below
      ``1 - ratio_tol``, and a fit of the deep-tail log ratio predicts no
      crossing further left;
    * BORDERLINE otherwise.
    """
    cfg = cfg or OracleConfig()
    lo_x, hi_x = dist_mod.support(x, cfg.tail)
    lo_y, hi_y = dist_mod.support(y, cfg.tail)
    lo, hi = min(lo_x, lo_y), max(hi_x, hi_y)
    if hi - lo <= 0:
        lo, hi = lo - 0.5, hi + 0.5
    width = hi - lo
    extra = [p for p in _breakpoints(x) + _breakpoints(y) if lo <= p <= hi]
    tail_nodes, tail_kind = _left_tail_nodes(x, y, lo, cfg)
    if tail_kind == "log":
        tail_nodes = lo + tail_nodes * (width / (cfg.points - 1))
    grid = np.unique(np.concatenate([tail_nodes, np.linspace(lo, hi, cfg.points), extra]))

    fx = dist_mod.cdf(x, grid)
    fy = dist_mod.cdf(y, grid)
    fx_left = dist_mod.cdf_left(x, grid)
    fy_left = dist_mod.cdf_left(y, grid)
    h = np.diff(grid)
    gx = np.concatenate([[0.0], np.cumsum(0.5 * h * (fx[:-1] + fx_left[1:]))])
    gy = np.concatenate([[0.0], np.cumsum(0.5 * h * (fy[:-1] + fy_left[1:]))])
    integral = gx - gy

    tau = cfg.rel_tol * max(1.0, width)
    noise = 0.1 * tau
    floor = cfg.floor
    k = int(np.argmax(integral))
    ratio_fail = np.any(gx > (1 + cfg.ratio_tol) * gy + floor)
    if np.max(integral - tau * fx) > noise or ratio_fail:
        verdict = NumericVerdict.FAILS
    else:
        blind = (gy <= tau) & (gy > floor)
        ratio_ok = bool(np.all(gx[blind] <= (1 - cfg.ratio_tol) * gy[blind]))
        tail_ok = True
        if tail_kind is not None:
            in_tail = grid < lo if tail_kind == "linear" else grid <= tail_nodes.max()
            both = in_tail & (gx > floor) & (gy > floor)
            if np.any(both):
                s = grid[both] if tail_kind == "linear" else np.log(grid[both] - lo)
                tail_ok = not _tail_crossing_predicted(s, np.log(gx[both]) - np.log(gy[both]))
            else:
                # x's tail vanishes first throughout: fit on the window instead
                near = (gx > floor) & (gy > floor) & blind
                s = grid[near] if tail_kind == "linear" else np.log(np.maximum(grid[near] - lo, 1e-300))
                tail_ok = bool(np.any(near)) and not _tail_crossing_predicted(
                    s, np.log(gx[near]) - np.log(gy[near])
                )
        if np.max(integral + tau * fx) <= noise and ratio_ok and tail_ok:
            verdict = NumericVerdict.HOLDS
        else:
            verdict = NumericVerdict.BORDERLINE
    return NumericResult(verdict, float(integral[k]), float(grid[k]), tau)
