"""Distribution families used for coalition values and payoffs.

Five families are supported: normal, uniform, gamma, discrete uniform and
the alpha-cut uniform law of a newsvendor's profit under the critical
fractile order. Values are frozen dataclasses; the module-level functions
``mean``, ``variance``, ``cdf``, ``quantile`` and ``affine_image`` dispatch
on the family.

Constructors enforce the strict invariants (``a < b``, ``theta > 0``).
``affine_image`` with a zero scale is the one place a zero-width law of a
bounded family can arise; such values bypass validation and report
``is_degenerate``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import special

from .errors import (
    InvalidParameters,
    NegativeScale,
    NonScaleFamily,
    UnsupportedFamily,
)

QUANTILE_TOL = 1e-10


@dataclass(frozen=True)
class Normal:
    mu: float
    sigma2: float

    family = "normal"

    def __post_init__(self):
        _finite(self.mu, self.sigma2)
        if self.sigma2 < 0:
            raise InvalidParameters(f"normal variance must be >= 0, got {self.sigma2}")

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)

    @property
    def is_degenerate(self) -> bool:
        return self.sigma2 == 0


@dataclass(frozen=True)
class Uniform:
    a: float
    b: float

    family = "uniform"

    def __post_init__(self):
        _finite(self.a, self.b)
        if not self.a < self.b:
            raise InvalidParameters(f"uniform needs a < b, got [{self.a}, {self.b}]")

    @property
    def is_degenerate(self) -> bool:
        return self.a == self.b


@dataclass(frozen=True)
class Gamma:
    k: float
    theta: float

    family = "gamma"

    def __post_init__(self):
        _finite(self.k, self.theta)
        if self.k <= 0 or self.theta <= 0:
            raise InvalidParameters(
                f"gamma needs k > 0 and theta > 0, got k={self.k}, theta={self.theta}"
            )

    @property
    def is_degenerate(self) -> bool:
        return self.theta == 0


@dataclass(frozen=True)
class DiscreteUniform:
    """Equiprobable realizations, stored sorted ascending."""

    realizations: tuple[float, ...]

    family = "discrete_uniform"

    def __post_init__(self):
        values = tuple(float(w) for w in self.realizations)
        if not values:
            raise InvalidParameters("discrete uniform needs at least one realization")
        _finite(*values)
        object.__setattr__(self, "realizations", tuple(sorted(values)))

    @property
    def size(self) -> int:
        return len(self.realizations)

    @property
    def is_degenerate(self) -> bool:
        return self.realizations[0] == self.realizations[-1]


@dataclass(frozen=True)
class AlphaCutUniform:
    """Uniform CDF scaled by ``alpha`` on ``[a, b)`` with a jump to one at ``b``."""

    a: float
    b: float
    alpha: float

    family = "alpha_cut_uniform"

    def __post_init__(self):
        _finite(self.a, self.b, self.alpha)
        if not self.a < self.b:
            raise InvalidParameters(f"alpha-cut uniform needs a < b, got [{self.a}, {self.b}]")
        if not 0 < self.alpha < 1:
            raise InvalidParameters(f"alpha must lie in (0, 1), got {self.alpha}")

    @property
    def is_degenerate(self) -> bool:
        return self.a == self.b


Distribution = Union[Normal, Uniform, Gamma, DiscreteUniform, AlphaCutUniform]

FAMILIES = {
    cls.family: cls for cls in (Normal, Uniform, Gamma, DiscreteUniform, AlphaCutUniform)
}


def _finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise InvalidParameters(f"parameter must be finite, got {v}")


def _unchecked(cls, **fields):
    obj = object.__new__(cls)
    for name, value in fields.items():
        object.__setattr__(obj, name, value)
    return obj


def mean(dist: Distribution) -> float:
    if isinstance(dist, Normal):
        return dist.mu
    if isinstance(dist, Uniform):
        return 0.5 * (dist.a + dist.b)
    if isinstance(dist, Gamma):
        return dist.k * dist.theta
    if isinstance(dist, DiscreteUniform):
        return math.fsum(dist.realizations) / dist.size
    if isinstance(dist, AlphaCutUniform):
        return dist.alpha * 0.5 * (dist.a + dist.b) + (1 - dist.alpha) * dist.b
    raise UnsupportedFamily(type(dist).__name__)


def variance(dist: Distribution) -> float:
    if isinstance(dist, Normal):
        return dist.sigma2
    if isinstance(dist, Uniform):
        return (dist.b - dist.a) ** 2 / 12
    if isinstance(dist, Gamma):
        return dist.k * dist.theta**2
    if isinstance(dist, DiscreteUniform):
        m = mean(dist)
        return math.fsum((w - m) ** 2 for w in dist.realizations) / dist.size
    if isinstance(dist, AlphaCutUniform):
        a, b, alpha = dist.a, dist.b, dist.alpha
        # central moments of the continuous part, then the law of total variance
        m_cont = 0.5 * (a + b)
        v_cont = (b - a) ** 2 / 12
        m = mean(dist)
        return alpha * (v_cont + (m_cont - m) ** 2) + (1 - alpha) * (b - m) ** 2
    raise UnsupportedFamily(type(dist).__name__)


def std(dist: Distribution) -> float:
    return math.sqrt(variance(dist))


def cdf(dist: Distribution, x):
    """Right-continuous distribution function ``P(X <= x)``.

    Accepts a scalar or an array; a scalar input returns a float.
    """
    xs = np.asarray(x, dtype=float)
    if isinstance(dist, Normal):
        if dist.sigma2 == 0:
            out = (xs >= dist.mu).astype(float)
        else:
            out = special.ndtr((xs - dist.mu) / dist.sigma)
    elif isinstance(dist, Uniform):
        if dist.a == dist.b:
            out = (xs >= dist.b).astype(float)
        else:
            out = np.clip((xs - dist.a) / (dist.b - dist.a), 0.0, 1.0)
    elif isinstance(dist, Gamma):
        if dist.theta == 0:
            out = (xs >= 0).astype(float)
        else:
            out = special.gammainc(dist.k, np.maximum(xs, 0.0) / dist.theta)
    elif isinstance(dist, DiscreteUniform):
        out = np.searchsorted(dist.realizations, xs, side="right") / dist.size
    elif isinstance(dist, AlphaCutUniform):
        if dist.a == dist.b:
            out = (xs >= dist.b).astype(float)
        else:
            ramp = np.clip((xs - dist.a) / (dist.b - dist.a), 0.0, 1.0) * dist.alpha
            out = np.where(xs >= dist.b, 1.0, ramp)
    else:
        raise UnsupportedFamily(type(dist).__name__)
    return float(out) if out.ndim == 0 else out


def cdf_left(dist: Distribution, x):
    """Left limit ``P(X < x)``; differs from ``cdf`` only at atoms."""
    xs = np.asarray(x, dtype=float)
    if isinstance(dist, DiscreteUniform):
        out = np.searchsorted(dist.realizations, xs, side="left") / dist.size
    elif isinstance(dist, AlphaCutUniform) and dist.a < dist.b:
        ramp = np.clip((xs - dist.a) / (dist.b - dist.a), 0.0, 1.0) * dist.alpha
        out = np.where(xs > dist.b, 1.0, ramp)
    elif dist.is_degenerate:
        point = support(dist)[0]
        out = (xs > point).astype(float)
    else:
        out = np.asarray(cdf(dist, xs))
    return float(out) if out.ndim == 0 else out


def support(dist: Distribution, tail: float = 0.0) -> tuple[float, float]:
    """Support interval; unbounded families are cut at quantiles ``tail`` and ``1 - tail``."""
    if isinstance(dist, (Uniform, AlphaCutUniform)):
        return dist.a, dist.b
    if isinstance(dist, DiscreteUniform):
        return dist.realizations[0], dist.realizations[-1]
    if dist.is_degenerate:
        point = dist.mu if isinstance(dist, Normal) else 0.0
        return point, point
    if tail <= 0:
        raise InvalidParameters("unbounded family needs a positive tail cut")
    lo = 0.0 if isinstance(dist, Gamma) else quantile(dist, tail)
    return lo, quantile(dist, 1 - tail)


def quantile(dist: Distribution, p: float) -> float:
    """Inverse distribution function for the continuous families.

    Normal and gamma are inverted by bisection on ``cdf`` to an absolute
    tolerance of ``QUANTILE_TOL``.
    """
    if not 0 < p < 1:
        raise InvalidParameters(f"quantile level must lie in (0, 1), got {p}")
    if isinstance(dist, Uniform):
        return dist.a + p * (dist.b - dist.a)
    if isinstance(dist, Normal):
        if dist.sigma2 == 0:
            return dist.mu
        # |z| < 40 covers every double-precision level
        lo, hi = dist.mu - 40 * dist.sigma, dist.mu + 40 * dist.sigma
        return _bisect(dist, p, lo, hi)
    if isinstance(dist, Gamma):
        hi = max(1.0, mean(dist))
        while cdf(dist, hi) < p:
            hi *= 2
        return _bisect(dist, p, 0.0, hi)
    raise UnsupportedFamily(f"quantile is not provided for {dist.family}")


def _bisect(dist: Distribution, p: float, lo: float, hi: float) -> float:
    while hi - lo > QUANTILE_TOL:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if cdf(dist, mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def affine_image(dist: Distribution, d: float, r: float, *, rel_tol: float = 1e-9) -> Distribution:
    """Law of ``d + r * (X - E[X])``.

    With ``d = r * E[X]`` this is the pure scaling ``r * X``. Gamma only
    supports that pure-scaling case. A negative ``r`` is accepted for the
    normal family only.
    """
    if isinstance(dist, Normal):
        return Normal(d, r * r * dist.sigma2)
    if r < 0:
        raise NegativeScale(f"scale {r} < 0 is not supported for {dist.family}")
    m = mean(dist)
    if isinstance(dist, Gamma):
        target = r * m
        if abs(d - target) > rel_tol * max(1.0, abs(d), abs(target)):
            raise NonScaleFamily(
                f"gamma admits pure scaling only: need d = r*E[X] = {target}, got {d}"
            )
        if r == 0:
            return _unchecked(Gamma, k=dist.k, theta=0.0)
        return Gamma(dist.k, r * dist.theta)
    if isinstance(dist, DiscreteUniform):
        return DiscreteUniform(tuple(d + r * (w - m) for w in dist.realizations))
    if isinstance(dist, (Uniform, AlphaCutUniform)):
        a = d + r * (dist.a - m)
        b = d + r * (dist.b - m)
        fields = {"a": a, "b": b}
        if isinstance(dist, AlphaCutUniform):
            fields["alpha"] = dist.alpha
        if r == 0 or not a < b:
            return _unchecked(type(dist), **fields)
        return type(dist)(**fields)
    raise UnsupportedFamily(type(dist).__name__)


def scale(dist: Distribution, r: float) -> Distribution:
    """Law of ``r * X`` for ``r >= 0``."""
    return affine_image(dist, r * mean(dist), r)
