"""Classical TU-games over bitmask coalitions.

Player ``i`` (0-based internally, 1-based in every external key) is bit
``1 << i``. A game stores its characteristic function as a dense array of
length ``2**n`` indexed by mask, with ``values[0] == 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from . import lp
from .errors import DimensionMismatch, EmptyCore, InvalidParameters

MAX_PLAYERS = 20
DEFAULT_EPS = 1e-9


def full_mask(n: int) -> int:
    return (1 << n) - 1


def members(mask: int) -> list[int]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def coalition_key(mask: int) -> str:
    """``0b101`` -> ``"1,3"``."""
    return ",".join(str(i + 1) for i in members(mask))


def parse_coalition(key: str, n: int) -> int:
    """Inverse of ``coalition_key``; indices must be ascending, unique and in range."""
    try:
        idx = [int(tok) for tok in key.split(",")]
    except ValueError:
        raise InvalidParameters(f"bad coalition key {key!r}") from None
    if not idx or idx != sorted(set(idx)) or idx[0] < 1 or idx[-1] > n:
        raise InvalidParameters(f"bad coalition key {key!r} for {n} players")
    mask = 0
    for i in idx:
        mask |= 1 << (i - 1)
    return mask


@lru_cache(maxsize=None)
def incidence(n: int) -> np.ndarray:
    """``(2**n, n)`` 0/1 matrix, row ``mask`` marks the members of ``mask``."""
    masks = np.arange(1 << n)[:, None]
    m = ((masks >> np.arange(n)) & 1).astype(float)
    m.flags.writeable = False
    return m


def coalition_sums(x: Sequence[float]) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return incidence(len(x)) @ x


@dataclass(frozen=True, eq=False)
class ClassicalGame:
    n: int
    values: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n <= MAX_PLAYERS:
            raise InvalidParameters(f"player count must lie in 1..{MAX_PLAYERS}, got {self.n}")
        v = np.array(self.values, dtype=float)
        if v.shape != (1 << self.n,):
            raise InvalidParameters(f"need {1 << self.n} coalition values, got shape {v.shape}")
        if v[0] != 0:
            raise InvalidParameters("value of the empty coalition must be 0")
        if not np.all(np.isfinite(v)):
            raise InvalidParameters("coalition values must be finite")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @classmethod
    def from_mapping(cls, n: int, values: Mapping[int, float]) -> "ClassicalGame":
        """Every nonempty mask must be present."""
        v = np.zeros(1 << n)
        for mask in range(1, 1 << n):
            if mask not in values:
                raise InvalidParameters(f"missing value for coalition {coalition_key(mask)}")
            v[mask] = values[mask]
        return cls(n, v)

    @classmethod
    def from_function(cls, n: int, fn: Callable[[int], float]) -> "ClassicalGame":
        return cls(n, np.array([0.0] + [fn(m) for m in range(1, 1 << n)]))

    @property
    def grand(self) -> float:
        return float(self.values[-1])

    def __getitem__(self, mask: int) -> float:
        return float(self.values[mask])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ClassicalGame)
            and self.n == other.n
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.n, self.values.tobytes()))

    def to_dict(self) -> dict:
        return {
            "players": self.n,
            "values": {coalition_key(m): float(self.values[m]) for m in range(1, 1 << self.n)},
        }


def additive_game(r: Sequence[float]) -> ClassicalGame:
    r = np.asarray(r, dtype=float)
    return ClassicalGame(len(r), coalition_sums(r))


def _check_dim(g: ClassicalGame, x: Sequence[float]) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (g.n,):
        raise DimensionMismatch(f"vector of length {x.shape} for a {g.n}-player game")
    return x


def core_membership(g: ClassicalGame, x: Sequence[float], eps: float = DEFAULT_EPS) -> bool:
    x = _check_dim(g, x)
    sums = coalition_sums(x)
    return bool(np.all(sums[1:] >= g.values[1:] - eps) and abs(sums[-1] - g.grand) <= eps)


def _core_system(g: ClassicalGame) -> lp.LinearSystem:
    sys = lp.LinearSystem(g.n)
    inc = incidence(g.n)
    sys.add_eq(inc[-1], g.grand, label=full_mask(g.n))
    for mask in range(1, full_mask(g.n)):
        sys.add_ge(inc[mask], g.values[mask], label=mask)
    return sys


def core_nonempty(g: ClassicalGame, tol: float = lp.DEFAULT_TOL) -> Optional[np.ndarray]:
    """A core point maximizing the smallest coalition surplus, or ``None``."""
    out = lp.solve(_core_system(g), tol)
    return out.x if out else None


def cost_core_nonempty(g: ClassicalGame, tol: float = lp.DEFAULT_TOL) -> Optional[np.ndarray]:
    """A point of the nonnegative cost core ``{x >= 0, x(S) <= v(S), x(N) = v(N)}``."""
    sys = lp.LinearSystem(g.n)
    inc = incidence(g.n)
    sys.add_eq(inc[-1], g.grand, label=full_mask(g.n))
    for mask in range(1, full_mask(g.n)):
        sys.add_le(inc[mask], g.values[mask], label=mask)
    for i in range(g.n):
        sys.set_bounds(i, lower=0.0)
    out = lp.solve(sys, tol)
    return out.x if out else None


def core_min_coordinate(g: ClassicalGame, i: int, tol: float = lp.DEFAULT_TOL) -> float:
    """Smallest value of ``x_i`` over the core (``i`` 0-based)."""
    if not 0 <= i < g.n:
        raise DimensionMismatch(f"player {i} outside 0..{g.n - 1}")
    sys = _core_system(g)
    c = np.zeros(g.n)
    c[i] = 1.0
    sys.set_objective(c)
    out = lp.solve(sys, tol)
    if not out:
        raise EmptyCore("core is empty")
    return float(out.x[i])


def is_convex(g: ClassicalGame, tol: float = DEFAULT_EPS) -> bool:
    """Supermodularity via ``v(S+i) + v(S+j) <= v(S+i+j) + v(S)`` for ``S`` avoiding ``i, j``."""
    v = g.values
    masks = np.arange(1 << g.n)
    for i in range(g.n):
        for j in range(i + 1, g.n):
            bi, bj = 1 << i, 1 << j
            s = masks[(masks & (bi | bj)) == 0]
            if np.any(v[s | bi] + v[s | bj] > v[s | bi | bj] + v[s] + tol):
                return False
    return True


def is_superadditive(g: ClassicalGame, tol: float = DEFAULT_EPS) -> bool:
    v = g.values
    full = full_mask(g.n)
    for s in range(1, full + 1):
        rest = full & ~s
        # T ranges over nonempty submasks of the complement with T > S, each pair once
        t = rest
        while t:
            if t > s and v[s] + v[t] > v[s | t] + tol:
                return False
            t = (t - 1) & rest
    return True


def shift_by_additive(g: ClassicalGame, r: Sequence[float], k: float) -> ClassicalGame:
    """The game ``S -> g(S) + k * r(S)``."""
    r = _check_dim(g, r)
    return ClassicalGame(g.n, g.values + k * coalition_sums(r))
