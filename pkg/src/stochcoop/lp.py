"""Linear feasibility and optimization kernel.

A dense two-phase tableau simplex with Bland's pivot rule. Without an
objective, ``solve`` maximizes the smallest normalized inequality slack
``t`` (a Chebyshev-centre style program), so feasible witnesses sit as far
from the boundary as the equalities allow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import IterationCapExceeded, LpNumericalError, Unbounded

DEFAULT_TOL = 1e-9
SLACK_CAP = 1e6
PIVOT_EPS = 1e-10
MAX_PIVOTS = 200_000


@dataclass
class LinearSystem:
    """Constraints over ``n_vars`` real variables, built up incrementally."""

    n_vars: int
    inequalities: list = field(default_factory=list)  # (coef, ">=" | "<=", rhs, label)
    equalities: list = field(default_factory=list)  # (coef, rhs, label)
    lower: list = field(default_factory=list)
    upper: list = field(default_factory=list)
    objective: Optional[np.ndarray] = None
    maximize: bool = False

    def __post_init__(self):
        if not self.lower:
            self.lower = [None] * self.n_vars
        if not self.upper:
            self.upper = [None] * self.n_vars

    def _vec(self, coef: Sequence[float]) -> np.ndarray:
        v = np.asarray(coef, dtype=float)
        if v.shape != (self.n_vars,):
            raise ValueError(f"coefficient vector must have length {self.n_vars}")
        if not np.all(np.isfinite(v)):
            raise ValueError("coefficients must be finite")
        return v

    def add_ge(self, coef, rhs: float, label=None) -> None:
        self.inequalities.append((self._vec(coef), ">=", float(rhs), label))

    def add_le(self, coef, rhs: float, label=None) -> None:
        self.inequalities.append((self._vec(coef), "<=", float(rhs), label))

    def add_eq(self, coef, rhs: float, label=None) -> None:
        self.equalities.append((self._vec(coef), float(rhs), label))

    def set_bounds(self, index: int, lower=None, upper=None) -> None:
        self.lower[index] = lower
        self.upper[index] = upper

    def set_objective(self, coef, maximize: bool = False) -> None:
        self.objective = self._vec(coef)
        self.maximize = maximize

    def ge_rows(self) -> tuple[np.ndarray, np.ndarray, list]:
        """All inequalities and finite bounds as ``G x >= h``."""
        rows, rhs, labels = [], [], []
        for coef, rel, b, label in self.inequalities:
            sign = 1.0 if rel == ">=" else -1.0
            rows.append(sign * coef)
            rhs.append(sign * b)
            labels.append(label)
        for j in range(self.n_vars):
            e = np.zeros(self.n_vars)
            e[j] = 1.0
            if self.lower[j] is not None:
                rows.append(e)
                rhs.append(float(self.lower[j]))
                labels.append(("lower", j))
            if self.upper[j] is not None:
                rows.append(-e)
                rhs.append(-float(self.upper[j]))
                labels.append(("upper", j))
        G = np.array(rows).reshape(len(rows), self.n_vars)
        return G, np.array(rhs, dtype=float), labels

    def eq_rows(self) -> tuple[np.ndarray, np.ndarray, list]:
        E = np.array([c for c, _, _ in self.equalities]).reshape(len(self.equalities), self.n_vars)
        f = np.array([b for _, b, _ in self.equalities], dtype=float)
        return E, f, [lab for _, _, lab in self.equalities]

    def violations(self, x: np.ndarray, tol: float = DEFAULT_TOL) -> list:
        """Labels of constraints violated by ``x`` beyond a scaled tolerance."""
        x = np.asarray(x, dtype=float)
        out = []
        G, h, labels = self.ge_rows()
        for g, b, label in zip(G, h, labels):
            if g @ x < b - _scaled_tol(g, b, x, tol):
                out.append(label)
        E, f, elabels = self.eq_rows()
        for e, b, label in zip(E, f, elabels):
            if abs(e @ x - b) > _scaled_tol(e, b, x, tol):
                out.append(label)
        return out


@dataclass(frozen=True)
class LpOutcome:
    """Feasible with a witness and value (objective or max-min slack), or infeasible."""

    feasible: bool
    x: Optional[np.ndarray] = None
    value: Optional[float] = None

    def __bool__(self) -> bool:
        return self.feasible


INFEASIBLE = LpOutcome(False)


def _scaled_tol(g: np.ndarray, b: float, x: np.ndarray, tol: float) -> float:
    return tol * max(1.0, float(np.abs(g) @ np.abs(x)), abs(b))


def solve(sys: LinearSystem, tol: float = DEFAULT_TOL) -> LpOutcome:
    """Solve ``sys``; see the module docstring for the feasibility mode.

    Raises ``Unbounded`` only when an objective is set.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = sys.n_vars
    G, h, _ = sys.ge_rows()
    E, f, _ = sys.eq_rows()

    G, h, ok = _normalize(G, h, tol, equality=False)
    if not ok:
        return INFEASIBLE
    E, f, ok = _normalize(E, f, tol, equality=True)
    if not ok:
        return INFEASIBLE

    feasibility = sys.objective is None
    if feasibility:
        # variables (x, t): maximize t s.t. G x - t >= h, E x = f, t <= cap
        G_ext = np.hstack([G, -np.ones((len(G), 1))])
        E_ext = np.hstack([E, np.zeros((len(E), 1))])
        cap = np.zeros((1, n + 1))
        cap[0, n] = -1.0
        G_ext = np.vstack([G_ext, cap])
        h_ext = np.append(h, -SLACK_CAP)
        c = np.zeros(n + 1)
        c[n] = -1.0
        z = _solve_free(G_ext, h_ext, E_ext, f, c)
        if z is None:
            return INFEASIBLE
        x, t = z[:n], float(z[n])
        if t < -tol:
            return INFEASIBLE
        outcome = LpOutcome(True, x, min(t, SLACK_CAP))
    else:
        c = -sys.objective if sys.maximize else sys.objective.copy()
        z = _solve_free(G, h, E, f, c)
        if z is None:
            return INFEASIBLE
        outcome = LpOutcome(True, z, float(sys.objective @ z))

    bad = sys.violations(outcome.x, tol=max(tol, 1e-12) * 10)
    if bad:
        raise LpNumericalError(f"witness violates constraints {bad[:5]}")
    return outcome


def _normalize(A: np.ndarray, b: np.ndarray, tol: float, equality: bool):
    if len(A) == 0:
        return A, b, True
    norms = np.linalg.norm(A, axis=1)
    zero = norms <= 1e-14
    for bi in b[zero]:
        if (abs(bi) if equality else bi) > tol:
            return A, b, False
    keep = ~zero
    return A[keep] / norms[keep, None], b[keep] / norms[keep], True


def _solve_free(G, h, E, f, c) -> Optional[np.ndarray]:
    """Minimize ``c z`` over free ``z`` with ``G z >= h`` and ``E z = f``.

    Returns ``None`` when infeasible. Free variables are split ``z = p - q``;
    each inequality gets a surplus column.
    """
    n = len(c)
    m_in, m_eq = len(G), len(E)
    A = np.zeros((m_in + m_eq, 2 * n + m_in))
    A[:m_in, :n] = G
    A[:m_in, n : 2 * n] = -G
    A[:m_in, 2 * n :] = -np.eye(m_in)
    A[m_in:, :n] = E
    A[m_in:, n : 2 * n] = -E
    b = np.concatenate([h, f])
    cost = np.concatenate([c, -c, np.zeros(m_in)])
    sol = simplex(A, b, cost)
    if sol is None:
        return None
    return sol[:n] - sol[n : 2 * n]


def simplex(A: np.ndarray, b: np.ndarray, c: np.ndarray) -> Optional[np.ndarray]:
    """Minimize ``c z`` s.t. ``A z = b``, ``z >= 0`` by two-phase simplex.

    Bland's rule throughout: the entering column is the lowest index with a
    negative reduced cost, ties in the ratio test go to the lowest basic
    index. Returns ``None`` if infeasible, raises ``Unbounded``.
    """
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    m, n = A.shape
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1

    # phase 1: artificial identity block in columns n..n+m-1
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n : n + m] = np.eye(m)
    T[:m, -1] = b
    T[m, :n] = -A.sum(axis=0)
    T[m, -1] = -b.sum()
    basis = list(range(n, n + m))
    _pivot_loop(T, basis, n + m)
    if -T[m, -1] > 1e-9 * max(1.0, float(b.max(initial=0.0))):
        return None

    # drive remaining artificials out of the basis, dropping redundant rows
    rows = list(range(m))
    for i in list(rows):
        if basis[i] < n:
            continue
        cols = np.nonzero(np.abs(T[i, :n]) > PIVOT_EPS)[0]
        if len(cols):
            _pivot(T, basis, i, int(cols[0]))
        else:
            rows.remove(i)
    keep = rows + [m]
    T = np.hstack([T[keep][:, :n], T[keep][:, -1:]])
    basis = [basis[i] for i in rows]

    # phase 2
    T[-1, :] = 0.0
    T[-1, :n] = c
    for i, j in enumerate(basis):
        T[-1] -= T[-1, j] * T[i]
    _pivot_loop(T, basis, n)

    z = np.zeros(n)
    for i, j in enumerate(basis):
        z[j] = T[i, -1]
    return np.maximum(z, 0.0)


def _pivot_loop(T: np.ndarray, basis: list, n_cols: int) -> None:
    m = len(basis)
    for _ in range(MAX_PIVOTS):
        reduced = T[m, :n_cols]
        entering = np.nonzero(reduced < -PIVOT_EPS)[0]
        if len(entering) == 0:
            return
        j = int(entering[0])
        col = T[:m, j]
        candidates = np.nonzero(col > PIVOT_EPS)[0]
        if len(candidates) == 0:
            raise Unbounded("objective is unbounded")
        ratios = T[candidates, -1] / col[candidates]
        best = ratios.min()
        ties = candidates[ratios <= best + 1e-12 * max(1.0, abs(best))]
        i = int(min(ties, key=lambda r: basis[r]))
        _pivot(T, basis, i, j)
    raise IterationCapExceeded("simplex pivot limit reached")


def _pivot(T: np.ndarray, basis: list, i: int, j: int) -> None:
    T[i] /= T[i, j]
    col = T[:, j].copy()
    col[i] = 0.0
    T -= np.outer(col, T[i])
    basis[i] = j
