"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line in ``RESULTS``; ``conftest.py`` prints
them at the end of the session. Running this file directly prints them too.
"""

import math
import time

import numpy as np
import pytest

from stochcoop import distributions as dm
from stochcoop import newsvendor as nv
from stochcoop.coopgame import (
    ClassicalGame,
    coalition_sums,
    core_membership,
    core_nonempty,
    cost_core_nonempty,
    is_convex,
)
from stochcoop.distributions import AlphaCutUniform, Normal
from stochcoop.generators import (
    balanced_nonconvex_lower_game,
    blocking_mean_game,
    random_newsvendor,
    random_normal_game,
    random_pair,
    random_uniform_game,
    rng_for,
)
from stochcoop.ssd import (
    NumericVerdict,
    alpha_cut_margins,
    dominates_closed_form,
    dominates_numeric,
    uniform_margins,
)
from stochcoop.ssdcore import (
    DRType,
    RType,
    StochasticGame,
    dc_membership,
    dc_nonempty_dr_normal,
    dc_nonempty_dr_uniform,
    deviation_game,
    dr_condition_feasible,
    lower_bound_game,
    mean_game,
    process_p,
    udc_membership_dr,
)

pytestmark = pytest.mark.acceptance

RESULTS: dict[int, str] = {}


class Criterion:
    """Times the block and records one line; re-raises so pytest sees the failure."""

    def __init__(self, number: int, title: str, limit: float | None = None):
        self.number, self.title, self.limit = number, title, limit
        self.notes: list[str] = []

    def note(self, text: str) -> None:
        self.notes.append(text)

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        ok = exc_type is None
        if ok and self.limit is not None and elapsed >= self.limit:
            ok = False
            exc = AssertionError(f"took {elapsed:.2f}s, limit {self.limit}s")
        detail = "; ".join(self.notes)
        if not ok and exc is not None:
            detail = f"{detail}; {exc}" if detail else str(exc)
        limit = f" (limit {self.limit:g}s)" if self.limit is not None else ""
        RESULTS[self.number] = (
            f"{'PASS' if ok else 'FAIL'} criterion {self.number}: {self.title} "
            f"[{elapsed:.2f}s{limit}] {detail}".rstrip()
        )
        if exc_type is None and not ok:
            raise exc
        return False


def _lower3():
    return ClassicalGame.from_mapping(3, {1: 0, 2: 0, 4: 0, 3: 3, 5: 0, 6: 3, 7: 3})


def _mean3(mu2, mu_n):
    return ClassicalGame.from_mapping(3, {1: 5, 2: mu2, 4: 5, 3: 3, 5: 0, 6: 3, 7: mu_n})


def test_criterion_1_three_player_golden():
    with Criterion(1, "three-player (d,r) golden example", limit=1.0) as c:
        lower = _lower3()
        assert dr_condition_feasible(_mean3(2, 12), lower) is None
        mod = _mean3(5, 15)
        assert dr_condition_feasible(mod, lower) is not None
        d, r = np.array([5.0, 5.0, 5.0]), np.array([5.0, 2.0, 5.0]) / 12
        d_s, r_s = coalition_sums(d), coalition_sums(r)
        gap = mod.grand - lower.grand
        slack = min((d_s - mod.values)[1:].min(), (d_s - lower.values - r_s * gap)[1:].min())
        assert slack >= -1e-9
        assert abs(d.sum() - mod.grand) <= 1e-9 and abs(r.sum() - 1) <= 1e-12 and r.min() >= 0
        c.note(f"original absent, modified feasible, witness min slack {slack:.3g}")


def test_criterion_2_two_player_normal_golden():
    with Criterion(2, "two-player normal golden example", limit=1.0) as c:
        g = StochasticGame.from_mapping(2, {1: Normal(10, 1), 2: Normal(10, 1), 3: Normal(2, 10)})
        assert dc_nonempty_dr_normal(g) is None
        assert udc_membership_dr(g, [11, -9], [0.95, 0.05])
        assert udc_membership_dr(g, [-9, 11], [0.05, 0.95])
        assert not udc_membership_dr(g, [1, 1], [0.5, 0.5])
        c.note("core empty; (11,-9)/(0.95,0.05) and mirror undominated; (1,1)/(0.5,0.5) blocked")


def test_criterion_3_normal_theorem_equivalence():
    with Criterion(3, "normal theorem equivalence, 300 games", limit=30.0) as c:
        rng = rng_for(3)
        agree = witnesses = 0
        for _ in range(300):
            g = random_normal_game(rng, int(rng.integers(2, 7)))
            w = dc_nonempty_dr_normal(g)
            theorem = (
                core_nonempty(mean_game(g)) is not None
                and cost_core_nonempty(deviation_game(g)) is not None
            )
            agree += (w is not None) == theorem
            if w is not None:
                assert dc_membership(g, w, 1e-8), "witness fails membership"
                witnesses += 1
        c.note(f"agree {agree}/300, witnesses {witnesses} all members")
        assert agree == 300


def test_criterion_4_uniform_theorem_directions():
    with Criterion(4, "uniform theorem directions, 300 games", limit=60.0) as c:
        rng = rng_for(4)
        necessary_bad = sufficient_bad = nonempty = subset = 0
        for _ in range(300):
            g = random_uniform_game(rng, int(rng.integers(2, 7)))
            mean, lower = mean_game(g), lower_bound_game(g)
            exact = dc_nonempty_dr_uniform(g).nonempty
            mean_ok = core_nonempty(mean) is not None
            lower_ok = core_nonempty(lower) is not None
            if exact:
                nonempty += 1
                necessary_bad += not (mean_ok and lower_ok)
            if is_convex(lower) and mean_ok:
                subset += 1
                d = core_nonempty(mean)
                x, r = process_p(d, lower, mean.grand)
                ok = (
                    exact
                    and core_membership(lower, x, 1e-8)
                    and r.min() >= -1e-9
                    and abs(r.sum() - 1) <= 1e-9
                    and dc_membership(g, DRType(d, np.maximum(r, 0.0)), 1e-8)
                )
                sufficient_bad += not ok
        c.note(
            f"nonempty {nonempty}, necessity violations {necessary_bad}; "
            f"convex+balanced subset {subset}, violations {sufficient_bad}"
        )
        assert necessary_bad == 0 and sufficient_bad == 0
        assert subset > 0


def test_criterion_5_counterexample_generator():
    with Criterion(5, "counterexample construction, 50 games") as c:
        rng = rng_for(5)
        absent = 0
        for _ in range(50):
            lower, i = balanced_nonconvex_lower_game(rng, int(rng.integers(3, 6)))
            mean = blocking_mean_game(rng, lower, i)
            absent += dr_condition_feasible(mean, lower) is None
        c.note(f"absent {absent}/50")
        assert absent == 50


def test_criterion_6_oracle_agreement():
    with Criterion(6, "closed form vs numeric oracle, 200 pairs per family", limit=60.0) as c:
        bad = []
        for family in ("normal", "uniform", "alpha_cut_uniform", "discrete_uniform"):
            rng = rng_for(6)
            mismatch = borderline = 0
            for _ in range(200):
                x, y = random_pair(rng, family)
                res = dominates_numeric(x, y)
                if res.verdict is NumericVerdict.BORDERLINE:
                    borderline += 1
                elif dominates_closed_form(x, y) != (res.verdict is NumericVerdict.HOLDS):
                    mismatch += 1
            c.note(f"{family}: {mismatch} mismatches, {borderline} borderline")
            if mismatch or borderline >= 10:
                bad.append(family)
        rng = rng_for(6)
        gamma_mismatch = 0
        for _ in range(200):
            x, y = random_pair(rng, "gamma")
            res = dominates_numeric(x, y)
            if res.verdict is not NumericVerdict.BORDERLINE:
                gamma_mismatch += dominates_closed_form(x, y) != (res.verdict is NumericVerdict.HOLDS)
        c.note(f"gamma (informational): {gamma_mismatch} mismatches")
        assert not bad, bad


def test_criterion_7_newsvendor_routes():
    with Criterion(7, "newsvendor theorem vs direct, 200 problems") as c:
        rng = rng_for(7)
        agree = feasible = 0
        for _ in range(200):
            prob = random_newsvendor(rng, int(rng.integers(1, 6)))
            a = nv.cooperation_feasible(prob).feasible
            agree += a == nv.cooperation_feasible_direct(prob).feasible
            feasible += a
        pooled = nv.NewsvendorProblem.from_mapping(2, {1: (0, 10), 2: (0, 10), 3: (2, 18)}, c=1, p=2)
        rep = nv.cooperation_feasible(pooled)
        assert rep.feasible
        assert all(5 / 12 - 1e-9 <= ri <= 5 / 6 + 1e-9 for ri in rep.r)
        assert dc_membership(nv.build_game(pooled), RType([0.5, 0.5]), 1e-9)
        at_half = nv._report(pooled, np.array([0.5, 0.5]), 1e-9)
        assert all(min(m.protection_slack, m.quality_slack) >= 0 for m in at_half.metrics)
        blocked = nv.NewsvendorProblem.from_mapping(2, {1: (0, 10), 2: (0, 10), 3: (0, 10)}, c=1, p=2)
        assert not nv.cooperation_feasible(blocked).feasible
        c.note(f"agree {agree}/200 ({feasible} feasible); worked instances as expected")
        assert agree == 200


def test_criterion_8_alpha_one_reduction():
    with Criterion(8, "alpha = 1 reduction, 100 draws") as c:
        rng = rng_for(8)
        equal = 0
        for _ in range(100):
            a_x, a_y = rng.uniform(-10, 10, 2)
            b_x, b_y = np.array([a_x, a_y]) + rng.uniform(0.01, 10, 2)
            equal += alpha_cut_margins(a_x, b_x, a_y, b_y, 1.0) == uniform_margins(a_x, b_x, a_y, b_y)
        c.note(f"identical {equal}/100")
        assert equal == 100


def _alpha_cut_draws(d: AlphaCutUniform, rng, size):
    body = rng.uniform(d.a, d.b, size)
    return np.where(rng.random(size) < d.alpha, body, d.b)


def test_criterion_9_alpha_cut_monte_carlo():
    with Criterion(9, "alpha-cut moments and CDF vs Monte Carlo, 20 sets") as c:
        rng = rng_for(9)
        n = 1_000_000
        worst = 0.0
        for _ in range(20):
            a = rng.uniform(-10, 10)
            d = AlphaCutUniform(a, a + rng.uniform(0.5, 20), rng.uniform(0.05, 0.95))
            x = _alpha_cut_draws(d, rng, n)
            m = x.mean()
            z = [abs(m - dm.mean(d)) / (x.std() / math.sqrt(n))]
            dev2 = (x - m) ** 2
            z.append(abs(dev2.mean() - dm.variance(d)) / (dev2.std() / math.sqrt(n)))
            for q in (0.1, 0.5, 0.9):
                t = d.a + q * (d.b - d.a)
                p = dm.cdf(d, t)
                z.append(abs(np.mean(x <= t) - p) / math.sqrt(p * (1 - p) / n))
            # the atom at b
            p = dm.cdf_left(d, d.b)
            z.append(abs(np.mean(x < d.b) - p) / math.sqrt(p * (1 - p) / n))
            worst = max(worst, max(z))
        c.note(f"largest deviation {worst:.2f} standard errors")
        assert worst <= 4.0


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
    for k in sorted(RESULTS):
        print(RESULTS[k])
