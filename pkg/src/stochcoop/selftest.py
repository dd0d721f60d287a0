"""Golden examples with known answers, runnable from the command line."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import newsvendor as nv
from .coopgame import (
    ClassicalGame,
    coalition_sums,
    core_min_coordinate,
    core_nonempty,
    is_convex,
    is_superadditive,
)
from .distributions import AlphaCutUniform, Normal, Uniform
from .generators import random_newsvendor, rng_for
from .ssd import alpha_cut_margins, uniform_margins
from .ssdcore import (
    StochasticGame,
    dc_nonempty_dr_normal,
    dc_nonempty_r,
    dr_condition_feasible,
    dr_signed_condition_feasible,
    process_p,
    udc_membership_dr,
)


def three_player_lower() -> ClassicalGame:
    return ClassicalGame.from_mapping(3, {1: 0, 2: 0, 4: 0, 3: 3, 5: 0, 6: 3, 7: 3})


def three_player_mean(modified: bool = False) -> ClassicalGame:
    mu2, mu_n = (5.0, 15.0) if modified else (2.0, 12.0)
    return ClassicalGame.from_mapping(3, {1: 5, 2: mu2, 4: 5, 3: 3, 5: 0, 6: 3, 7: mu_n})


def two_normal_blocked() -> StochasticGame:
    return StochasticGame.from_mapping(2, {1: Normal(10, 1), 2: Normal(10, 1), 3: Normal(2, 10)})


def two_vendor_problem(pooled: bool = True) -> nv.NewsvendorProblem:
    grand = (2.0, 18.0) if pooled else (0.0, 10.0)
    return nv.NewsvendorProblem.from_mapping(2, {1: (0, 10), 2: (0, 10), 3: grand}, c=1, p=2)


def _dr_slack(mean: ClassicalGame, lower: ClassicalGame, d, r) -> float:
    d_s, r_s = coalition_sums(d), coalition_sums(r)
    gap = mean.grand - lower.grand
    return float(min((d_s - mean.values)[1:].min(), (d_s - lower.values - r_s * gap)[1:].min()))


def _golden_three_player() -> bool:
    lower = three_player_lower()
    if dr_condition_feasible(three_player_mean(), lower) is not None:
        return False
    mod = three_player_mean(modified=True)
    d, r = np.array([5.0, 5.0, 5.0]), np.array([5.0, 2.0, 5.0]) / 12
    return (
        dr_condition_feasible(mod, lower) is not None
        and _dr_slack(mod, lower, d, r) >= -1e-9
        and abs(r.sum() - 1) < 1e-12
    )


def _golden_lower_game() -> bool:
    lower = three_player_lower()
    return (
        not is_convex(lower)
        and is_superadditive(lower)
        and np.allclose(core_nonempty(lower), [0, 3, 0], atol=1e-8)
        and np.allclose(core_nonempty(three_player_mean()), [5, 2, 5], atol=1e-8)
        and abs(core_min_coordinate(lower, 1) - 3) < 1e-9
    )


def _golden_signed() -> bool:
    return dr_signed_condition_feasible(three_player_mean(), three_player_lower()) is not None


def _golden_undominated() -> bool:
    g = two_normal_blocked()
    return (
        dc_nonempty_dr_normal(g) is None
        and udc_membership_dr(g, [11, -9], [0.95, 0.05])
        and udc_membership_dr(g, [-9, 11], [0.05, 0.95])
        and not udc_membership_dr(g, [1, 1], [0.5, 0.5])
    )


def _golden_process_p() -> bool:
    lower = ClassicalGame.from_mapping(2, {1: 0, 2: 0, 3: 1})
    x, r = process_p([1.5, 1.5], lower, 3.0)
    return np.allclose(x, [0, 1]) and np.allclose(r, [0.75, 0.25])


def _golden_r_type() -> bool:
    g = StochasticGame.from_mapping(2, {1: Uniform(0, 2), 2: Uniform(0, 2), 3: Uniform(1, 5)})
    return dc_nonempty_r(g) is not None


def _golden_newsvendor() -> bool:
    prob = two_vendor_problem()
    game = nv.build_game(prob)
    rep = nv.cooperation_feasible(prob)
    if not (
        game[1] == AlphaCutUniform(-5, 5, 0.5)
        and game[3] == AlphaCutUniform(-6, 10, 0.5)
        and rep.feasible
        and nv.cooperation_feasible_direct(prob).feasible
    ):
        return False
    at_half = nv._report(prob, np.array([0.5, 0.5]), 1e-9)
    ok_half = all(min(m.protection_slack, m.quality_slack) >= -1e-12 for m in at_half.metrics)
    blocked = two_vendor_problem(pooled=False)
    return ok_half and not nv.cooperation_feasible(blocked).feasible and not (
        nv.cooperation_feasible_direct(blocked).feasible
    )


def _alpha_one(seed: int) -> Callable[[], bool]:
    def check() -> bool:
        rng = rng_for(seed)
        for _ in range(100):
            a_x, a_y = rng.uniform(-5, 5, 2)
            b_x, b_y = np.array([a_x, a_y]) + rng.uniform(0.1, 5, 2)
            if alpha_cut_margins(a_x, b_x, a_y, b_y, 1.0) != uniform_margins(a_x, b_x, a_y, b_y):
                return False
        return True

    return check


def _newsvendor_routes(seed: int) -> Callable[[], bool]:
    def check() -> bool:
        rng = rng_for(seed)
        for _ in range(20):
            prob = random_newsvendor(rng, int(rng.integers(1, 5)))
            if nv.cooperation_feasible(prob).feasible != nv.cooperation_feasible_direct(prob).feasible:
                return False
        return True

    return check


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    seconds: float
    error: str | None = None


def golden_suite(seed: int = 0) -> list[tuple[str, Callable[[], bool]]]:
    return [
        ("three-player (d,r) infeasible, modified feasible", _golden_three_player),
        ("three-player lower game structure", _golden_lower_game),
        ("three-player signed (d,r) feasible", _golden_signed),
        ("two-player normal: empty core, undominated payoffs", _golden_undominated),
        ("process P hand trace", _golden_process_p),
        ("uniform r-type feasible", _golden_r_type),
        ("two-vendor pooling feasible, no pooling infeasible", _golden_newsvendor),
        ("alpha = 1 reduces to uniform", _alpha_one(seed)),
        ("newsvendor theorem vs direct (20 seeded)", _newsvendor_routes(seed)),
    ]


def run(seed: int = 0) -> list[CheckResult]:
    out = []
    for name, fn in golden_suite(seed):
        t0 = time.perf_counter()
        try:
            ok, err = bool(fn()), None
        except Exception as exc:  # reported, not raised: this is a diagnostic table
            ok, err = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, ok, time.perf_counter() - t0, err))
    return out
