"""Second-order stochastic dominance cores of stochastic cooperative games."""

from .coopgame import ClassicalGame
from .distributions import AlphaCutUniform, DiscreteUniform, Gamma, Normal, Uniform
from .errors import StochcoopError
from .newsvendor import NewsvendorProblem, cooperation_feasible, cooperation_feasible_direct
from .ssd import SsdVerdict, compare, dominates_closed_form, dominates_numeric
from .ssdcore import (
    DRSignedType,
    DRType,
    RType,
    StochasticGame,
    Unstructured,
    dc_membership,
    dc_nonempty_dr_normal,
    dc_nonempty_dr_signed,
    dc_nonempty_dr_uniform,
    dc_nonempty_r,
    dr_condition_feasible,
    process_p,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaCutUniform",
    "ClassicalGame",
    "DRSignedType",
    "DRType",
    "DiscreteUniform",
    "Gamma",
    "NewsvendorProblem",
    "Normal",
    "RType",
    "SsdVerdict",
    "StochasticGame",
    "StochcoopError",
    "Uniform",
    "Unstructured",
    "compare",
    "cooperation_feasible",
    "cooperation_feasible_direct",
    "dc_membership",
    "dc_nonempty_dr_normal",
    "dc_nonempty_dr_signed",
    "dc_nonempty_dr_uniform",
    "dc_nonempty_r",
    "dominates_closed_form",
    "dominates_numeric",
    "dr_condition_feasible",
    "process_p",
]
