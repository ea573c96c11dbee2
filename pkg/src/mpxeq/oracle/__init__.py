"""Independent checks of the closed-form results."""

from .curves import CurveSample, textbook_curves
from .finite_diff import DerivativeReport, finite_difference_check
from .generators import random_economy
from .planner import PlannerResult, minimize_weighted_kl, numeric_planner
from .tatonnement import TatonnementConfig, tatonnement_solve

__all__ = [
    "CurveSample", "DerivativeReport", "PlannerResult", "TatonnementConfig", "finite_difference_check",
    "minimize_weighted_kl", "numeric_planner", "random_economy", "tatonnement_solve", "textbook_curves",
]
