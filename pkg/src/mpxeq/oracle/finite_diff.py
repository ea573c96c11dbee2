"""Central finite differences of the full equilibrium re-solve."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ..compstat import Perturbation, PerturbationResult, perturb
from ..economy import MultiplexEconomy
from ..equilibrium import solve_equilibrium
from ..errors import AssumptionWarning

FIELDS = ("price", "utility", "consumption")


def _observables(economy: MultiplexEconomy) -> dict:
    eq = solve_equilibrium(economy)
    with np.errstate(divide="ignore", invalid="ignore"):
        logp = np.where(eq.prices > 0, np.log(np.where(eq.prices > 0, eq.prices, 1.0)), np.nan)
    return {"price": logp - logp[0], "utility": eq.utilities, "consumption": np.log(eq.allocation)}


def relative_error(analytic: np.ndarray, numeric: np.ndarray, floor: float = 1e-8) -> float:
    """``max|a - f| / max(max|f|, floor)`` ignoring entries undefined on either side."""
    mask = np.isfinite(analytic) & np.isfinite(numeric)
    if not mask.any():
        return 0.0
    a, f = analytic[mask], numeric[mask]
    return float(np.abs(a - f).max() / max(np.abs(f).max(), floor))


@dataclass(frozen=True)
class DerivativeReport:
    analytic: PerturbationResult
    numeric: dict
    errors: dict
    sign_agreement: dict
    h: float

    @property
    def max_error(self) -> float:
        return max(self.errors.values())

    def to_dict(self) -> dict:
        return {"h": self.h, "errors": self.errors, "sign_agreement": self.sign_agreement,
                "numeric": self.numeric, "analytic": self.analytic.to_dict()}


def finite_difference_check(economy: MultiplexEconomy, pert: Perturbation, h: float = 1e-5,
                            floor: float = 1e-8) -> DerivativeReport:
    """Compare :func:`perturb` against central differences with step ``h``.

    Prices are compared as ``ln(p^s / p^1)``, consumptions as ``ln x``.
    Sign agreement ignores entries whose numeric derivative is below ``floor``.
    """
    analytic = perturb(economy, pert)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AssumptionWarning)
        up = _observables(pert.apply(economy, h))
        down = _observables(pert.apply(economy, -h))
    numeric = {k: (up[k] - down[k]) / (2 * h) for k in FIELDS}
    errors, signs = {}, {}
    for k in FIELDS:
        a, f = getattr(analytic, k), numeric[k]
        errors[k] = relative_error(a, f, floor)
        mask = np.isfinite(a) & np.isfinite(f) & (np.abs(f) > floor)
        signs[k] = bool(np.all(np.sign(a[mask]) == np.sign(f[mask])))
    return DerivativeReport(analytic, numeric, errors, signs, h)
