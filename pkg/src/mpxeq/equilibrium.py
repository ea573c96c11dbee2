"""Closed-form interior competitive equilibrium."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .centrality import COND_LIMIT, LayerInfluence, layer_influences
from .economy import MultiplexEconomy, validate_economy
from .errors import (AssumptionWarning, DimensionMismatch, NonInteriorEquilibrium, NonPositiveMu,
                     SingularAggregate, SingularH)

RANK_TOL = 1e-10
INTERIOR_FLOOR = 1e-12


@dataclass(frozen=True)
class SystemMatrices:
    """``Mbar = sum_s alpha^s (I - eta^s 1^T) M^s`` and its bordered version ``H``."""

    Mbar: np.ndarray
    H: np.ndarray
    rank: int
    cond_H: float
    influences: tuple

    @property
    def unique(self) -> bool:
        return self.rank == self.Mbar.shape[0] - 1


@dataclass(frozen=True)
class EquilibriumSolution:
    mu: np.ndarray
    prices: np.ndarray
    allocation: np.ndarray
    effective: np.ndarray
    utilities: np.ndarray
    shadow: np.ndarray
    interior: bool
    unique: bool

    def to_dict(self) -> dict:
        return {
            "mu": self.mu,
            "prices": self.prices,
            "allocation": self.allocation,
            "effective": self.effective,
            "utilities": self.utilities,
            "shadow": self.shadow,
            "interior": self.interior,
            "unique": self.unique,
        }


def effective_consumption(economy: MultiplexEconomy, X: np.ndarray) -> np.ndarray:
    """``q^s = x^s + phi^s G^s x^s`` for each good."""
    X = np.asarray(X, dtype=float)
    return np.array([X[s] + g.spillover @ X[s] for s, g in enumerate(economy.goods)])


def utilities(economy: MultiplexEconomy, X: np.ndarray) -> np.ndarray:
    """Cobb-Douglas log utilities; ``-inf`` where effective consumption is not positive."""
    Q = effective_consumption(economy, X)
    a = economy.alphas
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(Q > 0, np.log(np.where(Q > 0, Q, 1.0)), -np.inf)
    logs = np.where(a[:, None] == 0, 0.0, logs)
    return a @ logs


def system_matrices(economy: MultiplexEconomy, influences: list[LayerInfluence] | None = None) -> SystemMatrices:
    infl = influences if influences is not None else layer_influences(economy)
    n = economy.n
    ones = np.ones(n)
    eta = economy.shares
    a = economy.alphas
    Mbar = np.zeros((n, n))
    for s, f in enumerate(infl):
        Mbar += a[s] * (f.M - np.outer(eta[s], ones @ f.M))
    H = Mbar + a[0] * np.outer(eta[0], ones @ infl[0].M)
    sv = np.linalg.svd(Mbar, compute_uv=False)
    rank = int((sv > RANK_TOL * sv[0]).sum()) if sv[0] > 0 else 0
    cond = float(np.linalg.cond(H))
    return SystemMatrices(Mbar, H, rank, cond, tuple(infl))


def solve_effective_endowment(economy: MultiplexEconomy, influences=None) -> tuple[np.ndarray, SystemMatrices]:
    """Effective endowment ``mu = H^-1 omega^1``.

    Warns with :class:`AssumptionWarning` when the strong spillover bound fails.

    Raises:
        SingularH: ``H`` is numerically singular.
        NonPositiveMu: some entry of ``mu`` is not positive.
    """
    report = validate_economy(economy)
    if not report.all_interior:
        bad = [economy.good_names[s] for s, ok in enumerate(report.interior) if not ok]
        warnings.warn(f"spillover bound for interior equilibria violated for goods {bad}",
                      AssumptionWarning, stacklevel=2)
    sys_ = system_matrices(economy, influences)
    if not np.isfinite(sys_.cond_H) or sys_.cond_H > COND_LIMIT:
        raise SingularH(f"H is singular (cond={sys_.cond_H:.3g})")
    mu = np.linalg.solve(sys_.H, economy.goods[0].endowments)
    bad = np.flatnonzero(~(mu > 0))
    if bad.size:
        raise NonPositiveMu(f"effective endowment not positive: {mu[bad].tolist()}", bad.tolist())
    return mu, sys_


def _closed_form(economy, mu, influences):
    a = economy.alphas
    wbar = economy.aggregates
    n_goods = economy.n_goods
    n = economy.n
    X = np.empty((n_goods, n))
    Q = np.empty((n_goods, n))
    p = np.empty(n_goods)
    for s, f in enumerate(influences):
        bvec = f.M @ mu
        bagg = float(mu @ f.tilde_b)
        X[s] = wbar[s] * bvec / bagg
        Q[s] = wbar[s] * mu / bagg
        p[s] = a[s] * bagg / wbar[s]
    return p, X, Q


def solve_equilibrium(economy: MultiplexEconomy) -> EquilibriumSolution:
    """Interior competitive equilibrium with the price of good 1 normalized to one.

    Raises:
        NonInteriorEquilibrium: some consumption falls below ``1e-12``; the
            location lists the offending ``[good, consumer]`` cells.
    """
    mu, sys_ = solve_effective_endowment(economy)
    p, X, Q = _closed_form(economy, mu, sys_.influences)
    if p[0] > 0:
        scale = p[0]
        p = p / scale
        p[0] = 1.0
        mu = mu / scale
    cells = np.argwhere(X <= INTERIOR_FLOOR)
    if cells.size:
        raise NonInteriorEquilibrium("closed-form allocation is not interior", cells.tolist())
    u = utilities(economy, X)
    return EquilibriumSolution(mu, p, X, Q, u, 1.0 / mu, True, sys_.unique)


@dataclass(frozen=True)
class ResidualReport:
    market_clearing: float
    budget: float
    foc: float
    positivity: float
    tol: float

    @property
    def passed(self) -> bool:
        return max(self.market_clearing, self.budget, self.foc, self.positivity) <= self.tol

    def to_dict(self) -> dict:
        return {"market_clearing": self.market_clearing, "budget": self.budget, "foc": self.foc,
                "positivity": self.positivity, "tol": self.tol, "passed": self.passed}


def verify_equilibrium(economy: MultiplexEconomy, candidate: EquilibriumSolution,
                       tol: float = 1e-8) -> ResidualReport:
    """Residuals of the equilibrium conditions.

    Market clearing and budget residuals are absolute (in units of goods and
    of the numeraire); the first-order residual is relative to ``q``.
    """
    X = np.asarray(candidate.allocation, dtype=float)
    p = np.asarray(candidate.prices, dtype=float)
    mu = np.asarray(candidate.mu, dtype=float)
    if X.shape != (economy.n_goods, economy.n) or p.shape != (economy.n_goods,) or mu.shape != (economy.n,):
        raise DimensionMismatch("candidate dimensions do not match the economy")
    W = economy.endowments
    clearing = float(np.abs(X.sum(axis=1) - economy.aggregates).max())
    budget = float(np.abs(p @ X - p @ W).max())
    Q = effective_consumption(economy, X)
    a = economy.alphas
    foc = 0.0
    for s in range(economy.n_goods):
        if a[s] == 0:
            continue
        target = a[s] * mu / p[s]
        foc = max(foc, float(np.abs(Q[s] - target).max() / np.abs(target).max()))
    positivity = float(max(0.0, -X.min()))
    return ResidualReport(clearing, budget, foc, positivity, tol)


def exogenous_price_mu(economy: MultiplexEconomy, incomes) -> np.ndarray:
    """Effective endowment under exogenous unit prices: ``(sum_s alpha^s M^s)^-1 T``."""
    T = np.asarray(incomes, dtype=float)
    if T.shape != (economy.n,):
        raise DimensionMismatch(f"incomes must have length {economy.n}")
    A = sum(g.alpha * f.M for g, f in zip(economy.goods, layer_influences(economy)))
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularAggregate(f"sum of alpha-weighted influence matrices is singular (cond={cond:.3g})")
    return np.linalg.solve(A, T)
