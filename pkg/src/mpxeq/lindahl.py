"""Interior Lindahl equilibrium with personalized prices for spillovers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .centrality import layer_influences
from .economy import MultiplexEconomy
from .equilibrium import EquilibriumSolution, solve_equilibrium, utilities
from .errors import NonInteriorLindahl
from .welfare import pareto_allocation, planner_kkt_residual

INTERIOR_FLOOR = 1e-12
EQUAL_TOL = 1e-9


@dataclass(frozen=True)
class LindahlSolution:
    """Lindahl equilibrium.

    ``cross_prices[s, i, j]`` is what consumer ``i`` pays per unit of
    consumer ``j``'s consumption of good ``s``; the diagonal holds the own
    prices.  ``weights`` is ``sum_s alpha^s eta^s``, the budget share vector
    and the Pareto weight supporting the allocation.
    """

    goods_prices: np.ndarray
    own_prices: np.ndarray
    cross_prices: np.ndarray
    allocation: np.ndarray
    weights: np.ndarray
    utilities: np.ndarray

    def to_dict(self) -> dict:
        return {"goods_prices": self.goods_prices, "own_prices": self.own_prices,
                "cross_prices": self.cross_prices, "allocation": self.allocation,
                "weights": self.weights, "utilities": self.utilities}


def solve_lindahl(economy: MultiplexEconomy) -> LindahlSolution:
    """Closed-form interior Lindahl equilibrium (goods prices ``alpha^s / omega_bar^s``).

    Raises:
        NonInteriorLindahl: some consumption is not positive; spillovers are
            too strong for an interior solution.
    """
    infl = layer_influences(economy)
    gamma = economy.alphas @ economy.shares
    price = economy.alphas / economy.aggregates
    own = np.array([f.tilde_b * price[s] for s, f in enumerate(infl)])
    cross = np.array([g.spillover * own[s][:, None] for s, g in enumerate(economy.goods)])
    for s in range(economy.n_goods):
        np.fill_diagonal(cross[s], own[s])
    X = np.array([g.aggregate * f.M @ (gamma / f.tilde_b) for g, f in zip(economy.goods, infl)])
    cells = np.argwhere(X <= INTERIOR_FLOOR)
    if cells.size:
        raise NonInteriorLindahl("Lindahl allocation is not interior", cells.tolist())
    return LindahlSolution(price, own, cross, X, gamma, utilities(economy, X))


@dataclass(frozen=True)
class LindahlResiduals:
    compatibility: float
    market_clearing: float
    budget: float
    kkt: float


def lindahl_residuals(economy: MultiplexEconomy, sol: LindahlSolution) -> LindahlResiduals:
    """Compatibility, clearing, extended-budget and planner-KKT residuals."""
    n = economy.n
    off = ~np.eye(n, dtype=bool)
    comp = 0.0
    for s in range(economy.n_goods):
        paid_by_others = (sol.cross_prices[s] * off).sum(axis=0)
        comp = max(comp, float(np.abs(sol.own_prices[s] - (sol.goods_prices[s] - paid_by_others)).max()))
    clearing = float(np.abs(sol.allocation.sum(axis=1) - economy.aggregates).max())
    spend = np.einsum("sij,sj->i", sol.cross_prices, sol.allocation)
    income = sol.goods_prices @ economy.endowments
    budget = float(np.abs(spend - income).max())
    kkt = planner_kkt_residual(economy, sol.weights, sol.allocation)
    return LindahlResiduals(comp, clearing, budget, kkt)


@dataclass(frozen=True)
class LindahlComparison:
    delta_u: np.ndarray
    lindahl: LindahlSolution
    competitive: EquilibriumSolution
    pareto_gap: float
    efficient: bool
    status: str

    def to_dict(self) -> dict:
        return {"delta_u": self.delta_u, "pareto_gap": self.pareto_gap, "efficient": self.efficient,
                "status": self.status, "lindahl": self.lindahl.to_dict(),
                "competitive_utilities": self.competitive.utilities}


def _status(d: np.ndarray, tol: float = 1e-12) -> str:
    if np.all(np.abs(d) <= tol):
        return "equal"
    if np.all(d >= -tol):
        return "lindahl_dominates"
    if np.all(d <= tol):
        return "competitive_dominates"
    return "mixed"


def compare_lindahl(economy: MultiplexEconomy) -> LindahlComparison:
    """Utility differences ``u^L - u^*`` and the Pareto dominance status.

    The Lindahl allocation is checked against the planner solution for the
    weights ``sum_s alpha^s eta^s``.
    """
    lin = solve_lindahl(economy)
    eq = solve_equilibrium(economy)
    planner = pareto_allocation(economy, lin.weights)
    gap = float(np.abs(planner.allocation - lin.allocation).max())
    d = lin.utilities - eq.utilities
    return LindahlComparison(d, lin, eq, gap, bool(gap <= EQUAL_TOL), _status(d))
