"""Pareto frontier, efficiency diagnosis and efficiency measures."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import linprog
from scipy.special import rel_entr

from .centrality import ParallelVerdict, check_parallel, layer_influences
from .economy import MultiplexEconomy
from .equilibrium import EquilibriumSolution, effective_consumption, solve_equilibrium, utilities
from .errors import (ConstructionInfeasible, DimensionMismatch, DomainError, LineSearchFailed,
                     NonInteriorPareto, ParallelNoImprovement, WitnessWarning)

INTERIOR_FLOOR = 1e-12
STEP_FLOOR = 1e-12


def _simplex(theta, n: int) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (n,):
        raise DimensionMismatch(f"weights must have length {n}")
    if not np.all(theta > 0) or not np.all(np.isfinite(theta)):
        raise DomainError("weights must be strictly positive")
    return theta / theta.sum()


@dataclass(frozen=True)
class ParetoSolution:
    """Planner optimum for weights ``theta`` (normalized to the simplex)."""

    theta: np.ndarray
    allocation: np.ndarray
    multipliers: np.ndarray
    utilities: np.ndarray
    kkt_residual: float

    def to_dict(self) -> dict:
        return {"theta": self.theta, "allocation": self.allocation, "multipliers": self.multipliers,
                "utilities": self.utilities, "kkt_residual": self.kkt_residual}


def planner_kkt_residual(economy: MultiplexEconomy, theta, X) -> float:
    """Relative residual of the planner first-order conditions.

    At an interior optimum ``(I + phi G^T)(theta * alpha / q^s)`` is the
    constant vector ``beta^s``; the residual is the largest deviation from
    ``alpha^s (1^T theta) / omega_bar^s`` relative to that value.
    """
    theta = np.asarray(theta, dtype=float)
    Q = effective_consumption(economy, X)
    worst = 0.0
    for s, g in enumerate(economy.goods):
        if g.alpha == 0:
            continue
        w = theta * g.alpha / Q[s]
        w = w + g.spillover.T @ w
        beta = g.alpha * theta.sum() / g.aggregate
        worst = max(worst, float(np.abs(w - beta).max() / beta))
    return worst


def pareto_allocation(economy: MultiplexEconomy, theta, influences=None) -> ParetoSolution:
    """Closed-form interior planner solution for Pareto weights ``theta``.

    Raises:
        NonInteriorPareto: the formula produces a non-positive consumption.
    """
    th = _simplex(theta, economy.n)
    infl = influences if influences is not None else layer_influences(economy)
    X = np.array([g.aggregate * f.M @ (th / f.tilde_b) for g, f in zip(economy.goods, infl)])
    cells = np.argwhere(X <= INTERIOR_FLOOR)
    if cells.size:
        raise NonInteriorPareto("planner allocation is not interior", cells.tolist())
    beta = economy.alphas / economy.aggregates
    return ParetoSolution(th, X, beta, utilities(economy, X), planner_kkt_residual(economy, th, X))


def layer_shares(mu: np.ndarray, tilde_b: np.ndarray) -> np.ndarray:
    """``rho^s = (mu * tilde_b^s) / (mu . tilde_b^s)`` stacked by good."""
    w = mu[None, :] * tilde_b
    return w / w.sum(axis=1, keepdims=True)


class EfficiencyVerdict(NamedTuple):
    parallel: bool
    theta: np.ndarray | None


def efficiency_verdict(economy: MultiplexEconomy, eq: EquilibriumSolution | None = None,
                       verdict: ParallelVerdict | None = None) -> EfficiencyVerdict:
    """Parallel flag and, when parallel, the Pareto weight supporting the equilibrium."""
    eq = eq if eq is not None else solve_equilibrium(economy)
    verdict = verdict if verdict is not None else check_parallel(economy)
    if not verdict.parallel:
        return EfficiencyVerdict(False, None)
    s = int(np.argmax(economy.alphas))
    w = verdict.tilde_b[s] * eq.mu
    return EfficiencyVerdict(True, w / w.sum())


def kl_divergence(p, q) -> float:
    return float(rel_entr(np.asarray(p, float), np.asarray(q, float)).sum())


def hellinger(p, q) -> float:
    return float(np.linalg.norm(np.sqrt(p) - np.sqrt(q)))


def efficiency_loss(economy: MultiplexEconomy, theta, rho: np.ndarray | None = None) -> float:
    """``L(theta) = sum_s alpha^s KL(theta || rho^s)`` with ``theta`` normalized."""
    th = np.asarray(theta, dtype=float)
    if th.shape != (economy.n,) or np.any(th < 0) or th.sum() <= 0:
        raise DomainError("weights must be a nonnegative, nonzero vector of length n")
    th = th / th.sum()
    if rho is None:
        rho = equilibrium_shares(economy)
    return float(sum(a * kl_divergence(th, r) for a, r in zip(economy.alphas, rho)))


def equilibrium_shares(economy: MultiplexEconomy, eq: EquilibriumSolution | None = None) -> np.ndarray:
    eq = eq if eq is not None else solve_equilibrium(economy)
    tb = np.array([f.tilde_b for f in layer_influences(economy)])
    return layer_shares(eq.mu, tb)


@dataclass(frozen=True)
class CRUResult:
    """Coefficient of resource utilization and its certificate.

    ``witness`` is the allocation that reproduces equilibrium utilities using
    the fraction ``cru`` of aggregate endowments; ``witness_feasible`` is
    whether it is nonnegative.
    """

    cru: float
    theta: np.ndarray
    log_lower: float
    log_upper: float
    witness: np.ndarray
    witness_feasible: bool

    def to_dict(self) -> dict:
        return {"cru": self.cru, "theta": self.theta, "log_cru": float(np.log(self.cru)),
                "log_lower": self.log_lower, "log_upper": self.log_upper,
                "witness": self.witness, "witness_feasible": self.witness_feasible}


def cru_bounds(alphas, rho) -> tuple[float, float]:
    """Lower (worst pairwise KL) and upper (Hellinger) bounds on ``ln CRU``."""
    act = [s for s in range(len(rho)) if alphas[s] > 0]
    lower = -max((kl_divergence(rho[s], rho[t]) for s in act for t in act), default=0.0)
    upper = -0.5 * sum(alphas[s] * alphas[t] * hellinger(rho[s], rho[t]) ** 2 for s in act for t in act)
    return lower, upper


def resource_utilization(economy: MultiplexEconomy, eq: EquilibriumSolution | None = None,
                         strict: bool = False) -> CRUResult:
    """Closed-form CRU ``sum_i prod_s (rho_i^s)^alpha^s``.

    The attaining allocation is checked for nonnegativity.  When it fails a
    :class:`WitnessWarning` is issued (or :class:`ConstructionInfeasible`
    raised if ``strict``) because the closed form then relies on externalities
    being small.
    """
    eq = eq if eq is not None else solve_equilibrium(economy)
    infl = layer_influences(economy)
    tb = np.array([f.tilde_b for f in infl])
    rho = layer_shares(eq.mu, tb)
    a = economy.alphas
    geo = np.exp(a @ np.log(rho))  # rho is strictly positive at an interior equilibrium
    cru = float(geo.sum())
    lower, upper = cru_bounds(a, rho)
    witness = np.array([f.M @ (g.aggregate * geo / f.tilde_b) for g, f in zip(economy.goods, infl)])
    feasible = bool(witness.min() >= -INTERIOR_FLOOR)
    if not feasible:
        cells = np.argwhere(witness < -INTERIOR_FLOOR).tolist()
        if strict:
            raise ConstructionInfeasible("CRU witness allocation has negative entries", cells)
        warnings.warn(f"CRU witness allocation negative at {cells}", WitnessWarning, stacklevel=2)
    return CRUResult(cru, geo / cru, lower, upper, witness, feasible)


def no_improvement_weight(economy: MultiplexEconomy, eq: EquilibriumSolution | None = None) -> np.ndarray:
    """``varpi = sum_s alpha^s rho^s``: no redistribution raises ``varpi . u``."""
    rho = equilibrium_shares(economy, eq)
    return economy.alphas @ rho


@dataclass(frozen=True)
class Improvement:
    allocation: np.ndarray
    step: float
    pair: tuple
    directions: np.ndarray
    utilities: np.ndarray
    margin: float
    lp_slack: float

    def to_dict(self) -> dict:
        return {"allocation": self.allocation, "step": self.step, "pair": list(self.pair),
                "directions": self.directions, "utilities": self.utilities, "margin": self.margin,
                "lp_slack": self.lp_slack}


def construct_improvement(economy: MultiplexEconomy, eq: EquilibriumSolution | None = None,
                          tol: float = 1e-10) -> Improvement:
    """Explicit Pareto-improving reallocation of the equilibrium.

    Picks the pair of goods whose centralities are least parallel, finds
    directions ``tau_hat`` in effective consumption that raise every
    consumer's utility to first order while keeping aggregate consumption
    fixed, and line-searches along ``tau = M tau_hat``.

    Raises:
        ParallelNoImprovement: the centralities are parallel.
        LineSearchFailed: no step down to ``1e-12`` yields a strict improvement.
    """
    eq = eq if eq is not None else solve_equilibrium(economy)
    infl = layer_influences(economy)
    verdict = check_parallel(economy, infl, tol)
    tb = verdict.tilde_b
    pair = verdict.worst_pair
    if verdict.parallel:
        raise ParallelNoImprovement("centralities are parallel; the equilibrium is efficient")
    s, t = pair
    n = economy.n
    a = economy.alphas
    Q = eq.effective
    B = 10.0 * float(Q.max())
    # variables: tau_hat^s (n), tau_hat^t (n), z
    c = np.zeros(2 * n + 1)
    c[-1] = -1.0
    A_ub = np.zeros((n, 2 * n + 1))
    A_ub[np.arange(n), np.arange(n)] = -a[s] / Q[s]
    A_ub[np.arange(n), n + np.arange(n)] = -a[t] / Q[t]
    A_ub[:, -1] = 1.0
    A_eq = np.zeros((2, 2 * n + 1))
    A_eq[0, :n] = tb[s]
    A_eq[1, n:2 * n] = tb[t]
    bounds = [(-B, B)] * (2 * n) + [(None, B)]
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(n), A_eq=A_eq, b_eq=np.zeros(2), bounds=bounds, method="highs")
    if res.status != 0 or -res.fun <= 0:
        raise LineSearchFailed(f"no improving direction found (status {res.status})", list(pair))
    slack = float(-res.fun)
    tau = np.zeros((economy.n_goods, n))
    tau[s] = infl[s].M @ res.x[:n]
    tau[t] = infl[t].M @ res.x[n:2 * n]
    step = 1.0
    while step >= STEP_FLOOR:
        X = eq.allocation + step * tau
        if X.min() >= 0:
            u = utilities(economy, X)
            gain = u - eq.utilities
            if np.all(gain > 0):
                return Improvement(X, step, pair, tau, u, float(gain.min()), slack)
        step /= 2
    raise LineSearchFailed("step length underflow in improvement line search", list(pair))
