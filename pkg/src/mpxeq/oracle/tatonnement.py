"""Price-adjustment equilibrium solver used as an independent check.

Each outer step lets consumers play damped best responses to one another
at fixed prices (their spillovers make demands interdependent), then moves
prices in proportion to relative excess demand.  Best responses may sit at
the zero bound, so this solver also reaches corner equilibria.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..economy import MultiplexEconomy
from ..equilibrium import EquilibriumSolution, effective_consumption, utilities
from ..errors import DomainError, NoConvergence, ValidationError


@dataclass(frozen=True)
class TatonnementConfig:
    kappa: float = 0.1
    damping: float = 0.5
    max_iter: int = 10000
    tol: float = 1e-10
    price_floor: float = 1e-9
    inner_iter: int = 200

    def __post_init__(self):
        if not 0 < self.kappa <= 1:
            raise ValidationError("kappa must lie in (0, 1]", "kappa")
        if not 0 < self.damping <= 1:
            raise ValidationError("damping must lie in (0, 1]", "damping")
        if self.tol <= 0 or self.price_floor <= 0 or self.max_iter < 1 or self.inner_iter < 1:
            raise ValidationError("tolerances and iteration caps must be positive", "config")


def best_response(prices: np.ndarray, alphas: np.ndarray, shift: np.ndarray, income: np.ndarray):
    """Cobb-Douglas demand with additive shifts, one row per consumer.

    Consumer ``i`` maximizes ``sum_s alpha^s ln(x^s + shift[i, s])`` subject
    to ``prices . x = income[i]`` and ``x >= 0``.  The solution is
    ``x^s = max(0, alpha^s m / p^s - shift^s)``, with ``m`` chosen so the
    budget binds; spending is piecewise linear in ``m`` with breakpoints
    ``p^s shift^s / alpha^s``.

    Returns:
        ``(x, m)`` with ``x`` of shape ``(n, goods)``.
    """
    cost = prices[None, :] * shift                       # p^s e^s
    kinks = cost / alphas[None, :]
    order = np.argsort(kinks, axis=1)
    k_sorted = np.take_along_axis(kinks, order, axis=1)
    a_sorted = alphas[order]
    c_sorted = np.take_along_axis(cost, order, axis=1)
    a_cum = np.cumsum(a_sorted, axis=1)
    c_cum = np.cumsum(c_sorted, axis=1)
    # with the first j+1 goods active, spending a_cum m - c_cum equals income
    m_cand = (income[:, None] + c_cum) / a_cum
    upper = np.concatenate([k_sorted[:, 1:], np.full((len(income), 1), np.inf)], axis=1)
    ok = (m_cand >= k_sorted) & (m_cand <= upper)
    j = np.argmax(ok, axis=1)
    m = m_cand[np.arange(len(income)), j]
    # an unaffordable set of negative shifts leaves no valid segment; keep m tiny
    m = np.where(ok.any(axis=1), m, 1e-300)
    x = np.maximum(0.0, alphas[None, :] * m[:, None] / prices[None, :] - shift)
    return x, m


def tatonnement_solve(economy: MultiplexEconomy, cfg: TatonnementConfig | None = None) -> EquilibriumSolution:
    """Equilibrium by tatonnement, normalized so the price of good 1 is one.

    Raises:
        DomainError: a good has zero preference weight (its price would
            collapse to the floor).
        NoConvergence: excess demand not below ``cfg.tol`` after ``cfg.max_iter`` steps.
    """
    cfg = cfg or TatonnementConfig()
    a = economy.alphas
    if np.any(a <= 0):
        raise DomainError("tatonnement needs strictly positive preference weights", "alpha")
    W = economy.endowments                        # goods x n
    wbar = economy.aggregates
    A = np.array([g.spillover for g in economy.goods])
    p = np.ones(economy.n_goods)
    X = W.copy()
    excess = np.inf
    for it in range(cfg.max_iter):
        income = p @ W
        # solve the inner game only as accurately as the current price error warrants
        inner_tol = 0.1 * max(cfg.tol, 1e-3 * excess) if np.isfinite(excess) else 1e-3
        for _ in range(cfg.inner_iter):
            shift = np.einsum("sij,sj->is", A, X)
            br, m = best_response(p, a, shift, income)
            new = (1 - cfg.damping) * X + cfg.damping * br.T
            change = np.abs(new - X).max()
            X = new
            if change <= inner_tol:
                break
        z = (X.sum(axis=1) - wbar) / wbar
        excess = float(np.abs(z).max())
        if excess <= cfg.tol and change <= cfg.tol:
            break
        p = np.maximum(cfg.price_floor, p * (1 + cfg.kappa * z))
        p = p / p[0]
    else:
        raise NoConvergence(f"tatonnement did not converge: max relative excess demand {excess:.3g}",
                            {"excess": excess, "iterations": cfg.max_iter})
    shift = np.einsum("sij,sj->is", A, X)
    _, m = best_response(p, a, shift, p @ W)
    Q = effective_consumption(economy, X)
    return EquilibriumSolution(m, p, X, Q, utilities(economy, X), 1.0 / m, bool(X.min() > 0), True)
