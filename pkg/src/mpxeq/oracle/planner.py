"""Numeric planner and a generic simplex minimizer for the CRU objective."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from ..economy import MultiplexEconomy
from ..equilibrium import utilities
from ..errors import DomainError, NoConvergence


def project_simplex(v: np.ndarray, total: float) -> np.ndarray:
    """Euclidean projection of ``v`` onto ``{x >= 0, sum x = total}``."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - total
    k = np.arange(1, len(v) + 1)
    rho = np.nonzero(u - css / k > 0)[0][-1]
    return np.maximum(v - css[rho] / (rho + 1), 0.0)


@dataclass(frozen=True)
class PlannerResult:
    allocation: np.ndarray
    value: float
    iterations: int


def _layer_objective(A, w, x):
    q = x + A @ x
    if np.any(q <= 0):
        return -np.inf, None
    return float(w @ np.log(q)), w / q + A.T @ (w / q)


def _maximize_layer(A, w, total, x0, step, max_iter, tol):
    """Spectral projected gradient ascent of ``w . ln((I + A) x)`` on a scaled simplex."""
    x = x0.copy()
    f, g = _layer_objective(A, w, x)
    t = step
    for it in range(max_iter):
        pg = project_simplex(x + g, total) - x
        if np.abs(pg).max() <= tol:
            return x, it
        # backtrack along the projected arc until Armijo holds
        while True:
            cand = project_simplex(x + t * g, total)
            fc, gc = _layer_objective(A, w, cand)
            if fc >= f + 1e-4 * g @ (cand - x):
                break
            t *= 0.5
            if t < 1e-20:
                return x, it
        s_vec, y_vec = cand - x, gc - g
        x, f, g = cand, fc, gc
        sy = s_vec @ y_vec
        # Barzilai-Borwein step for a concave objective (sy < 0)
        t = float(np.clip((s_vec @ s_vec) / -sy, 1e-10, 1e10)) if sy < 0 else step
    raise NoConvergence("planner ascent hit the iteration cap", {"iterations": max_iter})


def numeric_planner(economy: MultiplexEconomy, theta, step: float = 1e-2, max_iter: int = 100_000,
                    tol: float = 1e-9) -> PlannerResult:
    """Maximize ``theta . u(X)`` over feasible allocations by projected gradient.

    The problem separates by good, so each layer is optimized on its own
    simplex ``{x >= 0, sum x = omega_bar}``, starting from the endowments.
    """
    th = np.asarray(theta, dtype=float)
    if th.shape != (economy.n,) or not np.all(th > 0):
        raise DomainError("weights must be a positive vector of length n")
    th = th / th.sum()
    X = np.empty((economy.n_goods, economy.n))
    total_it = 0
    for s, g in enumerate(economy.goods):
        if g.alpha == 0:
            X[s] = g.endowments
            continue
        x, it = _maximize_layer(g.spillover, g.alpha * th, g.aggregate, g.endowments.copy(), step, max_iter,
                                tol * g.aggregate)
        X[s] = x
        total_it += it
    return PlannerResult(X, float(th @ utilities(economy, X)), total_it)


@dataclass(frozen=True)
class SimplexMinimum:
    theta: np.ndarray
    value: float


def minimize_weighted_kl(alphas, rho, tol: float = 1e-15) -> SimplexMinimum:
    """Minimize ``sum_s alpha^s KL(theta || rho^s)`` over the simplex with SLSQP."""
    a = np.asarray(alphas, dtype=float)
    R = np.asarray(rho, dtype=float)
    logr = a @ np.log(R)
    n = R.shape[1]

    def f(t):
        t = np.maximum(t, 1e-300)
        return float(t @ np.log(t) - t @ logr)

    def jac(t):
        return np.log(np.maximum(t, 1e-300)) + 1.0 - logr

    with warnings.catch_warnings():
        # SLSQP may step slightly outside the bounds before clipping; harmless here
        warnings.simplefilter("ignore", RuntimeWarning)
        res = minimize(f, np.full(n, 1.0 / n), jac=jac, method="SLSQP", bounds=[(1e-12, 1.0)] * n,
                       constraints=[{"type": "eq", "fun": lambda t: t.sum() - 1.0, "jac": lambda t: np.ones(n)}],
                       options={"ftol": tol, "maxiter": 1000})
    if not res.success:
        raise NoConvergence(f"simplex minimizer failed: {res.message}")
    return SimplexMinimum(res.x, float(res.fun))
