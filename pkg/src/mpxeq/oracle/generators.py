"""Seeded random economies for property runs."""

from __future__ import annotations

import numpy as np

from ..compstat import Perturbation
from ..economy import GoodLayer, MultiplexEconomy

STRUCTURES = ("random", "regular", "identical")


def _derangement(rng: np.random.Generator, n: int) -> np.ndarray:
    while True:
        p = rng.permutation(n)
        if n == 1 or np.all(p != np.arange(n)):
            return p


def random_network(rng: np.random.Generator, n: int, density: float = 0.6) -> np.ndarray:
    G = rng.uniform(0.1, 1.0, (n, n)) * (rng.random((n, n)) < density)
    np.fill_diagonal(G, 0.0)
    return G


def regular_network(rng: np.random.Generator, n: int, terms: int = 2) -> np.ndarray:
    """Weighted sum of fixed-point-free permutation matrices (equal in- and out-degrees)."""
    G = np.zeros((n, n))
    if n == 1:
        return G
    for _ in range(terms):
        p = _derangement(rng, n)
        G[np.arange(n), p] += rng.uniform(0.2, 1.0)
    return G


def random_economy(rng: np.random.Generator, n: int | None = None, goods: int | None = None,
                   structure: str = "random", margin: float = 0.95) -> MultiplexEconomy:
    """Economy drawn so that the strong spillover bound holds.

    Spillover intensities have random signs and magnitude at most ``margin``
    times the bound.  ``structure`` selects unrelated networks, regular
    networks (centralities all parallel to one) or one network shared by all
    goods with a common ``phi``.
    """
    if structure not in STRUCTURES:
        raise ValueError(f"structure must be one of {STRUCTURES}")
    n = int(rng.integers(2, 7)) if n is None else n
    k = int(rng.integers(2, 5)) if goods is None else goods
    alphas = rng.dirichlet(np.ones(k) * 2.0)
    alphas[-1] = 1.0 - alphas[:-1].sum()
    W = rng.uniform(0.2, 2.0, (k, n))
    if structure == "random":
        nets = [random_network(rng, n) if rng.random() < 0.85 else np.zeros((n, n)) for _ in range(k)]
    elif structure == "regular":
        nets = [regular_network(rng, n) for _ in range(k)]
    else:
        G = random_network(rng, n)
        nets = [G.copy() for _ in range(k)]
    eta_min = (W / W.sum(axis=1, keepdims=True)).min()
    gbar = max(G.max() for G in nets)
    bound = eta_min / ((n + 1) * gbar) if gbar > 0 else 0.0
    phis = rng.uniform(-1.0, 1.0, k) * margin * bound
    if structure == "identical":
        phis[:] = phis[0]
    goods_ = tuple(GoodLayer(f"g{s + 1}", alphas[s], phis[s], nets[s], W[s]) for s in range(k))
    return MultiplexEconomy(tuple(f"c{i + 1}" for i in range(n)), goods_)


def random_perturbation(rng: np.random.Generator, economy: MultiplexEconomy, kind: str,
                        redistribution: bool = False):
    """Random direction of the given kind that keeps the economy valid for small steps.

    Network directions are supported on existing links so that ``G - h Gamma``
    stays nonnegative; ``redistribution`` makes endowment directions sum to
    zero within each good.
    """
    k, n = economy.n_goods, economy.n
    if kind == "endowment":
        tau = rng.normal(size=(k, n))
        if redistribution:
            tau -= tau.mean(axis=1, keepdims=True)
        return Perturbation(kind, tau)
    if kind == "preference":
        tau = rng.normal(size=k)
        tau -= tau.mean()
        tau[-1] = -tau[:-1].sum()
        return Perturbation(kind, tau)
    if kind == "network":
        gamma = np.array([rng.normal(size=(n, n)) * (g.network > 0) for g in economy.goods])
        return Perturbation(kind, gamma)
    if kind == "phi":
        return Perturbation(kind, rng.normal(size=k))
    raise ValueError(f"unknown kind {kind!r}")
