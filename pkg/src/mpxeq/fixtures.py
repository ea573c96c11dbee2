"""Named example economies used by tests, the CLI and the documentation."""

from __future__ import annotations

import warnings

import numpy as np

from .economy import GoodLayer, MultiplexEconomy, build_comparison_economy
from .errors import DegenerateNetworkWarning

X_ENDOWMENTS = (1.44, 0.56)
Y_ENDOWMENTS = (0.12, 1.88)
DYAD = np.array([[0.0, 1.0], [0.0, 0.0]])
MUTUAL = np.array([[0.0, 1.0], [1.0, 0.0]])


def _pair(alpha, phi_x, G_x, phi_y, G_y, x_endow, y_endow) -> MultiplexEconomy:
    return MultiplexEconomy(("1", "2"), (
        GoodLayer("x", alpha, phi_x, G_x, x_endow),
        GoodLayer("y", 1.0 - alpha, phi_y, G_y, y_endow),
    ))


def benchmark(alpha: float = 0.5, x_endow=X_ENDOWMENTS, y_endow=Y_ENDOWMENTS) -> MultiplexEconomy:
    """Two consumers, two goods, no spillovers."""
    Z = np.zeros((2, 2))
    return _pair(alpha, 0.0, Z, 0.0, Z, x_endow, y_endow)


def example_one(phi: float = 0.7, alpha: float = 0.5, x_endow=X_ENDOWMENTS, y_endow=Y_ENDOWMENTS):
    """Consumer 1 benefits from consumer 2's consumption of y; x is private."""
    return _pair(alpha, 0.0, np.zeros((2, 2)), phi, DYAD, x_endow, y_endow)


def example_two(phi: float = 0.7, alpha: float = 0.5, x_endow=X_ENDOWMENTS, y_endow=Y_ENDOWMENTS):
    """Mutual spillovers in y; x is private."""
    return _pair(alpha, 0.0, np.zeros((2, 2)), phi, MUTUAL, x_endow, y_endow)


def example_three(phi: float = 0.7, alpha: float = 0.5, x_endow=X_ENDOWMENTS, y_endow=Y_ENDOWMENTS):
    """The same one-way spillover in both goods."""
    return _pair(alpha, phi, DYAD, phi, DYAD, x_endow, y_endow)


EDGEWORTH = {"I": example_one, "II": example_two, "III": example_three}


def star(n: int = 4, center: int = 0, weights=None) -> np.ndarray:
    """Undirected star; ``weights[k]`` is the weight of the k-th leaf edge."""
    leaves = [i for i in range(n) if i != center]
    w = np.ones(len(leaves)) if weights is None else np.asarray(weights, dtype=float)
    G = np.zeros((n, n))
    for k, j in enumerate(leaves):
        G[center, j] = G[j, center] = w[k]
    return G


def path(order) -> np.ndarray:
    """Undirected unit-weight path visiting consumers in ``order``."""
    n = len(order)
    G = np.zeros((n, n))
    for a, b in zip(order[:-1], order[1:]):
        G[a, b] = G[b, a] = 1.0
    return G


def star_complement(n: int = 4, center: int = 0) -> np.ndarray:
    """Complement of the star: complete graph on the leaves."""
    G = np.ones((n, n)) - np.eye(n) - star(n, center)
    return G


def example_four(beta: float, m: int = 2, phi: float = 0.2) -> MultiplexEconomy:
    """Star layer versus a star/complement mixture, optional private third good."""
    n = 4
    names = tuple(str(i + 1) for i in range(n))
    S = star(n)
    layers = [
        GoodLayer("1", 1.0 / m, phi, S, np.full(n, 0.25)),
        GoodLayer("2", 1.0 / m, phi, (1 - beta) * S + beta * star_complement(n), np.full(n, 0.25)),
    ]
    if m == 3:
        layers.append(GoodLayer("3", 1.0 / m, phi, np.zeros((n, n)), np.full(n, 0.25)))
    elif m != 2:
        raise ValueError("m must be 2 or 3")
    return MultiplexEconomy(names, tuple(layers))


def example_five(sigma: float) -> MultiplexEconomy:
    """Private good, weighted star (edge 1-2 weighs 1.01) and the line 1-2-3-4."""
    n = 4
    names = tuple(str(i + 1) for i in range(n))
    w = np.full(n, 0.25)
    return MultiplexEconomy(names, (
        GoodLayer("1", 1.0 / 3.0, 0.0, np.zeros((n, n)), w),
        GoodLayer("2", sigma, -0.04, star(n, 0, [1.01, 1.0, 1.0]), w),
        GoodLayer("3", 2.0 / 3.0 - sigma, -0.04, path([0, 1, 2, 3]), w),
    ))


def line_example(phi1: float = 0.2, phi2: float = -0.25, alpha: float = 0.5, endowments=None) -> MultiplexEconomy:
    """Two paths on four consumers whose centralities are parallel when (1-phi1)(1-phi2) = 1."""
    n = 4
    w = np.full(n, 0.25) if endowments is None else np.asarray(endowments, dtype=float)
    return MultiplexEconomy(tuple(str(i + 1) for i in range(n)), (
        GoodLayer("1", alpha, phi1, path([1, 0, 3, 2]), w),
        GoodLayer("2", 1.0 - alpha, phi2, path([0, 1, 2, 3]), w),
    ))


def compare_with_first(n: int = 4, intensity: float = 0.1, sigma: float = 0.5, shares=None,
                       mode: str = "linear") -> MultiplexEconomy:
    """Everybody compares with consumer 1; both goods share the same endowment shares."""
    eta = np.full(n, 1.0 / n) if shares is None else np.asarray(shares, dtype=float)
    neighbors = [set()] + [{0} for _ in range(1, n)]
    private = GoodLayer("private", sigma, 0.0, np.zeros((n, n)), eta)
    with warnings.catch_warnings():
        # consumer 1 compares with nobody by construction
        warnings.simplefilter("ignore", DegenerateNetworkWarning)
        return build_comparison_economy(neighbors, intensity, mode, private, eta)
