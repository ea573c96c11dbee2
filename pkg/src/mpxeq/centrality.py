"""Layer influence matrices and Katz-Bonacich style centralities."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .economy import GoodLayer, MultiplexEconomy
from .errors import SingularH, SingularLayer

COND_LIMIT = 1e12
PARALLEL_TOL = 1e-10
IDENTICAL_TOL = 1e-12


@dataclass(frozen=True)
class LayerInfluence:
    """Leontief inverse of one layer.

    Attributes:
        good: index of the good (``-1`` when built from a bare layer).
        M: ``(I + phi G)^-1``.
        tilde_b: ``M.T @ 1``, the transposed unweighted centrality.
        spectral_ok: whether ``1 + lambda_min(phi G) > 0``.
    """

    good: int
    M: np.ndarray
    tilde_b: np.ndarray
    spectral_ok: bool

    def residual(self, layer: GoodLayer) -> float:
        A = np.eye(self.M.shape[0]) + layer.spillover
        return float(np.abs(A @ self.M - np.eye(self.M.shape[0])).max())


def _spectral_ok(A: np.ndarray) -> bool:
    if A.size == 0 or np.abs(A).sum(axis=1).max() < 1.0:
        return True
    lam = np.linalg.eigvals(A)
    return bool(1.0 + lam.real.min() > 0)


def leontief_inverse(layer: GoodLayer, good: int = -1) -> LayerInfluence:
    """Invert ``I + phi G`` by a dense solve.

    Raises:
        SingularLayer: if the matrix is numerically singular.
    """
    n = layer.n
    A = layer.spillover
    if layer.phi == 0.0 or not A.any():
        M = np.eye(n)
        return LayerInfluence(good, M, np.ones(n), True)
    B = np.eye(n) + A
    cond = np.linalg.cond(B)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularLayer(f"I + phi G is singular for good {layer.name!r} (cond={cond:.3g})", layer.name)
    M = np.linalg.solve(B, np.eye(n))
    return LayerInfluence(good, M, M.T @ np.ones(n), _spectral_ok(A))


def layer_influences(economy: MultiplexEconomy) -> list[LayerInfluence]:
    return [leontief_inverse(g, s) for s, g in enumerate(economy.goods)]


def katz_centralities(infl: LayerInfluence, z) -> tuple[np.ndarray, float, np.ndarray]:
    """Weighted centrality ``M z``, its aggregate ``z . tilde_b`` and ``tilde_b``."""
    z = np.asarray(z, dtype=float)
    b = infl.M @ z
    return b, float(z @ infl.tilde_b), infl.tilde_b


def cosine_dissimilarity(a: np.ndarray, b: np.ndarray) -> float:
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 and nb == 0.0:
        return 0.0
    if na == 0.0 or nb == 0.0:
        return 1.0
    return float(max(0.0, 1.0 - (a @ b) / (na * nb)))


@dataclass(frozen=True)
class ParallelVerdict:
    """Outcome of the centrality parallel test.

    ``worst_pair`` is ``None`` with a single good.
    """

    parallel: bool
    worst_pair: tuple | None
    dissimilarity: float
    regular: tuple
    identical: bool
    tilde_b: np.ndarray

    def to_dict(self) -> dict:
        return {
            "parallel": self.parallel,
            "worst_pair": list(self.worst_pair) if self.worst_pair is not None else None,
            "dissimilarity": self.dissimilarity,
            "regular": list(self.regular),
            "identical": self.identical,
            "tilde_b": self.tilde_b,
        }


def check_parallel(economy: MultiplexEconomy, influences: list[LayerInfluence] | None = None,
                   tol: float = PARALLEL_TOL) -> ParallelVerdict:
    infl = influences if influences is not None else layer_influences(economy)
    B = np.array([f.tilde_b for f in infl])
    ones = np.ones(economy.n)
    # goods without preference weight do not enter utilities and cannot break efficiency
    active = [s for s, g in enumerate(economy.goods) if g.alpha > 0]
    worst, worst_d = None, 0.0
    for s, t in itertools.combinations(active, 2):
        d = cosine_dissimilarity(B[s], B[t])
        if worst is None or d > worst_d:
            worst, worst_d = (s, t), d
    regular = tuple(cosine_dissimilarity(g.network.T @ ones, ones) <= tol
                    or not g.network.any() for g in economy.goods)
    A0 = economy.goods[0].spillover
    identical = all(np.abs(g.spillover - A0).max() <= IDENTICAL_TOL for g in economy.goods[1:])
    return ParallelVerdict(bool(worst_d <= tol), worst, worst_d, regular, bool(identical), B)


def influence_centrality(economy: MultiplexEconomy, H: np.ndarray, s, influences=None) -> np.ndarray:
    """Generalized influence centrality ``(H^T)^-1 tilde_b^s`` for good ``s``."""
    s = economy.good_index(s)
    infl = influences[s] if influences is not None else leontief_inverse(economy.goods[s], s)
    try:
        if np.linalg.cond(H) > COND_LIMIT:
            raise np.linalg.LinAlgError
        return np.linalg.solve(H.T, infl.tilde_b)
    except np.linalg.LinAlgError:
        raise SingularH("system matrix H is singular") from None
