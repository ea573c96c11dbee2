"""Equilibrium loci and contract curves of the two-consumer Edgeworth examples.

Consumer 1 holds ``(x, y)`` and consumer 2 holds ``(2 - x, 2 - y)``.
Example I has spillovers in good y from consumer 2 to consumer 1 only,
Example II has mutual spillovers in good y, and Example III has the same
one-way spillover in both goods.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError

EXAMPLES = ("I", "II", "III")


@dataclass(frozen=True)
class CurveSample:
    example: str
    phi: float
    x: np.ndarray
    y_equilibrium: np.ndarray
    y_contract: np.ndarray

    def rows(self):
        return zip(self.x, self.y_equilibrium, self.y_contract)


def equilibrium_curve(example: str, phi: float, x):
    x = np.asarray(x, dtype=float)
    if example == "I":
        with np.errstate(divide="ignore", invalid="ignore"):
            y = 2 * ((1 + phi) * x - 2 * phi) / (2 * (1 - phi) + phi * x)
        return np.where(x <= 2 * phi / (1 + phi), 0.0, y)
    if example == "II":
        y = ((1 + phi) * x - 2 * phi) / (1 - phi)
        return np.where(x <= 2 * phi / (1 + phi), 0.0, np.where(x >= 2 / (1 + phi), 2.0, y))
    if example == "III":
        return x.copy()
    raise DomainError(f"example must be one of {EXAMPLES}, got {example!r}", "example")


def contract_curve(example: str, phi: float, x):
    x = np.asarray(x, dtype=float)
    if example == "I":
        return np.where(x <= 2 * phi, 0.0, (x - 2 * phi) / (1 - phi))
    return equilibrium_curve(example, phi, x)


def textbook_curves(example: str, phi: float, grid) -> CurveSample:
    """Evaluate both curves of an example on ``grid``.

    Raises:
        DomainError: ``phi`` outside ``(0, 1)``, grid points outside
            ``[0, 2]`` or an unknown example.
    """
    if example not in EXAMPLES:
        raise DomainError(f"example must be one of {EXAMPLES}, got {example!r}", "example")
    if not 0 < phi < 1:
        raise DomainError(f"phi must lie in (0, 1), got {phi}", "phi")
    x = np.asarray(grid, dtype=float).ravel()
    bad = np.flatnonzero((x < 0) | (x > 2) | ~np.isfinite(x))
    if bad.size:
        raise DomainError(f"grid point {x[bad[0]]} outside [0, 2]", int(bad[0]))
    return CurveSample(example, float(phi), x, equilibrium_curve(example, phi, x), contract_curve(example, phi, x))
