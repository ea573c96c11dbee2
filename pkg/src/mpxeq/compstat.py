"""First-order comparative statics of the interior equilibrium.

All four perturbation kinds share one linearization: along a direction the
economy's primitives move (endowments, preference weights or the spillover
matrices ``phi^s G^s``), ``Mbar mu = 0`` is differentiated and the derivative
``mu_dot`` is taken as the particular solution ``H^-1 r``.  Every reported
quantity is homogeneous of degree zero in ``mu`` and so does not depend on
this selection.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .centrality import influence_centrality, layer_influences
from .economy import MultiplexEconomy
from .equilibrium import solve_equilibrium, system_matrices
from .errors import DimensionMismatch, DomainError, RankDeficient, ValidationError

KINDS = ("endowment", "preference", "network", "phi")
SUM_TOL = 1e-12
SIGN_TOL = 1e-12


@dataclass(frozen=True)
class Perturbation:
    """Direction of change of the primitives.

    ``payload`` shape by kind: endowment ``(goods, n)``; preference
    ``(goods,)`` summing to zero; network ``(goods, n, n)`` with zero
    diagonals; phi ``(goods,)``.
    """

    kind: str
    payload: np.ndarray

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"kind must be one of {KINDS}, got {self.kind!r}", "kind")
        p = np.array(self.payload, dtype=float)
        p.setflags(write=False)
        object.__setattr__(self, "payload", p)
        if not np.all(np.isfinite(p)):
            raise ValidationError("perturbation entries must be finite", "payload")
        if self.kind == "preference" and abs(p.sum()) > SUM_TOL:
            raise ValidationError("preference perturbation must sum to zero", "payload")
        if self.kind == "network" and p.ndim == 3:
            idx = np.arange(p.shape[1])
            if np.any(p[:, idx, idx] != 0):
                raise ValidationError("network perturbation must have zero diagonals", "payload")

    def check(self, economy: MultiplexEconomy) -> None:
        k, n = economy.n_goods, economy.n
        shape = {"endowment": (k, n), "preference": (k,), "network": (k, n, n), "phi": (k,)}[self.kind]
        if self.payload.shape != shape:
            raise DimensionMismatch(f"{self.kind} payload must have shape {shape}, got {self.payload.shape}",
                                    "payload")

    @classmethod
    def transfer(cls, economy: MultiplexEconomy, source, target, good) -> "Perturbation":
        """Unit transfer of ``good`` from consumer ``source`` to ``target``."""
        i, j, t = economy.consumer_index(source), economy.consumer_index(target), economy.good_index(good)
        tau = np.zeros((economy.n_goods, economy.n))
        tau[t, i] -= 1.0
        tau[t, j] += 1.0
        return cls("endowment", tau)

    def apply(self, economy: MultiplexEconomy, step: float) -> MultiplexEconomy:
        """Economy with primitives moved by ``step`` along this direction."""
        self.check(economy)
        d = step * self.payload
        if self.kind == "endowment":
            return economy.with_endowments(economy.endowments + d)
        if self.kind == "preference":
            return economy.with_alphas(economy.alphas + d)
        if self.kind == "phi":
            return economy.with_phis(economy.phis + d)
        # network: phi (G + step Gamma)
        return economy.with_networks([g.network + d[s] for s, g in enumerate(economy.goods)])


@dataclass(frozen=True)
class PerturbationResult:
    """Derivatives of equilibrium objects along a perturbation.

    Attributes:
        mu_dot: derivative of the effective endowment (``H^-1`` selection).
        price: ``d ln(p^s / p^1)``; ``nan`` for goods with zero weight.
        utility: ``d u_i``.
        consumption: ``d ln x_i^s``.
        decomposition: named additive components of ``price`` and ``utility``.
    """

    kind: str
    mu_dot: np.ndarray
    price: np.ndarray
    utility: np.ndarray
    consumption: np.ndarray
    decomposition: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "mu_dot": self.mu_dot, "price": self.price, "utility": self.utility,
                "consumption": self.consumption, "decomposition": self.decomposition}


def _primitive_rates(economy, pert, infl):
    """Derivatives of alpha, aggregate endowments, shares and M along ``pert``."""
    k, n = economy.n_goods, economy.n
    d_alpha = np.zeros(k)
    d_wbar = np.zeros(k)
    d_eta = np.zeros((k, n))
    d_M = np.zeros((k, n, n))
    P = pert.payload
    if pert.kind == "endowment":
        d_wbar = P.sum(axis=1)
        d_eta = (P - economy.shares * d_wbar[:, None]) / economy.aggregates[:, None]
    elif pert.kind == "preference":
        d_alpha = P.copy()
    elif pert.kind == "network":
        for s, (g, f) in enumerate(zip(economy.goods, infl)):
            d_M[s] = -g.phi * f.M @ P[s] @ f.M
    else:
        for s, (g, f) in enumerate(zip(economy.goods, infl)):
            d_M[s] = -P[s] * f.M @ g.network @ f.M
    return d_alpha, d_wbar, d_eta, d_M


def perturb(economy: MultiplexEconomy, pert: Perturbation, mu_dot_shift: float = 0.0) -> PerturbationResult:
    """Analytic first-order response of prices, utilities and consumptions.

    ``mu_dot_shift`` adds that multiple of ``mu`` to the particular
    solution; outputs are invariant to it (exposed for testing).

    Raises:
        RankDeficient: the equilibrium is not locally unique.
        DimensionMismatch: payload shape does not fit the economy.
    """
    pert.check(economy)
    eq = solve_equilibrium(economy)
    infl = layer_influences(economy)
    sys_ = system_matrices(economy, infl)
    if not sys_.unique:
        raise RankDeficient(f"rank of Mbar is {sys_.rank}, expected {economy.n - 1}")
    mu = eq.mu
    a = economy.alphas
    wbar = economy.aggregates
    eta = economy.shares
    d_alpha, d_wbar, d_eta, d_M = _primitive_rates(economy, pert, infl)
    ones = np.ones(economy.n)

    Mmu = np.array([f.M @ mu for f in infl])
    b = Mmu.sum(axis=1)
    r = np.zeros(economy.n)
    for s, f in enumerate(infl):
        dMmu = d_M[s] @ mu
        r -= d_alpha[s] * (Mmu[s] - eta[s] * b[s])
        r -= a[s] * (dMmu - eta[s] * dMmu.sum())
        r += a[s] * d_eta[s] * b[s]
    mu_dot = np.linalg.solve(sys_.H, r) + mu_dot_shift * mu

    d_Mmu = np.array([f.M @ mu_dot + d_M[s] @ mu for s, f in enumerate(infl)])
    db = d_Mmu.sum(axis=1)
    g_b = db / b
    g_w = d_wbar / wbar
    with np.errstate(divide="ignore", invalid="ignore"):
        g_a = np.where(a > 0, d_alpha / np.where(a > 0, a, 1.0), np.nan)
    g_p = g_a + g_b - g_w
    price = g_p - g_p[0]
    consumption = g_w[:, None] + d_Mmu / Mmu - g_b[:, None]

    income = mu_dot / mu
    price_part = -float(a @ g_b) * ones
    aggregate = float(a @ g_w) * ones
    logq = np.log(eq.effective)
    pref = d_alpha @ logq
    utility = income + price_part + aggregate + pref

    decomposition = {
        "price_redistribution": g_b - g_b[0],
        "price_aggregate": -(g_w - g_w[0]),
        "price_preference": g_a - g_a[0],
        "utility_income": income,
        "utility_price": price_part,
        "utility_aggregate": aggregate,
        "utility_preference": pref,
    }
    return PerturbationResult(pert.kind, mu_dot, price, utility, consumption, decomposition)


@dataclass(frozen=True)
class TransferSign:
    sign: int
    margin: float
    centrality: np.ndarray

    def to_dict(self) -> dict:
        return {"sign": self.sign, "margin": self.margin, "centrality": self.centrality}


def transfer_price_sign(economy: MultiplexEconomy, source, target, on_good, watch_good) -> TransferSign:
    """Sign of the change in ``p^s / p^1`` after a transfer from ``source`` to ``target``.

    Equal to ``sign(c_j^s - c_i^s)`` for the generalized influence centrality
    ``c^s``; it does not depend on which good is transferred.
    """
    i, j = economy.consumer_index(source), economy.consumer_index(target)
    economy.good_index(on_good)
    s = economy.good_index(watch_good)
    infl = layer_influences(economy)
    sys_ = system_matrices(economy, infl)
    if not sys_.unique:
        raise RankDeficient(f"rank of Mbar is {sys_.rank}, expected {economy.n - 1}")
    if i == j:
        raise DomainError("source and target must differ")
    c = influence_centrality(economy, sys_.H, s, infl)
    diff = float(c[j] - c[i])
    scale = float(np.abs(c).max())
    sign = 0 if abs(diff) <= SIGN_TOL * scale else int(np.sign(diff))
    return TransferSign(sign, abs(diff), c)


_PAYLOAD_KEY = {"endowment": "tau", "preference": "tau", "network": "gamma", "phi": "dphi"}


def perturbation_from_dict(economy: MultiplexEconomy, doc) -> Perturbation:
    """Build a :class:`Perturbation` from its JSON form.

    The payload maps good names to values; goods left out do not move::

        {"kind": "endowment", "tau": {"y": [-1, 1]}}
        {"kind": "preference", "tau": {"x": 0.1, "y": -0.1}}
        {"kind": "network", "gamma": {"y": [[0, 1], [0, 0]]}}
        {"kind": "phi", "dphi": {"y": 1.0}}
    """
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValidationError("perturbation must be an object with a 'kind'", "$")
    kind = doc["kind"]
    if kind not in KINDS:
        raise ValidationError(f"kind must be one of {KINDS}, got {kind!r}", "kind")
    key = _PAYLOAD_KEY[kind]
    unknown = set(doc) - {"kind", key}
    if unknown:
        raise ValidationError(f"unknown keys {sorted(unknown)}", "$")
    entries = doc.get(key, {})
    if not isinstance(entries, dict):
        raise ValidationError(f"'{key}' must map good names to values", key)
    k, n = economy.n_goods, economy.n
    shape = {"endowment": (k, n), "preference": (k,), "network": (k, n, n), "phi": (k,)}[kind]
    payload = np.zeros(shape)
    for name, value in entries.items():
        s = economy.good_index(name)
        try:
            v = np.asarray(value, dtype=float)
        except (TypeError, ValueError):
            raise ValidationError("values must be numeric", f"{key}.{name}") from None
        if v.shape != shape[1:]:
            raise DimensionMismatch(f"expected shape {shape[1:]}, got {v.shape}", f"{key}.{name}")
        payload[s] = v
    return Perturbation(kind, payload)


def signs(values: np.ndarray, rel_tol: float = 1e-9) -> list[str]:
    """``"+"``, ``"-"`` or ``"0"`` per entry, treating tiny values as zero."""
    v = np.asarray(values, dtype=float)
    finite = np.abs(v[np.isfinite(v)])
    scale = finite.max() if finite.size else 0.0
    out = []
    for x in v:
        if not np.isfinite(x):
            out.append("nan")
        elif abs(x) <= rel_tol * scale or x == 0:
            out.append("0")
        else:
            out.append("+" if x > 0 else "-")
    return out
