"""Economy data model, validation and the JSON interchange format.

An economy is a list of consumers and a list of goods; every good carries its
own preference weight, spillover parameter, spillover network and endowment
vector.  Consumers and goods are index-ordered as listed.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateNetwork, DegenerateNetworkWarning, ParseError, ValidationError

ALPHA_TOL = 1e-12
ENDOWMENT_FLOOR = 1e-12

_ECONOMY_KEYS = {"consumers", "goods"}
_GOOD_KEYS = {"name", "alpha", "phi", "network", "endowments"}


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GoodLayer:
    """One good together with the network that carries its spillovers.

    Attributes:
        name: identifier of the good.
        alpha: Cobb-Douglas preference weight.
        phi: spillover intensity; positive for local public goods, negative
            for social comparison.
        network: n x n nonnegative adjacency matrix with zero diagonal;
            ``network[i, j]`` is the weight consumer ``i`` puts on ``j``.
        endowments: strictly positive length-n endowment vector.
    """

    name: str
    alpha: float
    phi: float
    network: np.ndarray
    endowments: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "phi", float(self.phi))
        object.__setattr__(self, "network", _frozen(self.network))
        object.__setattr__(self, "endowments", _frozen(self.endowments))

    @property
    def n(self) -> int:
        return self.endowments.shape[0]

    @property
    def aggregate(self) -> float:
        return float(self.endowments.sum())

    @property
    def shares(self) -> np.ndarray:
        return self.endowments / self.endowments.sum()

    @property
    def gmax(self) -> float:
        return float(self.network.max()) if self.network.size else 0.0

    @property
    def spillover(self) -> np.ndarray:
        """phi * G."""
        return self.phi * self.network

    def __eq__(self, other):
        if not isinstance(other, GoodLayer):
            return NotImplemented
        return (
            self.name == other.name
            and self.alpha == other.alpha
            and self.phi == other.phi
            and np.array_equal(self.network, other.network)
            and np.array_equal(self.endowments, other.endowments)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class MultiplexEconomy:
    """Pure exchange economy with one spillover network per good."""

    consumer_names: tuple
    goods: tuple

    def __post_init__(self):
        object.__setattr__(self, "consumer_names", tuple(str(c) for c in self.consumer_names))
        object.__setattr__(self, "goods", tuple(self.goods))
        _check_structure(self)

    # sizes and stacked views -------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.consumer_names)

    @property
    def n_goods(self) -> int:
        return len(self.goods)

    @property
    def good_names(self) -> list[str]:
        return [g.name for g in self.goods]

    @property
    def alphas(self) -> np.ndarray:
        return np.array([g.alpha for g in self.goods])

    @property
    def phis(self) -> np.ndarray:
        return np.array([g.phi for g in self.goods])

    @property
    def endowments(self) -> np.ndarray:
        """s x n matrix of endowments (row s is good s)."""
        return np.array([g.endowments for g in self.goods])

    @property
    def aggregates(self) -> np.ndarray:
        return np.array([g.aggregate for g in self.goods])

    @property
    def shares(self) -> np.ndarray:
        """s x n matrix of endowment shares."""
        return np.array([g.shares for g in self.goods])

    @property
    def eta_min(self) -> float:
        return float(self.shares.min())

    @property
    def gmax(self) -> float:
        return max(g.gmax for g in self.goods)

    def good_index(self, good) -> int:
        if isinstance(good, (int, np.integer)):
            if not 0 <= good < self.n_goods:
                raise ValidationError(f"good index {good} out of range", "goods")
            return int(good)
        names = self.good_names
        if good not in names:
            raise ValidationError(f"unknown good {good!r}", "goods")
        return names.index(good)

    def consumer_index(self, consumer) -> int:
        if isinstance(consumer, (int, np.integer)):
            if not 0 <= consumer < self.n:
                raise ValidationError(f"consumer index {consumer} out of range", "consumers")
            return int(consumer)
        if consumer not in self.consumer_names:
            raise ValidationError(f"unknown consumer {consumer!r}", "consumers")
        return self.consumer_names.index(consumer)

    # derived economies -------------------------------------------------------
    def with_goods(self, goods: Sequence[GoodLayer]) -> "MultiplexEconomy":
        return MultiplexEconomy(self.consumer_names, tuple(goods))

    def with_endowments(self, endowments: np.ndarray) -> "MultiplexEconomy":
        endowments = np.asarray(endowments, dtype=float)
        return self.with_goods(replace(g, endowments=endowments[s]) for s, g in enumerate(self.goods))

    def with_alphas(self, alphas: Iterable[float]) -> "MultiplexEconomy":
        return self.with_goods(replace(g, alpha=a) for g, a in zip(self.goods, alphas))

    def with_phis(self, phis: Iterable[float]) -> "MultiplexEconomy":
        return self.with_goods(replace(g, phi=p) for g, p in zip(self.goods, phis))

    def with_networks(self, networks: Sequence[np.ndarray]) -> "MultiplexEconomy":
        return self.with_goods(replace(g, network=G) for g, G in zip(self.goods, networks))

    def __eq__(self, other):
        if not isinstance(other, MultiplexEconomy):
            return NotImplemented
        return self.consumer_names == other.consumer_names and self.goods == other.goods

    __hash__ = None


def _check_structure(e: MultiplexEconomy) -> None:
    n = len(e.consumer_names)
    if n < 1:
        raise ValidationError("economy needs at least one consumer", "consumers")
    if len(set(e.consumer_names)) != n:
        raise ValidationError("consumer names must be unique", "consumers")
    if len(e.goods) < 1:
        raise ValidationError("economy needs at least one good", "goods")
    names = [g.name for g in e.goods]
    if len(set(names)) != len(names):
        raise ValidationError("good names must be unique", "goods")
    for s, g in enumerate(e.goods):
        path = f"goods[{s}]"
        if not isinstance(g, GoodLayer):
            raise ValidationError("expected a GoodLayer", path)
        if not (math.isfinite(g.alpha) and -ALPHA_TOL <= g.alpha <= 1 + ALPHA_TOL):
            raise ValidationError(f"alpha must lie in [0, 1], got {g.alpha}", f"{path}.alpha")
        if not math.isfinite(g.phi):
            raise ValidationError("phi must be finite", f"{path}.phi")
        if g.endowments.shape != (n,):
            raise ValidationError(
                f"endowments must have length {n}, got shape {g.endowments.shape}", f"{path}.endowments"
            )
        bad = np.flatnonzero(~(g.endowments > ENDOWMENT_FLOOR))
        if bad.size:
            i = int(bad[0])
            raise ValidationError(
                f"endowments must exceed {ENDOWMENT_FLOOR}, got {g.endowments[i]}", f"{path}.endowments[{i}]"
            )
        if g.network.shape != (n, n):
            raise ValidationError(f"network must be {n}x{n}, got {g.network.shape}", f"{path}.network")
        if not np.all(np.isfinite(g.network)):
            raise ValidationError("network entries must be finite", f"{path}.network")
        neg = np.argwhere(g.network < 0)
        if neg.size:
            i, j = map(int, neg[0])
            raise ValidationError("network weights must be nonnegative", f"{path}.network[{i}][{j}]")
        diag = np.flatnonzero(np.diag(g.network) != 0)
        if diag.size:
            i = int(diag[0])
            raise ValidationError("network must have no self-loops", f"{path}.network[{i}][{i}]")
    total = sum(g.alpha for g in e.goods)
    if abs(total - 1.0) > ALPHA_TOL:
        raise ValidationError(f"preference weights must sum to 1, got {total!r}", "goods[*].alpha")


# ---------------------------------------------------------------------------
# interchange format


def economy_to_dict(e: MultiplexEconomy) -> dict:
    return {
        "consumers": list(e.consumer_names),
        "goods": [
            {
                "name": g.name,
                "alpha": g.alpha,
                "phi": g.phi,
                "network": g.network.tolist(),
                "endowments": g.endowments.tolist(),
            }
            for g in e.goods
        ],
    }


def serialize_economy(e: MultiplexEconomy) -> str:
    """Economy as a JSON document; floats use shortest round-trip repr."""
    return json.dumps(economy_to_dict(e), indent=2)


def _number(v, path: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"expected a number, got {type(v).__name__}", path)
    return float(v)


def _vector(v, path: str) -> list[float]:
    if not isinstance(v, list):
        raise ParseError("expected an array of numbers", path)
    return [_number(x, f"{path}[{k}]") for k, x in enumerate(v)]


def _matrix(v, path: str) -> list[list[float]]:
    if not isinstance(v, list):
        raise ParseError("expected an array of arrays", path)
    rows = [_vector(r, f"{path}[{k}]") for k, r in enumerate(v)]
    if len({len(r) for r in rows}) > 1:
        raise ParseError("ragged matrix", path)
    return rows


def economy_from_dict(doc) -> MultiplexEconomy:
    if not isinstance(doc, dict):
        raise ParseError("economy document must be a JSON object", "$")
    unknown = set(doc) - _ECONOMY_KEYS
    if unknown:
        raise ParseError(f"unknown keys {sorted(unknown)}", "$")
    missing = _ECONOMY_KEYS - set(doc)
    if missing:
        raise ParseError(f"missing keys {sorted(missing)}", "$")
    consumers = doc["consumers"]
    if not isinstance(consumers, list) or not all(isinstance(c, str) for c in consumers):
        raise ParseError("consumers must be an array of strings", "consumers")
    if not isinstance(doc["goods"], list):
        raise ParseError("goods must be an array", "goods")
    goods = []
    for s, g in enumerate(doc["goods"]):
        path = f"goods[{s}]"
        if not isinstance(g, dict):
            raise ParseError("good must be an object", path)
        unknown = set(g) - _GOOD_KEYS
        if unknown:
            raise ParseError(f"unknown keys {sorted(unknown)}", path)
        missing = _GOOD_KEYS - set(g)
        if missing:
            raise ParseError(f"missing keys {sorted(missing)}", path)
        if not isinstance(g["name"], str):
            raise ParseError("name must be a string", f"{path}.name")
        network = _matrix(g["network"], f"{path}.network")
        endow = _vector(g["endowments"], f"{path}.endowments")
        n = len(consumers)
        goods.append(
            GoodLayer(
                name=g["name"],
                alpha=_number(g["alpha"], f"{path}.alpha"),
                phi=_number(g["phi"], f"{path}.phi"),
                network=np.array(network, dtype=float).reshape(len(network), -1) if network else np.zeros((0, n)),
                endowments=np.array(endow, dtype=float),
            )
        )
    return MultiplexEconomy(tuple(consumers), tuple(goods))


def parse_economy(text) -> MultiplexEconomy:
    """Parse an economy document (str or UTF-8 bytes).

    Raises:
        ParseError: malformed JSON or schema violation.
        ValidationError: well-formed but violates a model invariant; the
            ``location`` attribute holds the field path.
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8: {exc}", "$") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from None
    return economy_from_dict(doc)


def load_economy(path) -> MultiplexEconomy:
    with open(path, "rb") as fh:
        return parse_economy(fh.read())


# ---------------------------------------------------------------------------
# assumptions


@dataclass(frozen=True)
class AssumptionReport:
    """Per-good check of the two smallness conditions on spillovers.

    ``nonempty_*`` refers to the weak bound that keeps effective
    consumption at endowments positive (phi above a negative threshold);
    ``interior_*`` to the strong bound on ``|phi|`` under which equilibria
    are interior.  Margins are distances to the bound, ``inf`` when the
    bound does not bind (empty layer or a single consumer).
    """

    nonempty: tuple
    nonempty_margin: tuple
    interior: tuple
    interior_margin: tuple
    rank_condition: bool | None = None
    worst_margin: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "worst_margin", float(min(self.nonempty_margin + self.interior_margin)))

    @property
    def all_nonempty(self) -> bool:
        return all(self.nonempty)

    @property
    def all_interior(self) -> bool:
        return all(self.interior)

    def to_dict(self) -> dict:
        return {
            "nonempty": list(self.nonempty),
            "nonempty_margin": list(self.nonempty_margin),
            "interior": list(self.interior),
            "interior_margin": list(self.interior_margin),
            "rank_condition": self.rank_condition,
            "worst_margin": self.worst_margin,
        }


def validate_economy(e: MultiplexEconomy, rank_condition: bool | None = None) -> AssumptionReport:
    """Evaluate both spillover bounds good by good.  Never raises."""
    n = e.n
    eta_min = e.eta_min
    gbar = e.gmax
    ne, ne_m, it, it_m = [], [], [], []
    for g in e.goods:
        gs = g.gmax
        if n == 1 or gs == 0.0:
            lower = -math.inf
            upper = math.inf
        else:
            lower = -float(g.shares.min()) / ((n - 1) * gs)
            upper = eta_min / ((n + 1) * gbar)
        m1 = g.phi - lower
        m2 = upper - abs(g.phi)
        ne.append(bool(m1 > 0))
        ne_m.append(float(m1))
        it.append(bool(m2 > 0))
        it_m.append(float(m2))
    return AssumptionReport(tuple(ne), tuple(ne_m), tuple(it), tuple(it_m), rank_condition)


# ---------------------------------------------------------------------------
# one private good + one comparison good


def comparison_network(neighbors: Sequence[Iterable[int]], intensity: float, mode: str = "linear",
                       strict: bool = False) -> np.ndarray:
    """Adjacency matrix mapping a social-comparison utility into the model.

    Row ``i`` puts weight ``S(n_i) / (n_i (1 + intensity * S(n_i)))`` on each
    neighbour, with ``S(n_i) = n_i`` in ``"linear"`` mode and ``1`` in
    ``"average"`` mode.  Consumers without neighbours get a zero row (or a
    :class:`DegenerateNetwork` error when ``strict``).
    """
    if mode not in ("linear", "average"):
        raise ValidationError(f"mode must be 'linear' or 'average', got {mode!r}", "mode")
    if intensity < 0:
        raise ValidationError("comparison intensity must be nonnegative", "intensity")
    n = len(neighbors)
    G = np.zeros((n, n))
    empty = []
    for i, nb in enumerate(neighbors):
        nb = sorted(set(int(j) for j in nb))
        if i in nb:
            raise ValidationError("neighbour sets must be irreflexive", f"neighbors[{i}]")
        if any(j < 0 or j >= n for j in nb):
            raise ValidationError("neighbour index out of range", f"neighbors[{i}]")
        k = len(nb)
        if k == 0:
            empty.append(i)
            continue
        S = k if mode == "linear" else 1.0
        G[i, nb] = S / (k * (1.0 + intensity * S))
    if empty:
        if strict:
            raise DegenerateNetwork("consumers without neighbours", empty)
        warnings.warn(f"zero comparison rows for consumers {empty}", DegenerateNetworkWarning, stacklevel=2)
    return G


def build_comparison_economy(neighbors: Sequence[Iterable[int]], intensity: float, mode: str,
                             private_good: GoodLayer, comparison_endowments, *,
                             consumer_names: Sequence[str] | None = None, name: str = "comparison",
                             strict: bool = False) -> MultiplexEconomy:
    """Two-good economy: ``private_good`` plus a good subject to social comparison.

    The comparison good gets ``phi = -intensity``, weight ``1 - private_good.alpha``
    and the network from :func:`comparison_network`.
    """
    G = comparison_network(neighbors, intensity, mode, strict=strict)
    n = G.shape[0]
    names = tuple(consumer_names) if consumer_names is not None else tuple(str(i + 1) for i in range(n))
    private = replace(private_good, network=np.zeros((n, n)), phi=0.0)
    comp = GoodLayer(name, 1.0 - private.alpha, -float(intensity), G, np.asarray(comparison_endowments, float))
    return MultiplexEconomy(names, (private, comp))
