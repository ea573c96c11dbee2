import numpy as np
import pytest

from mpxeq import fixtures as F
from mpxeq.centrality import layer_influences
from mpxeq.equilibrium import effective_consumption
from mpxeq.errors import NonInteriorLindahl
from mpxeq.lindahl import compare_lindahl, lindahl_residuals, solve_lindahl
from mpxeq.oracle.generators import random_economy
from mpxeq.welfare import pareto_allocation

pytestmark = pytest.mark.filterwarnings("ignore::mpxeq.errors.AssumptionWarning")


def test_benchmark_lindahl_is_competitive():
    c = compare_lindahl(F.benchmark())
    assert c.status == "equal" and c.efficient
    np.testing.assert_allclose(c.lindahl.allocation, c.competitive.allocation, atol=1e-12)


def test_example_one_prices():
    e = F.example_one(0.4, 0.6)
    sol = solve_lindahl(e)
    np.testing.assert_allclose(sol.goods_prices, [0.6 / 2, 0.4 / 2])
    # own prices are tilde_b * goods price; consumer 1 pays for consumer 2's use of y
    np.testing.assert_allclose(sol.own_prices[1], [1.0 * 0.2, 0.6 * 0.2])
    assert sol.cross_prices[1, 0, 1] == pytest.approx(0.4 * sol.own_prices[1, 0])
    assert sol.cross_prices[1, 1, 0] == 0.0
    np.testing.assert_allclose(np.diagonal(sol.cross_prices, axis1=1, axis2=2), sol.own_prices)


@pytest.mark.parametrize("name, alpha", [("I", 0.6), ("II", 0.4), ("II", 0.5), ("II", 0.6), ("III", 0.6)])
def test_edgeworth_cases(name, alpha):
    e = F.EDGEWORTH[name](0.4, alpha)
    c = compare_lindahl(e)
    assert c.delta_u[0] < 0 < c.delta_u[1]
    assert c.status == "mixed" and c.efficient
    r = lindahl_residuals(e, c.lindahl)
    assert max(r.compatibility, r.market_clearing, r.budget, r.kkt) < 1e-12


@pytest.mark.parametrize("name", ["I", "III"])
def test_strong_spillovers_non_interior(name):
    with pytest.raises(NonInteriorLindahl):
        solve_lindahl(F.EDGEWORTH[name](0.4, 0.4))


def test_random_residuals_and_planner_match():
    rng = np.random.default_rng(21)
    for _ in range(30):
        e = random_economy(rng)
        sol = solve_lindahl(e)
        r = lindahl_residuals(e, sol)
        assert r.compatibility < 1e-12 and r.budget < 1e-12 and r.kkt < 1e-10
        np.testing.assert_allclose(sol.weights.sum(), 1.0)
        np.testing.assert_allclose(pareto_allocation(e, sol.weights).allocation, sol.allocation, atol=1e-12)
        # q^s * tilde_b^s is proportional to the Lindahl weights in every layer
        Q = effective_consumption(e, sol.allocation)
        for q, f in zip(Q, layer_influences(e)):
            w = q * f.tilde_b
            np.testing.assert_allclose(w / w.sum(), sol.weights, rtol=1e-10)


def test_residuals_detect_bad_prices():
    e = F.example_two(0.4)
    sol = solve_lindahl(e)
    bad = type(sol)(sol.goods_prices, sol.own_prices * 1.1, sol.cross_prices, sol.allocation, sol.weights,
                    sol.utilities)
    assert lindahl_residuals(e, bad).compatibility > 1e-3
