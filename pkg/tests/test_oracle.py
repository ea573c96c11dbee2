import numpy as np
import pytest

from mpxeq import fixtures as F
from mpxeq.compstat import Perturbation
from mpxeq.economy import validate_economy
from mpxeq.equilibrium import solve_equilibrium, verify_equilibrium
from mpxeq.errors import DomainError, ValidationError
from mpxeq.oracle import (TatonnementConfig, finite_difference_check, minimize_weighted_kl, numeric_planner,
                          tatonnement_solve)
from mpxeq.oracle.curves import contract_curve, equilibrium_curve, textbook_curves
from mpxeq.oracle.finite_diff import relative_error
from mpxeq.oracle.generators import random_economy, random_perturbation, regular_network
from mpxeq.oracle.planner import project_simplex

pytestmark = pytest.mark.filterwarnings("ignore::mpxeq.errors.AssumptionWarning")


def test_curves_known_points():
    X = solve_equilibrium(F.example_one(0.7)).allocation
    assert equilibrium_curve("I", 0.7, X[0, 0]) == pytest.approx(0.64745, abs=1e-5)
    assert equilibrium_curve("II", 0.5, 1.0) == pytest.approx(1.0)
    assert contract_curve("I", 0.3, 0.5) == 0.0
    assert contract_curve("I", 0.3, 1.3) == pytest.approx(1.0)
    np.testing.assert_array_equal(equilibrium_curve("III", 0.4, [0.2, 1.7]), [0.2, 1.7])


def test_curves_reach_the_corners():
    for name in ("I", "II", "III"):
        for phi in (0.1, 0.5, 0.9):
            s = textbook_curves(name, phi, [0.0, 2.0])
            assert s.y_equilibrium[0] == pytest.approx(0.0) and s.y_equilibrium[1] == pytest.approx(2.0)
            assert s.y_contract[0] == pytest.approx(0.0) and s.y_contract[1] == pytest.approx(2.0)


@pytest.mark.parametrize("args", [("IV", 0.5, [1.0]), ("I", 1.0, [1.0]), ("I", 0.5, [2.5]), ("I", 0.5, [np.nan])])
def test_curves_domain(args):
    with pytest.raises(DomainError):
        textbook_curves(*args)


def test_solver_lands_on_curves():
    for name, build in F.EDGEWORTH.items():
        for alpha in (0.3, 0.5, 0.7):
            e = build(0.3, alpha, (1.2, 0.8), (0.9, 1.1))
            X = solve_equilibrium(e).allocation
            assert X[1, 0] == pytest.approx(float(equilibrium_curve(name, 0.3, X[0, 0])), abs=1e-10)


def test_tatonnement_matches_closed_form():
    rng = np.random.default_rng(40)
    for _ in range(10):
        e = random_economy(rng)
        eq = solve_equilibrium(e)
        tat = tatonnement_solve(e)
        np.testing.assert_allclose(tat.allocation, eq.allocation, atol=1e-6)
        np.testing.assert_allclose(tat.prices, eq.prices, atol=1e-6)
        assert verify_equilibrium(e, tat, tol=1e-6).passed


def test_tatonnement_corner_on_curve():
    e = F.example_one(0.7, 0.5, (0.1, 1.9), (0.5, 1.5))
    X = tatonnement_solve(e).allocation
    assert X[1, 0] == pytest.approx(0.0, abs=1e-9)
    assert X[1, 0] == pytest.approx(float(equilibrium_curve("I", 0.7, X[0, 0])), abs=1e-8)


def test_tatonnement_config_and_domain():
    with pytest.raises(ValidationError):
        TatonnementConfig(kappa=0)
    with pytest.raises(DomainError):
        tatonnement_solve(F.example_five(2 / 3))


def test_project_simplex():
    np.testing.assert_allclose(project_simplex(np.array([0.5, 0.5]), 1.0), [0.5, 0.5])
    np.testing.assert_allclose(project_simplex(np.array([3.0, 0.0]), 2.0), [2.0, 0.0])
    p = project_simplex(np.array([0.9, -0.4, 0.3]), 1.0)
    assert p.sum() == pytest.approx(1.0) and p.min() >= 0


def test_numeric_planner_corner():
    # weights so lopsided the closed form leaves the box; the planner stays feasible
    e = F.example_one(0.7)
    res = numeric_planner(e, [0.01, 0.99])
    assert res.allocation.min() >= 0
    np.testing.assert_allclose(res.allocation.sum(axis=1), e.aggregates)
    assert res.allocation[1, 0] == pytest.approx(float(contract_curve("I", 0.7, res.allocation[0, 0])), abs=1e-7)


def test_numeric_planner_rejects_bad_weights():
    with pytest.raises(DomainError):
        numeric_planner(F.benchmark(), [1.0, 0.0])


def test_minimize_weighted_kl_identical_shares():
    rho = np.array([[0.2, 0.3, 0.5], [0.2, 0.3, 0.5]])
    m = minimize_weighted_kl([0.4, 0.6], rho)
    np.testing.assert_allclose(m.theta, rho[0], atol=1e-6)
    assert m.value == pytest.approx(0.0, abs=1e-10)


def test_relative_error_floor_and_nan():
    assert relative_error(np.array([1e-12]), np.array([0.0])) == pytest.approx(1e-4)
    assert relative_error(np.array([np.nan, 1.0]), np.array([5.0, 1.0])) == 0.0


def test_finite_difference_report_fields():
    e = F.example_five(0.5)
    rep = finite_difference_check(e, Perturbation.transfer(e, 2, 1, 1))
    assert set(rep.errors) == {"price", "utility", "consumption"}
    assert rep.max_error < 1e-6
    assert rep.to_dict()["h"] == 1e-5


def test_generators_respect_bounds():
    rng = np.random.default_rng(41)
    for structure in ("random", "regular", "identical"):
        for _ in range(10):
            e = random_economy(rng, structure=structure)
            rep = validate_economy(e)
            assert rep.all_interior
            for kind in ("endowment", "preference", "network", "phi"):
                random_perturbation(rng, e, kind).check(e)


def test_regular_network_rows_and_columns():
    G = regular_network(np.random.default_rng(0), 5)
    np.testing.assert_allclose(G.sum(axis=0), G.sum(axis=1))
    assert np.all(np.diag(G) == 0)


def test_redistribution_keeps_aggregates():
    rng = np.random.default_rng(42)
    e = random_economy(rng)
    p = random_perturbation(rng, e, "endowment", redistribution=True)
    np.testing.assert_allclose(p.payload.sum(axis=1), 0, atol=1e-14)
