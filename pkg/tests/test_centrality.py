import numpy as np
import pytest

from mpxeq import fixtures as F
from mpxeq.centrality import (check_parallel, influence_centrality, katz_centralities, layer_influences,
                              leontief_inverse)
from mpxeq.economy import GoodLayer, MultiplexEconomy
from mpxeq.equilibrium import system_matrices
from mpxeq.errors import SingularH, SingularLayer
from mpxeq.oracle.generators import random_economy

pytestmark = pytest.mark.filterwarnings("ignore::mpxeq.errors.AssumptionWarning")


def test_zero_phi_is_identity():
    f = leontief_inverse(GoodLayer("g", 1.0, 0.0, [[0, 1], [1, 0]], [1, 1]))
    np.testing.assert_array_equal(f.M, np.eye(2))
    np.testing.assert_array_equal(f.tilde_b, [1, 1])


def test_example_one_inverse():
    layer = F.example_one(0.7).goods[1]
    f = leontief_inverse(layer)
    np.testing.assert_allclose(f.M, [[1, -0.7], [0, 1]], atol=1e-15)
    assert f.residual(layer) <= 1e-12
    b, agg, tb = katz_centralities(f, [1, 1])
    np.testing.assert_allclose(tb, [1, 0.3])
    assert agg == pytest.approx(1.3)
    assert agg == pytest.approx(b.sum())


def test_example_five_star_layer():
    layer = F.example_five(0.5).goods[1]
    f = leontief_inverse(layer)
    assert np.all(f.M > 0)
    assert f.residual(layer) < 1e-12
    assert f.spectral_ok


def test_nilpotent_matches_neumann_sum():
    G = np.array([[0, 1, 0.5], [0, 0, 2], [0, 0, 0]])
    layer = GoodLayer("g", 1.0, 0.3, G, [1, 1, 1])
    A = 0.3 * G
    np.testing.assert_allclose(leontief_inverse(layer).M, np.eye(3) - A + A @ A, atol=1e-14)


def test_singular_layer():
    # I + phi G singular when phi = -1 on a mutual dyad
    with pytest.raises(SingularLayer):
        leontief_inverse(GoodLayer("g", 1.0, -1.0, [[0, 1], [1, 0]], [1, 1]))


def test_spectral_flag_false_when_eigenvalue_too_negative():
    f = leontief_inverse(GoodLayer("g", 1.0, -1.5, [[0, 1], [1, 0]], [1, 1]))
    assert not f.spectral_ok


def test_undirected_tilde_b_equals_row_centrality():
    layer = F.example_five(0.5).goods[2]
    f = leontief_inverse(layer)
    np.testing.assert_allclose(f.tilde_b, f.M @ np.ones(4), atol=1e-14)


def test_katz_aggregate_identity_random():
    rng = np.random.default_rng(0)
    for _ in range(20):
        e = random_economy(rng)
        z = rng.uniform(0.1, 2, e.n)
        for f in layer_influences(e):
            b, agg, tb = katz_centralities(f, z)
            assert agg == pytest.approx(b.sum(), rel=1e-10)


def test_tilde_b_positive_under_bound():
    rng = np.random.default_rng(1)
    for _ in range(30):
        for f in layer_influences(random_economy(rng)):
            assert np.all(f.tilde_b > 0)


def test_parallel_example_two_regular():
    v = check_parallel(F.example_two(0.7))
    assert v.parallel and all(v.regular)


def test_not_parallel_example_one():
    v = check_parallel(F.example_one(0.7))
    assert not v.parallel
    assert v.worst_pair == (0, 1)
    cos = (1 + 0.3) / (np.sqrt(2) * np.sqrt(1.09))
    assert v.dissimilarity == pytest.approx(1 - cos)
    assert v.regular == (True, False)


def test_line_example_parallel_without_symmetry():
    v = check_parallel(F.line_example(0.2, -0.25))
    assert v.parallel
    assert not v.identical and not all(v.regular)
    assert not check_parallel(F.line_example(0.2, -0.2)).parallel


def test_identical_layers():
    v = check_parallel(F.example_three(0.4))
    assert v.identical and v.parallel


def test_parallel_invariant_to_rescaling():
    e = F.line_example(0.2, -0.25)
    infl = layer_influences(e)
    scaled = [type(f)(f.good, f.M, 7.5 * f.tilde_b, f.spectral_ok) for f in infl]
    assert check_parallel(e, scaled).parallel


def test_single_good_is_parallel():
    e = MultiplexEconomy(("a", "b"), (GoodLayer("x", 1.0, 0.2, [[0, 1], [0, 0]], [1, 2]),))
    v = check_parallel(e)
    assert v.parallel and v.worst_pair is None


def test_influence_centrality_good_one_is_constant():
    e = F.example_five(0.5)
    c = influence_centrality(e, system_matrices(e).H, 0)
    np.testing.assert_allclose(c, 3.0)  # 1 / alpha^1


def test_influence_centrality_benchmark_parallel():
    e = F.benchmark()
    H = system_matrices(e).H
    c1, c2 = (influence_centrality(e, H, s) for s in range(2))
    np.testing.assert_allclose(c1 / c1[0], c2 / c2[0])


@pytest.mark.parametrize("sigma, c22, c23", [(2 / 3, 3.17286, 3.17242), (1 / 2, 3.17359, 3.17369),
                                             (1 / 3, 3.17431, 3.17494)])
def test_influence_centrality_example_five_frozen(sigma, c22, c23):
    # frozen from an independent dense solve of the same fixture
    e = F.example_five(sigma)
    c = influence_centrality(e, system_matrices(e).H, "2")
    assert c[1] == pytest.approx(c22, abs=5e-6)
    assert c[2] == pytest.approx(c23, abs=5e-6)


def test_influence_centrality_singular():
    e = F.benchmark()
    with pytest.raises(SingularH):
        influence_centrality(e, np.zeros((2, 2)), 0)
