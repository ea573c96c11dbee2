import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mpxeq import fixtures as F
from mpxeq.economy import (GoodLayer, MultiplexEconomy, build_comparison_economy, comparison_network,
                           economy_to_dict, parse_economy, serialize_economy, validate_economy)
from mpxeq.errors import DegenerateNetwork, DegenerateNetworkWarning, ParseError, ValidationError

BENCHMARK_TEXT = """
{ "consumers": ["1","2"],
  "goods": [ { "name": "x", "alpha": 0.5, "phi": 0.0,
               "network": [[0,0],[0,0]],
               "endowments": [1.44, 0.56] },
             { "name": "y", "alpha": 0.5, "phi": 0.0,
               "network": [[0,0],[0,0]],
               "endowments": [0.12, 1.88] } ] }
"""


def _doc():
    return json.loads(BENCHMARK_TEXT)


def test_parse_benchmark():
    e = parse_economy(BENCHMARK_TEXT)
    assert e.n == 2 and e.n_goods == 2
    assert e.good_names == ["x", "y"]
    np.testing.assert_array_equal(e.endowments, [[1.44, 0.56], [0.12, 1.88]])
    assert e == F.benchmark()


def test_parse_accepts_bytes():
    assert parse_economy(BENCHMARK_TEXT.encode()) == F.benchmark()


def test_alpha_sum_rejected():
    doc = _doc()
    doc["goods"][0]["alpha"] = doc["goods"][1]["alpha"] = 0.6
    with pytest.raises(ValidationError) as err:
        parse_economy(json.dumps(doc))
    assert "alpha" in err.value.location


def test_self_loop_rejected_with_path():
    doc = _doc()
    doc["goods"][1]["network"] = [[0.2, 0], [0, 0]]
    with pytest.raises(ValidationError) as err:
        parse_economy(json.dumps(doc))
    assert err.value.location == "goods[1].network[0][0]"


@pytest.mark.parametrize("mutate, cls", [
    (lambda d: d.__setitem__("extra", 1), ParseError),
    (lambda d: d["goods"][0].__setitem__("colour", "red"), ParseError),
    (lambda d: d["goods"][0].pop("phi"), ParseError),
    (lambda d: d["goods"][0].__setitem__("alpha", "half"), ParseError),
    (lambda d: d["goods"][0].__setitem__("endowments", [1.0]), ValidationError),
    (lambda d: d["goods"][0].__setitem__("endowments", [1.0, 0.0]), ValidationError),
    (lambda d: d["goods"][0].__setitem__("network", [[0, -1], [0, 0]]), ValidationError),
    (lambda d: d["goods"][0].__setitem__("network", [[0, 1]]), ValidationError),
    (lambda d: d["goods"][1].__setitem__("name", "x"), ValidationError),
    (lambda d: d.__setitem__("consumers", ["1", "1"]), ValidationError),
])
def test_invalid_documents(mutate, cls):
    doc = _doc()
    mutate(doc)
    with pytest.raises(cls):
        parse_economy(json.dumps(doc))


def test_malformed_json():
    with pytest.raises(ParseError):
        parse_economy("{not json")


def test_roundtrip_fixtures():
    for e in [F.benchmark(), F.example_one(), F.example_four(0.3, 3), F.example_five(0.5), F.line_example()]:
        text = serialize_economy(e)
        again = parse_economy(text)
        assert again == e
        assert serialize_economy(again) == text


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0.01, 100.0), min_size=3, max_size=3),
       st.floats(0.05, 0.95), st.floats(-0.3, 0.3))
def test_roundtrip_is_bit_exact(endow, alpha, phi):
    G = np.array([[0, 1.0 / 3.0, 0], [0.1, 0, 0.7], [0, 0, 0]])
    e = MultiplexEconomy(("a", "b", "c"), (
        GoodLayer("p", alpha, 0.0, np.zeros((3, 3)), endow),
        GoodLayer("q", 1 - alpha, phi, G, endow[::-1]),
    ))
    again = parse_economy(serialize_economy(e))
    assert again == e
    assert economy_to_dict(again) == economy_to_dict(e)


def test_arrays_are_read_only():
    e = F.benchmark()
    with pytest.raises(ValueError):
        e.goods[0].endowments[0] = 3.0


def test_validate_benchmark_infinite_margins():
    rep = validate_economy(F.benchmark())
    assert rep.all_nonempty and rep.all_interior
    assert all(math.isinf(m) for m in rep.interior_margin + rep.nonempty_margin)


def test_validate_example_one_strong_bound_fails():
    rep = validate_economy(F.example_one(0.7))
    # bound 0.06 / 3 = 0.02
    assert rep.interior == (True, False)
    assert rep.interior_margin[1] == pytest.approx(0.02 - 0.7)
    assert rep.all_nonempty


def test_validate_example_five_strong_bound_holds():
    rep = validate_economy(F.example_five(0.5))
    assert rep.all_interior
    assert rep.interior_margin[1] == pytest.approx(0.25 / 5.05 - 0.04)
    assert rep.nonempty_margin[1] == pytest.approx(-0.04 + 0.25 / (3 * 1.01))


def test_flags_match_margins():
    rep = validate_economy(F.example_one(0.7))
    for flag, margin in zip(rep.interior + rep.nonempty, rep.interior_margin + rep.nonempty_margin):
        assert flag == (margin > 0)
    assert rep.worst_margin == min(rep.interior_margin + rep.nonempty_margin)


@pytest.mark.parametrize("phi", [0.7, 0.3, 0.05, 0.01, 0.0])
def test_flags_monotone_in_phi(phi):
    big = validate_economy(F.example_one(0.7))
    small = validate_economy(F.example_one(phi))
    for a, b in zip(big.interior, small.interior):
        assert b or not a


def test_single_consumer_bounds_infinite():
    e = MultiplexEconomy(("solo",), (GoodLayer("x", 1.0, 0.5, [[0.0]], [1.0]),))
    rep = validate_economy(e)
    assert rep.all_interior and math.isinf(rep.interior_margin[0])


def test_comparison_star_linear():
    neighbors = [{1, 2, 3}, {0}, {0}, {0}]
    G = comparison_network(neighbors, 0.1, "linear")
    assert G[1, 0] == pytest.approx(1 / 1.1)
    assert G[0, 1] == pytest.approx(3 / (3 * 1.3))
    assert np.all(np.diag(G) == 0)


def test_comparison_average_mode():
    G = comparison_network([{1, 2, 3}, {0}, {0}, {0}], 0.1, "average")
    assert G[0, 1] == pytest.approx(1 / (3 * 1.1))


def test_comparison_zero_intensity_row_stochastic():
    neighbors = [{1, 2}, {0, 2}, {0}]
    G = comparison_network(neighbors, 0.0, "average")
    np.testing.assert_allclose(G.sum(axis=1), 1.0)
    assert G[0, 1] == pytest.approx(0.5)


def test_build_comparison_economy():
    private = GoodLayer("food", 0.6, 0.0, np.zeros((3, 3)), [1.0, 2.0, 3.0])
    e = build_comparison_economy([{1}, {0}, {0, 1}], 0.2, "linear", private, [1.0, 1.0, 1.0])
    assert e.n_goods == 2
    assert e.goods[1].phi == -0.2 and e.goods[1].alpha == pytest.approx(0.4)
    assert np.all(np.diag(e.goods[1].network) == 0)
    validate_economy(e)


def test_compare_with_first_fixture():
    e = F.compare_with_first(4, 0.1, 0.5)
    G = e.goods[1].network
    np.testing.assert_allclose(G[1:, 0], 1 / 1.1)
    assert not G[0].any()


def test_empty_neighbourhood_warns_or_raises():
    with pytest.warns(DegenerateNetworkWarning):
        G = comparison_network([set(), {0}], 0.1)
    assert not G[0].any()
    with pytest.raises(DegenerateNetwork):
        comparison_network([set(), {0}], 0.1, strict=True)


def test_comparison_rejects_self_reference():
    with pytest.raises(ValidationError):
        comparison_network([{0}, {0}], 0.1)
