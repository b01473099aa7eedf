import numpy as np
import pytest

from hyperspec.errors import (
    DimensionMismatch,
    IsolatedVertexUnderNormalized,
    MissingCustomValue,
    NonPositiveCustom,
    ValidationError,
)
from hyperspec.hypergraph import Hypergraph
from hyperspec.weights import WeightScheme, inner_product_e, inner_product_v, resolve


@pytest.fixture
def small():
    return Hypergraph("abcd", [["a", "b", "c"], ["c", "d"]], [2.0, 1.0])


def test_presets(small):
    sizes = np.array([3.0, 2.0])
    rod = resolve("rodriguez", small)
    assert np.array_equal(rod.delta_v, np.ones(4)) and np.array_equal(rod.delta_e, sizes**2)
    ban = resolve("banerjee", small)
    assert np.allclose(ban.delta_e, [2.0 * 9 / 2, 4.0])
    nor = resolve("normalized", small)
    assert np.array_equal(nor.delta_v, [1, 1, 2, 1])
    assert np.allclose(nor.delta_e, [9 / 2, 4.0])
    sig = resolve("signless", small)
    assert np.array_equal(sig.delta_e, sizes**2)


def test_normalized_vertex_weight_counts_edges(h20):
    wa = resolve("normalized", h20)
    assert wa.delta_v[h20.index(1)] == 5
    assert wa.delta_v[h20.index(20)] == 1


def test_normalized_rejects_isolated_vertex():
    h = Hypergraph([1, 2, 3], [[1, 2]])
    with pytest.raises(IsolatedVertexUnderNormalized):
        resolve("normalized", h)
    resolve("rodriguez", h)


def test_custom_scheme(small):
    wa = resolve(WeightScheme("custom", {"a": 1, "b": 2, "c": 3, "d": 4}, {0: 5, 1: 6}), small)
    assert np.array_equal(wa.delta_v, [1, 2, 3, 4])
    assert np.array_equal(wa.delta_e, [5, 6])
    with pytest.raises(MissingCustomValue):
        resolve(WeightScheme("custom", {"a": 1}, {0: 5, 1: 6}), small)
    with pytest.raises(NonPositiveCustom):
        resolve(WeightScheme("custom", {"a": 1, "b": 2, "c": 3, "d": 0}, {0: 5, 1: 6}), small)
    with pytest.raises(ValidationError):
        WeightScheme("nonsense")


def test_custom_accepts_string_keys():
    h = Hypergraph([1, 2], [[1, 2]])
    wa = resolve(WeightScheme("custom", {"1": 2.0, "2": 3.0}, {"0": 1.0}), h)
    assert np.array_equal(wa.delta_v, [2.0, 3.0])


def test_fingerprint_tracks_values(small):
    a, b = resolve("rodriguez", small), resolve("signless", small)
    assert a == b
    plain = Hypergraph("abcd", [["a", "b", "c"], ["c", "d"]])
    assert resolve("rodriguez", plain) != resolve("banerjee", plain)
    # weight 2 on the 3-edge makes the two presets coincide numerically
    assert a == resolve("banerjee", small)
    assert len(a.fingerprint) == 16


def test_inner_products(small):
    wa = resolve("normalized", small)
    x, y = np.arange(4.0), np.ones(4)
    assert inner_product_v(wa, x, y) == pytest.approx(sum(d * a for d, a in zip([1, 1, 2, 1], x)))
    assert inner_product_e(wa, [1.0, 2.0], [1.0, 1.0]) == pytest.approx(4.5 + 8.0)
    with pytest.raises(DimensionMismatch):
        inner_product_v(wa, x, np.ones(3))
    with pytest.raises(DimensionMismatch):
        inner_product_e(wa, [1.0], [1.0])


def test_weights_are_read_only(small):
    wa = resolve("rodriguez", small)
    with pytest.raises(ValueError):
        wa.delta_v[0] = 3.0
