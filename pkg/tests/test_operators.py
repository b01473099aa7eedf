from itertools import combinations

import numpy as np
import pytest

from hyperspec.errors import DimensionMismatch, IsolatedVertex, SchemeMismatch, UnknownKind
from hyperspec.families import random_hypergraph
from hyperspec.hypergraph import Hypergraph
from hyperspec.operators import KINDS, apply, avg, avg_adjoint, build, degree_profile, weighted_underlying_graph
from hyperspec.weights import WeightScheme, resolve

SCHEMES = ("rodriguez", "banerjee", "normalized", "signless")


def _instances(count=12, seed=0):
    rng = np.random.default_rng(seed)
    return [random_hypergraph(int(rng.integers(3, 13)), int(rng.integers(2**31)), max_edge_size=5) for _ in range(count)]


def _random_custom(h, seed):
    rng = np.random.default_rng(seed)
    dv = {v: float(x) for v, x in zip(h.vertices, rng.uniform(0.5, 3.0, h.n_vertices))}
    de = {k: float(x) for k, x in enumerate(rng.uniform(0.5, 5.0, h.n_edges))}
    return resolve(WeightScheme("custom", dv, de), h)


def _all_weights(h, seed=0):
    return [resolve(s, h) for s in SCHEMES] + [_random_custom(h, seed)]


def _clique_laplacian(h, wa):
    """L from oriented incidence matrices of the complete graph on each hyperedge."""
    n = h.n_vertices
    total = np.zeros((n, n))
    for k, e in enumerate(h.edges):
        members = sorted(h.index(v) for v in e)
        pairs = list(combinations(members, 2))
        Qe = np.zeros((len(pairs), n))
        for row, (a, b) in enumerate(pairs):
            Qe[row, a], Qe[row, b] = 1.0, -1.0
        total += wa.delta_e[k] / len(e) ** 2 * (Qe.T @ Qe)
    return -np.diag(1.0 / wa.delta_v) @ total


def _pointwise_laplacian(h, wa, x):
    """(Lx)(v) = sum over edges at v of delta_e / (delta_v |e|^2) sum_{u in e} (x_u - x_v)."""
    out = np.zeros(h.n_vertices)
    for i, v in enumerate(h.vertices):
        for k, e in enumerate(h.edges):
            if v in e:
                out[i] += wa.delta_e[k] / (wa.delta_v[i] * len(e) ** 2) * sum(x[h.index(u)] - x[i] for u in e)
    return out


def _pointwise_adjacency(h, wa):
    n = h.n_vertices
    A = np.zeros((n, n))
    for i, u in enumerate(h.vertices):
        for j, v in enumerate(h.vertices):
            if i != j:
                A[i, j] = sum(wa.delta_e[k] / (wa.delta_v[i] * len(e) ** 2) for k, e in enumerate(h.edges) if u in e and v in e)
    return A


def test_laplacian_matches_clique_incidence_construction():
    for h in _instances():
        for wa in _all_weights(h):
            assert np.allclose(build(h, wa, "L").entries, _clique_laplacian(h, wa), atol=1e-12)


def test_laplacian_matches_pointwise_sum(h11):
    rng = np.random.default_rng(1)
    for h in [h11] + _instances(6, 1):
        for wa in _all_weights(h, 1):
            x = rng.standard_normal(h.n_vertices)
            assert np.allclose(build(h, wa, "L") @ x, _pointwise_laplacian(h, wa, x), atol=1e-12)


def test_adjacency_and_degree_decomposition():
    for h in _instances(8, 2):
        for wa in _all_weights(h, 2):
            A = build(h, wa, "adjacency").entries
            assert np.allclose(A, _pointwise_adjacency(h, wa), atol=1e-12)
            r = degree_profile(h, wa).r
            assert np.allclose(build(h, wa, "laplacian").entries, np.diag(r) - A, atol=1e-12)
            Q = build(h, wa, "Q").entries
            assert np.allclose(Q.sum(axis=1), degree_profile(h, wa).n, atol=1e-12)


def test_q_is_avg_adjoint_after_avg():
    rng = np.random.default_rng(3)
    for h in _instances(8, 3):
        for wa in _all_weights(h, 3):
            x = rng.standard_normal(h.n_vertices)
            beta = rng.standard_normal(h.n_edges)
            assert np.allclose(build(h, wa, "Q") @ x, avg_adjoint(h, wa, avg(h, x)), atol=1e-12)
            lhs = np.sum(wa.delta_e * avg(h, x) * beta)
            rhs = np.sum(wa.delta_v * x * avg_adjoint(h, wa, beta))
            assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("kind", KINDS)
def test_every_operator_is_self_adjoint_in_its_metric(kind):
    rng = np.random.default_rng(4)
    for h in _instances(8, 4):
        for wa in _all_weights(h, 4):
            m = build(h, wa, kind)
            x, y = rng.standard_normal((2, h.n_vertices))
            a = np.sum(m.metric * (m @ x) * y)
            b = np.sum(m.metric * x * (m @ y))
            assert a == pytest.approx(b, rel=1e-10, abs=1e-10)


def test_induced_powers_give_walk_distances():
    for h in _instances(8, 5):
        D = h.distance_matrix
        B = build(h, resolve("rodriguez", h), "inducedB").entries
        n = h.n_vertices
        first = np.full((n, n), np.inf)
        np.fill_diagonal(first, 0)
        P = np.eye(n)
        for step in range(1, n):
            P = P @ B
            reach = (P > 0) & np.isinf(first)
            first[reach] = step
        off = ~np.eye(n, dtype=bool)
        assert np.array_equal(first[off], D[off])


def test_b0_is_underlying_graph_adjacency():
    for h in _instances(5, 6):
        B0 = build(h, resolve("rodriguez", h), "B0").entries
        for i, j in combinations(range(h.n_vertices), 2):
            shared = any(h.vertices[i] in e and h.vertices[j] in e for e in h.edges)
            assert B0[i, j] == B0[j, i] == float(shared)


def test_weighted_underlying_graph_matches_induced_b(h11):
    wa = resolve("banerjee", h11)
    B = build(h11, wa, "inducedB").entries
    edges = weighted_underlying_graph(h11, wa)
    for (i, j), w in edges.items():
        assert B[i, j] == pytest.approx(w)
    assert np.count_nonzero(np.triu(B)) == len(edges)


def test_normalized_laplacian_trace_and_random_walk_rows():
    for h in _instances(8, 7):
        for wa in _all_weights(h, 7):
            assert np.trace(build(h, wa, "normalizedL").entries) == pytest.approx(h.n_vertices)
            P = build(h, wa, "transitionP").entries
            assert np.allclose(P.sum(axis=1), 1.0)
            assert np.allclose(build(h, wa, "deltaRW").entries, np.eye(h.n_vertices) - P)


def test_signless_q_is_incidence_gram(h20):
    wa = resolve("signless", h20)
    H = h20.incidence.astype(float)
    assert np.allclose(build(h20, wa, "Q").entries, H @ H.T)


def test_operator_errors(h11):
    wa = resolve("rodriguez", h11)
    with pytest.raises(UnknownKind):
        build(h11, wa, "hessian")
    with pytest.raises(DimensionMismatch):
        apply(build(h11, wa, "L"), np.ones(3))
    other = resolve("rodriguez", Hypergraph([1, 2], [[1, 2]]))
    with pytest.raises(SchemeMismatch):
        build(h11, other, "L")
    lonely = Hypergraph([1, 2, 3], [[1, 2]])
    wl = resolve("rodriguez", lonely)
    for kind in ("normalizedL", "transitionP", "deltaRW"):
        with pytest.raises(IsolatedVertex):
            build(lonely, wl, kind)
    assert build(lonely, wl, "L").entries[2].tolist() == [0.0, 0.0, 0.0]


def test_operators_are_read_only(h11):
    m = build(h11, resolve("rodriguez", h11), "L")
    with pytest.raises(ValueError):
        m.entries[0, 0] = 1.0
    assert m.scheme_tag == resolve("rodriguez", h11).fingerprint
