import numpy as np
import pytest

from hyperspec.errors import InvalidParams, NotSelfAdjointKind, SchemeMismatch, ZeroVector
from hyperspec.families import random_hypergraph
from hyperspec.hypergraph import Hypergraph
from hyperspec.operators import build
from hyperspec.spectra import (
    algebraic_connectivity,
    cluster_multiplicities,
    default_tolerance,
    eig,
    laplacian_spectrum,
    rayleigh,
    residual_check,
)
from hyperspec.weights import resolve

KINDS = ("Q", "L", "laplacian", "adjacency", "inducedB", "B0", "normalizedL", "deltaRW")


def _instances(count=10, seed=0):
    rng = np.random.default_rng(seed)
    return [random_hypergraph(int(rng.integers(3, 13)), int(rng.integers(2**31))) for _ in range(count)]


@pytest.mark.parametrize("kind", KINDS)
def test_eigenpairs_against_dense_general_solver(kind):
    for h in _instances(6, 1):
        for scheme in ("rodriguez", "banerjee", "normalized"):
            wa = resolve(scheme, h)
            m = build(h, wa, kind)
            spectrum = eig(m, wa)
            dense = np.sort(np.linalg.eigvals(m.entries).real)
            assert np.allclose(spectrum.eigenvalues, dense, atol=1e-9 * max(1.0, spectrum.spectral_radius))
            X = spectrum.eigenvectors
            assert np.allclose((X * spectrum.metric) @ X.T, np.eye(h.n_vertices), atol=1e-10)
            assert np.allclose(X @ m.entries.T, X * spectrum.eigenvalues[:, None], atol=1e-9 * max(1.0, spectrum.spectral_radius))


def test_ql_and_lapack_agree():
    for h in _instances(5, 2):
        wa = resolve("normalized", h)
        m = build(h, wa, "laplacian")
        a, b = eig(m, wa), eig(m, wa, method="lapack")
        assert np.allclose(a.eigenvalues, b.eigenvalues, atol=1e-12)
        assert len(a.clusters) == len(b.clusters)
    with pytest.raises(InvalidParams):
        eig(m, wa, method="power")


def test_sign_convention_and_determinism(h11):
    wa = resolve("banerjee", h11)
    m = build(h11, wa, "laplacian")
    a, b = eig(m, wa), eig(m, wa)
    assert np.array_equal(a.eigenvectors, b.eigenvectors)
    for row in a.eigenvectors:
        peak = np.argmax(np.abs(row) >= np.abs(row).max() - 1e-12)
        assert row[peak] > 0


def test_clusters_and_multiplicities(h20):
    spectrum = laplacian_spectrum(h20, resolve("rodriguez", h20))
    assert sum(c.multiplicity for c in spectrum.clusters) == 20
    assert spectrum.multiplicity_near(28.0) == 1
    assert spectrum.contains(0.0)
    assert spectrum.distinct_count() == len(spectrum.clusters)
    clusters = cluster_multiplicities(np.array([0.0, 1.0, 1.0 + 5e-9, 2.0]))
    assert [c.multiplicity for c in clusters] == [1, 2, 1]
    assert [c.multiplicity for c in cluster_multiplicities(np.array([1.0, 1.1]), tol=0.2)] == [2]
    assert default_tolerance(10.0) == 1e-8
    assert default_tolerance(1e3) == pytest.approx(1e-7)


def test_zero_eigenvalue_multiplicity_counts_components():
    for seed in range(10):
        h = random_hypergraph(10, seed, connected=False, n_edges=3)
        spectrum = laplacian_spectrum(h, resolve("rodriguez", h))
        assert spectrum.multiplicity_near(0.0, 1e-9) == h.n_components
        assert (algebraic_connectivity(spectrum) > 1e-9) == h.is_connected()


def test_rayleigh_bounds(h11):
    rng = np.random.default_rng(3)
    wa = resolve("normalized", h11)
    L, lap = build(h11, wa, "L"), build(h11, wa, "laplacian")
    spectrum = eig(lap, wa)
    for _ in range(20):
        x = rng.standard_normal(11)
        q = rayleigh(L, wa, x)
        assert q == pytest.approx(rayleigh(lap, wa, x))
        assert spectrum.eigenvalues[0] - 1e-12 <= q <= spectrum.eigenvalues[-1] + 1e-12
    assert rayleigh(lap, wa, spectrum.eigenvectors[1]) == pytest.approx(algebraic_connectivity(spectrum))
    with pytest.raises(ZeroVector):
        rayleigh(lap, wa, np.zeros(11))


def test_residual_check(h20):
    wa = resolve("rodriguez", h20)
    m = build(h20, wa, "laplacian")
    spectrum = eig(m, wa)
    top = spectrum.eigenvectors[-1]
    assert residual_check(m, 28.0, [top]).passed
    bad = residual_check(m, 27.0, [top])
    assert not bad.passed and bad.residuals[0] > bad.threshold
    dependent = residual_check(m, 28.0, [top, 2 * top])
    assert dependent.rank == 1 and not dependent.passed


def test_transition_matrix_is_not_diagonalized_directly(h11):
    wa = resolve("rodriguez", h11)
    with pytest.raises(NotSelfAdjointKind):
        eig(build(h11, wa, "transitionP"), wa)


def test_scheme_mismatch(h11):
    with pytest.raises(SchemeMismatch):
        eig(build(h11, resolve("rodriguez", h11), "L"), resolve("banerjee", h11))


def test_single_edge_laplacian():
    h = Hypergraph([1, 2, 3], [[1, 2, 3]])
    spectrum = laplacian_spectrum(h, resolve("rodriguez", h))
    # -L = 3 I - J on one 3-edge with delta_e = |e|^2
    assert np.allclose(spectrum.eigenvalues, [0.0, 3.0, 3.0])
    assert spectrum.clusters[1].multiplicity == 2
