"""Acceptance suite: published eigenvalues, closed forms, theorem and bound audits, property checks.

Each test carries a ``criterion`` marker; the terminal summary prints one
PASS/FAIL line per criterion.
"""

import time
from fractions import Fraction

import numpy as np
import pytest
from conftest import family_instances

from hyperspec.bounds import audit_bounds
from hyperspec.dynamics import diffuse, random_walk
from hyperspec.families import random_hypergraph
from hyperspec.operators import build
from hyperspec.spectra import eig
from hyperspec.theorems import hyperflower_full_spectrum, predict_all, verify
from hyperspec.weights import resolve

TOL = 1e-7


def _laplacian_spectrum(h, scheme):
    wa = resolve(scheme, h)
    return eig(build(h, wa, "laplacian"), wa), wa


def _report(n, ok, detail=""):
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}")


# -- 1: intersection family worked example ------------------------------------------


@pytest.mark.criterion(1)
def test_intersection_example_eigenvalues(h20):
    expected = {"banerjee": Fraction(1297, 210), "rodriguez": Fraction(28), "normalized": Fraction(1297, 1050)}
    start = time.perf_counter()
    found = {}
    for scheme, value in expected.items():
        spectrum, _ = _laplacian_spectrum(h20, scheme)
        found[scheme] = spectrum.multiplicity_near(float(value), TOL)
    elapsed = time.perf_counter() - start
    ok = all(m >= 1 for m in found.values()) and elapsed < 1.0
    _report(1, ok, f"multiplicities={found} elapsed={elapsed:.3f}s")
    assert all(m >= 1 for m in found.values()), found
    assert elapsed < 1.0


# -- 2: cored twins worked example ---------------------------------------------------


@pytest.mark.criterion(2)
def test_cored_twin_example_eigenvalues(h11):
    expected = {"banerjee": 1.25, "normalized": 1.25, "rodriguez": 5.0}
    found = {s: _laplacian_spectrum(h11, s)[0].multiplicity_near(v, TOL) for s, v in expected.items()}
    _report(2, all(m >= 2 for m in found.values()), f"multiplicities={found}")
    assert all(m >= 2 for m in found.values()), found


# -- 3: hyperflower closed form ------------------------------------------------------


@pytest.mark.criterion(3)
def test_hyperflower_closed_form_grid():
    from hyperspec.families import generate

    start = time.perf_counter()
    worst_values, worst_det, cases = 0.0, 0.0, 0
    for l in (2, 3, 4):
        for t in (2, 3):
            for w in (1, 2, 3):
                fam = generate("hyperflower", l=l, r=1, t=t, core_sizes=[w])
                h = fam.hypergraph
                wa = resolve("rodriguez", h)
                for kind in ("L", "laplacian", "adjacency"):
                    m = build(h, wa, kind)
                    predicted = hyperflower_full_spectrum(fam, wa, kind)
                    dense = np.sort(np.linalg.eigvals(m.entries).real)
                    ours = np.sort(eig(m, wa, vectors=False).eigenvalues)
                    expected = predicted.as_list()
                    assert len(expected) == h.n_vertices
                    worst_values = max(worst_values, np.max(np.abs(expected - dense)), np.max(np.abs(expected - ours)))
                    if kind == "adjacency":
                        det = np.linalg.det(m.entries)
                        worst_det = max(worst_det, abs(det - predicted.determinant) / abs(predicted.determinant))
                    cases += 1
    elapsed = time.perf_counter() - start
    ok = worst_values <= 1e-7 and worst_det <= 1e-8 and elapsed < 10
    _report(3, ok, f"cases={cases} max_abs={worst_values:.2e} det_rel={worst_det:.2e} elapsed={elapsed:.2f}s")
    assert worst_values <= 1e-7
    assert worst_det <= 1e-8
    assert elapsed < 10


# -- 4: theorem predictions ---------------------------------------------------------


@pytest.mark.criterion(4)
def test_theorem_predictions_verify(h20, h11):
    instances = family_instances() + [("h20", (h20, {})), ("h11", (h11, {}))]
    failures, seen = [], {}
    for name, fam in instances:
        h, annotations = (fam.hypergraph, fam.annotations) if hasattr(fam, "hypergraph") else fam
        for scheme in ("rodriguez", "banerjee", "normalized", "signless"):
            wa = resolve(scheme, h)
            for kind in ("L", "laplacian", "adjacency"):
                preds = predict_all(h, wa, kind, annotations)
                spectrum = eig(build(h, wa, kind), wa)
                for check in verify(preds, spectrum).checks:
                    seen[check.prediction.theorem] = seen.get(check.prediction.theorem, 0) + 1
                    if not check.passed:
                        failures.append((name, scheme, kind, check.prediction.theorem, check.prediction.value))
    required = {"intersection_family", "cored_twins", "equal_petals", "adjacency_intersection", "graph_power", "squid"}
    missing = sorted(t for t in required if not any(k.startswith(t) for k in seen))
    ok = not failures and not missing
    _report(4, ok, f"checks={sum(seen.values())} failures={len(failures)} missing={missing}")
    assert not missing, missing
    assert not failures, failures[:5]


# -- 5: bounds audit ----------------------------------------------------------------


@pytest.mark.criterion(5)
def test_bounds_hold_on_families_and_random_instances():
    start = time.perf_counter()
    instances = [(name, fam.hypergraph) for name, fam in family_instances()]
    rng = np.random.default_rng(20240611)
    for i in range(200):
        n = int(rng.integers(3, 13))
        instances.append((f"random-{i}", random_hypergraph(n, int(rng.integers(2**31)))))
    violations, audited = [], 0
    for name, h in instances:
        assert h.is_connected()
        for scheme in ("rodriguez", "banerjee", "normalized"):
            rep = audit_bounds(h, resolve(scheme, h))
            assert rep.exacts.get("exhaustive", True)
            audited += 1
            violations += [(name, scheme, r.name, r.lhs, r.rhs) for r in rep.violations]
    elapsed = time.perf_counter() - start
    ok = not violations and elapsed < 300
    _report(5, ok, f"audits={audited} violations={len(violations)} elapsed={elapsed:.1f}s")
    assert not violations, violations[:5]
    assert elapsed < 300


# -- 6: property suites -------------------------------------------------------------


def _random_instances(count, seed, low=3, high=12):
    rng = np.random.default_rng(seed)
    return [random_hypergraph(int(rng.integers(low, high + 1)), int(rng.integers(2**31))) for _ in range(count)]


def _exact_laplacian(vertices, edges, scheme):
    """-L scaled by delta_v, i.e. the symmetric form sum_e c_e Q_e^T Q_e, in exact rationals."""
    n = len(vertices)
    M = [[Fraction(0)] * n for _ in range(n)]
    for e in edges:
        s = len(e)
        ce = Fraction(1) if scheme == "rodriguez" else Fraction(1, s - 1)
        for a in e:
            for b in e:
                if a != b:
                    M[a][b] -= ce
                    M[a][a] += ce
    return M


def _rank(M):
    A = [row[:] for row in M]
    rank, cols = 0, len(A[0]) if A else 0
    for c in range(cols):
        pivot = next((r for r in range(rank, len(A)) if A[r][c] != 0), None)
        if pivot is None:
            continue
        A[rank], A[pivot] = A[pivot], A[rank]
        for r in range(len(A)):
            if r != rank and A[r][c] != 0:
                f = A[r][c] / A[rank][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[rank])]
        rank += 1
    return rank


def _det(M):
    n = len(M)
    if n == 0:
        return Fraction(1)
    A = [row[:] for row in M]
    det = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if A[r][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            A[c], A[pivot] = A[pivot], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return det


def _all_small_hypergraphs():
    from itertools import combinations

    for n in (2, 3, 4):
        candidates = [c for k in range(2, n + 1) for c in combinations(range(n), k)]
        for mask in range(1 << len(candidates)):
            yield n, [candidates[i] for i in range(len(candidates)) if mask >> i & 1]


@pytest.mark.criterion(6)
def test_laplacian_semidefinite_with_component_kernel():
    from itertools import combinations

    from hyperspec.hypergraph import Hypergraph

    checked = 0
    for n, edges in _all_small_hypergraphs():
        h = Hypergraph(range(n), edges)
        for scheme in ("rodriguez", "banerjee"):
            M = _exact_laplacian(range(n), edges, scheme)
            # positive semidefinite iff every principal minor is nonnegative
            for k in range(1, n + 1):
                for idx in combinations(range(n), k):
                    assert _det([[M[i][j] for j in idx] for i in idx]) >= 0
            assert n - _rank(M) == h.n_components
            wa = resolve(scheme, h)
            spectrum = eig(build(h, wa, "L"), wa)
            assert np.all(spectrum.eigenvalues <= 1e-10)
            assert spectrum.multiplicity_near(0.0, 1e-9) == h.n_components
            checked += 1
    assert checked == 2 * sum(1 << len([c for k in range(2, m + 1) for c in combinations(range(m), k)]) for m in (2, 3, 4))


@pytest.mark.criterion(6)
def test_signless_q_is_incidence_gram():
    for h in _random_instances(30, 11):
        wa = resolve("signless", h)
        H = np.array([[1.0 if v in e else 0.0 for e in h.edges] for v in h.vertices])
        assert np.allclose(build(h, wa, "Q").entries, H @ H.T, atol=1e-12)


@pytest.mark.criterion(6)
def test_normalized_laplacian_spectrum_range():
    for h in _random_instances(40, 12):
        n = h.n_vertices
        for scheme in ("rodriguez", "banerjee", "normalized"):
            wa = resolve(scheme, h)
            mu = eig(build(h, wa, "normalizedL"), wa, vectors=False).eigenvalues
            assert mu[0] >= -1e-8 and mu[-1] <= 2 + 1e-8
            assert abs(mu.sum() - n) <= 1e-8 * n
            assert mu[1] <= n / (n - 1) + 1e-9 <= mu[-1] + 2e-9


@pytest.mark.criterion(6)
def test_transition_matrix_stochastic_and_self_adjoint():
    rng = np.random.default_rng(13)
    for h in _random_instances(30, 13):
        for scheme in ("rodriguez", "banerjee", "normalized"):
            wa = resolve(scheme, h)
            P = build(h, wa, "transitionP").entries
            assert np.all(P >= 0)
            assert np.allclose(P.sum(axis=1), 1.0, atol=1e-12)
            # R = r * delta_v with r(v) = sum_{e ∋ v} delta_e (|e| - 1) / (delta_v |e|^2)
            R = np.array([sum(wa.delta_e[k] * (len(e) - 1) / len(e) ** 2 for k, e in enumerate(h.edges) if v in e) for v in h.vertices])
            x, y = rng.standard_normal((2, h.n_vertices))
            assert np.isclose(np.sum(R * (P @ x) * y), np.sum(R * x * (P @ y)), rtol=1e-10, atol=1e-12)


@pytest.mark.criterion(6)
def test_diffusion_conserves_weighted_mass():
    rng = np.random.default_rng(14)
    for h in _random_instances(20, 14):
        for scheme in ("rodriguez", "banerjee", "normalized"):
            wa = resolve(scheme, h)
            traj = diffuse(h, wa, rng.random(h.n_vertices), T=10.0, dt=0.01)
            assert np.max(np.abs(traj.conserved - traj.conserved[0])) <= 1e-9


@pytest.mark.criterion(6)
def test_random_walk_reaches_projection_limit():
    rng = np.random.default_rng(15)
    for h in _random_instances(20, 15):
        for scheme in ("rodriguez", "banerjee", "normalized"):
            wa = resolve(scheme, h)
            p0 = rng.random(h.n_vertices)
            res = random_walk(h, wa, p0)
            assert res.limit is not None, res.note
            assert np.max(np.abs(res.trajectory.final() - res.limit)) <= 1e-6


@pytest.mark.criterion(6)
def test_diameter_below_distinct_eigenvalue_count(h20, h11):
    instances = [fam.hypergraph for _, fam in family_instances()] + [h20, h11]
    for h in instances:
        for scheme in ("rodriguez", "banerjee", "normalized"):
            wa = resolve(scheme, h)
            spectrum = eig(build(h, wa, "inducedB"), wa, vectors=False)
            assert h.diameter() <= spectrum.distinct_count() - 1
