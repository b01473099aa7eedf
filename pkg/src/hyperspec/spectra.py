"""Eigendecomposition in the weighted inner product, clustering and residual checks."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InvalidParams, NotSelfAdjointKind, NumericalFailure, SchemeMismatch, ZeroVector
from .operators import OperatorMatrix, build, degree_profile
from .tridiagonal import symmetric_eigh

VERIFY_TOLERANCE = 1e-7
RESIDUAL_FACTOR = 1e-8

SELF_ADJOINT_KINDS = ("Q", "L", "laplacian", "adjacency", "normalizedL", "deltaRW", "inducedB", "B0")


@dataclass(frozen=True)
class Cluster:
    value: float
    multiplicity: int
    members: tuple


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues, metric-orthonormal eigenvectors and multiplicity clusters.

    ``eigenvectors[i]`` is the vertex function for ``eigenvalues[i]``.
    ``metric`` is the diagonal of the inner product in which the operator is
    self-adjoint and the eigenvectors are orthonormal (``delta_v`` for most
    kinds, ``r * delta_v`` for ``deltaRW``, ones for ``inducedB``/``B0``).
    """

    kind: str
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    metric: np.ndarray
    clusters: tuple
    tolerance: float
    scheme_tag: str
    spectral_radius: float = field(default=0.0)
    operator: OperatorMatrix | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.eigenvalues)

    def multiplicity_near(self, value: float, tol: float = VERIFY_TOLERANCE) -> int:
        """Total multiplicity of the clusters whose representative lies within ``tol`` of ``value``."""
        return sum(c.multiplicity for c in self.clusters if abs(c.value - value) <= tol)

    def contains(self, value: float, multiplicity: int = 1, tol: float = VERIFY_TOLERANCE) -> bool:
        return self.multiplicity_near(value, tol) >= multiplicity

    def distinct_count(self) -> int:
        return len(self.clusters)


def metric_for(m: OperatorMatrix) -> np.ndarray:
    if m.kind not in SELF_ADJOINT_KINDS:
        raise NotSelfAdjointKind(f"{m.kind} is not diagonalized directly; use deltaRW (= I - transitionP) instead")
    return m.metric


def _cluster(values: np.ndarray, tol: float) -> tuple:
    clusters = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] - values[i - 1] > tol:
            members = tuple(range(start, i))
            clusters.append(Cluster(float(np.mean(values[start:i])), i - start, members))
            start = i
    return tuple(clusters)


def default_tolerance(spectral_radius: float) -> float:
    return max(1e-8, 1e-10 * spectral_radius)


def cluster_multiplicities(spectrum: Spectrum | np.ndarray, tol: float | None = None) -> tuple:
    """Greedy ascending clustering: neighbours within ``tol`` share a cluster."""
    values = np.asarray(spectrum.eigenvalues if isinstance(spectrum, Spectrum) else spectrum, dtype=float)
    if tol is None:
        radius = float(np.max(np.abs(values))) if values.size else 0.0
        tol = default_tolerance(radius)
    return _cluster(np.sort(values), tol)


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude entry of every row positive (first index on ties)."""
    mags = np.abs(vectors)
    peak = mags.max(axis=1, keepdims=True)
    first = np.argmax(mags >= peak - 1e-12 * np.maximum(peak, 1.0), axis=1)
    signs = np.sign(vectors[np.arange(len(vectors)), first])
    signs[signs == 0] = 1.0
    return vectors * signs[:, None]


def eig(
    m: OperatorMatrix,
    wa=None,
    *,
    vectors: bool = True,
    tol: float | None = None,
    method: str = "ql",
) -> Spectrum:
    """Eigen-decomposition of a self-adjoint operator.

    The matrix is symmetrized as ``D^1/2 M D^-1/2`` with ``D`` the operator's
    metric, diagonalized, and eigenvectors mapped back by ``D^-1/2`` so that
    they are orthonormal in the weighted inner product.

    Parameters
    ----------
    m : OperatorMatrix
    wa : WeightAssignment, optional
        Must match the assignment ``m`` was built with (checked).
    vectors : bool
        Compute eigenvectors.
    tol : float, optional
        Clustering threshold; defaults to ``max(1e-8, 1e-10 * spectral radius)``.
    method : {"ql", "lapack"}
        ``ql`` is the built-in Householder/QL solver, ``lapack`` uses numpy.
    """
    if wa is not None and wa.fingerprint != m.scheme_tag:
        raise SchemeMismatch("operator was built from a different weight assignment")
    metric = metric_for(m)
    root = np.sqrt(metric)
    S = root[:, None] * m.entries / root[None, :]
    S = 0.5 * (S + S.T)
    if method == "ql":
        values, U = symmetric_eigh(S, vectors)
    elif method == "lapack":
        if vectors:
            values, U = np.linalg.eigh(S)
        else:
            values, U = np.linalg.eigvalsh(S), None
    else:
        raise InvalidParams(f"unknown eigensolver method {method!r}")
    if not np.all(np.isfinite(values)):
        raise NumericalFailure("eigensolver produced non-finite values")

    vecs = None
    if vectors:
        vecs = _fix_signs((U / root[:, None]).T)
        vecs.setflags(write=False)
    values = np.asarray(values, dtype=float)
    values.setflags(write=False)
    radius = float(np.max(np.abs(values))) if values.size else 0.0
    if tol is None:
        tol = default_tolerance(radius)
    return Spectrum(
        kind=m.kind,
        eigenvalues=values,
        eigenvectors=vecs,
        metric=metric,
        clusters=_cluster(values, tol),
        tolerance=tol,
        scheme_tag=m.scheme_tag,
        spectral_radius=radius,
        operator=m,
    )


def rayleigh(m: OperatorMatrix, wa=None, x=None) -> float:
    """Rayleigh quotient in the operator's metric.

    For the diffusion operator ``L`` the sign is flipped, giving the quotient
    of ``-L`` whose infimum over ``x ⟂ 1`` is the algebraic connectivity.
    """
    if x is None:
        raise ZeroVector("rayleigh needs a vector")
    x = np.asarray(x, dtype=float)
    if x.shape != (m.size,):
        raise DimensionMismatch(f"vector of length {x.shape} for a {m.size}x{m.size} operator")
    metric = metric_for(m)
    denom = float(np.sum(metric * x * x))
    if denom == 0.0:
        raise ZeroVector("rayleigh quotient of the zero vector")
    num = float(np.sum(metric * (m.entries @ x) * x))
    return -num / denom if m.kind == "L" else num / denom


@dataclass(frozen=True)
class ResidualReport:
    residuals: tuple
    rank: int
    count: int
    threshold: float
    passed: bool


def spectral_radius(m: OperatorMatrix) -> float:
    try:
        metric = metric_for(m)
    except NotSelfAdjointKind:
        return float(np.max(np.abs(np.linalg.eigvals(m.entries))))
    root = np.sqrt(metric)
    S = root[:, None] * m.entries / root[None, :]
    return float(np.max(np.abs(np.linalg.eigvalsh(0.5 * (S + S.T)))))


def residual_check(m: OperatorMatrix, value: float, vectors, radius: float | None = None) -> ResidualReport:
    """Check that every vector satisfies ``M z = value z`` and that the set is independent."""
    V = np.atleast_2d(np.asarray(vectors, dtype=float))
    if V.size == 0:
        return ResidualReport((), 0, 0, 0.0, False)
    if V.shape[1] != m.size:
        raise DimensionMismatch(f"vectors of length {V.shape[1]} for a {m.size}x{m.size} operator")
    if radius is None:
        radius = spectral_radius(m)
    threshold = RESIDUAL_FACTOR * max(1.0, radius)
    res = np.max(np.abs(V @ m.entries.T - value * V), axis=1)
    rank = int(np.linalg.matrix_rank(V @ V.T))
    passed = bool(np.all(res <= threshold) and rank == V.shape[0])
    return ResidualReport(tuple(float(r) for r in res), rank, V.shape[0], threshold, passed)


def laplacian_spectrum(h, wa, **kwargs) -> Spectrum:
    """Convenience: spectrum of ``-L`` (the general Laplacian)."""
    return eig(build(h, wa, "laplacian"), wa, **kwargs)


def algebraic_connectivity(spectrum: Spectrum) -> float:
    """Second smallest eigenvalue of a Laplacian spectrum."""
    if len(spectrum) < 2:
        return 0.0
    return float(spectrum.eigenvalues[1])


__all__ = [
    "Cluster",
    "Spectrum",
    "eig",
    "cluster_multiplicities",
    "rayleigh",
    "residual_check",
    "ResidualReport",
    "metric_for",
    "spectral_radius",
    "laplacian_spectrum",
    "algebraic_connectivity",
    "degree_profile",
]
