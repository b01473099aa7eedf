"""Dense matrix realizations of the hypergraph connectivity operators.

Every operator is built from the incidence matrix ``H`` (vertices x edges),
edge sizes ``s`` and a weight assignment ``(delta_v, delta_e)``:

* ``Q = D_v^-1 H diag(delta_e / s^2) H^T``  (averaging followed by its adjoint)
* ``L = Q - diag(Q 1)``                     (diffusion operator, negative semidefinite)
* ``laplacian = -L``
* ``adjacency = L + diag(r)``               (zero diagonal)
* ``inducedB = D_v adjacency``              (symmetric)
* ``B0``                                    (0/1 co-membership pattern)
* ``normalizedL = G laplacian G`` with ``G = diag(r^-1/2)``
* ``transitionP = diag(1/r) adjacency`` and ``deltaRW = I - transitionP``
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, IsolatedVertex, SchemeMismatch, UnknownKind
from .hypergraph import Hypergraph
from .weights import WeightAssignment

KINDS = ("Q", "L", "laplacian", "adjacency", "inducedB", "B0", "normalizedL", "transitionP", "deltaRW")
NEEDS_POSITIVE_DEGREE = ("normalizedL", "transitionP", "deltaRW")


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    kind: str
    entries: np.ndarray
    weights: WeightAssignment
    metric: np.ndarray  # diagonal inner product in which the operator is self-adjoint

    @property
    def scheme_tag(self) -> str:
        return self.weights.fingerprint

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def __matmul__(self, x):
        return apply(self, x)


@dataclass(frozen=True)
class DegreeProfile:
    r: np.ndarray
    r0: float
    n: np.ndarray


def _check_weights(h: Hypergraph, wa: WeightAssignment):
    if len(wa.delta_v) != h.n_vertices or len(wa.delta_e) != h.n_edges:
        raise SchemeMismatch(
            f"weights sized ({len(wa.delta_v)}, {len(wa.delta_e)}) for a hypergraph with "
            f"{h.n_vertices} vertices and {h.n_edges} edges"
        )


def avg(h: Hypergraph, x) -> np.ndarray:
    """Edge function: the mean of ``x`` over each hyperedge."""
    x = np.asarray(x, dtype=float)
    if x.shape != (h.n_vertices,):
        raise DimensionMismatch(f"vertex function has shape {x.shape}, expected ({h.n_vertices},)")
    return (h.incidence.T @ x) / h.edge_sizes


def avg_adjoint(h: Hypergraph, wa: WeightAssignment, beta) -> np.ndarray:
    """Adjoint of :func:`avg` for the weighted inner products."""
    _check_weights(h, wa)
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (h.n_edges,):
        raise DimensionMismatch(f"edge function has shape {beta.shape}, expected ({h.n_edges},)")
    return (h.incidence @ (beta * wa.delta_e / h.edge_sizes)) / wa.delta_v


def degree_profile(h: Hypergraph, wa: WeightAssignment) -> DegreeProfile:
    """Generalized degree ``r`` (with maximum ``r0``) and ``n = Q 1``."""
    _check_weights(h, wa)
    H, s = h.incidence, h.edge_sizes
    if h.n_edges:
        r = (H @ (wa.delta_e * (s - 1) / s**2)) / wa.delta_v
        n = (H @ (wa.delta_e / s)) / wa.delta_v
    else:
        r = np.zeros(h.n_vertices)
        n = np.zeros(h.n_vertices)
    return DegreeProfile(r=r, r0=float(r.max()), n=n)


def _induced_b(h: Hypergraph, wa: WeightAssignment) -> np.ndarray:
    H, s = h.incidence, h.edge_sizes
    B = (H * (wa.delta_e / s**2)) @ H.T
    np.fill_diagonal(B, 0.0)
    return B


def _require_positive_degree(h, r, kind):
    if np.any(r <= 0):
        lonely = [h.vertices[i] for i in np.flatnonzero(r <= 0)]
        raise IsolatedVertex(f"{kind} divides by r(v); isolated vertices: {lonely}")


def build(h: Hypergraph, wa: WeightAssignment, kind: str) -> OperatorMatrix:
    """Assemble operator ``kind`` as a dense ``|V| x |V|`` matrix."""
    if kind not in KINDS:
        raise UnknownKind(f"unknown operator kind {kind!r}; choose from {', '.join(KINDS)}")
    _check_weights(h, wa)
    H, s, dv = h.incidence, h.edge_sizes, wa.delta_v

    if kind == "B0":
        M = (H @ H.T > 0).astype(float)
        np.fill_diagonal(M, 0.0)
    elif kind == "inducedB":
        M = _induced_b(h, wa)
    else:
        prof = degree_profile(h, wa)
        if kind in NEEDS_POSITIVE_DEGREE:
            _require_positive_degree(h, prof.r, kind)
        if kind == "Q":
            M = ((H * (wa.delta_e / s**2)) @ H.T) / dv[:, None]
        elif kind in ("L", "laplacian"):
            Q = ((H * (wa.delta_e / s**2)) @ H.T) / dv[:, None]
            M = Q - np.diag(prof.n)
            if kind == "laplacian":
                M = -M
        else:
            A = _induced_b(h, wa) / dv[:, None]
            if kind == "adjacency":
                M = A
            elif kind == "normalizedL":
                # laplacian = diag(r) - A, so G laplacian G = I - G A G
                g = 1.0 / np.sqrt(prof.r)
                M = np.eye(h.n_vertices) - g[:, None] * A * g[None, :]
            elif kind == "transitionP":
                M = A / prof.r[:, None]
            else:
                M = np.eye(h.n_vertices) - A / prof.r[:, None]
    if kind in ("B0", "inducedB"):
        metric = np.ones(h.n_vertices)
    elif kind in ("transitionP", "deltaRW"):
        metric = prof.r * dv
    else:
        metric = np.asarray(dv, dtype=float)
    M = np.ascontiguousarray(M)
    M.setflags(write=False)
    return OperatorMatrix(kind, M, wa, metric)


def apply(m: OperatorMatrix, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[0] != m.size:
        raise DimensionMismatch(f"vector of length {x.shape[0]} for a {m.size}x{m.size} operator")
    return m.entries @ x


def weighted_underlying_graph(h: Hypergraph, wa: WeightAssignment) -> dict:
    """Edge weights of the underlying graph: ``{(i, j): sum_{e ∋ i,j} delta_e / |e|^2}`` for ``i < j``."""
    _check_weights(h, wa)
    out: dict = {}
    for k, members in enumerate(h.edge_members):
        w = wa.delta_e[k] / len(members) ** 2
        ms = members.tolist()
        for a in range(len(ms)):
            for b in range(a + 1, len(ms)):
                out[(ms[a], ms[b])] = out.get((ms[a], ms[b]), 0.0) + w
    return out
