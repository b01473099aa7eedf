"""Vertex/edge weight functions and the weighted inner products they define."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import (
    DimensionMismatch,
    IsolatedVertexUnderNormalized,
    MissingCustomValue,
    NonPositiveCustom,
    ValidationError,
)
from .hypergraph import Hypergraph

PRESETS = ("rodriguez", "banerjee", "normalized", "signless")
SCHEME_KINDS = PRESETS + ("custom",)


@dataclass(frozen=True)
class WeightScheme:
    """A named choice of vertex weights ``delta_v`` and edge weights ``delta_e``.

    Presets (``s = |e|``, ``w`` the stored hyperedge weight):

    ============  =========  ===================
    kind          delta_v    delta_e
    ============  =========  ===================
    rodriguez     1          s**2
    banerjee      1          w * s**2 / (s - 1)
    normalized    |E_v|      s**2 / (s - 1)
    signless      1          s**2
    ============  =========  ===================

    ``custom`` requires explicit values for every vertex and every edge.
    """

    kind: str
    custom_delta_v: Mapping | None = None
    custom_delta_e: Mapping | None = None

    def __post_init__(self):
        if self.kind not in SCHEME_KINDS:
            raise ValidationError(f"unknown weight scheme {self.kind!r}; choose from {', '.join(SCHEME_KINDS)}")


@dataclass(frozen=True, eq=False)
class WeightAssignment:
    """Resolved, strictly positive weights aligned with the hypergraph's canonical order."""

    delta_v: np.ndarray
    delta_e: np.ndarray
    scheme: str = "custom"
    fingerprint: str = field(default="", compare=False)

    def __post_init__(self):
        dv = np.asarray(self.delta_v, dtype=float).copy()
        de = np.asarray(self.delta_e, dtype=float).copy()
        dv.setflags(write=False)
        de.setflags(write=False)
        object.__setattr__(self, "delta_v", dv)
        object.__setattr__(self, "delta_e", de)
        if not self.fingerprint:
            digest = hashlib.sha256(dv.tobytes() + b"|" + de.tobytes()).hexdigest()[:16]
            object.__setattr__(self, "fingerprint", digest)

    def __eq__(self, other):
        if not isinstance(other, WeightAssignment):
            return NotImplemented
        return self.fingerprint == other.fingerprint

    def __hash__(self):
        return hash(self.fingerprint)

    def inner_v(self, x, y) -> float:
        return inner_product_v(self, x, y)

    def inner_e(self, beta, gamma) -> float:
        return inner_product_e(self, beta, gamma)


def _custom_values(values, keys, what) -> np.ndarray:
    if values is None:
        raise MissingCustomValue(f"custom scheme needs {what} values")
    out = np.empty(len(keys))
    for i, key in enumerate(keys):
        if key in values:
            val = values[key]
        elif str(key) in values:
            val = values[str(key)]
        else:
            raise MissingCustomValue(f"custom scheme has no {what} value for {key!r}")
        val = float(val)
        if not val > 0 or not np.isfinite(val):
            raise NonPositiveCustom(f"custom {what} value for {key!r} is {val}; must be positive")
        out[i] = val
    return out


def resolve(scheme: WeightScheme | str, h: Hypergraph) -> WeightAssignment:
    """Evaluate a scheme on ``h``.

    Raises
    ------
    IsolatedVertexUnderNormalized
        ``normalized`` with a vertex in no edge (its weight would be 0).
    MissingCustomValue, NonPositiveCustom
        Incomplete or invalid ``custom`` values.
    """
    if isinstance(scheme, str):
        scheme = WeightScheme(scheme)
    sizes = h.edge_sizes
    ones_v = np.ones(h.n_vertices)

    if scheme.kind in ("rodriguez", "signless"):
        return WeightAssignment(ones_v, sizes**2, scheme.kind)
    if scheme.kind == "banerjee":
        w = np.asarray(h.edge_weights, dtype=float)
        return WeightAssignment(ones_v, w * sizes**2 / (sizes - 1), scheme.kind)
    if scheme.kind == "normalized":
        stars = h.star_sizes()
        if np.any(stars == 0):
            lonely = [h.vertices[i] for i in np.flatnonzero(stars == 0)]
            raise IsolatedVertexUnderNormalized(f"normalized weights need every vertex in an edge; isolated: {lonely}")
        return WeightAssignment(stars, sizes**2 / (sizes - 1), scheme.kind)

    dv = _custom_values(scheme.custom_delta_v, h.vertices, "vertex")
    de = _custom_values(scheme.custom_delta_e, list(range(h.n_edges)), "edge")
    return WeightAssignment(dv, de, "custom")


def _check(vec, n, what):
    vec = np.asarray(vec, dtype=float)
    if vec.shape[-1:] != (n,):
        raise DimensionMismatch(f"{what} has shape {vec.shape}, expected trailing dimension {n}")
    return vec


def inner_product_v(wa: WeightAssignment, x, y) -> float:
    """``sum_v delta_v(v) x(v) y(v)``."""
    n = len(wa.delta_v)
    return float(np.sum(wa.delta_v * _check(x, n, "x") * _check(y, n, "y")))


def inner_product_e(wa: WeightAssignment, beta, gamma) -> float:
    """``sum_e delta_e(e) beta(e) gamma(e)``."""
    m = len(wa.delta_e)
    return float(np.sum(wa.delta_e * _check(beta, m, "beta") * _check(gamma, m, "gamma")))
