"""Closed-form eigenvalue predictions derived from hypergraph structure.

Each predictor finds every structural witness in the hypergraph, checks the
weight hypotheses exactly, and emits an :class:`EigenPrediction` carrying the
predicted eigenvalue, a lower bound on its multiplicity and an explicit
eigenvector basis built from ``±1`` entries.

All witness searches reduce to twin classes (vertices with identical stars):
a vertex set that meets no hyperedge outside a fixed family ``E_0`` and lies
in every member of ``E_0`` has the star ``E_0`` at every vertex, so it is
contained in a twin class, and the class itself is the largest such set.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import HypothesisViolated, InvalidParams, MissingAnnotations, SchemeMismatch
from .families import GeneratedFamily
from .hypergraph import Hypergraph
from .spectra import Spectrum, residual_check
from .weights import WeightAssignment

PREDICTION_KINDS = ("L", "laplacian", "adjacency")
CONSTANCY_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class EigenPrediction:
    operator_kind: str
    value: float
    multiplicity_lower_bound: int
    basis: np.ndarray  # one vertex function per row
    theorem: str
    witness: dict = field(default_factory=dict)
    scheme_tag: str = ""

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "operator_kind": self.operator_kind,
            "value": float(self.value),
            "multiplicity_lower_bound": int(self.multiplicity_lower_bound),
            "witness": self.witness,
        }


def _constant(values) -> float | None:
    """The common value of ``values`` if they agree to 1e-12 relative, else None."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return None
    ref = float(values[0])
    if np.all(np.abs(values - ref) <= CONSTANCY_RTOL * max(abs(ref), np.finfo(float).tiny)):
        return ref
    return None


def _difference_basis(n: int, anchor: int, others) -> np.ndarray:
    """Rows ``1_{v_i} - 1_{v_0}`` for each ``v_i`` in ``others``."""
    rows = np.zeros((len(others), n))
    for row, i in enumerate(others):
        rows[row, i] = 1.0
        rows[row, anchor] = -1.0
    return rows


def _block_difference_basis(n: int, anchor_block, blocks) -> np.ndarray:
    rows = np.zeros((len(blocks), n))
    for row, block in enumerate(blocks):
        rows[row, block] = 1.0
        rows[row, anchor_block] = -1.0
    return rows


def _check_kind(kind, allowed=PREDICTION_KINDS):
    if kind not in allowed:
        raise InvalidParams(f"predictions exist for operator kinds {allowed}, not {kind!r}")


def _finish(predictions: list, kind: str) -> list:
    """Convert diffusion-operator predictions to the requested sign convention."""
    if kind != "laplacian":
        return predictions
    return [
        EigenPrediction("laplacian", -p.value, p.multiplicity_lower_bound, p.basis, p.theorem, p.witness, p.scheme_tag)
        for p in predictions
    ]


def _names(h: Hypergraph, idx) -> list:
    return [h.vertices[i] for i in idx]


def _note(reasons, message):
    if reasons is not None:
        reasons.append(message)


def _intersection_witnesses(h: Hypergraph, wa: WeightAssignment, reasons):
    """Twin classes W with star E_0, |W| >= 2, W = ∩E_0 and constant vertex weight."""
    for members, star in h.twin_groups():
        if not star or len(members) < 2:
            continue
        common = frozenset.intersection(*(h.edges[k] for k in star))
        names = _names(h, members)
        if common != frozenset(names):
            _note(reasons, f"twin class {names}: the edges of its star also share {sorted(map(str, common - set(names)))}")
            continue
        c = _constant(wa.delta_v[members])
        if c is None:
            _note(reasons, f"twin class {names}: vertex weight is not constant")
            continue
        yield members, sorted(star), c


def predict_intersection_family(h: Hypergraph, wa: WeightAssignment, operator_kind: str = "L", reasons=None) -> list:
    """Eigenvalue ``-(1/c) sum_{e in E_0} delta_e(e)/|e|`` of L, multiplicity >= |W| - 1.

    Applies to every vertex set ``W`` (|W| >= 2) that is exactly the common
    intersection of the edges ``E_0`` containing it, meets no other edge, and
    carries a constant vertex weight ``c``.
    """
    _check_kind(operator_kind, ("L", "laplacian"))
    out = []
    s = h.edge_sizes
    for members, star, c in _intersection_witnesses(h, wa, reasons):
        value = -float(np.sum(wa.delta_e[star] / s[star])) / c
        out.append(
            EigenPrediction(
                "L",
                value,
                len(members) - 1,
                _difference_basis(h.n_vertices, members[0], members[1:]),
                "intersection_family",
                {"W": _names(h, members), "E_0": star, "c": c},
                wa.fingerprint,
            )
        )
    return _finish(out, operator_kind)


def predict_adjacency_intersection(h: Hypergraph, wa: WeightAssignment, reasons=None) -> list:
    """Adjacency eigenvalue ``-nu`` with ``nu = sum_{e in E_0} delta_e(e)/(c |e|^2)``, multiplicity >= |W| - 1."""
    out = []
    s = h.edge_sizes
    for members, star, c in _intersection_witnesses(h, wa, reasons):
        nu = float(np.sum(wa.delta_e[star] / s[star] ** 2)) / c
        out.append(
            EigenPrediction(
                "adjacency",
                -nu,
                len(members) - 1,
                _difference_basis(h.n_vertices, members[0], members[1:]),
                "adjacency_intersection",
                {"W": _names(h, members), "E_0": star, "c": c, "nu": nu},
                wa.fingerprint,
            )
        )
    return out


def _cored_groups(h: Hypergraph, wa: WeightAssignment, reasons=None):
    """Per edge, groups of its degree-1 vertices sharing one vertex weight."""
    for members, star in h.twin_groups():
        if len(star) != 1:
            continue
        (edge,) = star
        groups: dict = {}
        for i in members:
            key = None
            for existing in groups:
                if _constant([existing, wa.delta_v[i]]) is not None:
                    key = existing
                    break
            groups.setdefault(float(wa.delta_v[i]) if key is None else key, []).append(i)
        if len(groups) > 1:
            parts = [_names(h, g) for g in groups.values()]
            _note(reasons, f"cored twins in edge {edge}: vertex weights differ, split into {parts}")
        for c, group in groups.items():
            yield edge, group, c


def predict_cored_twins(h: Hypergraph, wa: WeightAssignment, operator_kind: str = "L", reasons=None) -> list:
    """Eigenvalues from groups ``e_u`` of cored twins inside one edge ``e_0``.

    L: ``-delta_e(e_0)/(c |e_0|)``; adjacency: ``-delta_e(e_0)/(c |e_0|^2)``;
    multiplicity >= |e_u| - 1 in both cases.
    """
    _check_kind(operator_kind)
    out = []
    for edge, group, c in _cored_groups(h, wa, reasons):
        if len(group) < 2:
            continue
        size = h.edge_sizes[edge]
        value = -wa.delta_e[edge] / (c * size)
        if operator_kind == "adjacency":
            value /= size
        out.append(
            EigenPrediction(
                "adjacency" if operator_kind == "adjacency" else "L",
                float(value),
                len(group) - 1,
                _difference_basis(h.n_vertices, group[0], group[1:]),
                "cored_twins",
                {"e_0": int(edge), "e_u": _names(h, group), "c": c},
                wa.fingerprint,
            )
        )
    return _finish(out, operator_kind)


def predict_equal_petals(h: Hypergraph, wa: WeightAssignment, operator_kind: str = "L", reasons=None) -> list:
    """Eigenvalues from a core ``W`` shared by edges ``W ∪ F_i`` with private petals of equal size.

    L: ``-(omega/c) |W|``; adjacency: ``(omega/c)(t - 1)``; multiplicity
    >= |E_0| - 1, where ``omega = delta_e(e)/|e|^2`` is constant on ``E_0``
    and ``c`` is the constant vertex weight on the petals.
    """
    _check_kind(operator_kind)
    stars = h._stars
    out = []
    for members, star in h.twin_groups():
        if len(star) < 2:
            continue
        star = sorted(star)
        core = set(members)
        names = _names(h, members)
        if frozenset.intersection(*(h.edges[k] for k in star)) != frozenset(names):
            _note(reasons, f"core {names}: its edges share further vertices")
            continue
        petals = [sorted(set(h.edge_members[k].tolist()) - core) for k in star]
        sizes = {len(p) for p in petals}
        if len(sizes) != 1 or 0 in sizes:
            _note(reasons, f"core {names}: petals have sizes {sorted(len(p) for p in petals)}")
            continue
        if any(len(stars[i]) != 1 for p in petals for i in p):
            _note(reasons, f"core {names}: a petal vertex lies in another edge")
            continue
        c = _constant(wa.delta_v[[i for p in petals for i in p]])
        omega = _constant(wa.delta_e[star] / h.edge_sizes[star] ** 2)
        if c is None or omega is None:
            _note(reasons, f"core {names}: petal vertex weights or delta_e/|e|^2 not constant")
            continue
        t = sizes.pop()
        if operator_kind == "adjacency":
            value = omega / c * (t - 1)
        else:
            value = -omega / c * len(members)
        out.append(
            EigenPrediction(
                "adjacency" if operator_kind == "adjacency" else "L",
                float(value),
                len(star) - 1,
                _block_difference_basis(h.n_vertices, petals[0], petals[1:]),
                "equal_petals",
                {"W": names, "E_0": star, "petals": [_names(h, p) for p in petals], "t": t, "c": c, "omega": omega},
                wa.fingerprint,
            )
        )
    return _finish(out, operator_kind)


def _find_edge(h: Hypergraph, vertex_names) -> int:
    target = frozenset(vertex_names)
    for k, e in enumerate(h.edges):
        if e == target:
            return k
    raise MissingAnnotations(f"annotated edge {sorted(map(str, target))} is not a hyperedge")


def _annotated_cored(h, wa, operator_kind, edge, group_names, theorem, witness, reasons):
    group = h.indices(group_names)
    if len(group) < 2:
        _note(reasons, f"{theorem}: edge {edge} has fewer than two interchangeable vertices")
        return None
    c = _constant(wa.delta_v[group])
    if c is None:
        _note(reasons, f"{theorem}: vertex weight not constant on {group_names}")
        return None
    size = h.edge_sizes[edge]
    value = -wa.delta_e[edge] / (c * size)
    if operator_kind == "adjacency":
        value /= size
    return EigenPrediction(
        "adjacency" if operator_kind == "adjacency" else "L",
        float(value),
        len(group) - 1,
        _difference_basis(h.n_vertices, group[0], group[1:]),
        theorem,
        dict(witness, e_u=list(group_names), c=c, edge=int(edge)),
        wa.fingerprint,
    )


def predict_power_and_squid(
    h: Hypergraph, wa: WeightAssignment, annotations, operator_kind: str = "L", reasons=None
) -> list:
    """Predictions for graph powers and squids from generator annotations.

    Graph power: each base edge ``e`` contributes the vertices ``W_e`` plus
    any pendant endpoint (bound ``k - 3``, ``k - 2`` with one pendant).
    Squid: each peripheral edge ``U_i`` contributes ``U_i`` minus its hook
    into the central edge (bound ``k - 2``).
    """
    _check_kind(operator_kind)
    if isinstance(annotations, GeneratedFamily):
        annotations = annotations.annotations
    if not annotations or annotations.get("family") not in ("graph_power", "squid"):
        raise MissingAnnotations("graph power or squid annotations are required")
    out = []
    if annotations["family"] == "graph_power":
        for j, (pair, added, pend) in enumerate(
            zip(annotations["base_edges"], annotations["W"], annotations["pendant_endpoints"])
        ):
            edge = _find_edge(h, list(pair) + list(added))
            group = list(added) + list(pend)
            if pend and _constant(wa.delta_v[h.indices(group)]) is None:
                group = list(added)
            pred = _annotated_cored(h, wa, operator_kind, edge, group, "graph_power", {"base_edge": list(pair)}, reasons)
            if pred is not None:
                out.append(pred)
    else:
        for U in annotations["peripheral"]:
            edge = _find_edge(h, U)
            pred = _annotated_cored(h, wa, operator_kind, edge, list(U[1:]), "squid", {"U": list(U)}, reasons)
            if pred is not None:
                out.append(pred)
    return _finish(out, operator_kind)


def predict_all(h: Hypergraph, wa: WeightAssignment, operator_kind: str = "L", annotations=None, reasons=None) -> list:
    """Every applicable prediction for ``operator_kind`` (L, laplacian or adjacency)."""
    _check_kind(operator_kind)
    preds = []
    if operator_kind == "adjacency":
        preds += predict_adjacency_intersection(h, wa, reasons)
    else:
        preds += predict_intersection_family(h, wa, operator_kind, reasons)
    preds += predict_cored_twins(h, wa, operator_kind, reasons)
    preds += predict_equal_petals(h, wa, operator_kind, reasons)
    if annotations and annotations.get("family") in ("graph_power", "squid"):
        preds += predict_power_and_squid(h, wa, annotations, operator_kind, reasons)
    return preds


# -- hyperflower closed form ---------------------------------------------------


@dataclass(frozen=True)
class FullSpectrum:
    operator_kind: str
    values: tuple  # (value, multiplicity) pairs
    determinant: float | None = None

    def as_list(self) -> np.ndarray:
        out = [v for v, mult in self.values for _ in range(mult)]
        return np.sort(np.asarray(out, dtype=float))


def hyperflower_full_spectrum(spectrum, wa: WeightAssignment, operator_kind: str = "L") -> FullSpectrum:
    """Complete eigenvalue list of an ``(l, 1)``-hyperflower with ``t`` twins.

    Requires a constant vertex weight ``c`` on all of V and a constant
    ``omega = delta_e(e)/|e|^2``. For ``adjacency`` the determinant
    ``(-1)^(|V|-l-1) l (1-t-|W|) alpha^|V| (t-1)^(l-1) l^(|W|-1)`` with
    ``alpha = omega / c`` is also returned.
    """
    _check_kind(operator_kind)
    if isinstance(spectrum, GeneratedFamily):
        h, params = spectrum.hypergraph, spectrum.annotations["params"]
    else:
        h, params = spectrum
    l, r, t = int(params["l"]), int(params.get("r", 1)), int(params["t"])
    if r != 1:
        raise InvalidParams("the closed-form spectrum covers (l, 1)-hyperflowers only")
    cores = params.get("core_sizes", [2])
    w = int(cores[0] if isinstance(cores, (list, tuple)) else cores)

    c = _constant(wa.delta_v)
    omega = _constant(wa.delta_e / h.edge_sizes**2)
    if c is None:
        raise HypothesisViolated("vertex weight must be constant on the hyperflower")
    if omega is None:
        raise HypothesisViolated("delta_e(e)/|e|^2 must be constant on the hyperflower")
    alpha = omega / c
    n = l * t + w

    if operator_kind in ("L", "laplacian"):
        vals = [
            (0.0, 1),
            (-alpha * l * (w + t), w - 1),
            (-alpha * (w + t), l * (t - 1)),
            (-alpha * w, l - 1),
            (-alpha * n, 1),
        ]
        if operator_kind == "laplacian":
            vals = [(-v if v else 0.0, m) for v, m in vals]
        return FullSpectrum(operator_kind, tuple((float(v), m) for v, m in vals if m > 0))

    roots = np.roots([w, t + l - l * w - 1, -l * t])
    vals = [(alpha * (w * float(g) + t - 1), 1) for g in np.real(roots)]
    vals += [(-alpha, l * (t - 1)), (alpha * (t - 1), l - 1), (-l * alpha, w - 1)]
    det = (-1.0) ** (n - l - 1) * l * (1 - t - w) * alpha**n * float(t - 1) ** (l - 1) * float(l) ** (w - 1)
    return FullSpectrum("adjacency", tuple((float(v), m) for v, m in vals if m > 0), det)


# -- verification ---------------------------------------------------------------


@dataclass(frozen=True)
class PredictionCheck:
    prediction: EigenPrediction
    found_multiplicity: int
    residuals: tuple
    rank: int
    passed: bool

    def to_dict(self) -> dict:
        d = self.prediction.to_dict()
        d.update(
            found_multiplicity=self.found_multiplicity,
            max_residual=max(self.residuals) if self.residuals else None,
            basis_rank=self.rank,
            passed=self.passed,
        )
        return d


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {"passed": self.passed, "predictions": [c.to_dict() for c in self.checks]}


def verify(predictions, spectrum: Spectrum, tol: float = 1e-7) -> VerificationReport:
    """Check each prediction against a computed spectrum of the same operator and weights."""
    checks = []
    for p in predictions:
        if p.scheme_tag and p.scheme_tag != spectrum.scheme_tag:
            raise SchemeMismatch("prediction and spectrum were built from different weight assignments")
        if p.operator_kind != spectrum.kind:
            raise InvalidParams(f"{p.operator_kind} prediction checked against a {spectrum.kind} spectrum")
        found = spectrum.multiplicity_near(p.value, tol)
        if spectrum.operator is not None:
            rep = residual_check(spectrum.operator, p.value, p.basis, spectrum.spectral_radius)
            residuals, rank, ok = rep.residuals, rep.rank, rep.passed
        else:
            residuals, rank, ok = (), 0, False
        passed = bool(ok and rank == p.multiplicity_lower_bound and found >= p.multiplicity_lower_bound)
        checks.append(PredictionCheck(p, found, residuals, rank, passed))
    return VerificationReport(tuple(checks))
