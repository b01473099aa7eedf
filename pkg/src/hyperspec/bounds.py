"""Spectral inequalities and the exact combinatorial quantities they involve.

The exact quantities (weak connectivity number, maximum cut, bipartition
width, Cheeger constant) come from exhaustive subset enumeration and are
gated by vertex count. Subset scans are vectorized: a chunk of subsets is
encoded as a 0/1 membership matrix and multiplied by the incidence matrix,
which gives ``|e ∩ S|`` for every edge and subset at once.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import Disconnected, NoWeakCut, SchemeMismatch, TooLarge
from .hypergraph import Hypergraph
from .operators import build, degree_profile
from .spectra import Spectrum, eig
from .weights import WeightAssignment

EXACT_LIMIT = 20
CHUNK = 1 << 15
REL_SLACK = 1e-9


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("HYPERSPEC_THREADS", "1")))
    except ValueError:
        return 1


# -- weak connectivity --------------------------------------------------------


@dataclass(frozen=True)
class KappaResult:
    value: int
    witness: tuple


def _adjacency_masks(h: Hypergraph) -> list[int]:
    masks = [0] * h.n_vertices
    for members in h.edge_members:
        bits = 0
        for i in members.tolist():
            bits |= 1 << i
        for i in members.tolist():
            masks[i] |= bits & ~(1 << i)
    return masks


def _count_components(adj: list[int], alive: int) -> int:
    count = 0
    while alive:
        low = alive & -alive
        seen = frontier = low
        while frontier:
            nxt = 0
            f = frontier
            while f:
                b = f & -f
                nxt |= adj[b.bit_length() - 1]
                f ^= b
            frontier = nxt & alive & ~seen
            seen |= frontier
        alive &= ~seen
        count += 1
    return count


def exact_kappa_w(h: Hypergraph, limit: int = EXACT_LIMIT) -> KappaResult:
    """Minimum number of vertices whose weak deletion increases the component count.

    Weak deletion keeps every remaining pair that shared an edge adjacent, so
    the remainder's components are those of the underlying graph restricted
    to ``V ∖ S``. The search runs over subsets in ascending size.

    Raises
    ------
    TooLarge
        ``|V| > limit``.
    NoWeakCut
        Every pair of vertices is adjacent (no weak deletion can disconnect).
    """
    n = h.n_vertices
    if n > limit:
        raise TooLarge(f"weak connectivity search limited to {limit} vertices, got {n}")
    adj = _adjacency_masks(h)
    full = (1 << n) - 1
    if all(adj[i] | (1 << i) == full for i in range(n)):
        raise NoWeakCut("every pair of vertices shares a hyperedge; no weak vertex cut exists")
    base = _count_components(adj, full)
    for size in range(1, n - 1):
        for S in combinations(range(n), size):
            removed = 0
            for i in S:
                removed |= 1 << i
            if _count_components(adj, full & ~removed) > base:
                return KappaResult(size, tuple(h.vertices[i] for i in S))
    raise NoWeakCut("no weak vertex cut found")


# -- cut enumeration ------------------------------------------------------------


@dataclass(frozen=True)
class CutResult:
    max_cut: int
    max_cut_witness: tuple
    bipartition_width: int
    bipartition_witness: tuple
    cheeger: float
    cheeger_witness: tuple
    ratio_min: float  # min over S of |dS| |V| / (|S| (|V| - |S|))
    ratio_min_witness: tuple
    ratio_max: float
    ratio_max_witness: tuple
    exhaustive: bool
    subsets_scanned: int


def _membership(masks: np.ndarray, n: int) -> np.ndarray:
    return ((masks[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(float)


def _scan(H: np.ndarray, sizes: np.ndarray, members: np.ndarray, half_sizes):
    """Reduce one chunk of subsets (rows of ``members``) to extremal cut statistics.

    Returns a dict of ``(value, row)`` pairs; ties keep the first row.
    """
    n = members.shape[1]
    counts = members @ H
    boundary = ((counts > 0) & (counts < sizes)).sum(axis=1).astype(float)
    s = members.sum(axis=1)
    ratio = boundary * n / (s * (n - s))
    cheeger = boundary / np.minimum(s, n - s)
    out = {
        "mc": (-boundary).argmin(),
        "h": cheeger.argmin(),
        "rmin": ratio.argmin(),
        "rmax": (-ratio).argmin(),
    }
    res = {
        "mc": (float(boundary[out["mc"]]), int(out["mc"])),
        "h": (float(cheeger[out["h"]]), int(out["h"])),
        "rmin": (float(ratio[out["rmin"]]), int(out["rmin"])),
        "rmax": (float(ratio[out["rmax"]]), int(out["rmax"])),
    }
    balanced = np.isin(s, half_sizes)
    if balanced.any():
        idx = np.flatnonzero(balanced)
        j = idx[boundary[idx].argmin()]
        res["bw"] = (float(boundary[j]), int(j))
    return res


def _better(key, a, b):
    """Pick the better of two ``(value, tiebreak)`` candidates for statistic ``key``."""
    if a is None:
        return b
    if b is None:
        return a
    maximize = key in ("mc", "rmax")
    va, vb = a[0], b[0]
    if va == vb:
        return a if a[1] <= b[1] else b
    return (a if va > vb else b) if maximize else (a if va < vb else b)


def _subset_names(h, row):
    return tuple(h.vertices[i] for i in np.flatnonzero(row))


def exact_cuts(h: Hypergraph, limit: int = EXACT_LIMIT, samples: int = 4096, seed: int = 0) -> CutResult:
    """Maximum cut, bipartition width, Cheeger constant and boundary-ratio extremes.

    Exhaustive over nonempty proper subsets when ``|V| <= limit`` (each
    complementary pair is visited once since ``|∂S| = |∂(V∖S)|``); otherwise
    ``samples`` random subsets plus all singletons are scanned and the result
    is marked non-exhaustive.
    """
    n = h.n_vertices
    if n < 2:
        raise TooLarge("cut quantities need at least two vertices")
    H = np.asarray(h.incidence, dtype=float)
    sizes = h.edge_sizes
    half_sizes = (n // 2, n - n // 2)
    exhaustive = n <= limit

    def chunk_rows(a, b):
        if exhaustive:
            return _membership(np.arange(a, b, dtype=np.int64), n)
        rng = np.random.default_rng((seed, a))
        rows = rng.integers(0, 2, size=(b - a, n)).astype(float)
        rows[:, -1] = 0.0
        empty = rows.sum(axis=1) == 0
        rows[empty, rng.integers(0, n - 1, size=empty.sum())] = 1.0
        return rows

    total = (1 << (n - 1)) - 1 if exhaustive else samples
    offset = 1 if exhaustive else 0
    bounds = [(offset + a, offset + min(a + CHUNK, total)) for a in range(0, total, CHUNK)]

    def work(ab):
        a, b = ab
        rows = chunk_rows(a, b)
        stats = _scan(H, sizes, rows, half_sizes)
        return {k: (v, (a, i), rows[i].copy()) for k, (v, i) in stats.items()}

    if not exhaustive:
        singles = np.eye(n)[: n - 1] if n > 1 else np.zeros((0, n))
        extra = [singles]
    else:
        extra = []

    threads = _threads()
    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, bounds))
    else:
        parts = [work(ab) for ab in bounds]
    for rows in extra:
        stats = _scan(H, sizes, rows, half_sizes)
        parts.append({k: (v, (-1, i), rows[i].copy()) for k, (v, i) in stats.items()})

    best: dict = {}
    for part in parts:
        for key, (value, order, row) in part.items():
            cur = best.get(key)
            cand = (value, order, row)
            if cur is None:
                best[key] = cand
            else:
                pick = _better(key, (cur[0], cur[1]), (value, order))
                best[key] = cur if pick == (cur[0], cur[1]) else cand

    def get(key):
        value, _, row = best[key]
        return value, _subset_names(h, row)

    mc, mc_w = get("mc")
    if "bw" in best:
        bw, bw_w = get("bw")
    else:
        bw, bw_w = float("nan"), ()
    # report the witness with |S| = floor(|V|/2)
    if bw_w and len(bw_w) != n // 2:
        bw_w = tuple(v for v in h.vertices if v not in set(bw_w))
    hg, h_w = get("h")
    rmin, rmin_w = get("rmin")
    rmax, rmax_w = get("rmax")
    scanned = total + (n - 1 if not exhaustive else 0)
    return CutResult(int(mc), mc_w, int(bw) if bw == bw else -1, bw_w, hg, h_w, rmin, rmin_w, rmax, rmax_w, exhaustive, scanned)


def cut_size(h: Hypergraph, S) -> int:
    return len(h.edge_boundary(S))


# -- the audit ---------------------------------------------------------------------


@dataclass(frozen=True)
class BoundRecord:
    name: str
    lhs: float | None
    rhs: float | None
    witness: object = None
    status: str = "evaluated"  # evaluated | sampled | hypothesis-failed | not-computed
    asserted: bool = True
    note: str = ""

    @property
    def slack(self) -> float | None:
        if self.lhs is None or self.rhs is None:
            return None
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool | None:
        if self.status not in ("evaluated", "sampled"):
            return None
        return bool(self.slack >= -REL_SLACK * max(1.0, abs(self.rhs)))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "holds": self.holds,
            "status": self.status,
            "asserted": self.asserted,
            "witness": list(self.witness) if isinstance(self.witness, tuple) else self.witness,
            "note": self.note,
        }


@dataclass(frozen=True)
class BoundReport:
    records: tuple
    exacts: dict = field(default_factory=dict)

    def __getitem__(self, name) -> BoundRecord:
        for r in self.records:
            if r.name == name:
                return r
        raise KeyError(name)

    def names(self) -> list[str]:
        return [r.name for r in self.records]

    @property
    def violations(self) -> list:
        return [r for r in self.records if r.asserted and r.holds is False]

    @property
    def all_hold(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"all_hold": self.all_hold, "exacts": self.exacts, "records": [r.to_dict() for r in self.records]}


def _uniform_gamma(m: int) -> float:
    return 1.0 if m % 2 == 0 else m * m / (m * m - 1.0)


def bisection_factor(n: int) -> float:
    """``|V| / (|S| (|V| - |S|))`` at ``|S| = floor(|V|/2)``: 4/n (even), 4n/(n^2 - 1) (odd)."""
    return 4.0 / n if n % 2 == 0 else 4.0 * n / (n * n - 1.0)


def audit_bounds(
    h: Hypergraph,
    wa: WeightAssignment,
    spectrum: Spectrum | None = None,
    *,
    exact_limit: int = EXACT_LIMIT,
    samples: int = 4096,
    seed: int = 0,
) -> BoundReport:
    """Evaluate both sides of every spectral inequality for the Laplacian ``-L``.

    ``spectrum`` must be the spectrum of ``laplacian`` (or ``L``, which is
    negated) built from ``wa``; it is computed when omitted.
    """
    if spectrum is None:
        spectrum = eig(build(h, wa, "laplacian"), wa, vectors=False)
    if spectrum.scheme_tag != wa.fingerprint:
        raise SchemeMismatch("spectrum was computed under different weights")
    if spectrum.kind == "L":
        lam = np.sort(-np.asarray(spectrum.eigenvalues))
    elif spectrum.kind == "laplacian":
        lam = np.asarray(spectrum.eigenvalues)
    else:
        raise SchemeMismatch(f"bounds need the Laplacian spectrum, got {spectrum.kind}")

    n = h.n_vertices
    prof = degree_profile(h, wa)
    r, r0 = prof.r, prof.r0
    dv, de = wa.delta_v, wa.delta_e
    sizes = h.edge_sizes
    lam2 = float(lam[1]) if n > 1 else 0.0
    lamN = float(lam[-1])
    dv_min, dv_max = float(dv.min()), float(dv.max())
    records: list[BoundRecord] = []
    exacts: dict = {}

    if h.n_edges == 0:
        return BoundReport((BoundRecord("all", None, None, status="hypothesis-failed", note="no hyperedges"),), {})
    de_min, de_max = float(de.min()), float(de.max())
    rk, cr = h.rank_corank()
    d_max = int(h.star_sizes().max())
    edge_factor = float(np.max(sizes**2 / ((sizes - 1) * de)))  # max_e |e|^2 / ((|e|-1) delta_e)
    kbar = float(np.max(de / sizes**2) / dv_min)  # sup over (e, v) of delta_e / (delta_v |e|^2)
    connected = h.is_connected()

    # vertex-degree chain
    if n >= 2:
        rdv = r * dv
        records += [
            BoundRecord("degree_lower", dv_min * lam2, n / (n - 1) * float(rdv.min()), h.vertices[int(rdv.argmin())]),
            BoundRecord("degree_middle", n / (n - 1) * float(rdv.min()), n / (n - 1) * float(rdv.max())),
            BoundRecord("degree_upper", n / (n - 1) * float(rdv.max()), lamN * dv_max, h.vertices[int(rdv.argmax())]),
        ]

    # weak connectivity
    kappa = None
    if n > exact_limit:
        for name in ("weak_connectivity", "weak_connectivity_unit"):
            records.append(BoundRecord(name, lam2, None, status="not-computed", note=f"|V| > {exact_limit}"))
    elif n < 3 or not connected:
        records.append(BoundRecord("weak_connectivity", lam2, None, status="hypothesis-failed", note="needs a connected hypergraph with |V| >= 3"))
    else:
        try:
            kappa = exact_kappa_w(h, exact_limit)
        except NoWeakCut:
            records.append(BoundRecord("weak_connectivity", lam2, None, status="hypothesis-failed", note="every pair of vertices is adjacent"))
    if kappa is not None:
        exacts["kappa_w"] = {"value": kappa.value, "witness": list(kappa.witness)}
        records.append(BoundRecord("weak_connectivity", lam2, kbar * d_max * kappa.value, kappa.witness, note=f"kbar={kbar!r}, d_max={d_max}"))
        records.append(
            BoundRecord(
                "weak_connectivity_proof_form",
                lam2,
                kbar * (d_max - 1) * kappa.value,
                kappa.witness,
                asserted=False,
                note="intermediate value kbar (d_max - 1) kappa_w, recorded for comparison only",
            )
        )
        unit_ok = wa.scheme == "banerjee" and not h.is_weighted and d_max < cr
        if unit_ok:
            records.append(BoundRecord("weak_connectivity_unit", lam2, float(kappa.value), kappa.witness))
        else:
            records.append(
                BoundRecord(
                    "weak_connectivity_unit",
                    lam2,
                    float(kappa.value),
                    kappa.witness,
                    status="hypothesis-failed",
                    note="needs unweighted banerjee weights and d_max < cr",
                )
            )
    if wa.scheme == "banerjee" and not h.is_weighted and cr > 1:
        records.append(BoundRecord("kbar_banerjee", kbar, d_max / (cr - 1.0)))

    # cut-based bounds
    if n < 2:
        return BoundReport(tuple(records), exacts)
    cuts = exact_cuts(h, exact_limit, samples=samples, seed=seed)
    status = "evaluated" if cuts.exhaustive else "sampled"
    exacts.update(
        {
            "exhaustive": cuts.exhaustive,
            "subsets_scanned": cuts.subsets_scanned,
            "max_cut": {"value": cuts.max_cut, "witness": list(cuts.max_cut_witness)},
            "bipartition_width": {"value": cuts.bipartition_width, "witness": list(cuts.bipartition_witness)},
            "cheeger": {"value": cuts.cheeger, "witness": list(cuts.cheeger_witness)},
        }
    )
    lower = 4 * lam2 * dv_min / de_max
    upper = lamN * dv_max * edge_factor
    records += [
        BoundRecord("boundary_lower", lower, cuts.ratio_min, cuts.ratio_min_witness, status),
        BoundRecord("boundary_upper", cuts.ratio_max, upper, cuts.ratio_max_witness, status),
        BoundRecord(
            "boundary_upper_rank",
            cuts.ratio_max,
            lamN * dv_max / de_min * rk**2 / (cr - 1),
            cuts.ratio_max_witness,
            status,
        ),
    ]
    if rk == cr:
        records.append(BoundRecord("uniform_boundary_lower", lower * _uniform_gamma(rk), cuts.ratio_min, cuts.ratio_min_witness, status, note=f"m={rk}"))
    records.append(BoundRecord("max_cut", float(cuts.max_cut), n / 4 * upper, cuts.max_cut_witness, status))
    alpha = bisection_factor(n)
    records += [
        BoundRecord("bipartition_lower", lower, alpha * cuts.bipartition_width, cuts.bipartition_witness, status),
        BoundRecord("bipartition_upper", alpha * cuts.bipartition_width, upper, cuts.bipartition_witness, status),
    ]
    hg = cuts.cheeger
    if connected:
        records.append(BoundRecord("cheeger_upper", lam2, 0.5 * de_max / dv_min * hg, cuts.cheeger_witness, status))
    else:
        records.append(BoundRecord("cheeger_upper", lam2, 0.5 * de_max / dv_min * hg, cuts.cheeger_witness, "hypothesis-failed", note="needs a connected hypergraph"))
    cheeger_rhs = de_min / (dv_max * rk**2) * hg
    if np.all(lam2 <= r + 1e-12 * max(1.0, r0)):
        lhs = math.sqrt(max(lam2 * (2 * r0 - lam2), 0.0))
        records.append(BoundRecord("cheeger_lower", cheeger_rhs, lhs, cuts.cheeger_witness, status))
    else:
        records.append(
            BoundRecord(
                "cheeger_lower",
                cheeger_rhs,
                None,
                cuts.cheeger_witness,
                "hypothesis-failed",
                note="lambda_2 exceeds r(v) at some vertex",
            )
        )
    records.append(BoundRecord("largest_eigenvalue", hg, 4 * lamN * dv_max / de_min, cuts.cheeger_witness, status))

    # diameter against distinct eigenvalues of the induced matrix B
    if connected:
        b_spec = eig(build(h, wa, "inducedB"), vectors=False)
        records.append(BoundRecord("diameter", float(h.diameter()), float(b_spec.distinct_count() - 1)))
    return BoundReport(tuple(records), exacts)
