"""Generators and recognizers for the named hypergraph families.

Vertex names are systematic so that role annotations survive a round trip
through a JSON file:

* hyperflower: core vertices ``w{j}_{i}`` (core set ``j``), peripheral ``u{i}_{s}`` (petal ``i``)
* sunflower: heart ``v0``, petal vertices ``u{i}_{s}``
* loose path / cycle: joints ``a{i}``, cored vertices ``c{i}_{j}``
* graph power: base vertices keep their ids, added vertices ``x{e}_{i}``
* squid: ``v0`` and ``u{i}_{j}``

Indices in names are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import InvalidParams
from .hypergraph import Hypergraph

FAMILIES = ("hyperflower", "sunflower", "loose_path", "loose_cycle", "graph_power", "squid")


@dataclass(frozen=True)
class GeneratedFamily:
    hypergraph: Hypergraph
    annotations: dict


@dataclass(frozen=True)
class Recognition:
    """Outcome of :func:`recognize`: a certificate (annotations) or a violated clause."""

    family: str
    accepted: bool
    annotations: dict = field(default_factory=dict)
    clause: str | None = None

    def __bool__(self):
        return self.accepted


def _int_param(params, name, minimum):
    if name not in params:
        raise InvalidParams(f"missing parameter {name!r}")
    value = params[name]
    if isinstance(value, bool) or int(value) != value:
        raise InvalidParams(f"parameter {name!r} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise InvalidParams(f"parameter {name!r} must be >= {minimum}, got {value}")
    return value


# -- generators -------------------------------------------------------------


def hyperflower(l: int, r: int = 1, t: int = 2, core_sizes=None) -> GeneratedFamily:
    """``(l, r)``-hyperflower with ``t`` twins.

    ``V = U ∪ W`` with petals ``U_1..U_l`` of size ``t`` and disjoint core sets
    ``e_1..e_r`` covering ``W``; the edges are every ``e_j ∪ U_i``.
    ``core_sizes`` defaults to 2 for every core set.
    """
    p = {"l": l, "r": r, "t": t}
    l, r, t = (_int_param(p, k, 1) for k in ("l", "r", "t"))
    if core_sizes is None:
        core_sizes = [2] * r
    elif isinstance(core_sizes, int):
        core_sizes = [core_sizes] * r
    core_sizes = [int(c) for c in core_sizes]
    if len(core_sizes) == 1 and r > 1:
        core_sizes = core_sizes * r
    if len(core_sizes) != r:
        raise InvalidParams(f"need {r} core sizes, got {len(core_sizes)}")
    if any(c < 1 for c in core_sizes):
        raise InvalidParams("core sizes must be >= 1")

    cores = [[f"w{j}_{i}" for i in range(1, c + 1)] for j, c in enumerate(core_sizes, start=1)]
    petals = [[f"u{i}_{s}" for s in range(1, t + 1)] for i in range(1, l + 1)]
    vertices = [v for core in cores for v in core] + [v for petal in petals for v in petal]
    edges, roles = [], []
    for j, core in enumerate(cores):
        for i, petal in enumerate(petals):
            edges.append(core + petal)
            roles.append([j, i])
    ann = {
        "family": "hyperflower",
        "params": {"l": l, "r": r, "t": t, "core_sizes": core_sizes},
        "W": [v for core in cores for v in core],
        "core_sets": cores,
        "petals": petals,
        "edge_roles": roles,
    }
    return GeneratedFamily(Hypergraph(vertices, edges), ann)


def sunflower(k: int, s: int) -> GeneratedFamily:
    """``k``-uniform sunflower with ``s`` leaves sharing the heart ``v0``."""
    p = {"k": k, "s": s}
    k, s = _int_param(p, "k", 2), _int_param(p, "s", 1)
    petals = [[f"u{i}_{j}" for j in range(1, k)] for i in range(1, s + 1)]
    vertices = ["v0"] + [v for petal in petals for v in petal]
    edges = [["v0"] + petal for petal in petals]
    ann = {
        "family": "sunflower",
        "params": {"k": k, "s": s},
        "heart": "v0",
        "W": ["v0"],
        "petals": petals,
    }
    return GeneratedFamily(Hypergraph(vertices, edges), ann)


def _chain(k: int, d: int, closed: bool):
    joints = [f"a{i}" for i in range(1, (d if closed else d - 1) + 1)]
    edges, cored, vertices = [], [], []
    for i in range(1, d + 1):
        left = joints[i - 2] if i > 1 else (joints[-1] if closed else None)
        right = joints[i - 1] if (i < d or closed) else None
        ends = [v for v in (left, right) if v is not None]
        inner = [f"c{i}_{j}" for j in range(1, k - len(ends) + 1)]
        if left is not None and left not in vertices:
            vertices.append(left)
        vertices.extend(inner)
        if right is not None and right not in vertices:
            vertices.append(right)
        edges.append(([left] if left else []) + inner + ([right] if right else []))
        cored.append(inner)
    return vertices, edges, joints, cored


def loose_path(k: int, d: int) -> GeneratedFamily:
    """``k``-uniform loose path with ``d`` edges; consecutive edges share one joint vertex."""
    p = {"k": k, "d": d}
    k, d = _int_param(p, "k", 2), _int_param(p, "d", 1)
    vertices, edges, joints, cored = _chain(k, d, closed=False)
    ann = {"family": "loose_path", "params": {"k": k, "d": d}, "edges_in_order": list(range(d)), "joints": joints, "cored": cored}
    return GeneratedFamily(Hypergraph(vertices, edges), ann)


def loose_cycle(k: int, d: int) -> GeneratedFamily:
    """``k``-uniform loose cycle of size ``d``: a loose path whose last edge also meets the first.

    For ``d = 2`` the two edges share both joints, so ``|e_1 ∩ e_2| = 2``.
    """
    p = {"k": k, "d": d}
    k, d = _int_param(p, "k", 3), _int_param(p, "d", 2)
    vertices, edges, joints, cored = _chain(k, d, closed=True)
    ann = {"family": "loose_cycle", "params": {"k": k, "d": d}, "edges_in_order": list(range(d)), "joints": joints, "cored": cored}
    return GeneratedFamily(Hypergraph(vertices, edges), ann)


def _as_graph(base) -> Hypergraph:
    if isinstance(base, Hypergraph):
        g = base
    elif isinstance(base, str):
        g = named_graph(base)
    elif isinstance(base, dict):
        g = Hypergraph(base["vertices"], base["edges"])
    else:
        edges = [tuple(e) for e in base]
        verts = []
        for e in edges:
            for v in e:
                if v not in verts:
                    verts.append(v)
        g = Hypergraph(verts, edges)
    if g.n_edges == 0 or any(len(e) != 2 for e in g.edges):
        raise InvalidParams("graph power needs a nonempty 2-uniform base graph")
    if g.duplicate_edges():
        raise InvalidParams("graph power needs a simple base graph (no repeated edges)")
    return g


def named_graph(name: str) -> Hypergraph:
    """Small base graphs by name: ``path:N``, ``cycle:N``, ``star:N`` (N vertices), ``complete:N``."""
    try:
        kind, count = name.split(":")
        n = int(count)
    except ValueError:
        raise InvalidParams(f"graph name must look like 'path:4', got {name!r}") from None
    verts = list(range(1, n + 1))
    if kind == "path" and n >= 2:
        edges = [(i, i + 1) for i in range(1, n)]
    elif kind == "cycle" and n >= 3:
        edges = [(i, i % n + 1) for i in range(1, n + 1)]
    elif kind == "star" and n >= 2:
        edges = [(1, i) for i in range(2, n + 1)]
    elif kind == "complete" and n >= 2:
        edges = list(combinations(verts, 2))
    else:
        raise InvalidParams(f"unsupported graph name {name!r}")
    return Hypergraph(verts, edges)


def graph_power(base, k: int) -> GeneratedFamily:
    """``k``-th power of a graph: every edge ``e`` grows by ``k - 2`` new vertices ``W_e``."""
    k = _int_param({"k": k}, "k", 3)
    g = _as_graph(base)
    degree = {v: len(g.star(v)) for v in g.vertices}
    vertices = list(g.vertices)
    edges, added, pendants, base_edges = [], [], [], []
    for idx in range(g.n_edges):
        pair = g.sorted_edge(idx)
        new = [f"x{idx + 1}_{i}" for i in range(1, k - 1)]
        vertices.extend(new)
        edges.append(pair + new)
        added.append(new)
        base_edges.append(pair)
        pendants.append([v for v in pair if degree[v] == 1])
    ann = {
        "family": "graph_power",
        "params": {"k": k},
        "base_edges": base_edges,
        "W": added,
        "pendant_endpoints": pendants,
    }
    return GeneratedFamily(Hypergraph(vertices, edges), ann)


def squid(k: int) -> GeneratedFamily:
    """``k``-uniform squid: ``k - 1`` disjoint peripheral edges ``U_i`` plus the
    central edge ``{v0} ∪ {u_i1}``. Peripheral edges come first."""
    k = _int_param({"k": k}, "k", 3)
    peripheral = [[f"u{i}_{j}" for j in range(1, k + 1)] for i in range(1, k)]
    central = ["v0"] + [U[0] for U in peripheral]
    vertices = ["v0"] + [v for U in peripheral for v in U]
    edges = peripheral + [central]
    ann = {
        "family": "squid",
        "params": {"k": k},
        "heart": "v0",
        "peripheral": peripheral,
        "central": central,
    }
    return GeneratedFamily(Hypergraph(vertices, edges), ann)


def generate(family: str, **params) -> GeneratedFamily:
    """Dispatch to the generator for ``family``."""
    try:
        if family == "hyperflower":
            return hyperflower(params.pop("l"), params.pop("r", 1), params.pop("t", 2), params.pop("core_sizes", None), **params)
        if family == "sunflower":
            return sunflower(params.pop("k"), params.pop("s"), **params)
        if family == "loose_path":
            return loose_path(params.pop("k"), params.pop("d"), **params)
        if family == "loose_cycle":
            return loose_cycle(params.pop("k"), params.pop("d"), **params)
        if family == "graph_power":
            return graph_power(params.pop("base"), params.pop("k"), **params)
        if family == "squid":
            return squid(params.pop("k"), **params)
    except KeyError as exc:
        raise InvalidParams(f"{family} needs parameter {exc.args[0]!r}") from None
    except TypeError as exc:
        raise InvalidParams(str(exc)) from None
    raise InvalidParams(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


# -- recognizers ------------------------------------------------------------


def _reject(family, clause):
    return Recognition(family, False, {}, clause)


def _intersections(h: Hypergraph) -> np.ndarray:
    H = h.incidence
    return H.T @ H


def _uniform(h: Hypergraph):
    if h.n_edges == 0:
        return None
    sizes = {len(e) for e in h.edges}
    return sizes.pop() if len(sizes) == 1 else None


def _recognize_hyperflower(h: Hypergraph, params) -> Recognition:
    fam = "hyperflower"
    if h.n_edges == 0:
        return _reject(fam, "E must be nonempty")
    if any(not h.star(v) for v in h.vertices):
        return _reject(fam, "V = U ∪ W must be covered by the hyperedges")
    groups = h.twin_groups()
    class_of = {}
    for c, (members, _) in enumerate(groups):
        for i in members:
            class_of[i] = c
    # every edge must be the union of exactly two twin classes (a petal and a core set)
    links = []
    for k, members in enumerate(h.edge_members):
        cls = sorted({class_of[i] for i in members.tolist()})
        if len(cls) == 1 and h.n_edges == 1:
            return _single_edge_flower(h, params)
        if len(cls) != 2:
            return _reject(fam, "E = {e_k ∪ U_i}: every hyperedge must be one core set plus one petal")
        links.append(tuple(cls))
    if len(set(links)) != len(links):
        return _reject(fam, "E = {e_k ∪ U_i}: each (core set, petal) pair occurs once")
    # two-colour the class graph; it must be complete bipartite
    side = {links[0][0]: 0}
    adj: dict[int, set] = {}
    for a, b in links:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    stack = [links[0][0]]
    while stack:
        a = stack.pop()
        for b in adj[a]:
            if b not in side:
                side[b] = 1 - side[a]
                stack.append(b)
            elif side[b] == side[a]:
                return _reject(fam, "E = {e_k ∪ U_i}: core sets and petals must alternate")
    if len(side) != len(groups):
        return _reject(fam, "hyperflower must be connected")
    parts = [[c for c in side if side[c] == s] for s in (0, 1)]
    if len(links) != len(parts[0]) * len(parts[1]):
        return _reject(fam, "E = {e_k ∪ U_i}: every core set must meet every petal")

    want = params or {}
    clause = "U_i must all have |U_i| = t (unequal petal sizes)"
    for petal_side, core_side in ((parts[0], parts[1]), (parts[1], parts[0])):
        sizes = {len(groups[c][0]) for c in petal_side}
        if len(sizes) != 1:
            continue
        t = sizes.pop()
        l, r = len(petal_side), len(core_side)
        if any(key in want and int(want[key]) != val for key, val in (("l", l), ("r", r), ("t", t))):
            clause = f"parameters {dict(want)} do not match a ({l},{r})-hyperflower with {t} twins"
            continue
        V = h.vertices
        order = lambda cs: sorted(cs, key=lambda c: groups[c][0][0])  # noqa: E731
        petals = [[V[i] for i in groups[c][0]] for c in order(petal_side)]
        cores = [[V[i] for i in groups[c][0]] for c in order(core_side)]
        return Recognition(
            fam,
            True,
            {
                "family": fam,
                "params": {"l": l, "r": r, "t": t, "core_sizes": [len(c) for c in cores]},
                "W": [v for c in cores for v in c],
                "core_sets": cores,
                "petals": petals,
            },
        )
    return _reject(fam, clause)


def _single_edge_flower(h, params):
    fam = "hyperflower"
    if not params or "t" not in params:
        return _reject(fam, "a single hyperedge splits into core and petal only once t is given")
    t = int(params["t"])
    members = h.sorted_edge(0)
    if not 1 <= t < len(members) or any(not h.star(v) for v in h.vertices):
        return _reject(fam, "|U_1| = t must leave a nonempty core set")
    core, petal = members[: len(members) - t], members[len(members) - t :]
    return Recognition(
        fam,
        True,
        {"family": fam, "params": {"l": 1, "r": 1, "t": t, "core_sizes": [len(core)]}, "W": core, "core_sets": [core], "petals": [petal]},
    )


def _recognize_sunflower(h: Hypergraph, params) -> Recognition:
    fam = "sunflower"
    k = _uniform(h)
    if k is None:
        return _reject(fam, "a sunflower is k-uniform")
    if h.n_edges == 1:
        members = h.sorted_edge(0)
        if h.n_vertices != k:
            return _reject(fam, "V = V_0 ∪ V_1 ∪ ... ∪ V_s must be covered by the leaves")
        heart, rest = members[0], members[1:]
        return Recognition(fam, True, {"family": fam, "params": {"k": k, "s": 1}, "heart": heart, "W": [heart], "petals": [rest]})
    common = frozenset.intersection(*h.edges)
    if len(common) != 1:
        return _reject(fam, "E = {V_0 ∪ V_i}: all leaves share exactly the heart v_0")
    heart = next(iter(common))
    for a, b in combinations(h.edges, 2):
        if a & b != common:
            return _reject(fam, "V_i ∩ V_j = ∅ for distinct leaves")
    if sum(len(e) - 1 for e in h.edges) + 1 != h.n_vertices:
        return _reject(fam, "V = V_0 ∪ V_1 ∪ ... ∪ V_s must be covered by the leaves")
    petals = [[v for v in h.sorted_edge(i) if v != heart] for i in range(h.n_edges)]
    if params and any(key in params and int(params[key]) != val for key, val in (("k", k), ("s", h.n_edges))):
        return _reject(fam, "parameters do not match")
    return Recognition(fam, True, {"family": fam, "params": {"k": k, "s": h.n_edges}, "heart": heart, "W": [heart], "petals": petals})


def _order_chain(X: np.ndarray, closed: bool):
    m = X.shape[0]
    nbrs = [[j for j in range(m) if j != i and X[i, j] > 0] for i in range(m)]
    if closed:
        if any(len(n) != 2 for n in nbrs):
            return None
        start = 0
    else:
        ends = [i for i in range(m) if len(nbrs[i]) <= 1]
        if m > 1 and (len(ends) != 2 or any(len(n) > 2 for n in nbrs)):
            return None
        start = ends[0] if ends else 0
    order, prev = [start], None
    while len(order) < m:
        nxt = [j for j in nbrs[order[-1]] if j != prev and j not in order]
        if not nxt:
            return None
        prev = order[-1]
        order.append(nxt[0])
    return order


def _recognize_chain(h: Hypergraph, params, closed: bool) -> Recognition:
    fam = "loose_cycle" if closed else "loose_path"
    k = _uniform(h)
    if k is None:
        return _reject(fam, f"a {fam.replace('_', ' ')} is k-uniform")
    if any(not h.star(v) for v in h.vertices):
        return _reject(fam, "every vertex lies on the chain")
    d = h.n_edges
    if closed and (k < 3 or d < 2):
        return _reject(fam, "a loose cycle needs k >= 3 and d >= 2")
    X = _intersections(h)
    np.fill_diagonal(X, 0)
    if closed and d == 2:
        if X[0, 1] != 2:
            return _reject(fam, "|e_1 ∩ e_d| = 2 for a loose cycle of size 2")
        order = [0, 1]
    else:
        if np.any(X > 1):
            return _reject(fam, "|e_i ∩ e_j| = 1 if |i-j| = 1")
        order = _order_chain(X, closed)
        if order is None:
            return _reject(fam, "e_i ∩ e_j = ∅ if |i-j| > 1")
        # a vertex on three edges would make non-consecutive edges meet
        if any(len(h.star(v)) > 2 for v in h.vertices):
            return _reject(fam, "e_i ∩ e_j = ∅ if |i-j| > 1")
    if params and any(key in params and int(params[key]) != val for key, val in (("k", k), ("d", d))):
        return _reject(fam, "parameters do not match")
    joints, cored = [], []
    V = h.vertices
    for i in order:
        inner = [V[j] for j in h.edge_members[i].tolist() if len(h._stars[j]) == 1]
        cored.append(inner)
    pairs = list(zip(order, order[1:] + ([order[0]] if closed and d > 2 else [])))
    for a, b in pairs:
        joints.extend(sorted(h.edges[a] & h.edges[b], key=h.index))
    if closed and d == 2:
        joints = sorted(h.edges[0] & h.edges[1], key=h.index)
    return Recognition(fam, True, {"family": fam, "params": {"k": k, "d": d}, "edges_in_order": order, "joints": joints, "cored": cored})


def _recognize_power(h: Hypergraph, params) -> Recognition:
    fam = "graph_power"
    k = _uniform(h)
    if k is None or k < 3:
        return _reject(fam, "the k-th power of a graph is k-uniform with k >= 3")
    if params and "k" in params and int(params["k"]) != k:
        return _reject(fam, "parameters do not match")
    X = _intersections(h)
    np.fill_diagonal(X, 0)
    if np.any(X > 1):
        return _reject(fam, "f ∩ W_e = ∅ for f ≠ e: edges of a simple graph power share at most one vertex")
    stars = h._stars
    V = h.vertices
    base_edges, added = [], []
    for members in h.edge_members:
        ms = members.tolist()
        inter = [i for i in ms if len(stars[i]) > 1]
        if len(inter) > 2:
            return _reject(fam, "each edge e^(k) = e ∪ W_e has only its two base endpoints shared")
        rest = [i for i in ms if i not in inter]
        base = inter + rest[: 2 - len(inter)]
        base_edges.append([V[i] for i in sorted(base)])
        added.append([V[i] for i in ms if i not in base])
    degree: dict = {}
    for pair in base_edges:
        for v in pair:
            degree[v] = degree.get(v, 0) + 1
    pendants = [[v for v in pair if degree[v] == 1] for pair in base_edges]
    return Recognition(
        fam,
        True,
        {"family": fam, "params": {"k": k}, "base_edges": base_edges, "W": added, "pendant_endpoints": pendants},
    )


def _recognize_squid(h: Hypergraph, params) -> Recognition:
    fam = "squid"
    k = _uniform(h)
    if k is None or k < 3:
        return _reject(fam, "a squid is k-uniform with k >= 3")
    if h.n_edges != k or h.n_vertices != 1 + k * (k - 1):
        return _reject(fam, "a k-uniform squid has k edges and 1 + k(k-1) vertices")
    X = _intersections(h)
    np.fill_diagonal(X, 0)
    centrals = [c for c in range(k) if all(X[c, j] == 1 for j in range(k) if j != c)]
    for c in centrals:
        others = [j for j in range(k) if j != c]
        if all(X[a, b] == 0 for a, b in combinations(others, 2)):
            central = h.sorted_edge(c)
            heart = [v for v in central if len(h.star(v)) == 1]
            if len(heart) != 1:
                continue
            peripheral = []
            for j in others:
                hook = next(iter(h.edges[j] & h.edges[c]))
                peripheral.append([hook] + [v for v in h.sorted_edge(j) if v != hook])
            if params and "k" in params and int(params["k"]) != k:
                return _reject(fam, "parameters do not match")
            return Recognition(
                fam,
                True,
                {"family": fam, "params": {"k": k}, "heart": heart[0], "peripheral": peripheral, "central": central},
            )
    return _reject(fam, "E = {U_i} ∪ {{v_0} ∪ e_0}: peripheral edges are disjoint and each meets the central edge once")


def recognize(h: Hypergraph, family: str, params: dict | None = None) -> Recognition:
    """Check the defining properties of ``family`` and emit role annotations or the violated clause."""
    if family == "hyperflower":
        return _recognize_hyperflower(h, params)
    if family == "sunflower":
        return _recognize_sunflower(h, params)
    if family == "loose_path":
        return _recognize_chain(h, params, closed=False)
    if family == "loose_cycle":
        return _recognize_chain(h, params, closed=True)
    if family == "graph_power":
        return _recognize_power(h, params)
    if family == "squid":
        return _recognize_squid(h, params)
    raise InvalidParams(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


# -- random instances -------------------------------------------------------


def random_hypergraph(
    n: int,
    seed: int | np.random.Generator | None = None,
    *,
    n_edges: int | None = None,
    max_edge_size: int = 4,
    connected: bool = True,
    require_large_edge: bool = True,
) -> Hypergraph:
    """Seeded random hypergraph on vertices ``0..n-1``.

    Edge sizes are uniform on ``2..max_edge_size``. When ``connected`` is set,
    extra edges join the components; ``require_large_edge`` guarantees at
    least one edge of size >= 3 (so the instance is not a plain graph).
    """
    if n < 2:
        raise InvalidParams("random hypergraph needs n >= 2")
    rng = np.random.default_rng(seed)
    top = max(2, min(max_edge_size, n))
    if n_edges is None:
        n_edges = int(rng.integers(max(1, n // 3), n + 1))
    edges = []
    for _ in range(n_edges):
        size = int(rng.integers(2, top + 1))
        edges.append(sorted(rng.choice(n, size=size, replace=False).tolist()))
    if require_large_edge and top >= 3 and all(len(e) < 3 for e in edges):
        edges.append(sorted(rng.choice(n, size=3, replace=False).tolist()))
    h = Hypergraph(range(n), edges)
    if connected:
        comps = [sorted(c) for c in h.components()]
        while len(comps) > 1:
            a, b = comps[0], comps[1]
            extra = sorted({int(rng.choice(a)), int(rng.choice(b))})
            edges.append(extra)
            comps = [sorted(a + b)] + comps[2:]
        h = Hypergraph(range(n), edges)
    return h
