"""Command-line interface: ``hyperspec <subcommand> [FILE] [options]``.

Subcommands read a hypergraph file (or stdin when FILE is omitted or ``-``)
and write JSON to stdout. Errors are written to stderr as JSON and mapped to
exit codes: 2 validation, 3 numerical failure, 4 unmet hypothesis. A failed
theorem verification or a violated bound exits with 1.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import sys

import numpy as np

from . import __version__
from .bounds import EXACT_LIMIT, audit_bounds
from .dynamics import coupled_dynamics, diffuse, infection_rate, random_walk, scalar_map
from .errors import Disconnected, HyperspecError, HypothesisFailed, NoEdges, ValidationError
from .families import FAMILIES, generate
from .hypergraph import Hypergraph
from .io import SCHEMA_VERSION, dumps, emit_hypergraph, load_hypergraph, parse_json, parse_weights, read_text
from .operators import KINDS, build
from .spectra import eig
from .theorems import PREDICTION_KINDS, hyperflower_full_spectrum, predict_all, verify
from .weights import SCHEME_KINDS, WeightScheme, resolve

PROCESSES = ("diffusion", "walk", "coupled", "infection")


# -- report sections -----------------------------------------------------------------


def summarize(h: Hypergraph) -> dict:
    """Hypergraph section: sizes, rank/co-rank, diameter and components."""
    try:
        rk, cr = h.rank_corank()
    except NoEdges:
        rk = cr = None
    cls = h.classify_vertices()
    out = {
        "n_vertices": h.n_vertices,
        "n_edges": h.n_edges,
        "rank": rk,
        "corank": cr,
        "components": h.n_components,
    }
    try:
        out["diameter"] = h.distance_diameter()[1]
        out["component_diameters"] = [out["diameter"]]
    except Disconnected as exc:
        out["diameter"] = float("inf")
        out["component_diameters"] = list(exc.component_diameters)
    out["weighted"] = h.is_weighted
    out["duplicate_edges"] = h.duplicate_edges()
    out["vertex_classes"] = {
        "cored": len(cls.cored),
        "intersectional": len(cls.intersectional),
        "pendant": len(cls.pendant),
        "isolated": len(cls.isolated),
        "twin_classes": len(cls.twin_classes),
    }
    return out


def scheme_section(wa) -> dict:
    return {
        "kind": wa.scheme,
        "fingerprint": wa.fingerprint,
        "delta_v": wa.delta_v,
        "delta_e": wa.delta_e,
    }


def spectrum_section(spectrum, with_vectors: bool, method: str) -> dict:
    out = {
        "kind": spectrum.kind,
        "method": method,
        "tolerance": spectrum.tolerance,
        "spectral_radius": spectrum.spectral_radius,
        "eigenvalues": spectrum.eigenvalues,
        "clusters": [{"value": c.value, "multiplicity": c.multiplicity} for c in spectrum.clusters],
    }
    if with_vectors and spectrum.eigenvectors is not None:
        out["eigenvectors"] = spectrum.eigenvectors
    return out


def _closed_form_section(h, wa, kind, annotations, spectrum) -> dict | None:
    if not annotations or annotations.get("family") != "hyperflower":
        return None
    params = annotations.get("params", {})
    if int(params.get("r", 1)) != 1:
        return {"applicable": False, "reason": "closed form covers (l, 1)-hyperflowers only"}
    try:
        full = hyperflower_full_spectrum((h, params), wa, kind)
    except HypothesisFailed as exc:
        return {"applicable": False, "reason": str(exc)}
    predicted = full.as_list()
    computed = np.sort(np.asarray(spectrum.eigenvalues))
    err = float(np.max(np.abs(predicted - computed))) if len(predicted) == len(computed) else float("inf")
    return {
        "applicable": True,
        "values": [{"value": v, "multiplicity": m} for v, m in full.values],
        "max_abs_error": err,
        "passed": err <= 1e-7,
    }


def predictions_section(h, wa, kind, annotations, tol, method) -> tuple[dict, bool]:
    reasons: list = []
    preds = predict_all(h, wa, kind, annotations, reasons)
    spectrum = eig(build(h, wa, kind), wa, tol=tol, method=method)
    report = verify(preds, spectrum)
    out = report.to_dict()
    out["operator_kind"] = kind
    out["inapplicable"] = [str(r) for r in reasons]
    passed = report.passed
    closed = _closed_form_section(h, wa, kind, annotations, spectrum)
    if closed is not None:
        out["closed_form"] = closed
        passed = passed and closed.get("passed", True)
    return out, passed


# -- argument handling -------------------------------------------------------------


def _weights(args, h):
    if args.scheme == "custom":
        if not args.weights:
            raise ValidationError("--scheme custom needs --weights FILE")
        text, source = read_text(args.weights)
        dv, de = parse_weights(text, h, source)
        return resolve(WeightScheme("custom", dv, de), h)
    if args.weights:
        raise ValidationError("--weights only applies to --scheme custom")
    return resolve(args.scheme, h)


def _base_report(h, wa) -> dict:
    return {"schema_version": SCHEMA_VERSION, "hypergraph": summarize(h), "scheme": scheme_section(wa)}


def _kinds(args, default):
    kinds = args.operator or [default]
    for k in kinds:
        if k not in KINDS:
            raise ValidationError(f"unknown operator kind {k!r}; choose from {', '.join(KINDS)}")
    return kinds


def _initial_state(choice: str | None, h: Hypergraph) -> np.ndarray:
    """``uniform``, ``indicator:<vertex>``, ``random:<seed>``, a comma list, or ``@file`` (JSON list)."""
    n = h.n_vertices
    if choice is None:
        choice = f"indicator:{h.vertices[0]}"
    if choice == "uniform":
        return np.full(n, 1.0 / n)
    if choice.startswith("indicator:"):
        name = choice.split(":", 1)[1]
        matches = [i for i, v in enumerate(h.vertices) if str(v) == name]
        if not matches:
            raise ValidationError(f"unknown vertex {name!r} in --x0")
        x = np.zeros(n)
        x[matches[0]] = 1.0
        return x
    if choice.startswith("random:"):
        return np.random.default_rng(int(choice.split(":", 1)[1])).random(n)
    if choice.startswith("@"):
        text, source = read_text(choice[1:])
        values = parse_json(text, source)
    else:
        try:
            values = [float(s) for s in choice.split(",")]
        except ValueError:
            raise ValidationError(f"cannot read --x0 {choice!r}") from None
    x = np.asarray(values, dtype=float)
    if x.shape != (n,):
        raise ValidationError(f"--x0 has {x.size} values for {n} vertices")
    return x


def _map_params(pairs) -> dict:
    out = {}
    for item in pairs or []:
        if "=" not in item:
            raise ValidationError(f"map parameter {item!r} must look like name=value")
        k, v = item.split("=", 1)
        out[k] = [float(s) for s in v.split(",")] if "," in v else float(v)
    return out


def _trajectory_csv(h, traj) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t"] + [str(v) for v in h.vertices])
    for t, row in zip(traj.times, traj.states):
        w.writerow(["%.17g" % t] + ["%.17g" % x for x in row])
    return buf.getvalue()


def _trajectory_json(traj) -> dict:
    return {"times": traj.times, "states": traj.states, "conserved": traj.conserved}


# -- subcommands -------------------------------------------------------------------


def cmd_generate(args) -> tuple[str, int]:
    params = {}
    for name in ("l", "r", "t", "k", "s", "d"):
        value = getattr(args, name)
        if value is not None:
            params[name] = value
    if args.core_sizes is not None:
        params["core_sizes"] = [int(s) for s in args.core_sizes.split(",")]
    if args.base is not None:
        params["base"] = args.base
    fam = generate(args.family, **params)
    return emit_hypergraph(fam.hypergraph, fam.annotations), 0


def cmd_spectrum(args) -> tuple[str, int]:
    h, _ = load_hypergraph(args.file)
    wa = _weights(args, h)
    doc = _base_report(h, wa)
    doc["spectra"] = {}
    for kind in _kinds(args, "laplacian"):
        spectrum = eig(build(h, wa, kind), wa, tol=args.tolerance, method=args.method)
        doc["spectra"][kind] = spectrum_section(spectrum, args.eigenvectors, args.method)
    return dumps(doc) + "\n", 0


def cmd_verify(args) -> tuple[str, int]:
    h, annotations = load_hypergraph(args.file)
    wa = _weights(args, h)
    doc = _base_report(h, wa)
    doc["predictions"] = {}
    ok = True
    for kind in _kinds(args, "laplacian"):
        if kind not in PREDICTION_KINDS:
            raise ValidationError(f"theorems predict {', '.join(PREDICTION_KINDS)} only, not {kind!r}")
        section, passed = predictions_section(h, wa, kind, annotations, args.tolerance, args.method)
        doc["predictions"][kind] = section
        ok = ok and passed
    return dumps(doc) + "\n", 0 if ok else 1


def cmd_bounds(args) -> tuple[str, int]:
    h, _ = load_hypergraph(args.file)
    wa = _weights(args, h)
    doc = _base_report(h, wa)
    rep = audit_bounds(h, wa, exact_limit=args.exact_limit, samples=args.samples, seed=args.seed)
    doc["bounds"] = rep.to_dict()
    return dumps(doc) + "\n", 0 if rep.all_hold else 1


def _simulate(args, h, wa) -> tuple[dict, object]:
    meta: dict = {"process": args.process}
    if args.process == "diffusion":
        x0 = _initial_state(args.x0, h)
        steps = args.steps or 1000
        traj = diffuse(h, wa, x0, args.dt * steps, args.dt, method=args.integrator, stride=args.stride)
        meta.update(dt=args.dt, steps=steps, integrator=args.integrator)
    elif args.process == "walk":
        x0 = _initial_state(args.x0, h)
        res = random_walk(h, wa, x0, n_steps=args.steps, stride=args.stride)
        traj = res.trajectory
        meta.update(
            steps=int(traj.meta["steps"]),
            limit=res.limit,
            limit_sqrt_form=res.limit_sqrt_form,
            second_modulus=res.second_modulus,
            mixing_steps=res.mixing_steps,
            note=res.note,
        )
    elif args.process == "coupled":
        x0 = _initial_state(args.x0, h)
        f = scalar_map(args.f, **_map_params(args.f_param))
        g = scalar_map(args.g, **_map_params(args.g_param))
        traj = coupled_dynamics(h, wa, x0, args.steps or 100, f, g, args.epsilon, stride=args.stride)
        meta.update(steps=args.steps or 100, f=f.name, g=g.name, epsilon=args.epsilon)
    else:
        x = _initial_state(args.x0, h)
        f = scalar_map(args.f, **_map_params(args.f_param))
        rate = infection_rate(h, wa, x, f)
        meta.update(f=f.name)
        meta["state"] = x
        meta["rate"] = rate
        return meta, None
    return meta, traj


def cmd_simulate(args) -> tuple[str, int]:
    h, _ = load_hypergraph(args.file)
    wa = _weights(args, h)
    meta, traj = _simulate(args, h, wa)
    if args.format == "csv":
        if traj is None:
            raise ValidationError("the infection process yields a rate vector; use --format json")
        return _trajectory_csv(h, traj), 0
    doc = _base_report(h, wa)
    doc["simulation"] = meta
    if traj is not None:
        doc["trajectory"] = _trajectory_json(traj)
    return dumps(doc) + "\n", 0


def cmd_report(args) -> tuple[str, int]:
    h, annotations = load_hypergraph(args.file)
    wa = _weights(args, h)
    doc = _base_report(h, wa)
    kinds = _kinds(args, "laplacian")
    doc["spectra"] = {}
    for kind in kinds:
        spectrum = eig(build(h, wa, kind), wa, tol=args.tolerance, method=args.method)
        doc["spectra"][kind] = spectrum_section(spectrum, args.eigenvectors, args.method)
    ok = True
    doc["predictions"] = {}
    for kind in kinds:
        if kind in PREDICTION_KINDS:
            section, passed = predictions_section(h, wa, kind, annotations, args.tolerance, args.method)
            doc["predictions"][kind] = section
            ok = ok and passed
    if h.n_edges and h.is_connected():
        rep = audit_bounds(h, wa, exact_limit=args.exact_limit, samples=args.samples, seed=args.seed)
        doc["bounds"] = rep.to_dict()
        ok = ok and rep.all_hold
    else:
        doc["bounds"] = {"skipped": "bounds need a connected hypergraph with at least one edge"}
    if args.process:
        doc["simulation"], _ = _simulate(args, h, wa)
    return dumps(doc) + "\n", 0 if ok else 1


# -- parser ------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, operator=True):
    p.add_argument("file", nargs="?", default=None, help="hypergraph JSON file (default: stdin)")
    p.add_argument("--scheme", default="rodriguez", choices=SCHEME_KINDS)
    p.add_argument("--weights", default=None, help="JSON file with delta_v and delta_e for --scheme custom")
    p.add_argument("-o", "--output", default=None, help="write to this file instead of stdout")
    if operator:
        p.add_argument("--operator", action="append", default=None, help="operator kind; repeat for several")
        p.add_argument("--tolerance", type=float, default=None, help="eigenvalue clustering threshold")
        p.add_argument("--method", choices=("ql", "lapack"), default="ql")
        p.add_argument("--eigenvectors", action="store_true")


def _add_bounds(p):
    p.add_argument("--exact-limit", type=int, default=EXACT_LIMIT, help="largest |V| for exhaustive subset search")
    p.add_argument("--samples", type=int, default=4096, help="random subsets scanned above the exact limit")
    p.add_argument("--seed", type=int, default=0)


def _add_simulation(p, required):
    p.add_argument("--process", choices=PROCESSES, required=required, default=None)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--integrator", choices=("rk4", "euler"), default="rk4")
    p.add_argument("--x0", default=None, help="uniform, indicator:<vertex>, random:<seed>, a comma list or @file")
    p.add_argument("--f", default="identity", help="local map for coupled and infection processes")
    p.add_argument("--g", default="identity", help="coupling map for the coupled process")
    p.add_argument("--f-param", action="append", default=None, help="name=value parameter of --f")
    p.add_argument("--g-param", action="append", default=None, help="name=value parameter of --g")
    p.add_argument("--epsilon", type=float, default=0.1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperspec", description="Spectra, bounds and dynamics of weighted hypergraphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="emit a hypergraph from a named family")
    g.add_argument("--family", required=True, choices=FAMILIES)
    for name in ("l", "r", "t", "k", "s", "d"):
        g.add_argument(f"--{name}", type=int, default=None)
    g.add_argument("--core-sizes", default=None, help="comma list of core set sizes")
    g.add_argument("--base", default=None, help="base graph for graph_power, e.g. path:4 or cycle:5")
    g.add_argument("-o", "--output", default=None)
    g.set_defaults(func=cmd_generate)

    p = sub.add_parser("spectrum", help="eigenvalues and clusters of operators")
    _add_common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify-theorems", help="check closed-form eigenvalue predictions")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bounds", help="audit spectral inequalities against exact oracles")
    _add_common(p, operator=False)
    _add_bounds(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("simulate", help="diffusion, random walk, coupled maps or infection rate")
    _add_common(p, operator=False)
    _add_simulation(p, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("report", help="spectrum, theorem verification and bounds in one document")
    _add_common(p)
    _add_bounds(p)
    _add_simulation(p, required=False)
    p.set_defaults(func=cmd_report)
    return parser


def _error_json(exc: Exception, code: int) -> str:
    doc = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    line = getattr(exc, "line", None)
    if line is not None:
        doc["line"] = line
        doc["column"] = getattr(exc, "column", None)
    return dumps(doc)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "steps", None) is not None and args.steps < 1:
        parser.error("--steps must be >= 1")
    try:
        text, code = args.func(args)
    except HyperspecError as exc:
        print(_error_json(exc, exc.exit_code), file=sys.stderr)
        return exc.exit_code
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        return code
    try:
        sys.stdout.write(text)
        sys.stdout.flush()
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head)
        sys.stdout = None
    return code


if __name__ == "__main__":
    sys.exit(main())
