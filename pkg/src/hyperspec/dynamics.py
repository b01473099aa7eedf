"""Diffusion, coupled map dynamics, random walks and infection rates on hypergraphs."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DimensionMismatch, InvalidParams, IsolatedVertex, StepTooLarge
from .hypergraph import Hypergraph
from .operators import build, degree_profile
from .spectra import eig
from .weights import WeightAssignment

UNIT_MODE_GAP = 1e-12


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # one row per stored time
    conserved: np.ndarray  # (x_t, 1)_V per stored time
    meta: dict = field(default_factory=dict)

    def final(self) -> np.ndarray:
        return self.states[-1]


def _vertex_vector(h, x, name="x0"):
    x = np.asarray(x, dtype=float)
    if x.shape != (h.n_vertices,):
        raise DimensionMismatch(f"{name} has shape {x.shape}, expected ({h.n_vertices},)")
    return x


def consensus_limit(wa: WeightAssignment, x0) -> np.ndarray:
    """Projection of ``x0`` onto the constants in ``(.,.)_V``."""
    dv = wa.delta_v
    return np.full(len(dv), float(np.sum(dv * x0) / np.sum(dv)))


# -- diffusion -------------------------------------------------------------------


def diffuse(
    h: Hypergraph,
    wa: WeightAssignment,
    x0,
    T: float,
    dt: float,
    method: str = "rk4",
    stride: int = 1,
) -> Trajectory:
    """Integrate ``x' = L x`` from ``x0`` up to time ``T``.

    ``euler`` is rejected with :class:`StepTooLarge` when ``dt * rho(L) >= 2``
    (the explicit step would not contract). Every ``stride``-th state is kept,
    along with the final one.
    """
    x = _vertex_vector(h, x0).copy()
    if not dt > 0 or not T >= dt:
        raise InvalidParams("need dt > 0 and T >= dt")
    if stride < 1:
        raise InvalidParams("stride must be >= 1")
    L = build(h, wa, "L").entries
    if method == "euler":
        rho = float(np.max(np.abs(eig(build(h, wa, "L"), wa, vectors=False, method="lapack").eigenvalues)))
        if dt * rho >= 2:
            raise StepTooLarge(f"euler step dt={dt} with spectral radius {rho:.6g}: dt * rho >= 2")
    elif method != "rk4":
        raise InvalidParams(f"unknown integrator {method!r}")

    steps = int(round(T / dt))
    dv = wa.delta_v
    times, states = [0.0], [x.copy()]
    for k in range(1, steps + 1):
        if method == "euler":
            x = x + dt * (L @ x)
        else:
            k1 = L @ x
            k2 = L @ (x + 0.5 * dt * k1)
            k3 = L @ (x + 0.5 * dt * k2)
            k4 = L @ (x + dt * k3)
            x = x + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        if k % stride == 0 or k == steps:
            times.append(k * dt)
            states.append(x.copy())
    S = np.array(states)
    return Trajectory(np.array(times), S, S @ dv, {"process": "diffusion", "method": method, "dt": dt, "steps": steps})


# -- coupled dynamics ----------------------------------------------------------------


@dataclass(frozen=True)
class ScalarMap:
    name: str
    func: Callable[[np.ndarray], np.ndarray]

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))


def scalar_map(name: str, **params) -> ScalarMap:
    """Componentwise maps by name: ``identity``, ``logistic`` (param ``a``),
    ``tanh`` (params ``gain``, default 1), ``table`` (params ``xs``, ``ys``;
    piecewise-linear interpolation)."""
    if name == "identity":
        return ScalarMap("identity", lambda x: x.copy())
    if name == "logistic":
        a = float(params.get("a", 4.0))
        return ScalarMap(f"logistic(a={a})", lambda x: a * x * (1.0 - x))
    if name == "tanh":
        gain = float(params.get("gain", 1.0))
        return ScalarMap(f"tanh(gain={gain})", lambda x: np.tanh(gain * x))
    if name == "table":
        xs = np.asarray(params["xs"], dtype=float)
        ys = np.asarray(params["ys"], dtype=float)
        if xs.shape != ys.shape or xs.ndim != 1 or np.any(np.diff(xs) <= 0):
            raise InvalidParams("table map needs increasing xs and matching ys")
        return ScalarMap("table", lambda x: np.interp(x, xs, ys))
    raise InvalidParams(f"unknown scalar map {name!r}")


def _as_map(f) -> ScalarMap:
    if isinstance(f, ScalarMap):
        return f
    if isinstance(f, str):
        return scalar_map(f)
    if callable(f):
        return ScalarMap(getattr(f, "__name__", "custom"), f)
    raise InvalidParams(f"cannot use {f!r} as a scalar map")


def coupled_step(h: Hypergraph, wa: WeightAssignment, x, f="identity", g="identity", epsilon: float = 0.1, L=None):
    """One synchronous update ``x' = f(x) + epsilon * L g(x)``."""
    x = _vertex_vector(h, x, "x")
    if L is None:
        L = build(h, wa, "L").entries
    return _as_map(f)(x) + epsilon * (L @ _as_map(g)(x))


def coupled_dynamics(h, wa, x0, steps: int, f="identity", g="identity", epsilon: float = 0.1, stride: int = 1) -> Trajectory:
    L = build(h, wa, "L").entries
    fm, gm = _as_map(f), _as_map(g)
    x = _vertex_vector(h, x0).copy()
    times, states = [0], [x.copy()]
    for k in range(1, steps + 1):
        x = fm(x) + epsilon * (L @ gm(x))
        if k % stride == 0 or k == steps:
            times.append(k)
            states.append(x.copy())
    S = np.array(states)
    return Trajectory(np.array(times, dtype=float), S, S @ wa.delta_v, {"process": "coupled", "f": fm.name, "g": gm.name, "epsilon": epsilon})


# -- random walk -------------------------------------------------------------------


@dataclass(frozen=True)
class WalkResult:
    trajectory: Trajectory
    limit: np.ndarray | None
    limit_sqrt_form: np.ndarray | None
    second_modulus: float
    mixing_steps: int | None
    note: str = ""


def random_walk(h: Hypergraph, wa: WeightAssignment, p0, n_steps: int | None = None, stride: int = 1) -> WalkResult:
    """Iterate ``x_{n+1} = P x_n`` from ``x_1 = p0``.

    ``P`` is self-adjoint for ``(x, y)_R = sum r delta_v x y``, so on a
    connected hypergraph the iterates approach the projection of ``x_1`` onto
    the constants, ``((x_1, 1)_R / (1, 1)_R) 1``, whenever ``x_1`` has no
    component along eigenvalues of modulus one other than 1 itself.
    ``limit_sqrt_form`` records the variant with ``sqrt((1, 1)_R)`` in the
    denominator for comparison. ``n_steps`` defaults to
    ``ceil(20 / (1 - sigma_2))`` where ``sigma_2`` is the largest modulus
    among the remaining eigenvalues.
    """
    x = _vertex_vector(h, p0, "p0").copy()
    prof = degree_profile(h, wa)
    if np.any(prof.r <= 0):
        raise IsolatedVertex("random walk needs every vertex in some hyperedge")
    P = build(h, wa, "transitionP")
    spectrum = eig(build(h, wa, "deltaRW"), wa)
    mu = 1.0 - np.asarray(spectrum.eigenvalues)  # eigenvalues of P, descending order reversed
    Rw = prof.r * wa.delta_v
    ones_norm = float(np.sum(Rw))
    limit = np.full(h.n_vertices, float(np.sum(Rw * x)) / ones_norm)
    sqrt_form = np.full(h.n_vertices, float(np.sum(Rw * x)) / math.sqrt(ones_norm))

    # coefficients of x in the R-orthonormal eigenbasis
    coeff = spectrum.eigenvectors @ (Rw * x)
    unit = np.abs(np.abs(mu) - 1.0) <= UNIT_MODE_GAP
    stationary = np.abs(mu - 1.0) <= UNIT_MODE_GAP
    oscillating = unit & ~stationary
    rest = np.abs(mu[~unit])
    sigma2 = float(rest.max()) if rest.size else 0.0
    note = ""
    claim = h.is_connected()
    if not claim:
        note = "disconnected: the limit is constant per component only"
    elif np.any(np.abs(coeff[oscillating]) > 1e-9 * max(1.0, float(np.linalg.norm(coeff)))):
        claim = False
        note = "start has a component on an eigenvalue of modulus one other than 1; iterates oscillate"
    mixing = int(math.ceil(20.0 / (1.0 - sigma2))) if sigma2 < 1.0 else None
    if n_steps is None:
        n_steps = mixing if mixing is not None else 100

    Pm = P.entries
    times, states = [1], [x.copy()]
    for k in range(2, n_steps + 2):
        x = Pm @ x
        if (k - 1) % stride == 0 or k == n_steps + 1:
            times.append(k)
            states.append(x.copy())
    S = np.array(states)
    traj = Trajectory(np.array(times, dtype=float), S, S @ wa.delta_v, {"process": "walk", "steps": n_steps})
    return WalkResult(traj, limit if claim else None, sqrt_form if claim else None, sigma2, mixing, note)


# -- epidemics ---------------------------------------------------------------------


def infection_rate(h: Hypergraph, wa: WeightAssignment, x, f="identity") -> np.ndarray:
    """Rate ``A f(x)`` at which susceptible vertices become infectious.

    The model is stated for ``delta_v = 1`` and ``delta_e(e) = beta |e|^2``;
    other weights are accepted with a warning.
    """
    x = _vertex_vector(h, x, "x")
    ratio = wa.delta_e / h.edge_sizes**2
    standard = np.all(wa.delta_v == 1.0) and np.allclose(ratio, ratio[0], rtol=1e-12, atol=0) if len(ratio) else True
    if not standard:
        warnings.warn("infection rate is defined for delta_v = 1 and delta_e = beta |e|^2; using the given weights", stacklevel=2)
    A = build(h, wa, "adjacency").entries
    return A @ _as_map(f)(x)
