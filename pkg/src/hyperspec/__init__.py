"""Connectivity operators, spectra, bounds and dynamics for weighted hypergraphs."""

__version__ = "0.1.0"

from .errors import (
    HyperspecError,
    HypothesisFailed,
    NumericalFailure,
    ParseError,
    ValidationError,
)
from .hypergraph import Hypergraph
from .weights import PRESETS, WeightAssignment, WeightScheme, resolve
from .operators import KINDS, OperatorMatrix, build
from .spectra import Spectrum, eig, residual_check
from .families import generate, random_hypergraph, recognize
from .theorems import hyperflower_full_spectrum, predict_all, verify
from .bounds import audit_bounds
from .dynamics import diffuse, random_walk
from .io import emit_hypergraph, load_hypergraph, parse_hypergraph

__all__ = [
    "HyperspecError",
    "HypothesisFailed",
    "NumericalFailure",
    "ParseError",
    "ValidationError",
    "Hypergraph",
    "PRESETS",
    "WeightAssignment",
    "WeightScheme",
    "resolve",
    "KINDS",
    "OperatorMatrix",
    "build",
    "Spectrum",
    "eig",
    "residual_check",
    "generate",
    "random_hypergraph",
    "recognize",
    "hyperflower_full_spectrum",
    "predict_all",
    "verify",
    "audit_bounds",
    "diffuse",
    "random_walk",
    "emit_hypergraph",
    "load_hypergraph",
    "parse_hypergraph",
]
