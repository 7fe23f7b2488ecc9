"""Satisfiability, model checking and reduction generators for HyperLTL and
HyperCTL* over ultimately periodic traces and finite transition systems.

The evaluation kernel comes in two builds: a compiled Cython module and a
numpy fallback.  ``hypersat.kernel_backend()`` reports which one is active.
"""
from . import _kernels
from .formula import *  # noqa: F401,F403
from .syntax import parse_formula, print_formula
from .traces import TraceAssignment, TraceSet, UPTrace, eval_hyperltl, expansion_table

__version__ = "0.1.0"


def kernel_backend() -> str:
    return _kernels.BACKEND
