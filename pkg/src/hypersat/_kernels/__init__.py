"""Hot evaluation kernel with a compiled core and a numpy fallback.

The compiled module is preferred.  Setting ``HYPERSAT_PURE=1`` in the
environment, or calling :func:`set_backend`, forces the fallback.
"""
import contextlib
import os

from . import _pykernel
from .program import Program, compile_program

try:
    from . import _ckernel
except ImportError:  # pragma: no cover - depends on build
    _ckernel = None

_BACKENDS = {"python": _pykernel.eval_batch}
if _ckernel is not None:
    _BACKENDS["compiled"] = _ckernel.eval_batch

if os.environ.get("HYPERSAT_PURE") == "1" or _ckernel is None:
    BACKEND = "python"
else:
    BACKEND = "compiled"


def available_backends():
    return sorted(_BACKENDS)


def set_backend(name):
    global BACKEND
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} is not available")
    BACKEND = name


@contextlib.contextmanager
def using_backend(name):
    old = BACKEND
    set_backend(name)
    try:
        yield
    finally:
        set_backend(old)


def eval_program(prog: Program, labels, S: int):
    """Truth table ``[batch, nodes, L]`` of ``prog`` over folded lassos."""
    return _BACKENDS[BACKEND](prog.op, prog.a, prog.b, prog.slot, prog.bit, labels, int(S))


__all__ = ["Program", "compile_program", "eval_program", "set_backend", "using_backend",
           "available_backends", "BACKEND"]
