"""Reference kernel in numpy; used when the compiled module is unavailable.

Evaluates a program over a batch of folded lassos.  All lassos in a batch
share the same length L and loop start S; position L-1 is followed by S.
"""
import numpy as np

from .program import (
    OP_AND, OP_ATOM, OP_F, OP_FALSE, OP_G, OP_IFF, OP_IMPLIES, OP_NEXT, OP_NOT,
    OP_OR, OP_TRUE, OP_UNTIL,
)


def eval_batch(op, a, b, slot, bit, labels, S):
    """Return a uint8 array ``[batch, nodes, L]`` of truth values."""
    labels = np.asarray(labels, dtype=np.uint64)
    B, _, L = labels.shape
    n = len(op)
    out = np.zeros((B, n, L), dtype=np.uint8)
    for i in range(n):
        code = op[i]
        if code == OP_ATOM:
            out[:, i, :] = (labels[:, slot[i], :] >> np.uint64(bit[i])) & np.uint64(1)
        elif code == OP_TRUE:
            out[:, i, :] = 1
        elif code == OP_FALSE:
            pass
        elif code == OP_NOT:
            out[:, i, :] = 1 - out[:, a[i], :]
        elif code == OP_OR:
            out[:, i, :] = out[:, a[i], :] | out[:, b[i], :]
        elif code == OP_AND:
            out[:, i, :] = out[:, a[i], :] & out[:, b[i], :]
        elif code == OP_IMPLIES:
            out[:, i, :] = (1 - out[:, a[i], :]) | out[:, b[i], :]
        elif code == OP_IFF:
            out[:, i, :] = 1 - (out[:, a[i], :] ^ out[:, b[i], :])
        elif code == OP_NEXT:
            out[:, i, : L - 1] = out[:, a[i], 1:]
            out[:, i, L - 1] = out[:, a[i], S]
        elif code in (OP_UNTIL, OP_F, OP_G):
            _fixpoint(out, i, code, a[i], b[i], S, L)
        else:  # pragma: no cover
            raise ValueError(f"bad opcode {code}")
    return out


def _fixpoint(out, i, code, ai, bi, S, L):
    # Until and F are least fixpoints (start from 0), G is a greatest one.
    # Two backward sweeps over the loop reach the fixpoint, then one over the stem.
    col = out[:, i, :]
    if code == OP_G:
        col[:, S:] = 1
    for _ in range(2):
        for p in range(L - 1, S - 1, -1):
            nxt = col[:, p + 1] if p + 1 < L else col[:, S]
            col[:, p] = _step(out, code, ai, bi, p, nxt)
    for p in range(S - 1, -1, -1):
        col[:, p] = _step(out, code, ai, bi, p, col[:, p + 1])


def _step(out, code, ai, bi, p, nxt):
    if code == OP_UNTIL:
        return out[:, bi, p] | (out[:, ai, p] & nxt)
    if code == OP_F:
        return out[:, ai, p] | nxt
    return out[:, ai, p] & nxt
