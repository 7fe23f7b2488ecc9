# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernel; same contract as the numpy fallback."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint8_t, uint64_t, int8_t, int32_t

cnp.import_array()

cdef enum:
    OP_ATOM = 0
    OP_TRUE = 1
    OP_FALSE = 2
    OP_NOT = 3
    OP_OR = 4
    OP_AND = 5
    OP_IMPLIES = 6
    OP_IFF = 7
    OP_NEXT = 8
    OP_UNTIL = 9
    OP_F = 10
    OP_G = 11



def eval_batch(op, a, b, slot, bit, labels, Py_ssize_t S):
    cdef const int8_t[:] opv = np.ascontiguousarray(op, dtype=np.int8)
    cdef const int32_t[:] av = np.ascontiguousarray(a, dtype=np.int32)
    cdef const int32_t[:] bv = np.ascontiguousarray(b, dtype=np.int32)
    cdef const int32_t[:] sv = np.ascontiguousarray(slot, dtype=np.int32)
    cdef const int32_t[:] tv = np.ascontiguousarray(bit, dtype=np.int32)
    cdef const uint64_t[:, :, :] lab = np.ascontiguousarray(labels, dtype=np.uint64)
    cdef Py_ssize_t B = lab.shape[0], L = lab.shape[2], n = opv.shape[0]
    result = np.zeros((B, n, L), dtype=np.uint8)
    cdef uint8_t[:, :, :] out = result
    cdef Py_ssize_t k, i, p, rep, q
    cdef int code, x, y
    cdef uint8_t nxt
    with nogil:
        for k in range(B):
            for i in range(n):
                code = opv[i]
                x = av[i]
                y = bv[i]
                if code == OP_ATOM:
                    for p in range(L):
                        out[k, i, p] = <uint8_t>((lab[k, sv[i], p] >> tv[i]) & 1)
                elif code == OP_TRUE:
                    for p in range(L):
                        out[k, i, p] = 1
                elif code == OP_FALSE:
                    pass
                elif code == OP_NOT:
                    for p in range(L):
                        out[k, i, p] = 1 - out[k, x, p]
                elif code == OP_OR:
                    for p in range(L):
                        out[k, i, p] = out[k, x, p] | out[k, y, p]
                elif code == OP_AND:
                    for p in range(L):
                        out[k, i, p] = out[k, x, p] & out[k, y, p]
                elif code == OP_IMPLIES:
                    for p in range(L):
                        out[k, i, p] = (1 - out[k, x, p]) | out[k, y, p]
                elif code == OP_IFF:
                    for p in range(L):
                        out[k, i, p] = 1 - (out[k, x, p] ^ out[k, y, p])
                elif code == OP_NEXT:
                    for p in range(L - 1):
                        out[k, i, p] = out[k, x, p + 1]
                    out[k, i, L - 1] = out[k, x, S]
                else:
                    if code == OP_G:
                        for p in range(S, L):
                            out[k, i, p] = 1
                    for rep in range(2):
                        p = L - 1
                        while p >= S:
                            q = p + 1
                            if q >= L:
                                q = S
                            nxt = out[k, i, q]
                            if code == OP_UNTIL:
                                out[k, i, p] = out[k, y, p] | (out[k, x, p] & nxt)
                            elif code == OP_F:
                                out[k, i, p] = out[k, x, p] | nxt
                            else:
                                out[k, i, p] = out[k, x, p] & nxt
                            p -= 1
                    p = S - 1
                    while p >= 0:
                        nxt = out[k, i, p + 1]
                        if code == OP_UNTIL:
                            out[k, i, p] = out[k, y, p] | (out[k, x, p] & nxt)
                        elif code == OP_F:
                            out[k, i, p] = out[k, x, p] | nxt
                        else:
                            out[k, i, p] = out[k, x, p] & nxt
                        p -= 1
    return result
