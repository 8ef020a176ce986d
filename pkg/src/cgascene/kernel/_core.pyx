# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled kernel for the dense Cl(4,1) products (hot inner loop)."""
import numpy as np

from . import tables

BACKEND = "ext"

cdef double[32][32] _GP_SIGN
cdef double[32][32] _OUTER_SIGN
cdef double[32] _REV

_gp_np = tables.gp_sign_table()
_outer_np = tables.outer_sign_table()
_rev_np = tables.reverse_sign_vector()
cdef Py_ssize_t _i, _j
for _i in range(32):
    _REV[_i] = _rev_np[_i]
    for _j in range(32):
        _GP_SIGN[_i][_j] = _gp_np[_i, _j]
        _OUTER_SIGN[_i][_j] = _outer_np[_i, _j]
del _gp_np, _outer_np, _rev_np


def gp(const double[::1] a, const double[::1] b):
    out_np = np.zeros(32, dtype=np.float64)
    cdef double[::1] out = out_np
    cdef Py_ssize_t i, j
    cdef double ai
    for i in range(32):
        ai = a[i]
        if ai == 0.0:
            continue
        for j in range(32):
            out[i ^ j] += _GP_SIGN[i][j] * ai * b[j]
    return out_np


def outer(const double[::1] a, const double[::1] b):
    out_np = np.zeros(32, dtype=np.float64)
    cdef double[::1] out = out_np
    cdef Py_ssize_t i, j
    cdef double ai
    for i in range(32):
        ai = a[i]
        if ai == 0.0:
            continue
        for j in range(32):
            out[i ^ j] += _OUTER_SIGN[i][j] * ai * b[j]
    return out_np


def reverse(const double[::1] a):
    out_np = np.empty(32, dtype=np.float64)
    cdef double[::1] out = out_np
    cdef Py_ssize_t i
    for i in range(32):
        out[i] = _REV[i] * a[i]
    return out_np
