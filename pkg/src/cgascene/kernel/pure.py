"""Numpy fallback kernel for the dense Cl(4,1) products.

The geometric product is reorganized as a gather + 32x32 matvec:
out[t] = sum_i a[i] * b[i^t] * S[i, i^t], so for fixed t the b-indices and
signs are table lookups and the whole product is one matrix-vector multiply.
"""
from __future__ import annotations

import numpy as np

from . import tables

BACKEND = "pure"

_GP_SIGN = tables.gp_sign_table()
_OUTER_SIGN = tables.outer_sign_table()
_REV = tables.reverse_sign_vector()

_IDX = np.arange(32)
# J[t, i] = i ^ t: which coefficient of b pairs with a[i] to land on blade t.
_J = _IDX[None, :] ^ _IDX[:, None]
_G_GP = _GP_SIGN[_IDX[None, :], _J]
_G_OUTER = _OUTER_SIGN[_IDX[None, :], _J]


def gp(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (_G_GP * b[_J]) @ a


def outer(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (_G_OUTER * b[_J]) @ a


def reverse(a: np.ndarray) -> np.ndarray:
    return _REV * a
