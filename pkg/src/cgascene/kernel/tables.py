"""Blade multiplication tables for Cl(4,1).

Basis blades are indexed by bitmask over the five generators: bit i set
means e(i+1) is present, canonical orientation is ascending index order.
The metric is (+1, +1, +1, +1, -1).
"""
from __future__ import annotations

import numpy as np

DIM = 32
N_GENERATORS = 5
METRIC = (1.0, 1.0, 1.0, 1.0, -1.0)


def reorder_sign(a: int, b: int) -> int:
    """Sign from sorting the concatenated blade a++b into canonical order.

    Counts transpositions needed to interleave the generators of b into a;
    each swap of distinct generators contributes a factor of -1.
    """
    a >>= 1
    swaps = 0
    while a:
        swaps += bin(a & b).count("1")
        a >>= 1
    return 1 if swaps % 2 == 0 else -1


def blade_product(a: int, b: int) -> tuple[float, int]:
    """Geometric product of two basis blades: (sign, result bitmask).

    Shared generators contract against the metric; the result blade is the
    symmetric difference of the two index sets.
    """
    sign = float(reorder_sign(a, b))
    common = a & b
    for i in range(N_GENERATORS):
        if common & (1 << i):
            sign *= METRIC[i]
    return sign, a ^ b


def grade(mask: int) -> int:
    return bin(mask).count("1")


def gp_sign_table() -> np.ndarray:
    """32x32 sign matrix S with blade(i) * blade(j) = S[i,j] * blade(i^j)."""
    table = np.empty((DIM, DIM), dtype=np.float64)
    for i in range(DIM):
        for j in range(DIM):
            table[i, j], _ = blade_product(i, j)
    return table


def outer_sign_table() -> np.ndarray:
    """Like gp_sign_table but zero whenever the blades share a generator."""
    table = gp_sign_table().copy()
    for i in range(DIM):
        for j in range(DIM):
            if i & j:
                table[i, j] = 0.0
    return table


def reverse_sign_vector() -> np.ndarray:
    """Per-blade reversal signs (-1)^(k(k-1)/2) for grade k."""
    signs = np.empty(DIM, dtype=np.float64)
    for mask in range(DIM):
        k = grade(mask)
        signs[mask] = -1.0 if (k * (k - 1) // 2) % 2 else 1.0
    return signs


def grade_vector() -> np.ndarray:
    return np.array([grade(mask) for mask in range(DIM)], dtype=np.int64)
