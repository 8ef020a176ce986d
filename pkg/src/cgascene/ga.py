"""Dense multivector arithmetic for Cl(4,1), signature (+,+,+,+,-).

A multivector is a 32-slot coefficient vector indexed by basis-blade
bitmask over {e1..e5} (bit i set means e(i+1) present, ascending order).
All operations are pure and total on finite inputs.
"""
from __future__ import annotations

from typing import Iterable, Union

import numpy as np

from . import kernel
from .kernel import tables

SIGNATURE = tables.METRIC
_GRADES = tables.grade_vector()
_GRADE_MASKS = tuple(_GRADES == k for k in range(6))

Number = Union[int, float]


class Multivector:
    """General element of Cl(4,1) as a dense 32-coefficient array."""

    __slots__ = ("_c",)

    def __init__(self, coefficients: Iterable[float]):
        c = np.asarray(coefficients, dtype=np.float64)
        if c.shape != (32,):
            raise ValueError(f"expected 32 coefficients, got shape {c.shape}")
        self._c = c.copy()

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls) -> "Multivector":
        return cls._wrap(np.zeros(32))

    @classmethod
    def scalar(cls, value: float) -> "Multivector":
        c = np.zeros(32)
        c[0] = value
        return cls._wrap(c)

    @classmethod
    def basis_vector(cls, i: int) -> "Multivector":
        """e_i for i in 1..5."""
        if not 1 <= i <= 5:
            raise ValueError(f"basis vector index must be 1..5, got {i}")
        return cls.from_blade(1 << (i - 1))

    @classmethod
    def from_blade(cls, mask: int, coefficient: float = 1.0) -> "Multivector":
        if not 0 <= mask < 32:
            raise ValueError(f"blade bitmask must be 0..31, got {mask}")
        c = np.zeros(32)
        c[mask] = coefficient
        return cls._wrap(c)

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "Multivector":
        mv = object.__new__(cls)
        mv._c = arr
        return mv

    # -- accessors -------------------------------------------------------
    @property
    def coefficients(self) -> np.ndarray:
        return self._c.copy()

    def coefficient(self, mask: int) -> float:
        return float(self._c[mask])

    @property
    def scalar_part(self) -> float:
        return float(self._c[0])

    def grades(self) -> set[int]:
        return {int(g) for g in _GRADES[self._c != 0.0]}

    def is_grade(self, k: int) -> bool:
        return bool(np.all(self._c[~_GRADE_MASKS[k]] == 0.0))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self._c)))

    # -- algebra ---------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Multivector._wrap(self._c + other._c)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Multivector._wrap(self._c - other._c)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Multivector._wrap(other._c - self._c)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return Multivector._wrap(kernel.gp(self._c, other._c))
        if isinstance(other, (int, float)):
            return Multivector._wrap(self._c * float(other))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return Multivector._wrap(self._c * float(other))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return Multivector._wrap(self._c / float(other))
        return NotImplemented

    def __xor__(self, other):
        if isinstance(other, Multivector):
            return Multivector._wrap(kernel.outer(self._c, other._c))
        return NotImplemented

    def __invert__(self) -> "Multivector":
        return Multivector._wrap(kernel.reverse(self._c))

    def __neg__(self) -> "Multivector":
        return Multivector._wrap(-self._c)

    def grade_project(self, k: int) -> "Multivector":
        if not 0 <= k <= 5:
            raise ValueError(f"grade must be 0..5, got {k}")
        out = np.zeros(32)
        mask = _GRADE_MASKS[k]
        out[mask] = self._c[mask]
        return Multivector._wrap(out)

    # -- comparison ------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, float)):
            other = Multivector.scalar(other)
        if not isinstance(other, Multivector):
            return NotImplemented
        return bool(np.array_equal(self._c, other._c))

    def __hash__(self):
        return hash(self._c.tobytes())

    def allclose(self, other: "Multivector", atol: float = 1e-9) -> bool:
        return bool(np.allclose(self._c, other._c, rtol=0.0, atol=atol))

    def __repr__(self) -> str:
        terms = []
        for mask in range(32):
            v = self._c[mask]
            if v != 0.0:
                terms.append(f"{v:g}*{blade_name(mask)}" if mask else f"{v:g}")
        return " + ".join(terms) if terms else "0"


def _coerce(x):
    if isinstance(x, Multivector):
        return x
    if isinstance(x, (int, float)):
        return Multivector.scalar(float(x))
    return NotImplemented


def blade_name(mask: int) -> str:
    if mask == 0:
        return "1"
    return "e" + "".join(str(i + 1) for i in range(5) if mask & (1 << i))


# Module-level basis vectors.
e1 = Multivector.basis_vector(1)
e2 = Multivector.basis_vector(2)
e3 = Multivector.basis_vector(3)
e4 = Multivector.basis_vector(4)
e5 = Multivector.basis_vector(5)


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    return a * b


def outer_product(a: Multivector, b: Multivector) -> Multivector:
    return a ^ b


def reverse(a: Multivector) -> Multivector:
    return ~a


def grade_project(a: Multivector, k: int) -> Multivector:
    return a.grade_project(k)


def vector_dot(a: Multivector, b: Multivector) -> float:
    """Metric inner product of two grade-1 multivectors.

    Equals the scalar part of their geometric product; rejects inputs that
    carry any non-vector component.
    """
    for name, mv in (("a", a), ("b", b)):
        if not mv.is_grade(1):
            raise ValueError(f"vector_dot argument {name} is not a pure grade-1 vector")
    ca, cb = a._c, b._c
    total = 0.0
    for i in range(5):
        total += ca[1 << i] * cb[1 << i] * SIGNATURE[i]
    return float(total)
