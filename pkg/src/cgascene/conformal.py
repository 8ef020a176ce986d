"""Conformal model layer: null basis, point embedding, motors, sandwich.

Euclidean 3D points live in the algebra as null vectors
P = no + x*e1 + y*e2 + z*e3 + 0.5*|x|^2*ni, and every supported
transformation (translation, rotation, origin dilation) is a motor applied
through the sandwich product P' = M * P * ~M.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .ga import Multivector, e1, e2, e3, e4, e5, vector_dot

# Null basis: origin and point at infinity.
NO = 0.5 * (e5 - e4)
NI = e4 + e5

_EUCLIDEAN = (e1, e2, e3)
_MIN_POINT_WEIGHT = 1e-12


class DegeneratePointError(ValueError):
    """Raised when a conformal point has no usable infinity component."""


class DegeneratePlaneError(ValueError):
    """Raised when a rotation plane collapses (u and v not independent)."""


def null_basis() -> tuple[Multivector, Multivector]:
    """The fixed null vectors (no, ni) of the conformal model."""
    return NO, NI


@dataclass(frozen=True)
class ConformalPoint:
    """Grade-1 multivector in the null cone representing a 3D point."""

    value: Multivector

    def euclidean(self) -> tuple[float, float, float]:
        return down(self)


@dataclass(frozen=True)
class Motor:
    """Even-grade versor; kind_hint is diagnostic only."""

    value: Multivector
    kind_hint: str = field(default="composite")

    def __mul__(self, other: "Motor") -> "Motor":
        if not isinstance(other, Motor):
            return NotImplemented
        return Motor(self.value * other.value, kind_hint="composite")

    def reverse(self) -> Multivector:
        return ~self.value


IDENTITY_MOTOR = Motor(Multivector.scalar(1.0), kind_hint="composite")


def up(x: float, y: float, z: float) -> ConformalPoint:
    """Embed a Euclidean point into the conformal model."""
    v = x * e1 + y * e2 + z * e3
    return ConformalPoint(NO + v + 0.5 * (x * x + y * y + z * z) * NI)


def down(p: ConformalPoint) -> tuple[float, float, float]:
    """Recover Euclidean coordinates: x_i = (P . e_i) / -(P . ni).

    Homogeneous in the point weight, so uniformly scaled points project to
    the same location.
    """
    value = p.value if isinstance(p, ConformalPoint) else p
    weight = vector_dot(value, NI)
    if abs(weight) < _MIN_POINT_WEIGHT:
        raise DegeneratePointError("point has (near-)zero ni component; cannot project")
    denom = -weight
    return tuple(vector_dot(value, b) / denom for b in _EUCLIDEAN)


def translator(tx: float, ty: float, tz: float) -> Motor:
    """Translation motor T(t) = 1 - 0.5 * t * ni."""
    t = tx * e1 + ty * e2 + tz * e3
    return Motor(Multivector.scalar(1.0) - 0.5 * (t * NI), kind_hint="translator")


def rotor(angle_rad: float, u: Multivector, v: Multivector) -> Motor:
    """Rotation motor cos(a/2) - sin(a/2) * B in the u-v plane.

    The plane bivector u^v is normalized to unit magnitude, so u and v may
    be any two independent grade-1 vectors; orientation follows u -> v.
    """
    for name, vec in (("u", u), ("v", v)):
        if not isinstance(vec, Multivector) or not vec.is_grade(1):
            raise ValueError(f"rotor plane argument {name} must be a grade-1 vector")
    plane = u ^ v
    norm_sq = (plane * ~plane).scalar_part
    if norm_sq <= 1e-24:
        raise DegeneratePlaneError("rotation plane u^v is degenerate")
    plane = plane / math.sqrt(norm_sq)
    half = 0.5 * angle_rad
    return Motor(Multivector.scalar(math.cos(half)) - math.sin(half) * plane, kind_hint="rotor")


def dilator(s: float) -> Motor:
    """Dilation motor about the world origin, scaling distances by s > 0."""
    if not (isinstance(s, (int, float)) and s > 0):
        raise ValueError(f"dilation factor must be > 0, got {s!r}")
    big_e = NO ^ NI
    g = 0.5 * math.log(s)
    return Motor(Multivector.scalar(math.cosh(g)) + math.sinh(g) * big_e, kind_hint="dilator")


def apply(motor: Motor, point: ConformalPoint) -> ConformalPoint:
    """Sandwich product P' = M * P * ~M, re-projected to grade 1."""
    m = motor.value if isinstance(motor, Motor) else motor
    value = point.value if isinstance(point, ConformalPoint) else point
    moved = (m * value) * (~m)
    return ConformalPoint(moved.grade_project(1))


def compose(motors: Sequence[Motor] | Iterable[Motor]) -> Motor:
    """Left-fold geometric product; the rightmost motor applies first."""
    motors = list(motors)
    if not motors:
        raise ValueError("compose requires at least one motor")
    if len(motors) == 1:
        return motors[0]
    value = motors[0].value
    for m in motors[1:]:
        value = value * m.value
    return Motor(value, kind_hint="composite")


def transform_point(motor: Motor, xyz: Sequence[float]) -> tuple[float, float, float]:
    """Convenience path used by executors: up -> sandwich -> down."""
    return down(apply(motor, up(*xyz)))
