"""Non-CGA representation executors: Compact SE3 queues and Euclidean 4x4.

SE3 requests are ordered lists of typed operations executed left-to-right;
rotation acts about the world origin (matching the CGA rotor's action on
embedded points) and scale is object-centric in every chain position.
The 4x4 path applies one homogeneous matrix per object to its center.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Sequence, Union

import numpy as np

from . import chains
from .chains import OperationChain
from .scene import Scene, UnknownObjectError


class Se3ParseError(ValueError):
    pass


class Mat4ParseError(ValueError):
    pass


class Mat4ApplyError(ValueError):
    pass


# -- Compact SE3 -------------------------------------------------------------

@dataclass(frozen=True)
class TranslateSe3:
    v: tuple[float, float, float]

    type = "T"


@dataclass(frozen=True)
class RotateSe3:
    axis: tuple[float, float, float]  # unit length after parsing
    angle_rad: float

    type = "R"


@dataclass(frozen=True)
class ScaleSe3:
    factor: float

    type = "D"


Se3Op = Union[TranslateSe3, RotateSe3, ScaleSe3]


@dataclass(frozen=True)
class Se3Request:
    assignments: dict[str, tuple[Se3Op, ...]]

    def __post_init__(self):
        if not self.assignments:
            raise ValueError("SE3 request must contain at least one assignment")


def _vec3(value, context: str) -> tuple[float, float, float]:
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise Se3ParseError(f"{context} must be a 3-element array")
    out = []
    for x in value:
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise Se3ParseError(f"{context} must contain numbers")
        out.append(float(x))
    return tuple(out)


def parse_se3(doc: Union[str, dict]) -> Se3Request:
    """Validate and normalize a Compact SE3 document.

    Schema per object: a nonempty list of {"type": "T"|"R"|"D", ...}.
    Rotation axes need not be unit length; they are normalized here.
    """
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise Se3ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not doc:
        raise Se3ParseError("SE3 request must be a nonempty JSON object")
    assignments: dict[str, tuple[Se3Op, ...]] = {}
    for name, raw_ops in doc.items():
        if not isinstance(name, str):
            raise Se3ParseError("object names must be strings")
        if not isinstance(raw_ops, list) or not raw_ops:
            raise Se3ParseError(f"operations for {name!r} must be a nonempty list")
        ops: list[Se3Op] = []
        for raw in raw_ops:
            if not isinstance(raw, dict) or "type" not in raw:
                raise Se3ParseError(f"operation for {name!r} is missing the 'type' field")
            tag = raw["type"]
            if tag == "T":
                if "v" not in raw:
                    raise Se3ParseError("translation is missing field 'v'")
                ops.append(TranslateSe3(v=_vec3(raw["v"], "'v'")))
            elif tag == "R":
                for fname in ("axis", "angle_rad"):
                    if fname not in raw:
                        raise Se3ParseError(f"rotation is missing field {fname!r}")
                axis = _vec3(raw["axis"], "'axis'")
                norm = math.sqrt(sum(a * a for a in axis))
                if norm < 1e-12:
                    raise Se3ParseError("rotation axis has zero norm")
                angle = raw["angle_rad"]
                if isinstance(angle, bool) or not isinstance(angle, (int, float)):
                    raise Se3ParseError("'angle_rad' must be a number")
                ops.append(RotateSe3(axis=tuple(a / norm for a in axis), angle_rad=float(angle)))
            elif tag == "D":
                factor = raw.get("factor")
                if isinstance(factor, bool) or not isinstance(factor, (int, float)):
                    raise Se3ParseError("scale is missing a numeric 'factor'")
                if factor <= 0:
                    raise Se3ParseError(f"scale factor must be > 0, got {factor}")
                ops.append(ScaleSe3(factor=float(factor)))
            else:
                raise Se3ParseError(f"unknown operation type {tag!r}")
        assignments[name] = tuple(ops)
    return Se3Request(assignments=assignments)


def rodrigues_matrix(axis: Sequence[float], angle_rad: float) -> np.ndarray:
    """3x3 rotation about a unit axis (Rodrigues form)."""
    kx, ky, kz = axis
    k = np.array([[0.0, -kz, ky], [kz, 0.0, -kx], [-ky, kx, 0.0]])
    eye = np.eye(3)
    return eye + math.sin(angle_rad) * k + (1.0 - math.cos(angle_rad)) * (k @ k)


def apply_se3(scene: Scene, req: Se3Request) -> Scene:
    """Execute each object's queue left-to-right against the scene."""
    current = scene
    for name, ops in req.assignments.items():
        obj = current.get(name)
        center = np.array(obj.center, dtype=float)
        size = obj.size
        for op in ops:
            if isinstance(op, TranslateSe3):
                center = center + np.array(op.v)
            elif isinstance(op, RotateSe3):
                center = rodrigues_matrix(op.axis, op.angle_rad) @ center
            else:
                size = size * op.factor
        current = current.with_object(
            replace(obj, center=tuple(float(c) for c in center), size=size)
        )
    return current


# -- Euclidean 4x4 ------------------------------------------------------------

@dataclass(frozen=True)
class Mat4Request:
    matrices: dict[str, np.ndarray]
    warnings: tuple[str, ...] = field(default_factory=tuple)


def parse_mat4(doc: Union[str, dict]) -> Mat4Request:
    """Validate name -> 4x4 nested numeric arrays.

    A non-affine bottom row is a diagnostic warning, not a parse failure;
    geometric validity is judged separately from parse validity.
    """
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise Mat4ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not doc:
        raise Mat4ParseError("matrix request must be a nonempty JSON object")
    matrices: dict[str, np.ndarray] = {}
    warnings: list[str] = []
    for name, raw in doc.items():
        try:
            m = np.array(raw, dtype=float)
        except (TypeError, ValueError) as exc:
            raise Mat4ParseError(f"matrix for {name!r} has non-numeric entries") from exc
        if m.shape != (4, 4):
            raise Mat4ParseError(f"matrix for {name!r} must be 4x4, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise Mat4ParseError(f"matrix for {name!r} has non-finite entries")
        if not np.allclose(m[3], [0.0, 0.0, 0.0, 1.0], atol=1e-9):
            warnings.append(f"{name}: bottom row {m[3].tolist()} is not (0,0,0,1)")
        matrices[name] = m
    return Mat4Request(matrices=matrices, warnings=tuple(warnings))


def apply_mat4(scene: Scene, req: Mat4Request) -> Scene:
    """Transform each object's center by its homogeneous matrix.

    The 4x4 interface has no object-centric scale channel, so size is never
    touched; a uniform-scale diagonal acts on the center about the origin.
    """
    current = scene
    for name, m in req.matrices.items():
        obj = current.get(name)
        v = m @ np.array([*obj.center, 1.0])
        w = v[3]
        if abs(w) < 1e-12:
            raise Mat4ApplyError(f"matrix for {name!r} sends the center to w'=0")
        center = tuple(float(c) for c in v[:3] / w)
        current = current.with_object(replace(obj, center=center))
    return current


@dataclass(frozen=True)
class RotationDiagnostic:
    orthonormality_residual: float
    det: float


def rotation_consistency_check(m: np.ndarray) -> RotationDiagnostic:
    """Report how far the upper-left 3x3 block is from the rotation group."""
    u = np.asarray(m, dtype=float)[:3, :3]
    residual = float(np.max(np.abs(u.T @ u - np.eye(3))))
    return RotationDiagnostic(orthonormality_residual=residual, det=float(np.linalg.det(u)))


# -- chain extraction ----------------------------------------------------------

def se3_chain(ops: Sequence[Se3Op]) -> OperationChain:
    """SE3 queues already are execution-ordered."""
    out = []
    for op in ops:
        if isinstance(op, TranslateSe3):
            out.append(chains.translate_op(*op.v))
        elif isinstance(op, RotateSe3):
            out.append(chains.rotate_op(op.axis, op.angle_rad))
        else:
            out.append(chains.dilate_op(op.factor))
    return OperationChain(tuple(out))


def classify_mat4(m: np.ndarray, atol: float = 1e-9) -> chains.ChainOp:
    """One opaque chain op per matrix: pure translation, pure rotation,
    uniform dilation about the origin, or 'other'."""
    m = np.asarray(m, dtype=float)
    if not np.allclose(m[3], [0.0, 0.0, 0.0, 1.0], atol=atol):
        return chains.ChainOp(chains.OTHER, ())
    u = m[:3, :3]
    t = m[:3, 3]
    translation = bool(np.max(np.abs(t)) > atol)
    if np.allclose(u, np.eye(3), atol=atol):
        return chains.translate_op(*t)
    if not translation:
        diag = ChainExtractors.uniform_scale(u, atol)
        if diag is not None:
            return chains.dilate_op(diag)
        axis_angle = ChainExtractors.rotation_axis_angle(u, atol)
        if axis_angle is not None:
            return chains.rotate_op(axis_angle[0], axis_angle[1])
    return chains.ChainOp(chains.OTHER, ())


class ChainExtractors:
    @staticmethod
    def uniform_scale(u: np.ndarray, atol: float):
        s = u[0, 0]
        if s > 0 and np.allclose(u, s * np.eye(3), atol=atol):
            return float(s)
        return None

    @staticmethod
    def rotation_axis_angle(u: np.ndarray, atol: float):
        if np.max(np.abs(u.T @ u - np.eye(3))) > 1e-6 or abs(np.linalg.det(u) - 1.0) > 1e-6:
            return None
        cos_theta = max(-1.0, min(1.0, (np.trace(u) - 1.0) / 2.0))
        theta = math.acos(cos_theta)
        if theta < 1e-12:
            return None  # identity; caller treats as not-a-rotation
        if math.pi - theta < 1e-6:
            # Near 180 degrees the skew part vanishes; recover the axis from
            # the symmetric part instead.
            w, vecs = np.linalg.eigh(u)
            axis = vecs[:, int(np.argmax(w))]
            return tuple(float(a) for a in axis), theta
        axis = np.array([u[2, 1] - u[1, 2], u[0, 2] - u[2, 0], u[1, 0] - u[0, 1]])
        axis = axis / (2.0 * math.sin(theta))
        return tuple(float(a) for a in axis), theta


def mat4_chain(m: np.ndarray) -> OperationChain:
    return OperationChain((classify_mat4(m),))
