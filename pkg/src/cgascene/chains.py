"""Representation-neutral ordered operation chains.

A chain records typed transformations in *execution order*, regardless of
the wire format they came from: CGA factor strings execute right-to-left,
SE3 queues left-to-right, and a 4x4 matrix is a single opaque op classified
from its structure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

TRANSLATE = "translate"
ROTATE = "rotate"
DILATE = "dilate"
OTHER = "other"  # unclassifiable 4x4 matrices only

KINDS = (TRANSLATE, ROTATE, DILATE, OTHER)


@dataclass(frozen=True)
class ChainOp:
    kind: str
    params: tuple[float, ...]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown chain op kind {self.kind!r}")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))


@dataclass(frozen=True)
class OperationChain:
    ops: tuple[ChainOp, ...]

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))

    def kinds(self) -> tuple[str, ...]:
        return tuple(op.kind for op in self.ops)

    def __len__(self) -> int:
        return len(self.ops)


def translate_op(dx: float, dy: float, dz: float) -> ChainOp:
    return ChainOp(TRANSLATE, (dx, dy, dz))


def rotate_op(axis: Sequence[float], angle_rad: float) -> ChainOp:
    """Canonical rotation op: unit axis, non-negative angle.

    (axis, angle) and (-axis, -angle) describe the same rotation, so the
    sign is folded into the axis to make cross-format comparison stable.
    """
    ax, ay, az = (float(a) for a in axis)
    norm = math.sqrt(ax * ax + ay * ay + az * az)
    if norm == 0.0:
        raise ValueError("rotation axis must have nonzero norm")
    ax, ay, az = ax / norm, ay / norm, az / norm
    if angle_rad < 0:
        ax, ay, az, angle_rad = -ax, -ay, -az, -angle_rad
    return ChainOp(ROTATE, (ax, ay, az, float(angle_rad)))


def dilate_op(s: float) -> ChainOp:
    return ChainOp(DILATE, (float(s),))


def chain_from_spec(entries: Sequence[dict]) -> OperationChain:
    """Build a chain from task-definition dicts: {kind, params}."""
    ops = []
    for entry in entries:
        kind = entry["kind"]
        params = entry["params"]
        if kind == TRANSLATE:
            ops.append(translate_op(*params))
        elif kind == ROTATE:
            ops.append(rotate_op(params[:3], params[3]))
        elif kind == DILATE:
            ops.append(dilate_op(params[0]))
        else:
            ops.append(ChainOp(OTHER, tuple(params)))
    return OperationChain(tuple(ops))
