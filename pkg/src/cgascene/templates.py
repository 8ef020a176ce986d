"""Deterministic spatial templates and template/LLM routing.

Known spatial keywords dispatch to closed-form displacement templates that
emit CGA edit requests; anything else goes to the model when one is
available, with a template fallback for graceful degradation.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional

from .cga_expr import EditRequest
from .scene import Scene, SceneObject, aabb


class TemplateError(ValueError):
    pass


class NoColorReferenceError(TemplateError):
    pass


@dataclass(frozen=True)
class RouteDecision:
    route: str  # template | llm | fallback_template
    matched_keyword: Optional[str] = None


@dataclass(frozen=True)
class SpatialRelation:
    kind: str  # next_to_left | on_top_of | between | rotate | scale
    mover: str
    targets: tuple[str, ...]
    angle_rad: Optional[float] = None
    plane: Optional[tuple[int, int]] = None
    factor: Optional[float] = None


# Priority levels; within a level the earliest occurrence wins.
_KEYWORDS = (
    ("on top", 1, "on_top_of"),
    ("between", 2, "between"),
    ("next to", 3, "next_to_left"),
    ("left", 3, "next_to_left"),
    ("rotate", 4, "rotate"),
    ("scale", 5, "scale"),
)


def match_keyword(instruction: str) -> Optional[tuple[str, str]]:
    """Best (keyword, relation kind) for the instruction, or None."""
    lowered = instruction.lower()
    hits = []
    for idx, (keyword, priority, kind) in enumerate(_KEYWORDS):
        pos = lowered.find(keyword)
        if pos >= 0:
            hits.append((priority, pos, idx, keyword, kind))
    if not hits:
        return None
    hits.sort()
    return hits[0][3], hits[0][4]


def route(instruction: str, llm_available: bool) -> RouteDecision:
    hit = match_keyword(instruction)
    if hit is not None:
        return RouteDecision(route="template", matched_keyword=hit[0])
    if llm_available:
        return RouteDecision(route="llm")
    return RouteDecision(route="fallback_template")


def parse_references(instruction: str, scene: Scene) -> tuple[str, tuple[str, ...]]:
    """First color mention names the mover, later mentions the targets.

    The color vocabulary is the scene's own object colors, matched by
    case-insensitive substring position.
    """
    lowered = instruction.lower()
    color_to_name: dict[str, str] = {}
    for obj in scene.objects.values():
        color_to_name.setdefault(obj.color.lower(), obj.name)
    mentions = []
    for color, name in color_to_name.items():
        start = 0
        while True:
            pos = lowered.find(color, start)
            if pos < 0:
                break
            mentions.append((pos, name))
            start = pos + len(color)
    if not mentions:
        raise NoColorReferenceError(
            f"no known color mentioned in {instruction!r} "
            f"(colors: {sorted(color_to_name)})"
        )
    mentions.sort()
    mover = mentions[0][1]
    targets = tuple(name for _, name in mentions[1:])
    return mover, targets


# -- expression emission -----------------------------------------------------

def _fmt(value: float) -> str:
    return repr(float(value))


def _translation_expr(dx: float, dy: float, dz: float) -> str:
    return f"T({_fmt(dx)}*e1 + {_fmt(dy)}*e2 + {_fmt(dz)}*e3)"


def _fmt_angle(angle_rad: float) -> str:
    """Render rational multiples of pi symbolically, else as a literal."""
    if angle_rad == 0.0:
        return "0.0"
    for denom in range(1, 13):
        numer = angle_rad * denom / math.pi
        rounded = round(numer)
        if rounded != 0 and abs(numer - rounded) < 1e-12:
            num_txt = "pi" if rounded == 1 else f"-pi" if rounded == -1 else f"{rounded}*pi"
            return num_txt if denom == 1 else f"{num_txt}/{denom}"
    return _fmt(angle_rad)


def _fmt_factor(s: float) -> str:
    return str(int(s)) if float(s).is_integer() else _fmt(s)


def next_to_left(mover: SceneObject, target: SceneObject) -> EditRequest:
    """Tangent placement on the target's -x side; mover keeps its own y,z."""
    target_min, _ = aabb(target)
    dx = target_min[0] - mover.size - mover.center[0]
    return EditRequest({mover.name: _translation_expr(dx, 0.0, 0.0)})


def on_top_of(mover: SceneObject, target: SceneObject) -> EditRequest:
    """Rest the mover's bottom on the target's top, centers x/z aligned."""
    _, target_max = aabb(target)
    new_y = target_max[1] + mover.size
    dx = target.center[0] - mover.center[0]
    dy = new_y - mover.center[1]
    dz = target.center[2] - mover.center[2]
    return EditRequest({mover.name: _translation_expr(dx, dy, dz)})


def between(mover: SceneObject, a: SceneObject, b: SceneObject) -> EditRequest:
    midpoint = tuple((ca + cb) / 2.0 for ca, cb in zip(a.center, b.center))
    delta = tuple(m - c for m, c in zip(midpoint, mover.center))
    return EditRequest({mover.name: _translation_expr(*delta)})


def rotate_template(mover: SceneObject, angle_rad: float, plane: tuple[int, int]) -> EditRequest:
    i, j = plane
    if i == j or not ({i, j} <= {1, 2, 3}):
        raise TemplateError(f"invalid rotation plane {plane!r}")
    return EditRequest({mover.name: f"R({_fmt_angle(angle_rad)}, e{i}, e{j})"})


def scale_template(mover: SceneObject, s: float) -> EditRequest:
    if not s > 0:
        raise TemplateError(f"scale factor must be > 0, got {s}")
    return EditRequest({mover.name: f"D({_fmt_factor(s)})"})


# -- NL parameter extraction ---------------------------------------------------

_NUMBER_RE = re.compile(r"(-?\d+(?:\.\d+)?)")
_PLANE_WORDS = {"xy": (1, 2), "xz": (1, 3), "yz": (2, 3)}


def _extract_angle(instruction: str) -> float:
    lowered = instruction.lower()
    m = _NUMBER_RE.search(lowered)
    if m is None:
        raise TemplateError(f"no rotation angle found in {instruction!r}")
    value = float(m.group(1))
    if "radian" in lowered or "rad" in lowered.split():
        return value
    return math.radians(value)


def _extract_plane(instruction: str) -> tuple[int, int]:
    lowered = instruction.lower()
    for word, plane in _PLANE_WORDS.items():
        if word in lowered:
            return plane
    return (1, 2)


def _extract_factor(instruction: str) -> float:
    lowered = instruction.lower()
    if "double" in lowered:
        return 2.0
    if "half" in lowered or "halve" in lowered:
        return 0.5
    m = _NUMBER_RE.search(lowered)
    if m is None:
        raise TemplateError(f"no scale factor found in {instruction!r}")
    return float(m.group(1))


def parse_spatial(instruction: str, scene: Scene) -> SpatialRelation:
    """Full NL -> relation parse for the template engine."""
    hit = match_keyword(instruction)
    if hit is None:
        raise TemplateError(f"no spatial keyword in {instruction!r}")
    _, kind = hit
    mover, targets = parse_references(instruction, scene)
    if kind == "between":
        if len(targets) < 2:
            raise TemplateError("'between' needs two reference objects")
        return SpatialRelation(kind=kind, mover=mover, targets=targets[:2])
    if kind in ("next_to_left", "on_top_of"):
        if len(targets) < 1:
            raise TemplateError(f"{kind!r} needs a target object")
        return SpatialRelation(kind=kind, mover=mover, targets=targets[:1])
    if kind == "rotate":
        return SpatialRelation(
            kind=kind, mover=mover, targets=(mover,),
            angle_rad=_extract_angle(instruction), plane=_extract_plane(instruction),
        )
    return SpatialRelation(
        kind="scale", mover=mover, targets=(mover,), factor=_extract_factor(instruction)
    )


def instantiate(relation: SpatialRelation, scene: Scene) -> EditRequest:
    mover = scene.get(relation.mover)
    if relation.kind == "next_to_left":
        return next_to_left(mover, scene.get(relation.targets[0]))
    if relation.kind == "on_top_of":
        return on_top_of(mover, scene.get(relation.targets[0]))
    if relation.kind == "between":
        return between(mover, scene.get(relation.targets[0]), scene.get(relation.targets[1]))
    if relation.kind == "rotate":
        return rotate_template(mover, relation.angle_rad, relation.plane)
    if relation.kind == "scale":
        return scale_template(mover, relation.factor)
    raise TemplateError(f"unknown relation kind {relation.kind!r}")


def template_request(instruction: str, scene: Scene) -> EditRequest:
    """Parse + instantiate in one step (the template engine entry point)."""
    return instantiate(parse_spatial(instruction, scene), scene)
