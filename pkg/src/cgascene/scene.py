"""Scene state: named primitives, bounding boxes, motor application, meshes.

Scenes are immutable snapshots; every mutation returns a new scene with the
revision bumped, which keeps before/after comparison and undo trivial.
Axis convention: e1 = X (right), e2 = Y (up), e3 = Z (towards viewer).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from importlib import resources
from typing import Mapping

from .conformal import Motor, transform_point

SHAPES = ("sphere", "cube")
SCENE_DOC_VERSION = 1


class UnknownObjectError(KeyError):
    """Raised when an edit references an object name not in the scene."""


@dataclass(frozen=True)
class SceneObject:
    name: str
    shape: str
    color: str
    center: tuple[float, float, float]
    size: float

    def __post_init__(self):
        if not self.name:
            raise ValueError("object name must be nonempty")
        if self.shape not in SHAPES:
            raise ValueError(f"shape must be one of {SHAPES}, got {self.shape!r}")
        if not self.size > 0:
            raise ValueError(f"size must be > 0, got {self.size}")
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if len(self.center) != 3:
            raise ValueError("center must have 3 components")


@dataclass(frozen=True)
class Scene:
    """Ordered name -> SceneObject map plus a monotonic revision counter."""

    objects: Mapping[str, SceneObject]
    revision: int = 0

    def __post_init__(self):
        for name, obj in self.objects.items():
            if name != obj.name:
                raise ValueError(f"key {name!r} does not match object name {obj.name!r}")

    def get(self, name: str) -> SceneObject:
        try:
            return self.objects[name]
        except KeyError:
            raise UnknownObjectError(name) from None

    def with_object(self, obj: SceneObject) -> "Scene":
        if obj.name not in self.objects:
            raise UnknownObjectError(obj.name)
        objects = dict(self.objects)
        objects[obj.name] = obj
        return Scene(objects=objects, revision=self.revision + 1)

    def __len__(self) -> int:
        return len(self.objects)


def default_scene() -> Scene:
    """The fixed 5-object test scene, loaded from the packaged config."""
    with resources.files("cgascene.data.scenes").joinpath("default_scene.json").open() as f:
        return scene_from_document(json.load(f))


def aabb(obj: SceneObject) -> tuple[tuple[float, float, float], tuple[float, float, float]]:
    """Axis-aligned bounds: center +/- size (half-extent) componentwise."""
    lo = tuple(c - obj.size for c in obj.center)
    hi = tuple(c + obj.size for c in obj.center)
    return lo, hi


def apply_motor_to_object(scene: Scene, name: str, motor: Motor) -> Scene:
    """Move one object's center through the sandwich product; size unchanged."""
    obj = scene.get(name)
    new_center = transform_point(motor, obj.center)
    return scene.with_object(replace(obj, center=new_center))


def scale_object(scene: Scene, name: str, s: float) -> Scene:
    """Object-centric uniform scale: size *= s, center fixed."""
    if not s > 0:
        raise ValueError(f"scale factor must be > 0, got {s}")
    obj = scene.get(name)
    return scene.with_object(replace(obj, size=obj.size * s))


# -- serialization ---------------------------------------------------------

def scene_to_document(scene: Scene) -> dict:
    """Wire/fixture format shared by the service and the benchmark."""
    return {
        "version": SCENE_DOC_VERSION,
        "revision": scene.revision,
        "objects": [
            {
                "name": o.name,
                "shape": o.shape,
                "color": o.color,
                "center": list(o.center),
                "size": o.size,
            }
            for o in scene.objects.values()
        ],
    }


def scene_from_document(doc: dict) -> Scene:
    if not isinstance(doc, dict) or "objects" not in doc:
        raise ValueError("scene document must be an object with an 'objects' list")
    objects: dict[str, SceneObject] = {}
    for entry in doc["objects"]:
        obj = SceneObject(
            name=entry["name"],
            shape=entry["shape"],
            color=entry["color"],
            center=tuple(entry["center"]),
            size=float(entry["size"]),
        )
        if obj.name in objects:
            raise ValueError(f"duplicate object name {obj.name!r}")
        objects[obj.name] = obj
    return Scene(objects=objects, revision=int(doc.get("revision", 0)))


# -- procedural meshes ------------------------------------------------------

@dataclass(frozen=True)
class Mesh:
    vertices: tuple[tuple[float, float, float], ...]
    faces: tuple[tuple[int, int, int], ...]


_GOLDEN = (1.0 + 5.0 ** 0.5) / 2.0

_ICO_VERTS = [
    (-1, _GOLDEN, 0), (1, _GOLDEN, 0), (-1, -_GOLDEN, 0), (1, -_GOLDEN, 0),
    (0, -1, _GOLDEN), (0, 1, _GOLDEN), (0, -1, -_GOLDEN), (0, 1, -_GOLDEN),
    (_GOLDEN, 0, -1), (_GOLDEN, 0, 1), (-_GOLDEN, 0, -1), (-_GOLDEN, 0, 1),
]

_ICO_FACES = [
    (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
    (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
    (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
    (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
]


def _normalized(v):
    n = (v[0] ** 2 + v[1] ** 2 + v[2] ** 2) ** 0.5
    return (v[0] / n, v[1] / n, v[2] / n)


def _icosphere() -> tuple[list, list]:
    """One subdivision of the icosahedron: 42 vertices, 80 faces."""
    verts = [_normalized(v) for v in _ICO_VERTS]
    midpoint_cache: dict[tuple[int, int], int] = {}

    def midpoint(i: int, j: int) -> int:
        key = (min(i, j), max(i, j))
        if key not in midpoint_cache:
            a, b = verts[i], verts[j]
            verts.append(_normalized(((a[0] + b[0]) / 2, (a[1] + b[1]) / 2, (a[2] + b[2]) / 2)))
            midpoint_cache[key] = len(verts) - 1
        return midpoint_cache[key]

    faces = []
    for (i, j, k) in _ICO_FACES:
        ij, jk, ki = midpoint(i, j), midpoint(j, k), midpoint(k, i)
        faces.extend([(i, ij, ki), (j, jk, ij), (k, ki, jk), (ij, jk, ki)])
    return verts, faces


_UNIT_SPHERE = _icosphere()

_CUBE_CORNERS = [
    (-1, -1, -1), (1, -1, -1), (1, 1, -1), (-1, 1, -1),
    (-1, -1, 1), (1, -1, 1), (1, 1, 1), (-1, 1, 1),
]

_CUBE_FACES = [
    (0, 1, 2), (0, 2, 3), (4, 6, 5), (4, 7, 6),
    (0, 4, 5), (0, 5, 1), (1, 5, 6), (1, 6, 2),
    (2, 6, 7), (2, 7, 3), (3, 7, 4), (3, 4, 0),
]


def make_mesh(obj: SceneObject) -> Mesh:
    """Procedural mesh: icosphere (42 v / 80 f) or cube (8 v / 12 f)."""
    cx, cy, cz = obj.center
    s = obj.size
    if obj.shape == "sphere":
        verts, faces = _UNIT_SPHERE
    else:
        verts, faces = _CUBE_CORNERS, _CUBE_FACES
    placed = tuple((cx + s * x, cy + s * y, cz + s * z) for (x, y, z) in verts)
    return Mesh(vertices=placed, faces=tuple(faces))
