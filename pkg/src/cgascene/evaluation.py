"""The four verdict layers: parse validity, spatial accuracy, semantic
geometry checks, and sequence fidelity.

Parse validity means the raw output is well-formed AND evaluable; semantic
checks run geometry rules on the executed scene; sequence fidelity requires
the expected ordered operation chain to appear, in order and with matching
parameters, in the executed chain.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from . import baselines, cga_expr
from .baselines import Mat4Request, Se3Request
from .chains import ChainOp, OperationChain
from .cga_expr import EditRequest
from .scene import Scene, UnknownObjectError

OUTPUT_KINDS = ("cga_json", "se3_json", "mat4_json")

EXACT_SUCCESS_THRESHOLD = 0.5  # world units
PLACEMENT_TOLERANCE = 0.5
SCALE_TOLERANCE = 1e-3  # relative
PARAM_REL_TOL = 1e-6


@dataclass
class Verdict:
    parse_ok: bool
    semantic_ok: Optional[bool] = None
    fidelity_ok: Optional[bool] = None
    spatial_error: Optional[float] = None
    diagnostics: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.parse_ok and (self.semantic_ok is not None or self.fidelity_ok is not None):
            raise ValueError("semantic/fidelity verdicts require parse_ok")


ParsedRequest = Union[EditRequest, Se3Request, Mat4Request]


@dataclass(frozen=True)
class ParseOutcome:
    parse_ok: bool
    request: Optional[ParsedRequest] = None
    diagnostics: tuple[str, ...] = ()


def check_parse(raw: str, kind: str) -> ParseOutcome:
    """Route the raw output to the right parser; failures become verdicts."""
    if kind == "cga_json":
        try:
            request = cga_expr.parse_request(raw)
            for expr in request.assignments.values():
                cga_expr.evaluate_cga(cga_expr.parse_cga(expr))
            return ParseOutcome(parse_ok=True, request=request)
        except cga_expr.CgaError as exc:
            return ParseOutcome(parse_ok=False, diagnostics=(str(exc),))
    if kind == "se3_json":
        try:
            return ParseOutcome(parse_ok=True, request=baselines.parse_se3(raw))
        except baselines.Se3ParseError as exc:
            return ParseOutcome(parse_ok=False, diagnostics=(str(exc),))
    if kind == "mat4_json":
        try:
            request = baselines.parse_mat4(raw)
            return ParseOutcome(parse_ok=True, request=request, diagnostics=request.warnings)
        except baselines.Mat4ParseError as exc:
            return ParseOutcome(parse_ok=False, diagnostics=(str(exc),))
    raise ValueError(f"unknown output kind {kind!r}")


def execute_parsed(scene: Scene, request: ParsedRequest) -> Scene:
    """Shared execution dispatch used by the benchmark and the service."""
    if isinstance(request, EditRequest):
        return cga_expr.execute_request(scene, request).scene
    if isinstance(request, Se3Request):
        return baselines.apply_se3(scene, request)
    if isinstance(request, Mat4Request):
        return baselines.apply_mat4(scene, request)
    raise TypeError(f"not an executable request: {type(request).__name__}")


# -- spatial accuracy ------------------------------------------------------------

def spatial_error(
    scene_after: Scene, expected: dict[str, Sequence[float]]
) -> tuple[dict[str, float], bool]:
    """Euclidean center error per object; success iff max error < 0.5."""
    errors: dict[str, float] = {}
    for name, target in expected.items():
        center = scene_after.get(name).center
        errors[name] = math.dist(center, tuple(float(t) for t in target))
    exact_success = max(errors.values()) < EXACT_SUCCESS_THRESHOLD if errors else False
    return errors, exact_success


# -- semantic rules ---------------------------------------------------------------

@dataclass(frozen=True)
class SurfaceContact:
    mover: str
    target: str
    axis: int  # 0=x, 1=y, 2=z
    tolerance: float = PLACEMENT_TOLERANCE


@dataclass(frozen=True)
class Midpoint:
    mover: str
    a: str
    b: str
    tolerance: float = PLACEMENT_TOLERANCE


@dataclass(frozen=True)
class TargetDisplacement:
    mover: str
    delta: tuple[float, float, float]
    tolerance: float = PLACEMENT_TOLERANCE


@dataclass(frozen=True)
class ScaleFactor:
    mover: str
    s: float
    tolerance: float = SCALE_TOLERANCE  # relative


@dataclass(frozen=True)
class AbsolutePlacement:
    mover: str
    position: tuple[float, float, float]
    tolerance: float = PLACEMENT_TOLERANCE


SemanticRule = Union[SurfaceContact, Midpoint, TargetDisplacement, ScaleFactor, AbsolutePlacement]


def check_semantic(rule: SemanticRule, scene_before: Scene, scene_after: Scene) -> bool:
    if rule.tolerance <= 0:
        raise ValueError("rule tolerance must be > 0")
    if isinstance(rule, SurfaceContact):
        mover = scene_after.get(rule.mover)
        target = scene_after.get(rule.target)
        gap = abs(mover.center[rule.axis] - target.center[rule.axis]) - (mover.size + target.size)
        return abs(gap) <= rule.tolerance
    if isinstance(rule, Midpoint):
        mover = scene_after.get(rule.mover)
        a = scene_after.get(rule.a)
        b = scene_after.get(rule.b)
        mid = tuple((ca + cb) / 2.0 for ca, cb in zip(a.center, b.center))
        return math.dist(mover.center, mid) <= rule.tolerance
    if isinstance(rule, TargetDisplacement):
        before = scene_before.get(rule.mover).center
        after = scene_after.get(rule.mover).center
        moved = tuple(a - b for a, b in zip(after, before))
        return math.dist(moved, tuple(rule.delta)) <= rule.tolerance
    if isinstance(rule, ScaleFactor):
        before = scene_before.get(rule.mover).size
        after = scene_after.get(rule.mover).size
        return abs(after / before - rule.s) <= rule.tolerance * rule.s
    if isinstance(rule, AbsolutePlacement):
        after = scene_after.get(rule.mover).center
        return math.dist(after, tuple(rule.position)) <= rule.tolerance
    raise TypeError(f"unknown semantic rule {rule!r}")


_RULE_BUILDERS = {
    "surface_contact": lambda d: SurfaceContact(
        mover=d["mover"], target=d["target"], axis=int(d["axis"]),
        tolerance=float(d.get("tolerance", PLACEMENT_TOLERANCE))),
    "midpoint": lambda d: Midpoint(
        mover=d["mover"], a=d["a"], b=d["b"],
        tolerance=float(d.get("tolerance", PLACEMENT_TOLERANCE))),
    "target_displacement": lambda d: TargetDisplacement(
        mover=d["mover"], delta=tuple(float(x) for x in d["delta"]),
        tolerance=float(d.get("tolerance", PLACEMENT_TOLERANCE))),
    "scale_factor": lambda d: ScaleFactor(
        mover=d["mover"], s=float(d["s"]),
        tolerance=float(d.get("tolerance", SCALE_TOLERANCE))),
    "absolute_placement": lambda d: AbsolutePlacement(
        mover=d["mover"], position=tuple(float(x) for x in d["position"]),
        tolerance=float(d.get("tolerance", PLACEMENT_TOLERANCE))),
}


def rule_from_spec(entry: dict) -> SemanticRule:
    """Build a rule from its task-definition dict: {rule: <name>, ...}."""
    try:
        builder = _RULE_BUILDERS[entry["rule"]]
    except KeyError:
        raise ValueError(f"unknown semantic rule name {entry.get('rule')!r}") from None
    return builder(entry)


# -- chain extraction and fidelity --------------------------------------------------

def extract_chain(request: ParsedRequest, kind: str, name: Optional[str] = None) -> OperationChain:
    """Canonical execution-ordered chain for one object's edit.

    CGA factor chains reverse (rightmost factor applies first); SE3 queues
    keep list order; a 4x4 matrix becomes a single structurally-classified
    op.
    """
    if isinstance(request, EditRequest):
        expr = _select_assignment(request.assignments, name)
        return cga_expr.evaluate_cga(cga_expr.parse_cga(expr)).op_chain
    if isinstance(request, Se3Request):
        ops = _select_assignment(request.assignments, name)
        return baselines.se3_chain(ops)
    if isinstance(request, Mat4Request):
        matrix = _select_assignment(request.matrices, name)
        return baselines.mat4_chain(matrix)
    raise TypeError(f"cannot extract a chain from {type(request).__name__} (kind={kind})")


def _select_assignment(mapping: dict, name: Optional[str]):
    if name is not None:
        if name not in mapping:
            raise UnknownObjectError(name)
        return mapping[name]
    if len(mapping) != 1:
        raise ValueError("request has multiple assignments; specify the object name")
    return next(iter(mapping.values()))


def _params_match(expected: ChainOp, actual: ChainOp) -> bool:
    if expected.kind != actual.kind:
        return False
    if len(expected.params) != len(actual.params):
        return False
    return all(
        math.isclose(a, b, rel_tol=PARAM_REL_TOL, abs_tol=PARAM_REL_TOL)
        for a, b in zip(expected.params, actual.params)
    )


def check_sequence_fidelity(expected: OperationChain, actual: OperationChain) -> bool:
    """True iff expected ops appear as an in-order subsequence of actual.

    Matching needs both the op kind and parameter agreement (1e-6 relative
    with the same absolute floor), so a reordered chain with renamed
    parameters cannot pass. Greedy earliest matching is exact for
    subsequence containment.
    """
    i = 0
    for op in actual.ops:
        if i < len(expected.ops) and _params_match(expected.ops[i], op):
            i += 1
    return i == len(expected.ops)
