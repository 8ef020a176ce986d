"""Template engine and routing tests."""
import math

import pytest

from cgascene.cga_expr import evaluate_cga, execute_request, parse_cga
from cgascene.scene import aabb, default_scene
from cgascene.templates import (
    NoColorReferenceError, TemplateError, between, match_keyword,
    next_to_left, on_top_of, parse_references, parse_spatial, rotate_template,
    route, scale_template, template_request,
)


@pytest.fixture()
def scene():
    return default_scene()


def test_route_known_keywords(scene):
    decision = route("Place the green sphere on top of the blue cube.", True)
    assert decision.route == "template"
    assert decision.matched_keyword == "on top"
    assert route("Move the red sphere next to the blue cube", False).route == "template"


def test_route_novel_instruction(scene):
    assert route("Arrange objects artistically", True).route == "llm"
    assert route("Arrange objects artistically", False).route == "fallback_template"


def test_route_deterministic():
    for _ in range(5):
        assert route("rotate and scale the cube", True) == route(
            "rotate and scale the cube", True)


def test_keyword_priority_on_top_beats_scale():
    # "on top" outranks later keywords regardless of position.
    keyword, kind = match_keyword("scale it and put it on top of the cube")
    assert keyword == "on top"
    assert kind == "on_top_of"


def test_keyword_position_breaks_same_priority():
    # "left" and "next to" share a priority level: first occurrence wins.
    keyword, _ = match_keyword("to the left, next to the cube")
    assert keyword == "left"
    keyword, _ = match_keyword("next to the cube, on the left")
    assert keyword == "next to"


def test_parse_references_first_mention_is_mover(scene):
    mover, targets = parse_references("Move the red sphere next to the blue cube", scene)
    assert mover == "RedSphere"
    assert targets == ("BlueCube",)
    mover, targets = parse_references("put blue left of red", scene)
    assert mover == "BlueCube"
    assert targets == ("RedSphere",)


def test_parse_references_requires_known_color(scene):
    with pytest.raises(NoColorReferenceError):
        parse_references("move the chartreuse ball", scene)


def test_next_to_left_worked_example(scene):
    req = next_to_left(scene.get("RedSphere"), scene.get("BlueCube"))
    assert req.assignments == {"RedSphere": "T(2.0*e1 + 0.0*e2 + 0.0*e3)"}
    after = execute_request(scene, req).scene
    mover = after.get("RedSphere")
    target_min_x = aabb(after.get("BlueCube"))[0][0]
    assert abs(mover.center[0] + mover.size - target_min_x) < 1e-9  # tangency


def test_next_to_left_already_tangent(scene):
    moved = execute_request(scene, next_to_left(scene.get("RedSphere"),
                                                scene.get("BlueCube"))).scene
    req = next_to_left(moved.get("RedSphere"), moved.get("BlueCube"))
    assert req.assignments["RedSphere"] == "T(0.0*e1 + 0.0*e2 + 0.0*e3)"


def test_next_to_left_negative_displacement(scene):
    from dataclasses import replace
    mover = replace(scene.get("RedSphere"), center=(10.0, 0.0, 0.0))
    req = next_to_left(mover, scene.get("BlueCube"))
    assert req.assignments["RedSphere"] == "T(-8.0*e1 + 0.0*e2 + 0.0*e3)"


def test_on_top_of_worked_example(scene):
    req = on_top_of(scene.get("GreenSphere"), scene.get("BlueCube"))
    assert req.assignments == {"GreenSphere": "T(7.0*e1 + 1.7*e2 + -2.0*e3)"}
    after = execute_request(scene, req).scene
    mover = after.get("GreenSphere")
    target = after.get("BlueCube")
    assert mover.center[1] - mover.size == pytest.approx(
        aabb(target)[1][1], abs=1e-9)  # support
    assert mover.center[0] == pytest.approx(target.center[0], abs=1e-9)
    assert mover.center[2] == pytest.approx(target.center[2], abs=1e-9)


def test_on_top_of_noop_when_already_stacked(scene):
    stacked = execute_request(
        scene, on_top_of(scene.get("GreenSphere"), scene.get("BlueCube"))).scene
    req = on_top_of(stacked.get("GreenSphere"), stacked.get("BlueCube"))
    prog = evaluate_cga(parse_cga(req.assignments["GreenSphere"]))
    assert prog.op_chain.ops[0].params == pytest.approx((0.0, 0.0, 0.0), abs=1e-9)


def test_between_midpoint(scene):
    from dataclasses import replace
    mover = replace(scene.get("PurpleSphere"), center=(10.0, 0.0, 0.0))
    req = between(mover, scene.get("RedSphere"), scene.get("BlueCube"))
    assert req.assignments["PurpleSphere"] == "T(-8.0*e1 + 0.0*e2 + 0.0*e3)"
    req = between(scene.get("RedSphere"), scene.get("RedSphere"), scene.get("RedSphere"))
    assert req.assignments["RedSphere"] == "T(0.0*e1 + 0.0*e2 + 0.0*e3)"


def test_rotate_and_scale_templates(scene):
    req = rotate_template(scene.get("RedSphere"), math.pi / 2, (1, 2))
    assert req.assignments == {"RedSphere": "R(pi/2, e1, e2)"}
    req = scale_template(scene.get("RedSphere"), 3)
    assert req.assignments == {"RedSphere": "D(3)"}
    with pytest.raises(TemplateError):
        rotate_template(scene.get("RedSphere"), 1.0, (1, 1))
    with pytest.raises(TemplateError):
        scale_template(scene.get("RedSphere"), 0)


def test_rotate_zero_is_identity_after_execution(scene):
    req = rotate_template(scene.get("BlueCube"), 0.0, (1, 2))
    after = execute_request(scene, req).scene
    assert after.get("BlueCube").center == pytest.approx((4.0, 0.0, 0.0), abs=1e-12)


def test_parse_spatial_full_pipeline(scene):
    relation = parse_spatial("Rotate the red sphere by 90 degrees in the XY plane", scene)
    assert relation.kind == "rotate"
    assert relation.angle_rad == pytest.approx(math.pi / 2)
    assert relation.plane == (1, 2)
    relation = parse_spatial("Scale the blue cube by 2.5", scene)
    assert relation.factor == 2.5
    with pytest.raises(TemplateError):
        parse_spatial("Do something nice", scene)
    with pytest.raises(TemplateError):
        parse_spatial("Put the red sphere between the blue cube", scene)  # one target


def test_template_request_fig2_fig3(scene):
    req = template_request("Move the red sphere next to the blue cube, to its left side.", scene)
    after = execute_request(scene, req).scene
    assert after.get("RedSphere").center == pytest.approx((2.0, 0.0, 0.0), abs=1e-9)
    req = template_request("Place the green sphere on top of the blue cube.", scene)
    after = execute_request(scene, req).scene
    assert after.get("GreenSphere").center == pytest.approx((4.0, 1.7, 0.0), abs=1e-9)
