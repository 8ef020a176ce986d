"""SE3 queue and 4x4 matrix executor tests, plus the cross-representation
differential property (the Rodrigues oracle lives in the tests)."""
import json
import math

import numpy as np
import pytest

from cgascene.baselines import (
    Mat4ApplyError, Mat4ParseError, RotateSe3, ScaleSe3, Se3ParseError,
    TranslateSe3, apply_mat4, apply_se3, classify_mat4, mat4_chain,
    parse_mat4, parse_se3, rotation_consistency_check, se3_chain,
)
from cgascene.cga_expr import execute_request, parse_request
from cgascene.scene import UnknownObjectError, default_scene


def oracle_rodrigues(axis, angle, point):
    """Independent axis-angle rotation: v cosθ + (k x v) sinθ + k (k.v)(1-cosθ)."""
    k = np.asarray(axis, dtype=float)
    k = k / np.linalg.norm(k)
    v = np.asarray(point, dtype=float)
    return (v * math.cos(angle)
            + np.cross(k, v) * math.sin(angle)
            + k * np.dot(k, v) * (1.0 - math.cos(angle)))


def test_parse_se3_single_translation():
    req = parse_se3('{"Obj": [{"type": "T", "v": [1, 2, 3]}]}')
    assert req.assignments["Obj"] == (TranslateSe3(v=(1.0, 2.0, 3.0)),)


def test_parse_se3_normalizes_axis():
    req = parse_se3({"Obj": [{"type": "R", "axis": [0, 0, 2], "angle_rad": 1.5708}]})
    op = req.assignments["Obj"][0]
    assert isinstance(op, RotateSe3)
    assert op.axis == pytest.approx((0.0, 0.0, 1.0))


@pytest.mark.parametrize("doc", [
    '{"Obj": [{"type": "Q"}]}',
    '{"Obj": [{"type": "T"}]}',
    '{"Obj": [{"type": "T", "v": [1, 2]}]}',
    '{"Obj": [{"type": "R", "axis": [0, 0, 0], "angle_rad": 1}]}',
    '{"Obj": [{"type": "R", "axis": [0, 0, 1]}]}',
    '{"Obj": [{"type": "D", "factor": -1}]}',
    '{"Obj": [{"type": "D", "factor": 0}]}',
    '{"Obj": []}',
    '{"Obj": "T"}',
    '{}',
    'not json',
    '{"Obj": [{"type": "T", "v": ["a", 0, 0]}]}',
])
def test_parse_se3_rejects(doc):
    with pytest.raises(Se3ParseError):
        parse_se3(doc)


def test_apply_se3_translation_matches_cga():
    scene = default_scene()
    via_se3 = apply_se3(scene, parse_se3('{"RedSphere": [{"type": "T", "v": [2, 0, 0]}]}'))
    via_cga = execute_request(scene, parse_request('{"RedSphere": "T(2*e1)"}')).scene
    assert via_se3.get("RedSphere").center == pytest.approx(
        via_cga.get("RedSphere").center, abs=1e-12)


def test_apply_se3_rotation_rodrigues_oracle():
    scene = default_scene()
    req = parse_se3('{"BlueCube": [{"type": "R", "axis": [0, 0, 1], "angle_rad": 1.5707963267948966}]}')
    moved = apply_se3(scene, req)
    want = oracle_rodrigues((0, 0, 1), math.pi / 2, (4, 0, 0))
    assert moved.get("BlueCube").center == pytest.approx(tuple(want), abs=1e-9)


def test_apply_se3_scale_object_centric_everywhere():
    scene = default_scene()
    req = parse_se3(json.dumps({"BlueCube": [
        {"type": "D", "factor": 3},
        {"type": "T", "v": [1, 0, 0]},
        {"type": "D", "factor": 2},
    ]}))
    moved = apply_se3(scene, req)
    obj = moved.get("BlueCube")
    assert obj.size == pytest.approx(6.0)
    assert obj.center == pytest.approx((5.0, 0.0, 0.0))


def test_apply_se3_respects_list_order():
    scene = default_scene()
    t_then_r = apply_se3(scene, parse_se3(json.dumps({"RedSphere": [
        {"type": "T", "v": [1, 0, 0]},
        {"type": "R", "axis": [0, 0, 1], "angle_rad": math.pi / 2},
    ]})))
    r_then_t = apply_se3(scene, parse_se3(json.dumps({"RedSphere": [
        {"type": "R", "axis": [0, 0, 1], "angle_rad": math.pi / 2},
        {"type": "T", "v": [1, 0, 0]},
    ]})))
    a = t_then_r.get("RedSphere").center
    b = r_then_t.get("RedSphere").center
    assert a == pytest.approx((0.0, 1.0, 0.0), abs=1e-9)
    assert b == pytest.approx((1.0, 0.0, 0.0), abs=1e-9)
    assert math.dist(a, b) > 1e-6


def test_apply_se3_unknown_object():
    with pytest.raises(UnknownObjectError):
        apply_se3(default_scene(), parse_se3('{"Ghost": [{"type": "T", "v": [1, 0, 0]}]}'))


def test_parse_mat4_translation():
    req = parse_mat4('{"Obj": [[1,0,0,3],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}')
    assert req.matrices["Obj"][0, 3] == 3.0
    assert req.warnings == ()


@pytest.mark.parametrize("doc", [
    '{"Obj": [[1,0,0],[0,1,0],[0,0,1]]}',
    '{"Obj": [[1,0,0,0],[0,1,0,0],[0,0,1,0]]}',
    '{"Obj": "matrix"}',
    '{"Obj": [["a",0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}',
    '{}',
    'nope',
])
def test_parse_mat4_rejects(doc):
    with pytest.raises(Mat4ParseError):
        parse_mat4(doc)


def test_parse_mat4_nonaffine_bottom_row_warns_but_parses():
    req = parse_mat4('{"Obj": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0.5,1]]}')
    assert len(req.warnings) == 1
    assert "bottom row" in req.warnings[0]


def test_apply_mat4_translation_and_rotation():
    scene = default_scene()
    req = parse_mat4('{"RedSphere": [[1,0,0,3],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}')
    assert apply_mat4(scene, req).get("RedSphere").center == pytest.approx((3.0, 0.0, 0.0))
    rot = parse_mat4('{"BlueCube": [[0,-1,0,0],[1,0,0,0],[0,0,1,0],[0,0,0,1]]}')
    want = oracle_rodrigues((0, 0, 1), math.pi / 2, (4, 0, 0))
    assert apply_mat4(scene, rot).get("BlueCube").center == pytest.approx(tuple(want), abs=1e-9)


def test_apply_mat4_identity_and_size_untouched():
    scene = default_scene()
    req = parse_mat4('{"BlueCube": [[2,0,0,0],[0,2,0,0],[0,0,2,0],[0,0,0,1]]}')
    moved = apply_mat4(scene, req)
    assert moved.get("BlueCube").center == pytest.approx((8.0, 0.0, 0.0))
    assert moved.get("BlueCube").size == 1.0  # no object-centric scale channel


def test_apply_mat4_degenerate_w():
    scene = default_scene()
    req = parse_mat4('{"RedSphere": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,0]]}')
    with pytest.raises(Mat4ApplyError):
        apply_mat4(scene, req)


def test_rotation_consistency_check():
    identity = np.eye(4)
    diag = rotation_consistency_check(identity)
    assert diag.orthonormality_residual == 0.0
    assert diag.det == pytest.approx(1.0)
    z90 = np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1.0]])
    diag = rotation_consistency_check(z90)
    assert diag.orthonormality_residual == pytest.approx(0.0, abs=1e-12)
    assert diag.det == pytest.approx(1.0)
    bad = np.eye(4)
    bad[0, 0] = 0.5
    bad[1, 0] = -1.0
    diag = rotation_consistency_check(bad)
    assert diag.orthonormality_residual > 0.1


def test_se3_chain_keeps_list_order():
    ops = (TranslateSe3(v=(1, 0, 0)), RotateSe3(axis=(0, 0, 1), angle_rad=1.0),
           ScaleSe3(factor=2.0))
    chain = se3_chain(ops)
    assert chain.kinds() == ("translate", "rotate", "dilate")


def test_mat4_classification():
    t = np.array([[1, 0, 0, 3], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1.0]])
    assert classify_mat4(t).kind == "translate"
    c, s = math.cos(1.2), math.sin(1.2)
    r = np.array([[c, -s, 0, 0], [s, c, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1.0]])
    op = classify_mat4(r)
    assert op.kind == "rotate"
    assert op.params == pytest.approx((0, 0, 1, 1.2), abs=1e-9)
    d = np.diag([2.0, 2.0, 2.0, 1.0])
    assert classify_mat4(d).kind == "dilate"
    shear = np.eye(4)
    shear[0, 1] = 0.5
    assert classify_mat4(shear).kind == "other"
    assert len(mat4_chain(t)) == 1


def test_mat4_classification_half_turn():
    r = np.diag([-1.0, -1.0, 1.0, 1.0])  # 180 degrees about z
    op = classify_mat4(r)
    assert op.kind == "rotate"
    axis, angle = op.params[:3], op.params[3]
    assert angle == pytest.approx(math.pi, abs=1e-9)
    assert abs(axis[2]) == pytest.approx(1.0, abs=1e-9)


def test_cross_representation_equivalence_small():
    """Same chain through all three executors ends on the same center."""
    rng = np.random.default_rng(12)
    scene = default_scene()
    for _ in range(100):
        n_ops = int(rng.integers(1, 6))
        se3_ops = []
        matrix = np.eye(4)
        cga_factors = []
        for _ in range(n_ops):
            if rng.random() < 0.5:
                v = [float(x) for x in rng.uniform(-4, 4, 3)]
                se3_ops.append({"type": "T", "v": v})
                m = np.eye(4)
                m[:3, 3] = v
                matrix = m @ matrix
                cga_factors.insert(0, f"T({v[0]!r}*e1 + {v[1]!r}*e2 + {v[2]!r}*e3)")
            else:
                i, j = [(1, 2), (1, 3), (2, 3)][int(rng.integers(0, 3))]
                angle = float(rng.uniform(-math.pi, math.pi))
                axes = {1: (1.0, 0, 0), 2: (0, 1.0, 0), 3: (0, 0, 1.0)}
                axis = np.cross(axes[i], axes[j])
                se3_ops.append({"type": "R", "axis": axis.tolist(), "angle_rad": angle})
                m = np.eye(4)
                k = axis / np.linalg.norm(axis)
                kx, ky, kz = k
                skew = np.array([[0, -kz, ky], [kz, 0, -kx], [-ky, kx, 0]])
                m[:3, :3] = np.eye(3) + math.sin(angle) * skew \
                    + (1 - math.cos(angle)) * (skew @ skew)
                matrix = m @ matrix
                cga_factors.insert(0, f"R({angle!r}, e{i}, e{j})")
        se3_scene = apply_se3(scene, parse_se3({"BlueCube": se3_ops}))
        mat_scene = apply_mat4(scene, parse_mat4({"BlueCube": matrix.tolist()}))
        cga_scene = execute_request(
            scene, parse_request({"BlueCube": "*".join(cga_factors)})).scene
        a = se3_scene.get("BlueCube").center
        b = mat_scene.get("BlueCube").center
        c = cga_scene.get("BlueCube").center
        assert a == pytest.approx(b, abs=1e-9)
        assert a == pytest.approx(c, abs=1e-9)
