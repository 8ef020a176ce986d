"""Expression grammar, sandbox, evaluator, and executor tests."""
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cgascene.cga_expr import (
    CgaEvalError, CgaParseError, DCall, RCall, TCall,
    evaluate_cga, execute_request, parse_cga, parse_request, print_cga,
)
from cgascene.conformal import down, transform_point, up
from cgascene.ga import Multivector, e1
from cgascene.conformal import NI
from cgascene.scene import default_scene


def test_parse_two_factor_expression():
    ast = parse_cga("T(3*e1)*R(np.pi/2,e1,e2)")
    assert len(ast.factors) == 2
    assert isinstance(ast.factors[0], TCall)
    assert isinstance(ast.factors[1], RCall)


def test_parse_verbose_translation():
    ast = parse_cga("T(2.0*e1 + 0.0*e2 + 0.0*e3)")
    assert len(ast.factors) == 1
    prog = evaluate_cga(ast)
    assert prog.op_chain.ops[0].params == (2.0, 0.0, 0.0)


@pytest.mark.parametrize("expr,kind", [
    ("R(pi/2, 1, 2)", "plane_args"),
    ("R(pi/2, e1, 2)", "plane_args"),
    ("T(2*os)", "unknown_identifier"),
    ("T(2*import)", "unknown_identifier"),
    ("T(2*e1", "syntax"),
    ("Q(1)", "unknown_identifier"),
    ("T()", "syntax"),
    ("", "syntax"),
    ("T(2*e1) R(pi,e1,e2)", "syntax"),
    ("D(1,2)", "syntax"),
    ("R(pi/2, e1)", "syntax"),
    ("T(1*e1 + no)", "syntax"),
    ("T(ni)", "syntax"),
    ("D(e1)", "syntax"),
])
def test_parse_errors(expr, kind):
    with pytest.raises(CgaParseError) as excinfo:
        parse_cga(expr)
    assert excinfo.value.kind == kind


def test_sandbox_rejects_everything_outside_whitelist():
    for bad in ("__import__('os')", "eval(1)", "x", "T(foo*e1)", "open",
                "D(sys.maxsize)", "T(2*e5)"):
        with pytest.raises(CgaParseError):
            parse_cga(bad)


def test_sandbox_accepts_all_aliases():
    for alias in ("pi", "np.pi", "math.pi"):
        prog = evaluate_cga(parse_cga(f"R({alias}, e1, e2)"))
        assert prog.op_chain.ops[0].params[3] == pytest.approx(math.pi)
    for alias in ("sqrt", "math.sqrt", "np.sqrt"):
        prog = evaluate_cga(parse_cga(f"D({alias}(4))"))
        assert prog.op_chain.ops[0].params == (2.0,)


def test_scalar_arithmetic():
    prog = evaluate_cga(parse_cga("T((1+2*3)/2*e1 + -0.5*e2 + 1e1*e3)"))
    assert prog.op_chain.ops[0].params == pytest.approx((3.5, -0.5, 10.0))
    prog = evaluate_cga(parse_cga("D(2*(3-1))"))
    assert prog.op_chain.ops[0].params == (4.0,)


def test_whitespace_insensitive():
    a = evaluate_cga(parse_cga("T( 3 * e1 )*R( pi / 2 , e1 , e2 )"))
    b = evaluate_cga(parse_cga("T(3*e1)*R(pi/2,e1,e2)"))
    assert a.composed.value.allclose(b.composed.value, atol=0.0)


def test_bare_basis_terms():
    prog = evaluate_cga(parse_cga("T(e1 + e2 - e3)"))
    assert prog.op_chain.ops[0].params == (1.0, 1.0, -1.0)
    prog = evaluate_cga(parse_cga("T(-e1)"))
    assert prog.op_chain.ops[0].params == (-1.0, 0.0, 0.0)


def test_evaluate_translation_motor_value():
    prog = evaluate_cga(parse_cga("T(2*e1)"))
    assert prog.composed.value.allclose(Multivector.scalar(1.0) - e1 * NI, atol=1e-15)


def test_evaluate_identity_dilation():
    prog = evaluate_cga(parse_cga("D(1)"))
    assert prog.composed.value.allclose(Multivector.scalar(1.0), atol=1e-15)
    assert prog.is_pure_dilation
    assert prog.dilation_factor == 1.0


def test_evaluate_errors():
    with pytest.raises(CgaEvalError):
        evaluate_cga(parse_cga("D(0)"))
    with pytest.raises(CgaEvalError):
        evaluate_cga(parse_cga("D(-1)"))
    with pytest.raises(CgaEvalError):
        evaluate_cga(parse_cga("D(1/0)"))
    with pytest.raises(CgaEvalError):
        evaluate_cga(parse_cga("R(pi, e1, e1)"))
    with pytest.raises(CgaEvalError):
        evaluate_cga(parse_cga("D(sqrt(0-1))"))


def test_chain_order_is_execution_order():
    prog = evaluate_cga(parse_cga("T(3*e1)*R(pi/2,e1,e2)*D(2)"))
    assert prog.op_chain.kinds() == ("dilate", "rotate", "translate")


def test_composed_matches_rotation_then_translation():
    prog = evaluate_cga(parse_cga("T(3*e1)*R(pi/2,e1,e2)"))
    assert transform_point(prog.composed, (1, 0, 0)) == pytest.approx((3.0, 1.0, 0.0), abs=1e-9)


def test_composed_equals_sequential_factors():
    import numpy as np
    rng = np.random.default_rng(9)
    for _ in range(40):
        n = rng.integers(1, 6)
        factors = []
        for _ in range(n):
            choice = rng.integers(0, 3)
            if choice == 0:
                v = [float(x) for x in rng.uniform(-5, 5, 3)]
                factors.append(f"T({v[0]!r}*e1 + {v[1]!r}*e2 + {v[2]!r}*e3)")
            elif choice == 1:
                pair = [(1, 2), (1, 3), (2, 3)][rng.integers(0, 3)]
                factors.append(f"R({float(rng.uniform(-3, 3))!r}, e{pair[0]}, e{pair[1]})")
            else:
                factors.append(f"D({float(rng.uniform(0.2, 3.0))!r})")
        prog = evaluate_cga(parse_cga("*".join(factors)))
        start = tuple(rng.uniform(-5, 5, 3))
        composed = transform_point(prog.composed, start)
        point = start
        for motor in reversed(prog.factor_motors):
            point = transform_point(motor, point)
        assert composed == pytest.approx(point, abs=1e-9)


# -- canonical print/parse roundtrip ------------------------------------------

scalar_leaf = st.one_of(
    st.floats(min_value=0.0, max_value=100.0, allow_nan=False).map(
        lambda v: __import__("cgascene.cga_expr", fromlist=["Num"]).Num(float(v))),
    st.just(__import__("cgascene.cga_expr", fromlist=["Const"]).Const("pi")),
)


def scalar_nodes():
    from cgascene.cga_expr import BinOp, Neg, Sqrt
    return st.recursive(
        scalar_leaf,
        lambda children: st.one_of(
            st.tuples(children).map(lambda t: Neg(t[0])),
            st.tuples(children).map(lambda t: Sqrt(t[0])),
            st.tuples(st.sampled_from("+-*/"), children, children).map(
                lambda t: BinOp(op=t[0], left=t[1], right=t[2])),
        ),
        max_leaves=8,
    )


@settings(max_examples=120, deadline=None)
@given(st.data())
def test_print_parse_roundtrip(data):
    from cgascene.cga_expr import CgaAst, VecTerm, VectorExpr
    factors = []
    n_factors = data.draw(st.integers(1, 3))
    for _ in range(n_factors):
        head = data.draw(st.sampled_from("TRD"))
        if head == "T":
            terms = []
            for _ in range(data.draw(st.integers(1, 3))):
                has_coeff = data.draw(st.booleans())
                terms.append(VecTerm(
                    sign=data.draw(st.sampled_from((1, -1))),
                    coeff=data.draw(scalar_nodes()) if has_coeff else None,
                    basis=data.draw(st.integers(1, 3)),
                ))
            factors.append(TCall(arg=VectorExpr(terms=tuple(terms))))
        elif head == "R":
            i = data.draw(st.integers(1, 3))
            j = data.draw(st.integers(1, 3).filter(lambda x: x != i))
            factors.append(RCall(angle=data.draw(scalar_nodes()), i=i, j=j))
        else:
            factors.append(DCall(factor=data.draw(scalar_nodes())))
    ast = CgaAst(factors=tuple(factors))
    printed = print_cga(ast)
    assert parse_cga(printed) == ast, printed


# -- request executor -----------------------------------------------------------

def test_parse_request_shapes():
    req = parse_request('{"RedSphere": "T(2*e1)"}')
    assert req.assignments == {"RedSphere": "T(2*e1)"}
    with pytest.raises(CgaParseError):
        parse_request('{"RedSphere": "T(2*e')  # truncated JSON
    with pytest.raises(CgaParseError):
        parse_request("[1, 2, 3]")
    with pytest.raises(CgaParseError):
        parse_request("{}")
    with pytest.raises(CgaParseError):
        parse_request('{"RedSphere": 3}')


def test_execute_tangent_translation():
    result = execute_request(default_scene(),
                             parse_request('{"RedSphere": "T(2.0*e1 + 0.0*e2 + 0.0*e3)"}'))
    assert result.all_ok
    assert result.scene.get("RedSphere").center == pytest.approx((2.0, 0.0, 0.0), abs=1e-9)


def test_execute_stacking_translation():
    result = execute_request(default_scene(),
                             parse_request('{"GreenSphere": "T(7.0*e1 + 1.7*e2 + -2.0*e3)"}'))
    assert result.scene.get("GreenSphere").center == pytest.approx((4.0, 1.7, 0.0), abs=1e-9)


def test_execute_pure_dilation_scales_size_center_fixed():
    result = execute_request(default_scene(), parse_request('{"RedSphere": "D(3)"}'))
    obj = result.scene.get("RedSphere")
    assert obj.size == pytest.approx(3.0)
    assert obj.center == pytest.approx((0.0, 0.0, 0.0))


def test_pure_dilation_special_case_is_exact():
    """D(2)*T(0*e1) is a composite, not a pure dilation: size unchanged."""
    result = execute_request(default_scene(), parse_request('{"BlueCube": "D(2)*T(0*e1)"}'))
    obj = result.scene.get("BlueCube")
    assert obj.size == 1.0
    assert obj.center == pytest.approx((8.0, 0.0, 0.0), abs=1e-9)  # origin dilation


def test_execute_partial_failures_do_not_abort():
    req = parse_request('{"Nope": "T(1*e1)", "RedSphere": "T(1*e1)", "BlueCube": "D(0)"}')
    result = execute_request(default_scene(), req)
    assert not result.all_ok
    assert result.statuses["Nope"].ok is False
    assert "unknown object" in result.statuses["Nope"].error
    assert result.statuses["RedSphere"].ok is True
    assert result.statuses["BlueCube"].ok is False
    assert result.scene.get("RedSphere").center == pytest.approx((1.0, 0.0, 0.0), abs=1e-9)
    assert result.scene.get("BlueCube").size == 1.0


def test_template_outputs_always_parse():
    """Grammar closure: everything the template engine emits parses."""
    from cgascene import templates
    scene = default_scene()
    requests = [
        templates.template_request("Move the red sphere next to the blue cube", scene),
        templates.template_request("Place the green sphere on top of the blue cube.", scene),
        templates.template_request(
            "Put the purple sphere between the red sphere and the blue cube", scene),
        templates.template_request("Rotate the red sphere by 45 degrees in the XZ plane", scene),
        templates.template_request("Scale the yellow cube by 2.5", scene),
    ]
    for req in requests:
        for expr in req.assignments.values():
            evaluate_cga(parse_cga(expr))  # must not raise
