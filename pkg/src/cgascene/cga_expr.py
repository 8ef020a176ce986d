"""Sandboxed CGA expression strings: grammar, parser, evaluator, executor.

Grammar (whitespace-insensitive):

    request  := '{' (string ':' string) (',' string ':' string)* '}'
    expr     := factor ('*' factor)*
    factor   := 'T' '(' vec ')' | 'R' '(' scalar ',' basis ',' basis ')'
              | 'D' '(' scalar ')'
    vec      := term (('+'|'-') term)*
    term     := scalar '*' basis | basis | '-' term
    basis    := 'e1' | 'e2' | 'e3'
    scalar   := arithmetic over literals, pi aliases, sqrt(...) aliases,
                + - * /, unary -, parentheses

The only identifiers the sandbox knows are T, R, D, e1..e3, no, ni, the pi
aliases and the sqrt aliases; anything else is rejected at lex time. There
is no fallthrough to host-language evaluation.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from typing import Optional, Union

from . import chains, conformal, scene as scene_mod
from .chains import OperationChain
from .conformal import Motor
from .ga import Multivector, e1, e2, e3


class CgaError(ValueError):
    """Base class for expression-layer failures."""

    kind = "error"


class CgaParseError(CgaError):
    def __init__(self, message: str, kind: str = "syntax", position: Optional[int] = None):
        super().__init__(message)
        self.kind = kind
        self.position = position


class CgaEvalError(CgaError):
    kind = "eval"


# -- AST ---------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Const:
    name: str  # canonical: "pi"


@dataclass(frozen=True)
class Sqrt:
    arg: "ScalarExpr"


@dataclass(frozen=True)
class Neg:
    arg: "ScalarExpr"


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * /
    left: "ScalarExpr"
    right: "ScalarExpr"


ScalarExpr = Union[Num, Const, Sqrt, Neg, BinOp]


@dataclass(frozen=True)
class VecTerm:
    sign: int  # +1 / -1, folded leading minus chain
    coeff: Optional[ScalarExpr]  # None for a bare basis symbol
    basis: int  # 1..3


@dataclass(frozen=True)
class VectorExpr:
    terms: tuple[VecTerm, ...]


@dataclass(frozen=True)
class TCall:
    arg: VectorExpr

    head = "T"


@dataclass(frozen=True)
class RCall:
    angle: ScalarExpr
    i: int
    j: int

    head = "R"


@dataclass(frozen=True)
class DCall:
    factor: ScalarExpr

    head = "D"


Call = Union[TCall, RCall, DCall]


@dataclass(frozen=True)
class CgaAst:
    factors: tuple[Call, ...]


@dataclass(frozen=True)
class EditRequest:
    """Flat name -> expression-string map, the model's output object."""

    assignments: dict[str, str]

    def __post_init__(self):
        if not self.assignments:
            raise ValueError("edit request must contain at least one assignment")


# -- lexer --------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*(?:\.[A-Za-z_][A-Za-z_0-9]*)*)"
    r"|(?P<op>[-+*/(),]))"
)

PI_ALIASES = {"pi", "np.pi", "math.pi"}
SQRT_ALIASES = {"sqrt", "math.sqrt", "np.sqrt"}
BASIS_SYMBOLS = {"e1": 1, "e2": 2, "e3": 3}
NULL_SYMBOLS = {"no", "ni"}
HEADS = {"T", "R", "D"}
SANDBOX_IDENTIFIERS = HEADS | set(BASIS_SYMBOLS) | NULL_SYMBOLS | PI_ALIASES | SQRT_ALIASES


@dataclass(frozen=True)
class _Token:
    kind: str  # number | ident | op | end
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:].lstrip()
            if not rest:
                break
            raise CgaParseError(f"unexpected character {rest[0]!r}", kind="lexical", position=pos)
        if m.group("number") is not None:
            tokens.append(_Token("number", m.group("number"), m.start("number")))
        elif m.group("ident") is not None:
            ident = m.group("ident")
            if ident not in SANDBOX_IDENTIFIERS:
                raise CgaParseError(
                    f"unknown identifier {ident!r} (not a sandbox primitive)",
                    kind="unknown_identifier",
                    position=m.start("ident"),
                )
            tokens.append(_Token("ident", ident, m.start("ident")))
        else:
            tokens.append(_Token("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


# -- parser -------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self, offset: int = 0) -> _Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        if tok.kind != "end":
            self.i += 1
        return tok

    def expect_op(self, op: str, context: str) -> None:
        tok = self.next()
        if tok.kind != "op" or tok.text != op:
            raise CgaParseError(
                f"expected {op!r} {context}, got {tok.text!r}", kind="syntax", position=tok.pos
            )

    def parse_expr(self) -> CgaAst:
        factors = [self.parse_factor()]
        while self.peek().kind == "op" and self.peek().text == "*":
            self.next()
            factors.append(self.parse_factor())
        tok = self.peek()
        if tok.kind != "end":
            raise CgaParseError(f"unexpected trailing input {tok.text!r}", position=tok.pos)
        return CgaAst(factors=tuple(factors))

    def parse_factor(self) -> Call:
        tok = self.next()
        if tok.kind != "ident" or tok.text not in HEADS:
            raise CgaParseError(
                f"expected motor constructor T/R/D, got {tok.text!r}", position=tok.pos
            )
        head = tok.text
        self.expect_op("(", f"after {head}")
        if head == "T":
            arg = self.parse_vec()
            self.expect_op(")", "to close T(...)")
            return TCall(arg=arg)
        if head == "R":
            angle = self.parse_scalar()
            self.expect_op(",", "after rotation angle")
            i = self.parse_basis("rotation plane")
            self.expect_op(",", "between rotation plane vectors")
            j = self.parse_basis("rotation plane")
            self.expect_op(")", "to close R(...)")
            return RCall(angle=angle, i=i, j=j)
        factor = self.parse_scalar()
        self.expect_op(")", "to close D(...)")
        return DCall(factor=factor)

    def parse_basis(self, context: str) -> int:
        tok = self.next()
        if tok.kind == "ident" and tok.text in BASIS_SYMBOLS:
            return BASIS_SYMBOLS[tok.text]
        raise CgaParseError(
            f"{context} arguments must be basis vectors e1/e2/e3, got {tok.text!r}",
            kind="plane_args",
            position=tok.pos,
        )

    def parse_vec(self) -> VectorExpr:
        terms = [self.parse_vec_term()]
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.next().text
            term = self.parse_vec_term()
            if op == "-":
                term = VecTerm(sign=-term.sign, coeff=term.coeff, basis=term.basis)
            terms.append(term)
        return VectorExpr(terms=tuple(terms))

    def parse_vec_term(self) -> VecTerm:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.next()
            inner = self.parse_vec_term()
            return VecTerm(sign=-inner.sign, coeff=inner.coeff, basis=inner.basis)
        if tok.kind == "ident" and tok.text in BASIS_SYMBOLS:
            nxt = self.peek(1)
            if not (nxt.kind == "op" and nxt.text == "*"):
                self.next()
                return VecTerm(sign=1, coeff=None, basis=BASIS_SYMBOLS[tok.text])
        coeff = self.parse_scalar()
        self.expect_op("*", "between coefficient and basis vector")
        basis = self.parse_basis("vector term")
        return VecTerm(sign=1, coeff=coeff, basis=basis)

    # Scalar grammar: additive <- multiplicative <- unary <- atom.
    def parse_scalar(self) -> ScalarExpr:
        node = self.parse_scalar_mul()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.next().text
            right = self.parse_scalar_mul()
            node = BinOp(op=op, left=node, right=right)
        return node

    def parse_scalar_mul(self) -> ScalarExpr:
        node = self.parse_scalar_unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            # A '*' directly followed by a basis symbol belongs to the
            # enclosing vector term, not to this scalar.
            if self.peek().text == "*" and self.peek(1).kind == "ident" \
                    and self.peek(1).text in BASIS_SYMBOLS:
                break
            op = self.next().text
            right = self.parse_scalar_unary()
            node = BinOp(op=op, left=node, right=right)
        return node

    def parse_scalar_unary(self) -> ScalarExpr:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.next()
            return Neg(arg=self.parse_scalar_unary())
        return self.parse_scalar_atom()

    def parse_scalar_atom(self) -> ScalarExpr:
        tok = self.next()
        if tok.kind == "number":
            return Num(value=float(tok.text))
        if tok.kind == "ident":
            if tok.text in PI_ALIASES:
                return Const(name="pi")
            if tok.text in SQRT_ALIASES:
                self.expect_op("(", "after sqrt")
                arg = self.parse_scalar()
                self.expect_op(")", "to close sqrt(...)")
                return Sqrt(arg=arg)
            if tok.text in BASIS_SYMBOLS or tok.text in NULL_SYMBOLS:
                raise CgaParseError(
                    f"{tok.text!r} is not allowed inside a scalar expression",
                    kind="syntax",
                    position=tok.pos,
                )
            raise CgaParseError(
                f"{tok.text!r} is not a scalar atom", kind="syntax", position=tok.pos
            )
        if tok.kind == "op" and tok.text == "(":
            node = self.parse_scalar()
            self.expect_op(")", "to close parenthesized scalar")
            return node
        raise CgaParseError(
            f"expected a scalar expression, got {tok.text!r}", position=tok.pos
        )


def parse_cga(expr: str) -> CgaAst:
    """Parse one CGA expression string into its factor AST."""
    if not isinstance(expr, str):
        raise CgaParseError(f"expression must be a string, got {type(expr).__name__}")
    return _Parser(expr).parse_expr()


def parse_request(text: Union[str, dict]) -> EditRequest:
    """Parse the model's output document: a flat JSON object of strings."""
    if isinstance(text, str):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CgaParseError(f"request is not valid JSON: {exc}", kind="document") from exc
    else:
        doc = text
    if not isinstance(doc, dict) or not doc:
        raise CgaParseError("request must be a nonempty JSON object", kind="document")
    assignments: dict[str, str] = {}
    for key, value in doc.items():
        if not isinstance(key, str) or not isinstance(value, str):
            raise CgaParseError(
                "request keys must be object names and values expression strings",
                kind="document",
            )
        assignments[key] = value
    return EditRequest(assignments=assignments)


# -- canonical printer ----------------------------------------------------------

_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}


def _print_scalar(node: ScalarExpr, parent_prec: int = 0, right_side: bool = False) -> str:
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Sqrt):
        return f"sqrt({_print_scalar(node.arg)})"
    if isinstance(node, Neg):
        inner = _print_scalar(node.arg, parent_prec=3)
        text = f"-{inner}"
        return f"({text})" if parent_prec >= 2 else text
    if isinstance(node, BinOp):
        prec = _PRECEDENCE[node.op]
        left = _print_scalar(node.left, parent_prec=prec, right_side=False)
        right = _print_scalar(node.right, parent_prec=prec, right_side=True)
        text = f"{left}{node.op}{right}"
        needs_parens = prec < parent_prec or (prec == parent_prec and right_side)
        return f"({text})" if needs_parens else text
    raise TypeError(f"not a scalar node: {node!r}")


def _print_term(term: VecTerm) -> str:
    body = f"e{term.basis}" if term.coeff is None else \
        f"{_print_scalar(term.coeff, parent_prec=2)}*e{term.basis}"
    return f"-{body}" if term.sign < 0 else body


def print_cga(ast: CgaAst) -> str:
    """Canonical text form; parse(print(ast)) == ast."""
    parts = []
    for factor in ast.factors:
        if isinstance(factor, TCall):
            parts.append("T(" + " + ".join(_print_term(t) for t in factor.arg.terms) + ")")
        elif isinstance(factor, RCall):
            parts.append(f"R({_print_scalar(factor.angle)}, e{factor.i}, e{factor.j})")
        else:
            parts.append(f"D({_print_scalar(factor.factor)})")
    return "*".join(parts)


# -- evaluator ------------------------------------------------------------------

_BASIS_MV = {1: e1, 2: e2, 3: e3}
_PLANE_AXIS = {
    (1, 2): (0.0, 0.0, 1.0), (2, 1): (0.0, 0.0, -1.0),
    (2, 3): (1.0, 0.0, 0.0), (3, 2): (-1.0, 0.0, 0.0),
    (3, 1): (0.0, 1.0, 0.0), (1, 3): (0.0, -1.0, 0.0),
}


def _eval_scalar(node: ScalarExpr) -> float:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Const):
        return math.pi
    if isinstance(node, Sqrt):
        arg = _eval_scalar(node.arg)
        if arg < 0:
            raise CgaEvalError(f"sqrt of negative value {arg}")
        return math.sqrt(arg)
    if isinstance(node, Neg):
        return -_eval_scalar(node.arg)
    if isinstance(node, BinOp):
        left = _eval_scalar(node.left)
        right = _eval_scalar(node.right)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if right == 0.0:
            raise CgaEvalError("division by zero in scalar expression")
        return left / right
    raise TypeError(f"not a scalar node: {node!r}")


def _eval_vector(vec: VectorExpr) -> tuple[float, float, float]:
    out = [0.0, 0.0, 0.0]
    for term in vec.terms:
        coeff = 1.0 if term.coeff is None else _eval_scalar(term.coeff)
        out[term.basis - 1] += term.sign * coeff
    return tuple(out)


@dataclass(frozen=True)
class MotorProgram:
    """Evaluated expression: per-factor motors, their product, and the chain."""

    factor_motors: tuple[Motor, ...]
    composed: Motor
    op_chain: OperationChain
    is_pure_dilation: bool
    dilation_factor: Optional[float] = None


def evaluate_cga(ast: CgaAst) -> MotorProgram:
    """Evaluate to motors; the op chain records execution order (rightmost
    factor first)."""
    motors: list[Motor] = []
    ops: list[chains.ChainOp] = []
    for factor in ast.factors:
        if isinstance(factor, TCall):
            v = _eval_vector(factor.arg)
            _require_finite(v)
            motors.append(conformal.translator(*v))
            ops.append(chains.translate_op(*v))
        elif isinstance(factor, RCall):
            angle = _eval_scalar(factor.angle)
            _require_finite((angle,))
            if factor.i == factor.j:
                raise CgaEvalError("rotation plane is degenerate (identical basis vectors)")
            motors.append(conformal.rotor(angle, _BASIS_MV[factor.i], _BASIS_MV[factor.j]))
            ops.append(chains.rotate_op(_PLANE_AXIS[(factor.i, factor.j)], angle))
        else:
            s = _eval_scalar(factor.factor)
            _require_finite((s,))
            if s <= 0:
                raise CgaEvalError(f"dilation factor must be > 0, got {s}")
            motors.append(conformal.dilator(s))
            ops.append(chains.dilate_op(s))
    composed = conformal.compose(motors)
    pure_d = len(ast.factors) == 1 and isinstance(ast.factors[0], DCall)
    return MotorProgram(
        factor_motors=tuple(motors),
        composed=composed,
        op_chain=OperationChain(tuple(reversed(ops))),
        is_pure_dilation=pure_d,
        dilation_factor=ops[0].params[0] if pure_d else None,
    )


def _require_finite(values) -> None:
    for v in values:
        if not math.isfinite(v):
            raise CgaEvalError(f"non-finite numeric result {v!r}")


# -- executor -------------------------------------------------------------------

@dataclass(frozen=True)
class AssignmentStatus:
    ok: bool
    error: Optional[str] = None
    program: Optional[MotorProgram] = None


@dataclass(frozen=True)
class ExecutionResult:
    scene: scene_mod.Scene
    statuses: dict[str, AssignmentStatus] = field(default_factory=dict)

    @property
    def all_ok(self) -> bool:
        return all(s.ok for s in self.statuses.values())


def execute_request(scene: scene_mod.Scene, req: EditRequest) -> ExecutionResult:
    """Run each assignment against the scene.

    A single pure D(s) factor scales the object in place (center fixed);
    any other expression moves the object's center through the composed
    motor. Per-assignment failures do not abort the remaining assignments.
    """
    if not isinstance(req, EditRequest):
        req = parse_request(req)
    statuses: dict[str, AssignmentStatus] = {}
    current = scene
    for name, expr in req.assignments.items():
        try:
            program = evaluate_cga(parse_cga(expr))
            if program.is_pure_dilation:
                current = scene_mod.scale_object(current, name, program.dilation_factor)
            else:
                current = scene_mod.apply_motor_to_object(current, name, program.composed)
            statuses[name] = AssignmentStatus(ok=True, program=program)
        except scene_mod.UnknownObjectError:
            statuses[name] = AssignmentStatus(ok=False, error=f"unknown object {name!r}")
        except CgaError as exc:
            statuses[name] = AssignmentStatus(ok=False, error=str(exc))
    return ExecutionResult(scene=current, statuses=statuses)
