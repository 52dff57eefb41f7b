"""Closed-form scalar expressions over chart coordinates.

Expression trees are immutable and cover exactly the operations the
catalog and chart metrics need: +, -, *, /, real/integer powers, exp, ln
and affine/quadratic coordinate combinations.  Evaluating a tree over a
list of input jets *is* composition, so the same evaluator serves both
plain chart evaluation (inputs = coordinate jets) and pullbacks such as
an ambient metric component along an immersion (inputs = component jets).

Positivity is declared by construction: using ``Ln``, a non-integer
``Pow`` or ``Div`` declares that the argument is positive / nonzero on
the chart domain the expression is used on.  Evaluation outside that
domain raises :class:`~biconf.errors.DomainError` carrying the offending
subexpression.

Text form
---------
Expressions can be parsed from a small prefix notation used by the CLI::

    (pow (+ 1 (dot x x)) -1)        ->  (1 + |x|^2)^(-1)
    (* 2 (pow x3 -2))               ->  2 * x3^(-2)

Tokens: ``(`` ``)``, numbers, coordinate names ``x1`` .. ``xm``, the
whole coordinate vector ``x`` (only as an argument of ``dot``), and the
operator heads ``+ - * / pow exp ln dot``.  ``+`` and ``*`` are n-ary,
``-`` is unary negation or binary subtraction, ``pow`` takes a numeric
literal exponent, and ``dot`` takes the vector ``x`` twice.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from numbers import Real

from ..errors import DomainError
from .jet import Jet


class ParseError(ValueError):
    pass


# ----------------------------------------------------------------------
# node types
# ----------------------------------------------------------------------
class Expr:
    """Base class; nodes are frozen dataclasses and safe to share."""

    def __add__(self, other):
        return Add((self, as_expr(other)))

    def __radd__(self, other):
        return Add((as_expr(other), self))

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __rsub__(self, other):
        return Sub(as_expr(other), self)

    def __mul__(self, other):
        return Mul((self, as_expr(other)))

    def __rmul__(self, other):
        return Mul((as_expr(other), self))

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, exponent):
        if not isinstance(exponent, Real):
            raise TypeError("expression exponents must be numeric")
        return Pow(self, float(exponent))


@dataclass(frozen=True)
class Const(Expr):
    value: float

    def __str__(self):
        return f"{self.value:g}"


@dataclass(frozen=True)
class Var(Expr):
    axis: int  # 0-based

    def __str__(self):
        return f"x{self.axis + 1}"


@dataclass(frozen=True)
class Add(Expr):
    terms: tuple

    def __str__(self):
        return "(+ " + " ".join(str(t) for t in self.terms) + ")"


@dataclass(frozen=True)
class Mul(Expr):
    factors: tuple

    def __str__(self):
        return "(* " + " ".join(str(f) for f in self.factors) + ")"


@dataclass(frozen=True)
class Sub(Expr):
    a: Expr
    b: Expr

    def __str__(self):
        return f"(- {self.a} {self.b})"


@dataclass(frozen=True)
class Div(Expr):
    a: Expr
    b: Expr

    def __str__(self):
        return f"(/ {self.a} {self.b})"


@dataclass(frozen=True)
class Neg(Expr):
    a: Expr

    def __str__(self):
        return f"(- {self.a})"


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: float

    def __str__(self):
        return f"(pow {self.base} {self.exponent:g})"


@dataclass(frozen=True)
class Exp(Expr):
    arg: Expr

    def __str__(self):
        return f"(exp {self.arg})"


@dataclass(frozen=True)
class Ln(Expr):
    arg: Expr

    def __str__(self):
        return f"(ln {self.arg})"


# ----------------------------------------------------------------------
# builders
# ----------------------------------------------------------------------
def as_expr(obj) -> Expr:
    if isinstance(obj, Expr):
        return obj
    if isinstance(obj, Real):
        return Const(float(obj))
    raise TypeError(f"cannot interpret {obj!r} as an expression")


def const(value: float) -> Const:
    return Const(float(value))


def x(index: int) -> Var:
    """Coordinate expression x_index, 1-based."""
    if index < 1:
        raise ValueError("coordinate indices are 1-based")
    return Var(index - 1)


def sq_norm(dim: int) -> Expr:
    """|x|^2 = x1^2 + ... + xdim^2."""
    return Add(tuple(Mul((Var(a), Var(a))) for a in range(dim)))


def affine(coeffs, offset: float) -> Expr:
    """sum_i coeffs[i] * x_{i+1} + offset (zero coefficients are dropped)."""
    terms = [Mul((Const(float(c)), Var(a)))
             for a, c in enumerate(coeffs) if c != 0.0]
    terms.append(Const(float(offset)))
    return Add(tuple(terms)) if len(terms) > 1 else terms[0]


# ----------------------------------------------------------------------
# evaluation
# ----------------------------------------------------------------------
def eval_jets(expr: Expr, inputs: list[Jet], memo: dict | None = None) -> Jet:
    """Evaluate ``expr`` with jets substituted for the coordinates.

    ``inputs[a]`` replaces x_{a+1}; all inputs must share one jet space.
    Sub-tree results are memoized by node identity, so constructing
    expressions with shared sub-nodes (for instance one ``1 + |x|^2``
    node reused by several components) avoids recomputation.
    """
    if memo is None:
        memo = {}
    jspace = inputs[0].space

    def rec(node: Expr) -> Jet:
        got = memo.get(id(node))
        if got is not None:
            return got
        try:
            if isinstance(node, Const):
                out = Jet.constant(jspace, node.value)
            elif isinstance(node, Var):
                if node.axis >= len(inputs):
                    raise DomainError(
                        f"expression uses x{node.axis + 1} but only "
                        f"{len(inputs)} coordinates were supplied", node)
                out = inputs[node.axis]
            elif isinstance(node, Add):
                out = rec(node.terms[0])
                for term in node.terms[1:]:
                    out = out + rec(term)
            elif isinstance(node, Mul):
                out = rec(node.factors[0])
                for factor in node.factors[1:]:
                    out = out * rec(factor)
            elif isinstance(node, Sub):
                out = rec(node.a) - rec(node.b)
            elif isinstance(node, Div):
                out = rec(node.a) / rec(node.b)
            elif isinstance(node, Neg):
                out = -rec(node.a)
            elif isinstance(node, Pow):
                base = rec(node.base)
                e = node.exponent
                out = base.powi(int(e)) if float(e).is_integer() else base.powf(e)
            elif isinstance(node, Exp):
                out = rec(node.arg).exp()
            elif isinstance(node, Ln):
                out = rec(node.arg).log()
            else:
                raise TypeError(f"unknown expression node {node!r}")
        except DomainError as err:
            if err.subexpr is None:
                raise DomainError(f"{err} in subexpression {node}", node) from None
            raise
        memo[id(node)] = out
        return out

    return rec(expr)


def eval_float(expr: Expr, point) -> float:
    """Plain float evaluation (no derivative bookkeeping)."""

    def rec(node: Expr) -> float:
        try:
            if isinstance(node, Const):
                return node.value
            if isinstance(node, Var):
                return float(point[node.axis])
            if isinstance(node, Add):
                return sum(rec(t) for t in node.terms)
            if isinstance(node, Mul):
                out = 1.0
                for f in node.factors:
                    out *= rec(f)
                return out
            if isinstance(node, Sub):
                return rec(node.a) - rec(node.b)
            if isinstance(node, Div):
                denom = rec(node.b)
                if denom == 0.0:
                    raise DomainError("division by zero", node)
                return rec(node.a) / denom
            if isinstance(node, Neg):
                return -rec(node.a)
            if isinstance(node, Pow):
                base = rec(node.base)
                e = node.exponent
                if float(e).is_integer():
                    if base == 0.0 and e < 0:
                        raise DomainError("negative power of zero", node)
                    return base ** int(e)
                if base <= 0.0:
                    raise DomainError(
                        f"real power {e} of nonpositive value {base}", node)
                return base ** e
            if isinstance(node, Exp):
                return math.exp(rec(node.arg))
            if isinstance(node, Ln):
                arg = rec(node.arg)
                if arg <= 0.0:
                    raise DomainError(f"logarithm of nonpositive value {arg}", node)
                return math.log(arg)
        except DomainError as err:
            if err.subexpr is None:
                raise DomainError(f"{err} in subexpression {node}", node) from None
            raise
        raise TypeError(f"unknown expression node {node!r}")

    return rec(expr)


# ----------------------------------------------------------------------
# prefix-notation parser
# ----------------------------------------------------------------------
_TOKEN = re.compile(r"\(|\)|[^\s()]+")
_VECTOR = object()  # sentinel for the bare coordinate vector `x`


def parse_expr(text: str, dim: int) -> Expr:
    """Parse the prefix text form into an expression over ``dim`` coordinates."""
    tokens = _TOKEN.findall(text)
    if not tokens:
        raise ParseError("empty expression")
    pos = 0

    def next_token() -> str:
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError("unexpected end of expression")
        tok = tokens[pos]
        pos += 1
        return tok

    def parse_atom(tok: str):
        if tok == "x":
            return _VECTOR
        m = re.fullmatch(r"x(\d+)", tok)
        if m:
            k = int(m.group(1))
            if not 1 <= k <= dim:
                raise ParseError(
                    f"coordinate {tok} out of range for dimension {dim}")
            return Var(k - 1)
        try:
            return Const(float(tok))
        except ValueError:
            raise ParseError(f"unknown token {tok!r}") from None

    def parse() -> object:
        tok = next_token()
        if tok == ")":
            raise ParseError("unexpected ')'")
        if tok != "(":
            return parse_atom(tok)
        head = next_token()
        args = []
        while True:
            if pos >= len(tokens):
                raise ParseError("missing ')'")
            if tokens[pos] == ")":
                pos_advance()
                break
            args.append(parse())
        return build(head, args)

    def pos_advance():
        nonlocal pos
        pos += 1

    def expect_exprs(head, args):
        for a in args:
            if a is _VECTOR:
                raise ParseError(
                    f"bare vector 'x' is only valid inside (dot x x), "
                    f"not under '{head}'")
        return args

    def build(head: str, args: list) -> Expr:
        if head == "dot":
            if len(args) != 2 or args[0] is not _VECTOR or args[1] is not _VECTOR:
                raise ParseError("(dot ...) takes the coordinate vector x twice")
            return sq_norm(dim)
        args = expect_exprs(head, args)
        if head == "+":
            if not args:
                raise ParseError("(+) needs at least one argument")
            return args[0] if len(args) == 1 else Add(tuple(args))
        if head == "*":
            if not args:
                raise ParseError("(*) needs at least one argument")
            return args[0] if len(args) == 1 else Mul(tuple(args))
        if head == "-":
            if len(args) == 1:
                return Neg(args[0])
            if len(args) == 2:
                return Sub(args[0], args[1])
            raise ParseError("(-) takes one or two arguments")
        if head == "/":
            if len(args) != 2:
                raise ParseError("(/) takes exactly two arguments")
            return Div(args[0], args[1])
        if head == "pow":
            if len(args) != 2 or not isinstance(args[1], Const):
                raise ParseError("(pow base exponent) needs a numeric exponent")
            return Pow(args[0], args[1].value)
        if head == "exp":
            if len(args) != 1:
                raise ParseError("(exp ...) takes one argument")
            return Exp(args[0])
        if head == "ln":
            if len(args) != 1:
                raise ParseError("(ln ...) takes one argument")
            return Ln(args[0])
        raise ParseError(f"unknown operator {head!r}")

    result = parse()
    if pos != len(tokens):
        raise ParseError(f"trailing tokens after expression: {tokens[pos:]}")
    if result is _VECTOR:
        raise ParseError("bare vector 'x' is not a scalar expression")
    return result
