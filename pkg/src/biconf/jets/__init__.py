"""Exact high-order differentiation of closed-form expressions.

The public surface:

* :func:`jet_variable`, :func:`jet_eval`, :func:`partial` - evaluate
  coordinate functions and expression trees as jets (all partial
  derivatives through order 4) at a point;
* :mod:`biconf.jets.expr` - the expression node types, builders and the
  prefix-notation parser;
* :func:`compose` - multivariate jet composition, used to pull ambient
  quantities back along an immersion;
* :mod:`biconf.jets.backend` - selects the compiled multiplication
  kernel when available, with a pure-numpy fallback.

Everything here is pure value arithmetic with no shared mutable state,
so calls are safe from any number of workers.
"""

from .space import MAX_ORDER, JetSpace, JetSpaceError, space
from .jet import Jet, compose, coordinate_jets
from .expr import (
    Add,
    Const,
    Div,
    Exp,
    Expr,
    Ln,
    Mul,
    Neg,
    ParseError,
    Pow,
    Sub,
    Var,
    affine,
    as_expr,
    const,
    eval_float,
    eval_jets,
    parse_expr,
    sq_norm,
    x,
)
from . import backend

__all__ = [
    "MAX_ORDER", "JetSpace", "JetSpaceError", "space",
    "Jet", "compose", "coordinate_jets",
    "Expr", "Const", "Var", "Add", "Mul", "Sub", "Div", "Neg", "Pow",
    "Exp", "Ln", "ParseError",
    "affine", "as_expr", "const", "eval_float", "eval_jets", "parse_expr",
    "sq_norm", "x",
    "backend",
    "jet_variable", "jet_eval", "partial",
]


def jet_variable(point, index: int, order: int) -> Jet:
    """Jet of the coordinate function x_index (1-based) at ``point``."""
    dim = len(point)
    if not 1 <= index <= dim:
        raise ValueError(f"index {index} out of range 1..{dim}")
    if not 0 <= order <= MAX_ORDER:
        raise ValueError(f"order {order} out of range 0..{MAX_ORDER}")
    return Jet.variable(space(dim, order), point, index - 1)


def jet_eval(expr: Expr, point, order: int = MAX_ORDER) -> Jet:
    """All partial derivatives of ``expr`` at ``point`` through ``order``."""
    if not 0 <= order <= MAX_ORDER:
        raise ValueError(f"order {order} out of range 0..{MAX_ORDER}")
    return eval_jets(expr, coordinate_jets(point, order))


def partial(expr: Expr, point, multi_index) -> float:
    """One partial derivative d^alpha expr at ``point``, |alpha| <= 4."""
    alpha = tuple(int(a) for a in multi_index)
    total = sum(alpha)
    if total > MAX_ORDER:
        raise ValueError(
            f"multi-index {multi_index} exceeds the supported order {MAX_ORDER}")
    return jet_eval(expr, point, order=total).deriv(alpha)
