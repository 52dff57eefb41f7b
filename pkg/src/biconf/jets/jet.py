"""Jet values: truncated Taylor expansions with exact arithmetic.

A :class:`Jet` carries the value of a scalar quantity together with all
of its partial derivatives through the order of its space, stored as
Taylor coefficients (one slot per multi-index).  Sums, products,
quotients, logarithms, exponentials and real powers of jets are again
jets, exact to the common order up to floating-point rounding; there is
no truncation error for derivatives within the carried order.

Binary operations between jets of different orders truncate to the lower
order, and :meth:`Jet.d` (formal partial derivative) lowers the order by
one.  Insufficient order therefore fails loudly via ``d()`` on an
order-0 jet instead of silently producing wrong derivatives.
"""

from __future__ import annotations

import math
from numbers import Real

import numpy as np

from ..errors import DomainError
from . import backend
from .space import JetSpace, space

#: values smaller than this in absolute value are treated as zero when a
#: reciprocal is requested
_RECIP_FLOOR = 1e-300


class Jet:
    __slots__ = ("space", "coeffs")

    def __init__(self, jspace: JetSpace, coeffs: np.ndarray):
        self.space = jspace
        self.coeffs = coeffs

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------
    @staticmethod
    def constant(jspace: JetSpace, value: float) -> "Jet":
        coeffs = np.zeros(jspace.size)
        coeffs[0] = value
        return Jet(jspace, coeffs)

    @staticmethod
    def variable(jspace: JetSpace, point, axis: int) -> "Jet":
        """Jet of the coordinate function x_{axis+1} at ``point`` (0-based axis)."""
        if not 0 <= axis < jspace.dim:
            raise ValueError(f"axis {axis} out of range for dim {jspace.dim}")
        coeffs = np.zeros(jspace.size)
        coeffs[0] = float(point[axis])
        if jspace.order >= 1:
            unit = tuple(1 if a == axis else 0 for a in range(jspace.dim))
            coeffs[jspace.index_of[unit]] = 1.0
        return Jet(jspace, coeffs)

    # ------------------------------------------------------------------
    # basic accessors
    # ------------------------------------------------------------------
    @property
    def value(self) -> float:
        return float(self.coeffs[0])

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def order(self) -> int:
        return self.space.order

    def truncate(self, order: int) -> "Jet":
        if order == self.order:
            return self
        if order > self.order:
            raise ValueError(f"cannot extend jet of order {self.order} to {order}")
        target = space(self.dim, order)
        return Jet(target, self.coeffs[: target.size].copy())

    def deriv(self, multi_index) -> float:
        """The partial derivative d^alpha at the base point (not a Taylor coeff)."""
        alpha = tuple(int(a) for a in multi_index)
        if len(alpha) != self.dim or any(a < 0 for a in alpha):
            raise ValueError(f"bad multi-index {multi_index} for dim {self.dim}")
        if sum(alpha) > self.order:
            raise ValueError(
                f"multi-index {multi_index} exceeds jet order {self.order}")
        slot = self.space.index_of[alpha]
        return float(self.coeffs[slot] * self.space.factorials[slot])

    def d(self, axis: int) -> "Jet":
        """Formal partial derivative along ``axis`` (0-based); order drops by 1."""
        src, fac = self.space.diff_table(axis)
        target = space(self.dim, self.order - 1)
        return Jet(target, self.coeffs[src] * fac)

    def dvalue(self, axis: int) -> float:
        """Value of the first partial along ``axis``; grade-1 slots sit
        right after the constant slot in axis order."""
        if self.order < 1:
            raise ValueError("cannot differentiate an order-0 jet")
        return float(self.coeffs[1 + axis])

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def __repr__(self):
        return (f"Jet(dim={self.dim}, order={self.order}, "
                f"value={self.value!r})")

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------
    def _align(self, other: "Jet") -> tuple["Jet", "Jet"]:
        sa, sb = self.space, other.space
        if sa is sb:
            return self, other
        if sa.dim != sb.dim:
            raise ValueError(
                f"jet dimension mismatch: {sa.dim} vs {sb.dim}")
        if sa.order < sb.order:
            return self, other.truncate(sa.order)
        return self.truncate(sb.order), other

    def __add__(self, other):
        if isinstance(other, Jet):
            a, b = self._align(other)
            return Jet(a.space, a.coeffs + b.coeffs)
        if isinstance(other, Real):
            coeffs = self.coeffs.copy()
            coeffs[0] += float(other)
            return Jet(self.space, coeffs)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.space, -self.coeffs)

    def __sub__(self, other):
        if isinstance(other, Jet):
            a, b = self._align(other)
            return Jet(a.space, a.coeffs - b.coeffs)
        if isinstance(other, Real):
            return self + (-float(other))
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            a, b = self._align(other)
            # zero factors shortcut the kernel; exact since 0 * x = 0
            if not a.coeffs.any() or not b.coeffs.any():
                return Jet(a.space, np.zeros(a.space.size))
            ii, jj, kk = a.space.mul_table
            out = np.zeros(a.space.size)
            backend.mul_into(ii, jj, kk, a.coeffs, b.coeffs, out)
            return Jet(a.space, out)
        if isinstance(other, Real):
            return Jet(self.space, self.coeffs * float(other))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.recip()
        if isinstance(other, Real):
            return Jet(self.space, self.coeffs / float(other))
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, Real):
            return self.recip() * float(other)
        return NotImplemented

    def __pow__(self, exponent):
        if isinstance(exponent, Real):
            e = float(exponent)
            if e.is_integer():
                return self.powi(int(e))
            return self.powf(e)
        return NotImplemented

    # ------------------------------------------------------------------
    # series composition (univariate post-composition g(f))
    # ------------------------------------------------------------------
    def compose_series(self, series: np.ndarray) -> "Jet":
        """g(f) where this jet is f and ``series`` holds the univariate
        Taylor coefficients of g at f's value, indexed 0..order.

        The deviation f - f(value) has no constant term, so the Horner
        evaluation is exact at the truncation order.
        """
        delta_coeffs = self.coeffs.copy()
        delta_coeffs[0] = 0.0
        delta = Jet(self.space, delta_coeffs)
        result = Jet.constant(self.space, float(series[self.order]))
        for k in range(self.order - 1, -1, -1):
            result = result * delta + float(series[k])
        return result

    def recip(self) -> "Jet":
        v = self.value
        if abs(v) < _RECIP_FLOOR:
            raise DomainError("reciprocal of a jet with zero value")
        series = np.array([(-1.0) ** k / v ** (k + 1)
                           for k in range(self.order + 1)])
        return self.compose_series(series)

    def log(self) -> "Jet":
        v = self.value
        if v <= 0.0:
            raise DomainError(f"logarithm of a nonpositive jet value {v}")
        series = np.empty(self.order + 1)
        series[0] = math.log(v)
        for k in range(1, self.order + 1):
            series[k] = (-1.0) ** (k - 1) / (k * v ** k)
        return self.compose_series(series)

    def exp(self) -> "Jet":
        ev = math.exp(self.value)
        series = np.array([ev / math.factorial(k)
                           for k in range(self.order + 1)])
        return self.compose_series(series)

    def powf(self, t: float) -> "Jet":
        """Real power f**t; requires a positive value."""
        v = self.value
        if v <= 0.0:
            raise DomainError(
                f"real power {t} of a nonpositive jet value {v}")
        series = np.empty(self.order + 1)
        coeff = 1.0
        for k in range(self.order + 1):
            series[k] = coeff * v ** (t - k)
            coeff *= (t - k) / (k + 1)
        return self.compose_series(series)

    def powi(self, n: int) -> "Jet":
        """Integer power by repeated multiplication; exact at zero values
        for nonnegative exponents."""
        if n < 0:
            return self.powi(-n).recip()
        result = Jet.constant(self.space, 1.0)
        base = self
        k = n
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def sqrt(self) -> "Jet":
        return self.powf(0.5)


def coordinate_jets(point, order: int) -> list[Jet]:
    """Jets of all coordinate functions at ``point``."""
    jspace = space(len(point), order)
    return [Jet.variable(jspace, point, axis) for axis in range(len(point))]


def compose(f: Jet, args: list[Jet]) -> Jet:
    """Multivariate composition: the jet of y -> f(y) pre-composed with
    the map x -> (args_0(x), ..., args_{dim-1}(x)).

    ``f`` lives in a space of dimension len(args); the result lives in the
    args' space, truncated to min(f.order, min arg order).  Only the
    coefficients of f with |alpha| <= result order contribute because the
    deviations args_j - args_j(value) carry no constant term.
    """
    if len(args) != f.dim:
        raise ValueError(
            f"composition needs {f.dim} argument jets, got {len(args)}")
    r = min([f.order] + [a.order for a in args])
    args = [a.truncate(r) for a in args]
    xspace = args[0].space
    for a in args:
        if a.space is not xspace:
            raise ValueError("argument jets must share one space")
    deltas = []
    for a in args:
        coeffs = a.coeffs.copy()
        coeffs[0] = 0.0
        deltas.append(Jet(xspace, coeffs))

    one = Jet.constant(xspace, 1.0)
    powers: dict[tuple[int, ...], Jet] = {tuple([0] * f.dim): one}

    def power(alpha: tuple[int, ...]) -> Jet:
        got = powers.get(alpha)
        if got is None:
            axis = next(a for a, v in enumerate(alpha) if v > 0)
            parent = tuple(v - 1 if a == axis else v
                           for a, v in enumerate(alpha))
            got = power(parent) * deltas[axis]
            powers[alpha] = got
        return got

    fspace = f.space
    out = np.zeros(xspace.size)
    limit = fspace.counts[r]
    for slot in range(limit):
        c = f.coeffs[slot]
        if c == 0.0:
            continue
        out += c * power(fspace.indices[slot]).coeffs
    return Jet(xspace, out)
