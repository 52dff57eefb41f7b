"""Constructors for the example families and their expected constants.

Four families, each bundling the immersion, the conformal factor, the
induced chart (in closed form) and the expected isoparametric profile:

``euclidean_graph``
    An affine graph hyperplane in Euclidean space with factor
    ``(a.x + b)^t``; admits the construction exactly at the roots of
    ``2 (m-4) t^2 - (m-8) t - 2``.
``hyperbolic_slice``
    The vertical totally geodesic slice of upper-half-space hyperbolic
    space with factor ``x_m^{-t}``; root polynomial
    ``(m-4) t^2 - (m-1) t + (m-1)`` (no real roots for m >= 6).
``sphere_equator``
    The equatorial sphere in the stereographic chart with factor
    ``2 (1 + |x|^2)^{-1}``.
``sphere_umbilic``
    The umbilic slice ``S^m(a) -> S^{m+1}`` at height b
    (``a^2 + b^2 = 1``) with factor ``(1 + |x|^2)^{-1}``.

The condition polynomials assume a nonconstant factor (``t != 0``); a
constant factor makes the conformal immersion homothetic, which is
handled by the residual systems directly.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from . import jets
from .geometry import ChartMetric, chart_from_components, sample_points, space_form_chart
from .hypersurface import Immersion

EXAMPLE_NAMES = ("euclidean_graph", "hyperbolic_slice", "sphere_equator",
                 "sphere_umbilic")

#: margin for the affine-domain constraint a.x + b when sampling; keeps
#: negative powers of the affine factor (and hence the fourth-order
#: bitension arithmetic) well-conditioned away from the boundary
GRAPH_DOMAIN_MARGIN = 0.25
#: tolerance for the unit-circle constraint a^2 + b^2 = 1 (CLI inputs are
#: typically truncated decimals)
SPHERE_CONSTRAINT_TOL = 1e-6


@dataclass(frozen=True)
class ExampleSpec:
    name: str
    m: int
    t: float | None = None
    a_vec: tuple | None = None
    b_scalar: float | None = None
    a_radius: float | None = None
    b_height: float | None = None


@dataclass(frozen=True)
class ProfileForms:
    """Closed-form profile alpha/beta as sums of powers of lambda."""

    alpha_terms: tuple  # ((coeff, exponent), ...)
    beta_terms: tuple

    @staticmethod
    def _eval(terms, lam: float) -> float:
        return float(sum(c * lam ** e for c, e in terms))

    @staticmethod
    def _eval_d(terms, lam: float) -> float:
        return float(sum(c * e * lam ** (e - 1) for c, e in terms))

    @staticmethod
    def _eval_dd(terms, lam: float) -> float:
        return float(sum(c * e * (e - 1) * lam ** (e - 2) for c, e in terms))

    def alpha(self, lam):
        return self._eval(self.alpha_terms, lam)

    def alpha_p(self, lam):
        return self._eval_d(self.alpha_terms, lam)

    def alpha_pp(self, lam):
        return self._eval_dd(self.alpha_terms, lam)

    def beta(self, lam):
        return self._eval(self.beta_terms, lam)

    def beta_p(self, lam):
        return self._eval_d(self.beta_terms, lam)


@dataclass(frozen=True, eq=False)
class CatalogMember:
    spec: ExampleSpec
    immersion: Immersion
    conformal_factor: jets.Expr
    induced_chart: ChartMetric
    ambient_curvature: float
    profile: ProfileForms | None
    description: str

    @property
    def name(self) -> str:
        return self.spec.name

    @property
    def m(self) -> int:
        return self.spec.m

    def condition_value(self) -> float | None:
        if self.name in ("euclidean_graph", "hyperbolic_slice"):
            return condition_polynomial(self.name, self.m, self.spec.t)
        return None

    def sample(self, n: int, rng, generic: bool = False,
               grad_floor: float = 1e-6) -> np.ndarray:
        """Seeded admissible points; with ``generic=True`` points where
        |d lambda| is tiny are redrawn (degenerate for nonzero-floor
        checks).  Falls back to plain sampling for constant factors."""
        pred = None
        if self.immersion.admissible_fn is not None:
            base = self.immersion.admissible_fn
        else:
            base = None
        if generic and not _is_constant(self.conformal_factor):
            def pred(p, _base=base):
                if _base is not None and not _base(p):
                    return False
                return _coordinate_grad_norm(self.conformal_factor, p) >= grad_floor
        else:
            pred = base
        return sample_points(self.induced_chart, n, rng, predicate=pred)


def _is_constant(expr: jets.Expr) -> bool:
    if isinstance(expr, jets.Const):
        return True
    if isinstance(expr, jets.Pow):
        return _is_constant(expr.base) or expr.exponent == 0.0
    if isinstance(expr, jets.Mul):
        return all(_is_constant(f) for f in expr.factors)
    return False


def _coordinate_grad_norm(expr: jets.Expr, p) -> float:
    j = jets.jet_eval(expr, np.asarray(p, dtype=float), order=1)
    m = len(p)
    grad = [j.deriv(tuple(1 if i == k else 0 for i in range(m)))
            for k in range(m)]
    return float(np.sqrt(sum(g * g for g in grad)))


# ----------------------------------------------------------------------
# condition polynomials
# ----------------------------------------------------------------------
def condition_polynomial(name: str, m: int, t: float) -> float:
    """Root condition for a proper construction with nonconstant factor.

    ``euclidean_graph``: 2 (m-4) t^2 - (m-8) t - 2
    ``hyperbolic_slice``: (m-4) t^2 - (m-1) t + (m-1)
    """
    if name == "euclidean_graph":
        return 2.0 * (m - 4) * t * t - (m - 8) * t - 2.0
    if name == "hyperbolic_slice":
        return (m - 4) * t * t - (m - 1) * t + (m - 1)
    raise ValueError(
        f"no condition polynomial for {name!r}; "
        "supported: euclidean_graph, hyperbolic_slice")


def condition_roots(name: str, m: int) -> tuple[float, ...]:
    """Real roots of the condition polynomial, if any."""
    if name == "euclidean_graph":
        if m == 4:
            return (0.5,)
        return tuple(sorted((0.5, -2.0 / (m - 4))))
    if name == "hyperbolic_slice":
        if m == 4:
            return (1.0,)
        disc = (m - 1) ** 2 - 4.0 * (m - 4) * (m - 1)
        if disc < 0:
            return ()
        root = np.sqrt(disc)
        return tuple(sorted(((m - 1 - root) / (2 * (m - 4)),
                             (m - 1 + root) / (2 * (m - 4)))))
    raise ValueError(f"no condition polynomial for {name!r}")


# ----------------------------------------------------------------------
# family builders
# ----------------------------------------------------------------------
def _build_euclidean_graph(spec: ExampleSpec) -> CatalogMember:
    m = spec.m
    a = np.asarray(spec.a_vec if spec.a_vec is not None
                   else [1.0] + [0.0] * (m - 1), dtype=float)
    if a.shape != (m,):
        raise ValueError(f"a_vec must have length m={m}")
    b = 1.0 if spec.b_scalar is None else float(spec.b_scalar)
    t = spec.t
    if t is None:
        raise ValueError("euclidean_graph needs the exponent t")
    spec = replace(spec, a_vec=tuple(a), b_scalar=b)
    affine = jets.affine(a, b)

    def in_domain(p, _a=a, _b=b):
        return float(_a @ p + _b) > GRAPH_DOMAIN_MARGIN

    ambient = space_form_chart("euclidean", m + 1)
    comps = tuple([jets.x(i) for i in range(1, m + 1)] + [affine])
    lam = jets.Pow(affine, float(t))
    imm = Immersion(
        dim=m, components=comps, ambient=ambient, conformal_factor=lam,
        minimal=True, totally_geodesic=True, totally_umbilical=True,
        domain=f"a.x + b > {GRAPH_DOMAIN_MARGIN}", admissible_fn=in_domain)
    zero = jets.const(0.0)
    chart_comps = tuple(
        tuple(jets.const(1.0 + a[i] * a[j]) if i == j
              else (jets.const(a[i] * a[j]) if a[i] * a[j] != 0.0 else zero)
              for j in range(m))
        for i in range(m))
    induced = chart_from_components(
        chart_comps, m, domain=f"a.x + b > {GRAPH_DOMAIN_MARGIN}",
        admissible_fn=in_domain)
    norm_a_sq = float(a @ a)
    K = norm_a_sq / (1.0 + norm_a_sq)
    profile = None
    if t != 0.0:
        profile = ProfileForms(
            alpha_terms=((t * t * K, 2.0 * (t - 1.0) / t),),
            beta_terms=((t * (t - 1.0) * K, (t - 2.0) / t),))
    return CatalogMember(
        spec=spec, immersion=imm, conformal_factor=lam, induced_chart=induced,
        ambient_curvature=0.0, profile=profile,
        description=f"affine graph hyperplane in R^{m + 1}, factor (a.x+b)^{t:g}")


def _build_hyperbolic_slice(spec: ExampleSpec) -> CatalogMember:
    m = spec.m
    t = spec.t
    if t is None:
        raise ValueError("hyperbolic_slice needs the exponent t")
    ambient = space_form_chart("hyperbolic", m + 1)
    comps = tuple([jets.const(1.0)] + [jets.x(i) for i in range(1, m + 1)])
    lam = jets.Pow(jets.x(m), -float(t))
    imm = Immersion(
        dim=m, components=comps, ambient=ambient, conformal_factor=lam,
        minimal=True, totally_geodesic=True, totally_umbilical=True,
        domain="x_m > 0", admissible_fn=lambda p: p[-1] > 0.0)
    induced = space_form_chart("hyperbolic", m)
    profile = None
    if t != 0.0:
        profile = ProfileForms(
            alpha_terms=((t * t, 2.0),),
            beta_terms=(((m - 1.0) * t + t * t, 1.0),))
    return CatalogMember(
        spec=spec, immersion=imm, conformal_factor=lam, induced_chart=induced,
        ambient_curvature=-1.0, profile=profile,
        description=f"totally geodesic slice of H^{m + 1}, factor x_m^(-{t:g})")


def _build_sphere_equator(spec: ExampleSpec) -> CatalogMember:
    m = spec.m
    ambient = space_form_chart("spherical", m + 1)
    comps = tuple([jets.x(i) for i in range(1, m + 1)] + [jets.const(0.0)])
    lam = jets.const(2.0) * jets.Pow(1 + jets.sq_norm(m), -1.0)
    imm = Immersion(
        dim=m, components=comps, ambient=ambient, conformal_factor=lam,
        minimal=True, totally_geodesic=True, totally_umbilical=True)
    induced = space_form_chart("spherical", m)
    profile = ProfileForms(
        alpha_terms=((2.0, 1.0), (-1.0, 2.0)),
        beta_terms=((float(m), 0.0), (-float(m), 1.0)))
    return CatalogMember(
        spec=spec, immersion=imm, conformal_factor=lam, induced_chart=induced,
        ambient_curvature=1.0, profile=profile,
        description=f"equatorial S^{m} in the stereographic chart of S^{m + 1}")


def _build_sphere_umbilic(spec: ExampleSpec) -> CatalogMember:
    m = spec.m
    a = spec.a_radius
    b = spec.b_height
    if a is None or b is None:
        raise ValueError("sphere_umbilic needs a_radius and b_height")
    a = float(a)
    b = float(b)
    if a <= 0.0:
        raise ValueError("a_radius must be positive")
    if abs(a * a + b * b - 1.0) > SPHERE_CONSTRAINT_TOL:
        raise ValueError(
            f"a_radius^2 + b_height^2 = {a * a + b * b:.9f} must be 1 "
            f"(tolerance {SPHERE_CONSTRAINT_TOL})")
    if abs(1.0 - b) < 1e-2:
        raise ValueError("b_height too close to 1 (degenerate chart formula)")
    ambient = space_form_chart("spherical", m + 1)
    s = 1 + jets.sq_norm(m)
    s_inv = jets.Pow(s, -1.0)
    pref = a / (1.0 - b)
    comps = tuple(
        [jets.const(2.0 * pref) * jets.x(i) * s_inv for i in range(1, m + 1)]
        + [jets.const(pref) * (jets.sq_norm(m) - 1) * s_inv])
    lam = s_inv
    geodesic = abs(b) < 1e-14
    imm = Immersion(
        dim=m, components=comps, ambient=ambient, conformal_factor=lam,
        minimal=geodesic, totally_geodesic=geodesic, totally_umbilical=True)
    induced = space_form_chart("spherical", m, radius=a)
    a2 = a * a
    profile = ProfileForms(
        alpha_terms=((1.0 / a2, 1.0), (-1.0 / a2, 2.0)),
        beta_terms=((m / (2.0 * a2), 0.0), (-m / a2, 1.0)))
    return CatalogMember(
        spec=spec, immersion=imm, conformal_factor=lam, induced_chart=induced,
        ambient_curvature=1.0, profile=profile,
        description=f"umbilic slice S^{m}({a:g}) -> S^{m + 1} at height {b:g}")


_BUILDERS: dict[str, Callable[[ExampleSpec], CatalogMember]] = {
    "euclidean_graph": _build_euclidean_graph,
    "hyperbolic_slice": _build_hyperbolic_slice,
    "sphere_equator": _build_sphere_equator,
    "sphere_umbilic": _build_sphere_umbilic,
}


def build_example(spec: ExampleSpec | str, **params) -> CatalogMember:
    """Build a catalog member from a spec or from name + parameters."""
    if isinstance(spec, str):
        known = {"m", "t", "a_vec", "b_scalar", "a_radius", "b_height"}
        bad = set(params) - known
        if bad:
            raise ValueError(f"unknown parameters {sorted(bad)}")
        if "m" not in params:
            raise ValueError("the dimension m is required")
        spec = ExampleSpec(name=spec, **params)
    if spec.name not in _BUILDERS:
        raise ValueError(
            f"unknown example {spec.name!r}; known: {EXAMPLE_NAMES}")
    if spec.m < 2:
        raise ValueError("examples need m >= 2")
    return _BUILDERS[spec.name](spec)


def with_conformal_factor(member: CatalogMember,
                          lam: jets.Expr) -> CatalogMember:
    """Same immersion with a different conformal factor (profile and
    condition data no longer apply)."""
    imm = replace(member.immersion, conformal_factor=lam)
    return CatalogMember(
        spec=member.spec, immersion=imm, conformal_factor=lam,
        induced_chart=member.induced_chart,
        ambient_curvature=member.ambient_curvature, profile=None,
        description=member.description + " (replaced factor)")
