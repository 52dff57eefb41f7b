"""Riemannian calculus on coordinate charts.

A :class:`ChartMetric` holds metric component expressions over an
m-dimensional coordinate chart.  All derived quantities (Christoffel
symbols, intrinsic Ricci, gradients / Hessians / Laplacians of scalar
fields) are computed through jet arithmetic at a point, so every
derivative is exact up to floating-point rounding.

:class:`MetricJets` is the per-point workhorse: it accepts the metric as
a jet matrix, which lets the hypersurface module reuse the same calculus
for induced metrics that are only available as jets, not expressions.

Sign conventions
----------------
* Laplacian: trace of the Hessian against the inverse metric
  (``Delta = div grad``; negative on bump functions' peaks).
* Curvature: ``R(X,Y)Z = [nabla_X, nabla_Y]Z - nabla_[X,Y] Z`` and
  ``Ric(X) = sum_i R(X, e_i) e_i``, so round spheres have positive Ricci.

The three space-form chart models match the coordinates used throughout
the example catalog: Euclidean coordinates, the upper half-space with
``g = R^2 x_m^{-2} delta`` and the stereographic sphere chart with
``g = 4 R^2 delta / (1 + |x|^2)^2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from . import jets
from .errors import DomainError, InadmissiblePointError
from .jets import linalg
from .jets.jet import Jet

#: documented sampling boxes (per chart kind); see also `sample_points`
EUCLIDEAN_BOX = (-2.0, 2.0)
HYPERBOLIC_LAST_AXIS_BOX = (0.5, 2.0)
STEREOGRAPHIC_MAX_NORM = 2.0

#: default jet order for metric components; order 3 feeds second
#: derivatives of Christoffel symbols, which is everything the residual
#: systems consume
METRIC_ORDER = 3


# ----------------------------------------------------------------------
# per-point metric calculus over jets
# ----------------------------------------------------------------------
class MetricJets:
    """Metric data and scalar-field calculus at one point, over jets."""

    def __init__(self, g: list[list[Jet]]):
        self.m = len(g)
        self.g = g
        self.g_inv = linalg.mat_inv(g)
        self.g_values = linalg.values(g)
        self.g_inv_values = linalg.values(self.g_inv)

    # -- connection and curvature --------------------------------------
    @cached_property
    def christoffel(self) -> list[list[list[Jet]]]:
        """Gamma^k_ij jets, symmetric in (i, j).

        Sparse in practice (diagonal charts have mostly zero metric
        derivatives), so zero summands are skipped before any jet
        product is formed.
        """
        m = self.m
        dg = [[[self.g[l][j].d(i) for j in range(m)] for l in range(m)]
              for i in range(m)]
        ginv_zero = [[self.g_inv[k][l].is_zero() for l in range(m)]
                     for k in range(m)]
        zero = Jet.constant(self.g[0][0].space, 0.0).truncate(
            self.g[0][0].order - 1)
        gamma = [[[None] * m for _ in range(m)] for _ in range(m)]
        for i in range(m):
            for j in range(i, m):
                terms = []
                for l in range(m):
                    t = dg[i][l][j] + dg[j][l][i] - dg[l][i][j]
                    terms.append(None if t.is_zero() else t)
                for k in range(m):
                    total = None
                    for l in range(m):
                        if terms[l] is None or ginv_zero[k][l]:
                            continue
                        term = self.g_inv[k][l] * terms[l]
                        total = term if total is None else total + term
                    half = zero if total is None else total * 0.5
                    gamma[k][i][j] = half
                    gamma[k][j][i] = half
        return gamma

    @cached_property
    def christoffel_values(self) -> np.ndarray:
        m = self.m
        out = np.empty((m, m, m))
        gamma = self.christoffel
        for k in range(m):
            for i in range(m):
                for j in range(m):
                    out[k, i, j] = gamma[k][i][j].value
        return out

    @cached_property
    def ricci_values(self) -> np.ndarray:
        """Covariant Ricci tensor values Ric_jk at the point."""
        m = self.m
        gamma = self.christoffel
        gv = self.christoffel_values
        dgamma = np.empty((m, m, m, m))  # dgamma[i, k, j, l] = d_i Gamma^k_jl
        for k in range(m):
            for j in range(m):
                for l in range(j, m):
                    entry = gamma[k][j][l]
                    for i in range(m):
                        v = entry.dvalue(i)
                        dgamma[i, k, j, l] = v
                        dgamma[i, k, l, j] = v
        ric = np.empty((m, m))
        for j in range(m):
            for k in range(j, m):
                v = 0.0
                for i in range(m):
                    v += dgamma[i, i, j, k] - dgamma[j, i, i, k]
                for i in range(m):
                    for l in range(m):
                        v += gv[i, i, l] * gv[l, j, k] - gv[i, j, l] * gv[l, i, k]
                ric[j, k] = v
                ric[k, j] = v
        return ric

    # -- scalar-field calculus ------------------------------------------
    def grad(self, f: Jet) -> list[Jet]:
        """Contravariant gradient components g^{ij} d_j f."""
        df = [f.d(j) for j in range(self.m)]
        return [linalg.sum_jets([self.g_inv[i][j] * df[j]
                                 for j in range(self.m)])
                for i in range(self.m)]

    def hess(self, f: Jet) -> list[list[Jet]]:
        """Covariant Hessian d_i d_j f - Gamma^k_ij d_k f."""
        m = self.m
        df = [f.d(k) for k in range(m)]
        ddf = [[df[i].d(j) for j in range(m)] for i in range(m)]
        gamma = self.christoffel
        out = [[None] * m for _ in range(m)]
        for i in range(m):
            for j in range(i, m):
                corr = linalg.sum_jets([gamma[k][i][j] * df[k]
                                        for k in range(m)])
                h = ddf[i][j] - corr
                out[i][j] = h
                out[j][i] = h
        return out

    def laplacian(self, f: Jet) -> Jet:
        hess = self.hess(f)
        return linalg.sum_jets([self.g_inv[i][j] * hess[i][j]
                                for i in range(self.m)
                                for j in range(self.m)])

    def grad_norm_sq(self, f: Jet) -> Jet:
        df = [f.d(j) for j in range(self.m)]
        return linalg.sum_jets([self.g_inv[i][j] * df[i] * df[j]
                                for i in range(self.m)
                                for j in range(self.m)])

    def inner_grads(self, f1: Jet, f2: Jet) -> Jet:
        df1 = [f1.d(j) for j in range(self.m)]
        df2 = [f2.d(j) for j in range(self.m)]
        return linalg.sum_jets([self.g_inv[i][j] * df1[i] * df2[j]
                                for i in range(self.m)
                                for j in range(self.m)])

    # -- value-level helpers --------------------------------------------
    def grad_values(self, f: Jet) -> np.ndarray:
        df = np.array([f.d(j).value for j in range(self.m)])
        return self.g_inv_values @ df

    def vec_norm(self, v: np.ndarray) -> float:
        """g-norm of a contravariant vector of values."""
        return float(np.sqrt(max(v @ self.g_values @ v, 0.0)))

    def grad_of_scalar_values(self, f: Jet) -> np.ndarray:
        return self.grad_values(f)


# ----------------------------------------------------------------------
# chart metrics
# ----------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class SpaceForm:
    kind: str        # euclidean | hyperbolic | spherical
    curvature: float  # sectional curvature (0, -1/R^2, +1/R^2)
    radius: float


@dataclass(frozen=True, eq=False)
class ChartMetric:
    """A coordinate chart with closed-form metric components."""

    dim: int
    components: tuple  # dim x dim nested tuple of Expr, symmetric
    space_form: SpaceForm | None = None
    domain: str = "all of R^m"
    sample_box: tuple = ()
    admissible_fn: Callable[[np.ndarray], bool] | None = None
    sample_fn: Callable[[np.ndarray], bool] | None = None

    def admissible(self, p) -> bool:
        p = np.asarray(p, dtype=float)
        if p.shape != (self.dim,):
            return False
        return self.admissible_fn(p) if self.admissible_fn else True

    def require_admissible(self, p):
        if not self.admissible(p):
            raise InadmissiblePointError(
                f"point {tuple(np.asarray(p, dtype=float))} is outside the "
                f"chart domain ({self.domain})")

    def metric_values(self, p) -> np.ndarray:
        self.require_admissible(p)
        return np.array([[jets.eval_float(self.components[i][j], p)
                          for j in range(self.dim)] for i in range(self.dim)])

    def metric_jets(self, p, order: int = METRIC_ORDER) -> MetricJets:
        self.require_admissible(p)
        coords = jets.coordinate_jets(np.asarray(p, dtype=float), order)
        memo: dict = {}
        g = [[jets.eval_jets(self.components[i][j], coords, memo)
              for j in range(self.dim)] for i in range(self.dim)]
        return MetricJets(g)


def _box_for(kind: str, dim: int) -> tuple:
    if kind == "hyperbolic":
        return tuple([EUCLIDEAN_BOX] * (dim - 1) + [HYPERBOLIC_LAST_AXIS_BOX])
    return tuple([EUCLIDEAN_BOX] * dim)


def space_form_chart(kind: str, dim: int, radius: float = 1.0) -> ChartMetric:
    """Model charts for the three space forms.

    * ``euclidean``: identity metric on R^dim (radius ignored).
    * ``hyperbolic``: upper half-space x_dim > 0 with
      ``g = radius^2 x_dim^{-2} delta`` (curvature -1/radius^2).
    * ``spherical``: stereographic chart with
      ``g = 4 radius^2 delta / (1 + |x|^2)^2`` (curvature +1/radius^2),
      covering the sphere minus one point.
    """
    if dim < 2:
        raise ValueError("space-form charts need dim >= 2")
    if radius <= 0:
        raise ValueError("radius must be positive")
    zero = jets.const(0.0)
    if kind == "euclidean":
        one = jets.const(1.0)
        comps = tuple(tuple(one if i == j else zero for j in range(dim))
                      for i in range(dim))
        return ChartMetric(
            dim=dim, components=comps,
            space_form=SpaceForm("euclidean", 0.0, radius),
            domain="all of R^m", sample_box=_box_for(kind, dim))
    if kind == "hyperbolic":
        diag = jets.const(radius ** 2) * jets.Pow(jets.x(dim), -2.0)
        comps = tuple(tuple(diag if i == j else zero for j in range(dim))
                      for i in range(dim))
        return ChartMetric(
            dim=dim, components=comps,
            space_form=SpaceForm("hyperbolic", -1.0 / radius ** 2, radius),
            domain="upper half-space x_m > 0",
            sample_box=_box_for(kind, dim),
            admissible_fn=lambda p: p[-1] > 0.0)
    if kind == "spherical":
        diag = jets.const(4.0 * radius ** 2) * jets.Pow(1 + jets.sq_norm(dim), -2.0)
        comps = tuple(tuple(diag if i == j else zero for j in range(dim))
                      for i in range(dim))
        return ChartMetric(
            dim=dim, components=comps,
            space_form=SpaceForm("spherical", 1.0 / radius ** 2, radius),
            domain="stereographic chart (sphere minus one point)",
            sample_box=_box_for(kind, dim),
            sample_fn=lambda p: float(np.dot(p, p)) <= STEREOGRAPHIC_MAX_NORM ** 2)
    raise ValueError(f"unsupported space form kind {kind!r}")


def chart_from_components(components, dim: int, **kwargs) -> ChartMetric:
    """Chart with raw component expressions (symmetrized storage expected)."""
    comps = tuple(tuple(components[i][j] for j in range(dim))
                  for i in range(dim))
    kwargs.setdefault("sample_box", _box_for("euclidean", dim))
    return ChartMetric(dim=dim, components=comps, **kwargs)


# ----------------------------------------------------------------------
# chart-level operations
# ----------------------------------------------------------------------
def christoffel(chart: ChartMetric, p) -> np.ndarray:
    """Christoffel symbols Gamma^k_ij of the chart metric at p."""
    return chart.metric_jets(p).christoffel_values


def ricci_intrinsic(chart: ChartMetric, p) -> np.ndarray:
    """Covariant Ricci tensor of the chart metric at p."""
    return chart.metric_jets(p).ricci_values


@dataclass(frozen=True)
class FieldPackage:
    """Pointwise calculus of a positive scalar field on a chart."""

    lam: float
    grad: np.ndarray       # contravariant components
    hess: np.ndarray       # covariant components
    laplacian: float
    grad_norm_sq: float


def field_package(lam_expr: jets.Expr, chart: ChartMetric, p,
                  order: int = jets.MAX_ORDER) -> FieldPackage:
    """Evaluate grad / Hess / Laplacian / |grad|^2 of a conformal factor."""
    chart.require_admissible(p)
    metric = chart.metric_jets(p)
    coords = jets.coordinate_jets(np.asarray(p, dtype=float), order)
    lam = jets.eval_jets(lam_expr, coords)
    if lam.value <= 0.0:
        raise DomainError(
            f"conformal factor is nonpositive ({lam.value}) at {tuple(p)}",
            lam_expr)
    grad = metric.grad_values(lam)
    hess_j = metric.hess(lam)
    m = chart.dim
    hess = np.array([[hess_j[i][j].value for j in range(m)] for i in range(m)])
    lap = float(np.sum(metric.g_inv_values * hess))
    gnsq = float(grad @ metric.g_values @ grad)
    # trace identity holds by construction; guard against bookkeeping bugs
    lap_direct = metric.laplacian(lam).value
    scale = 1.0 + abs(lap_direct)
    if abs(lap - lap_direct) > 1e-12 * scale:
        raise AssertionError("laplacian/trace identity violated")
    return FieldPackage(lam=lam.value, grad=grad, hess=hess,
                        laplacian=lap_direct, grad_norm_sq=max(gnsq, 0.0))


# ----------------------------------------------------------------------
# seeded sampling
# ----------------------------------------------------------------------
def sample_points(chart: ChartMetric, n: int, rng: np.random.Generator,
                  predicate: Callable[[np.ndarray], bool] | None = None,
                  max_tries: int = 100_000) -> np.ndarray:
    """Draw n admissible points uniformly from the chart's sample box.

    Points failing the chart's own admissibility / sampling predicates or
    the extra ``predicate`` are rejected and redrawn, so the result is
    deterministic given the generator state.
    """
    box = chart.sample_box or _box_for("euclidean", chart.dim)
    lo = np.array([b[0] for b in box])
    hi = np.array([b[1] for b in box])
    out = np.empty((n, chart.dim))
    got = 0
    for _ in range(max_tries):
        if got == n:
            break
        p = lo + (hi - lo) * rng.random(chart.dim)
        if not chart.admissible(p):
            continue
        if chart.sample_fn is not None and not chart.sample_fn(p):
            continue
        if predicate is not None and not predicate(p):
            continue
        out[got] = p
        got += 1
    if got < n:
        raise InadmissiblePointError(
            f"could not draw {n} admissible points from {chart.domain}")
    return out


def rng_from_seed(seed: int) -> np.random.Generator:
    """The documented reproducible generator used across the package."""
    return np.random.default_rng(seed)
