"""Extrinsic geometry of immersed hypersurfaces phi: M^m -> N^{m+1}.

Everything is computed per point through jet arithmetic: the immersion
components are evaluated as order-4 jets, ambient metric components are
pulled back by evaluating their expressions over the component jets, and
ambient Christoffel symbols are pulled back by multivariate jet
composition.  The induced metric, unit normal, second fundamental form,
shape operator and mean curvature then come out as jets with enough
orders left to feed fourth-order residual operators downstream
(``H`` keeps two derivative orders, so ``Delta H`` is exact).

Orientation rule: the unit normal is chosen so that
``det[dphi(e_1), ..., dphi(e_m), xi] > 0`` in ambient chart coordinates.
Zero sets of the residual systems do not depend on this choice; the
``orientation`` argument lets tests flip it.

Conventions: ``b(X, Y) = h(nabla^N_X dphi(Y), xi)`` (scalar second
fundamental form), ``g(A(X), Y) = b(X, Y)`` and ``H = trace(A) / m``, so
the tension field of the isometric immersion is ``m H xi``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from . import jets
from .errors import (
    DomainError,
    FlagError,
    InadmissiblePointError,
    PreconditionError,
    RankDeficiencyError,
)
from .geometry import ChartMetric, MetricJets
from .jets import linalg
from .jets.jet import Jet, compose

#: rank certificate: smallest singular value of the differential measured
#: against the ambient metric must exceed this
RANK_TOL = 1e-10
#: tolerance for declared-flag certificates (minimal / geodesic / umbilical)
FLAG_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Immersion:
    """A conformal immersion datum: map components, ambient chart and the
    conformal factor lambda (positive on the declared domain)."""

    dim: int                       # m, the hypersurface dimension
    components: tuple              # m+1 component expressions
    ambient: ChartMetric           # chart of N^{m+1}
    conformal_factor: jets.Expr    # lambda > 0
    minimal: bool = False
    totally_geodesic: bool = False
    totally_umbilical: bool = False
    domain: str = ""
    admissible_fn: Callable[[np.ndarray], bool] | None = None

    def __post_init__(self):
        if len(self.components) != self.dim + 1:
            raise ValueError(
                f"immersion into a hypersurface needs {self.dim + 1} "
                f"components, got {len(self.components)}")
        if self.ambient.dim != self.dim + 1:
            raise ValueError("ambient chart dimension must be m + 1")

    def admissible(self, p) -> bool:
        p = np.asarray(p, dtype=float)
        if p.shape != (self.dim,):
            return False
        return self.admissible_fn(p) if self.admissible_fn else True

    def require_admissible(self, p):
        if not self.admissible(p):
            raise InadmissiblePointError(
                f"point {tuple(np.asarray(p, dtype=float))} is outside the "
                f"immersion domain {self.domain or '(unrestricted)'}")


@dataclass(frozen=True)
class GeometryPackage:
    """Value-level extrinsic data of the hypersurface at one point."""

    point: tuple
    induced_metric: np.ndarray      # g_ij
    normal: np.ndarray              # ambient components of xi
    shape: np.ndarray               # mixed shape operator A^i_j
    mean_curvature: float           # H = trace(A)/m
    shape_norm_sq: float            # |A|^2 = trace(A A)
    second_fundamental: np.ndarray  # b_ij
    ricci: np.ndarray               # mixed intrinsic Ricci operator of g


def ambient_christoffel_jets(ambient: ChartMetric, phi_jets: list[Jet],
                             order: int = 2) -> list[list[list[Jet]]]:
    """Ambient Christoffel symbols composed with the immersion.

    Computes Gamma^c_ab of the ambient chart as jets in the ambient
    coordinates at phi(p), then composes each with the immersion
    component jets.  Returns x-jets of the given order.
    """
    y0 = np.array([c.value for c in phi_jets])
    ymetric = ambient.metric_jets(y0, order=order + 1)
    gamma_y = ymetric.christoffel
    n = ambient.dim
    out = [[[None] * n for _ in range(n)] for _ in range(n)]
    for c in range(n):
        for a in range(n):
            for b in range(a, n):
                composed = compose(gamma_y[c][a][b].truncate(order), phi_jets)
                out[c][a][b] = composed
                out[c][b][a] = composed
    return out


def ambient_ricci_values(ambient: ChartMetric, y0) -> np.ndarray:
    """Covariant ambient Ricci tensor values at the ambient point y0."""
    return ambient.metric_jets(y0, order=2).ricci_values


class ImmersionFrame:
    """All per-point jet state for one immersion evaluation.

    Properties are cached so reduced residual systems pay only for the
    pieces they touch.
    """

    def __init__(self, imm: Immersion, p, orientation: int = 1):
        if orientation not in (+1, -1):
            raise ValueError("orientation must be +1 or -1")
        imm.require_admissible(p)
        self.imm = imm
        self.m = imm.dim
        self.point = np.asarray(p, dtype=float)
        self.orientation = orientation
        self.coords = jets.coordinate_jets(self.point, jets.MAX_ORDER)
        self._memo: dict = {}
        self.phi = [jets.eval_jets(c, self.coords, self._memo)
                    for c in imm.components]
        self.ambient_point = np.array([c.value for c in self.phi])
        imm.ambient.require_admissible(self.ambient_point)
        self.lam = jets.eval_jets(imm.conformal_factor, self.coords, self._memo)
        if self.lam.value <= 0.0:
            raise DomainError(
                f"conformal factor nonpositive ({self.lam.value}) at "
                f"{tuple(self.point)}", imm.conformal_factor)

    # ------------------------------------------------------------------
    # first-order data
    # ------------------------------------------------------------------
    @cached_property
    def jacobian(self) -> list[list[Jet]]:
        """J[i][a] = d_i phi^a, order-3 jets."""
        return [[self.phi[a].d(i) for a in range(self.m + 1)]
                for i in range(self.m)]

    @cached_property
    def h_phi(self) -> list[list[Jet]]:
        """Ambient metric components along phi (order-3 jets)."""
        n = self.m + 1
        memo: dict = {}
        phi3 = [c.truncate(3) for c in self.phi]
        return [[jets.eval_jets(self.imm.ambient.components[a][b], phi3, memo)
                 for b in range(n)] for a in range(n)]

    @cached_property
    def metric(self) -> MetricJets:
        """Induced metric g_ij = h(dphi_i, dphi_j) as order-3 jets."""
        m = self.m
        J = self.jacobian
        h = self.h_phi
        # hoist h J_i before the pair loop: O(m (m+1)^2) + O(m^2 (m+1));
        # zero ambient components (off-diagonals of conformal charts) skip
        hJ = [[linalg.sum_jets([h[a][b] * J[i][a] for a in range(m + 1)
                                if not h[a][b].is_zero()])
               for b in range(m + 1)] for i in range(m)]
        g = [[None] * m for _ in range(m)]
        for i in range(m):
            for j in range(i, m):
                entry = linalg.sum_jets(
                    [hJ[i][b] * J[j][b] for b in range(m + 1)])
                g[i][j] = entry
                g[j][i] = entry
        g_values = linalg.values(g)
        sv = np.sqrt(np.maximum(np.linalg.eigvalsh(g_values), 0.0))
        if sv.min() <= RANK_TOL:
            raise RankDeficiencyError(
                f"differential drops rank at {tuple(self.point)} "
                f"(smallest singular value {sv.min():.3e})")
        return MetricJets(g)

    # ------------------------------------------------------------------
    # normal and shape data
    # ------------------------------------------------------------------
    @cached_property
    def normal(self) -> list[Jet]:
        """Unit normal xi (ambient components, order-2 jets).

        Built from the cofactor covector of the Jacobian: w_a carries the
        sign making det[dphi_1, ..., dphi_m, xi] > 0, the ambient inverse
        metric raises the index, and the h-norm rescales.  Order 2 is all
        the downstream second-fundamental data needs.
        """
        m = self.m
        mat = [[self.jacobian[i][a].truncate(2) for i in range(m)]
               for a in range(m + 1)]
        minors = linalg.maximal_minors(mat)
        w = [minors[a] * (1.0 if (a + m) % 2 == 0 else -1.0)
             for a in range(m + 1)]
        hinv = linalg.mat_inv(
            [[e.truncate(2) for e in row] for row in self.h_phi])
        raw = linalg.mat_vec(hinv, w)
        norm_sq = linalg.sum_jets([w[a] * raw[a] for a in range(m + 1)])
        if norm_sq.value <= RANK_TOL ** 2:
            raise RankDeficiencyError(
                f"normal direction degenerate at {tuple(self.point)}")
        scale = norm_sq.powf(-0.5) * float(self.orientation)
        return [r * scale for r in raw]

    @cached_property
    def gamma_ambient(self) -> list[list[list[Jet]]]:
        return ambient_christoffel_jets(self.imm.ambient, self.phi, order=2)

    @cached_property
    def second_fundamental(self) -> list[list[Jet]]:
        """b_ij = h(nabla^N_i dphi_j, xi), order-2 jets.

        Everything is pre-truncated to order 2 and zero summands (common
        for diagonal ambient metrics) are skipped before any product.
        """
        m = self.m
        n = m + 1
        J2 = [[self.jacobian[i][a].truncate(2) for a in range(n)]
              for i in range(m)]
        h2 = [[e.truncate(2) for e in row] for row in self.h_phi]
        xi = self.normal
        gam = self.gamma_ambient
        zero2 = Jet.constant(J2[0][0].space, 0.0)

        def ssum(items):
            items = [t for t in items if t is not None]
            return linalg.sum_jets(items) if items else zero2

        hxi = [ssum([h2[a][b] * xi[b] for b in range(n)
                     if not h2[a][b].is_zero()]) for a in range(n)]
        gam_nonzero = [[[not gam[a][c][d].is_zero() for d in range(n)]
                        for c in range(n)] for a in range(n)]
        gamJ = [[[ssum([gam[a][c][d] * J2[i][c] for c in range(n)
                        if gam_nonzero[a][c][d]])
                  for d in range(n)] for a in range(n)] for i in range(m)]
        b = [[None] * m for _ in range(m)]
        for i in range(m):
            for j in range(i, m):
                entry = None
                for a in range(n):
                    if hxi[a].is_zero():
                        continue
                    second = self.phi[a].d(i).d(j)
                    corr = ssum([gamJ[i][a][d] * J2[j][d] for d in range(n)
                                 if not gamJ[i][a][d].is_zero()])
                    term = (second + corr) * hxi[a]
                    entry = term if entry is None else entry + term
                b[i][j] = entry if entry is not None else zero2
                b[j][i] = b[i][j]
        return b

    @cached_property
    def shape(self) -> list[list[Jet]]:
        """Mixed shape operator A^i_j = g^{ik} b_kj, order-2 jets."""
        m = self.m
        ginv = self.metric.g_inv
        b = self.second_fundamental
        A = [[linalg.sum_jets([ginv[i][k] * b[k][j] for k in range(m)])
              for j in range(m)] for i in range(m)]
        self._check_flags(A)
        return A

    def _check_flags(self, A):
        m = self.m
        Av = np.array([[A[i][j].value for j in range(m)] for i in range(m)])
        H = float(np.trace(Av)) / m
        scale = 1.0 + float(np.abs(Av).max())
        if self.imm.totally_geodesic and np.abs(Av).max() > FLAG_TOL * scale:
            raise FlagError("declared totally geodesic but A != 0")
        if self.imm.minimal and abs(H) > FLAG_TOL * scale:
            raise FlagError("declared minimal but H != 0")
        if self.imm.totally_umbilical:
            if np.abs(Av - H * np.eye(m)).max() > FLAG_TOL * scale:
                raise FlagError("declared totally umbilical but A != H Id")

    @cached_property
    def mean_curvature(self) -> Jet:
        m = self.m
        return linalg.sum_jets([self.shape[i][i] for i in range(m)]) * (1.0 / m)

    @cached_property
    def shape_norm_sq(self) -> Jet:
        m = self.m
        return linalg.sum_jets([self.shape[i][j] * self.shape[j][i]
                                for i in range(m) for j in range(m)])

    # ------------------------------------------------------------------
    # curvature data (values)
    # ------------------------------------------------------------------
    @cached_property
    def shape_values(self) -> np.ndarray:
        m = self.m
        return np.array([[self.shape[i][j].value for j in range(m)]
                         for i in range(m)])

    @cached_property
    def normal_values(self) -> np.ndarray:
        return np.array([x.value for x in self.normal])

    @cached_property
    def ricci_ambient(self) -> np.ndarray:
        return ambient_ricci_values(self.imm.ambient, self.ambient_point)

    @cached_property
    def h_values(self) -> np.ndarray:
        return linalg.values(self.h_phi)

    @cached_property
    def ricci_normal_scalar(self) -> float:
        """Ric^N(xi, xi) at phi(p)."""
        xi = self.normal_values
        return float(xi @ self.ricci_ambient @ xi)

    @cached_property
    def ricci_normal_tangent(self) -> np.ndarray:
        """Tangential part of Ric^N(xi) as a domain vector (values)."""
        m = self.m
        xi = self.normal_values
        hv = self.h_values
        ric_xi = np.linalg.solve(hv, self.ricci_ambient @ xi)  # raise index
        Jv = np.array([[self.jacobian[i][a].value for a in range(m + 1)]
                       for i in range(m)])
        rhs = np.array([ric_xi @ hv @ Jv[i] for i in range(m)])
        return np.linalg.solve(self.metric.g_values, rhs)

    @cached_property
    def ricci_intrinsic_operator(self) -> np.ndarray:
        """Mixed intrinsic Ricci operator of the induced metric (values)."""
        return self.metric.g_inv_values @ self.metric.ricci_values

    # ------------------------------------------------------------------
    # conformal-factor calculus
    # ------------------------------------------------------------------
    @cached_property
    def log_lam(self) -> Jet:
        return self.lam.log()

    def package(self) -> GeometryPackage:
        m = self.m
        g = self.metric.g_values
        b = np.array([[self.second_fundamental[i][j].value for j in range(m)]
                      for i in range(m)])
        A = self.shape_values
        xi = self.normal_values
        H = self.mean_curvature.value
        pkg = GeometryPackage(
            point=tuple(self.point),
            induced_metric=g,
            normal=xi,
            shape=A,
            mean_curvature=H,
            shape_norm_sq=self.shape_norm_sq.value,
            second_fundamental=b,
            ricci=self.ricci_intrinsic_operator,
        )
        self._check_package(pkg)
        return pkg

    def _check_package(self, pkg: GeometryPackage):
        """Structural certificates: unit normal, orthogonality, symmetry."""
        m = self.m
        hv = self.h_values
        xi = pkg.normal
        unit = abs(float(xi @ hv @ xi) - 1.0)
        if unit > 1e-12 * (1.0 + abs(float(xi @ hv @ xi))):
            raise AssertionError("normal is not h-unit")
        Jv = np.array([[self.jacobian[i][a].value for a in range(m + 1)]
                       for i in range(m)])
        scale = 1.0 + np.abs(hv).max() * np.abs(Jv).max()
        for i in range(m):
            if abs(float(xi @ hv @ Jv[i])) > 1e-11 * scale:
                raise AssertionError("normal not orthogonal to the tangent")
        GA = pkg.induced_metric @ pkg.shape
        if np.abs(GA - GA.T).max() > 1e-10 * (1.0 + np.abs(GA).max()):
            raise AssertionError("shape operator is not g-self-adjoint")


# ----------------------------------------------------------------------
# public operations
# ----------------------------------------------------------------------
def first_fundamental(imm: Immersion, p) -> np.ndarray:
    """Induced metric values g_ij at p."""
    return ImmersionFrame(imm, p).metric.g_values


def normal_and_shape(imm: Immersion, p, orientation: int = 1) -> GeometryPackage:
    """Unit normal, shape operator, mean curvature and curvature data."""
    return ImmersionFrame(imm, p, orientation=orientation).package()


def gauss_ricci(imm: Immersion, p, orientation: int = 1) -> np.ndarray:
    """Intrinsic Ricci operator from the Gauss equation (space forms only).

    ``Ric = (m-1) c Id + m H A - A^2`` as a mixed operator; reduces to
    ``(m-1)(H^2 + c) Id`` for umbilic hypersurfaces.
    """
    if imm.ambient.space_form is None:
        raise PreconditionError(
            "gauss_ricci requires the ambient chart to be a declared space form")
    fr = ImmersionFrame(imm, p, orientation=orientation)
    c = imm.ambient.space_form.curvature
    m = imm.dim
    A = fr.shape_values
    H = fr.mean_curvature.value
    return (m - 1) * c * np.eye(m) + m * H * A - A @ A
