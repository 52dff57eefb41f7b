"""Pointwise residuals of the conformal-biharmonicity systems.

Each residual function evaluates the left-hand side of one equation
system for a conformal immersion with factor lambda at a chart point and
returns a :class:`ResidualReport` holding the normal scalar (coefficient
of the unit normal) and the tangential vector (domain components), with
norms taken in the induced metric.

Systems
-------
``residual_general``
    The full fourth-order system for any m >= 2: the normal equation
    couples ``Delta H`` with shape/curvature terms and the log-factor
    calculus; the tangential equation couples ``A(grad H)`` with the
    intrinsic Ricci and gradient terms of ``ln lambda``.
``residual_surface``
    The m = 2 form, written in terms of the scalar ``lambda^2 H``.
``residual_minimal`` / ``residual_totally_geodesic`` /
``residual_umbilic``
    Reductions with H = 0, A = 0, A = H Id respectively, written in
    terms of lambda itself (not ln lambda), exactly as displayed in the
    source equations.
``bitension_oracle``
    A from-the-definition evaluation of the bitension field of the
    conformally rescaled immersion.  Shares only the jet/metric
    primitives with the systems above; none of the assembled shape /
    residual terms are reused, so it serves as an independent oracle for
    the zero sets.

Thresholds: exact-parameter solutions evaluate below ``ZERO_THRESHOLD``,
the oracle (a longer operation chain) below ``ORACLE_ZERO_THRESHOLD``,
and generic non-solutions above ``NONZERO_FLOOR``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import jets
from .errors import PreconditionError
from .geometry import MetricJets
from .hypersurface import Immersion, ImmersionFrame, ambient_christoffel_jets
from .jets import linalg
from .jets.jet import Jet

ZERO_THRESHOLD = 1e-7
ORACLE_ZERO_THRESHOLD = 1e-5
NONZERO_FLOOR = 1e-3
#: points where |grad lambda| falls below this are redrawn when a
#: decisively nonzero residual is expected
GENERIC_GRAD_FLOOR = 1e-6

SYSTEMS = ("general", "surface", "minimal", "totally_geodesic",
           "totally_umbilical", "oracle")


@dataclass
class ResidualReport:
    system: str
    point: tuple
    normal: float
    tangential: np.ndarray
    norm_normal: float
    norm_tangential: float
    metadata: dict = field(default_factory=dict)

    @property
    def max_norm(self) -> float:
        return max(self.norm_normal, self.norm_tangential)

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "point": [float(v) for v in self.point],
            "normal": float(self.normal),
            "tangential": [float(v) for v in self.tangential],
            "norm_normal": float(self.norm_normal),
            "norm_tangential": float(self.norm_tangential),
            "metadata": {k: (None if v is None else float(v))
                         for k, v in self.metadata.items()},
        }


def _report(system: str, fr: ImmersionFrame, normal: float,
            tangential: np.ndarray, **extra) -> ResidualReport:
    metadata = {
        "m": fr.m,
        "c": (fr.imm.ambient.space_form.curvature
              if fr.imm.ambient.space_form else None),
        "lambda": fr.lam.value,
        "H": fr.mean_curvature.value,
    }
    metadata.update(extra)
    return ResidualReport(
        system=system,
        point=tuple(fr.point),
        normal=float(normal),
        tangential=np.asarray(tangential, dtype=float),
        norm_normal=abs(float(normal)),
        norm_tangential=fr.metric.vec_norm(np.asarray(tangential, dtype=float)),
        metadata=metadata,
    )


# ----------------------------------------------------------------------
# frame machinery for the trace term
# ----------------------------------------------------------------------
def g_orthonormal_frame(g: np.ndarray, order=None) -> np.ndarray:
    """Columns form a g-orthonormal frame, Gram-Schmidt over the
    coordinate vectors taken in the given order (default identity)."""
    m = g.shape[0]
    order = tuple(range(m)) if order is None else tuple(order)
    if sorted(order) != list(range(m)):
        raise ValueError(f"frame order must be a permutation, got {order}")
    frame = np.zeros((m, m))
    for col, axis in enumerate(order):
        v = np.eye(m)[axis]
        for prev in range(col):
            e = frame[:, prev]
            v = v - (v @ g @ e) * e
        norm = np.sqrt(max(v @ g @ v, 0.0))
        if norm < 1e-14:
            raise ValueError("degenerate metric in frame construction")
        frame[:, col] = v / norm
    return frame


def trace_shape_against_hessian(fr: ImmersionFrame, scalar: Jet,
                                frame_order=None) -> float:
    """sum_i g(A(e_i), nabla_{e_i} grad f) over a g-orthonormal frame.

    The value is frame-independent (it is a trace); the ``frame_order``
    argument exists so tests can recompute it over a permuted frame.
    """
    m = fr.m
    g = fr.metric.g_values
    A = fr.shape_values
    # nabla_j (grad f)^k as values
    grad_jets = fr.metric.grad(scalar)
    gamma = fr.metric.christoffel_values
    grad_v = np.array([gj.value for gj in grad_jets])
    T = np.empty((m, m))  # T[k][j] = (nabla_j grad f)^k
    for j in range(m):
        for k in range(m):
            T[k, j] = grad_jets[k].d(j).value + gamma[k, j, :] @ grad_v
    E = g_orthonormal_frame(g, frame_order)
    total = 0.0
    for i in range(m):
        e = E[:, i]
        total += (A @ e) @ g @ (T @ e)
    return float(total)


# ----------------------------------------------------------------------
# shared scalar-field bundles
# ----------------------------------------------------------------------
class _LogFactorTerms:
    """Calculus of u = ln lambda with respect to the induced metric."""

    def __init__(self, fr: ImmersionFrame):
        M = fr.metric
        u = fr.log_lam
        self.grad_jets = M.grad(u)
        self.grad = np.array([g.value for g in self.grad_jets])
        self.lap_jet = M.laplacian(u)
        self.lap = self.lap_jet.value
        self.norm_sq_jet = M.grad_norm_sq(u)
        self.norm_sq = self.norm_sq_jet.value
        self.grad_lap = M.grad_values(self.lap_jet)
        self.grad_norm_sq_grad = M.grad_values(self.norm_sq_jet)


class _FactorTerms:
    """Calculus of lambda itself with respect to the induced metric."""

    def __init__(self, fr: ImmersionFrame):
        M = fr.metric
        lam = fr.lam
        self.value = lam.value
        self.grad = M.grad_values(lam)
        self.norm_sq_jet = M.grad_norm_sq(lam)
        self.norm_sq = self.norm_sq_jet.value
        self.lap_jet = M.laplacian(lam)
        self.lap = self.lap_jet.value
        self.grad_norm_sq_grad = M.grad_values(self.norm_sq_jet)
        # grad(lambda * Delta lambda) needs the product as a jet
        self.grad_lam_lap = M.grad_values(lam * self.lap_jet)


# ----------------------------------------------------------------------
# the general system
# ----------------------------------------------------------------------
def residual_general(imm: Immersion, p, orientation: int = 1) -> ResidualReport:
    """Full normal + tangential residual for m >= 2."""
    fr = ImmersionFrame(imm, p, orientation=orientation)
    m = fr.m
    if m < 2:
        raise PreconditionError("the general system needs m >= 2")
    M = fr.metric
    u = _LogFactorTerms(fr)

    H_jet = fr.mean_curvature
    H = H_jet.value
    normA2 = fr.shape_norm_sq.value
    A = fr.shape_values
    lap_H = M.laplacian(H_jet).value
    grad_H = M.grad_values(H_jet)
    ric_n_xi_xi = fr.ricci_normal_scalar
    ric_n_xi_top = fr.ricci_normal_tangent
    ric_op = fr.ricci_intrinsic_operator
    tr_A_hess_u = trace_shape_against_hessian(fr, fr.log_lam)
    g = M.g_values

    A_grad_u = A @ u.grad
    normal = (
        m * (lap_H - H * normA2 + H * ric_n_xi_xi)
        - 2.0 * (m - 2) * tr_A_hess_u
        + 2.0 * m * H * (u.lap - (m - 4) * u.norm_sq)
        - 2.0 * m * (m - 4) * float(u.grad @ g @ grad_H)
        + (m - 2) * (m - 6) * float(A_grad_u @ g @ u.grad)
    )
    tangential = (
        -m * (2.0 * (A @ grad_H) + (m / 2.0) * (2.0 * H * grad_H)
              - 2.0 * H * ric_n_xi_top)
        - (m - 2) * (2.0 * (ric_op @ u.grad) + u.grad_lap)
        - 2.0 * (m - 2) * (u.lap - (m - 4) * u.norm_sq) * u.grad
        + 0.5 * (m - 2) * (m - 6) * u.grad_norm_sq_grad
        + 2.0 * m * (m - 4) * H * A_grad_u
    )
    return _report("general", fr, normal, tangential)


def residual_surface(imm: Immersion, p, orientation: int = 1) -> ResidualReport:
    """The m = 2 system in terms of the scalar lambda^2 H."""
    fr = ImmersionFrame(imm, p, orientation=orientation)
    if fr.m != 2:
        raise PreconditionError("the surface system requires m = 2")
    M = fr.metric
    H_jet = fr.mean_curvature
    s_jet = fr.lam * fr.lam * H_jet
    s = s_jet.value
    lap_s = M.laplacian(s_jet).value
    grad_s = M.grad_values(s_jet)
    grad_H = M.grad_values(H_jet)
    A = fr.shape_values
    normal = lap_s - s * (fr.shape_norm_sq.value - fr.ricci_normal_scalar)
    tangential = A @ grad_s + s * (grad_H - fr.ricci_normal_tangent)
    return _report("surface", fr, normal, tangential)


def residual_minimal(imm: Immersion, p, orientation: int = 1) -> ResidualReport:
    """Reduction for minimal (H = 0) immersions, m >= 3."""
    fr = ImmersionFrame(imm, p, orientation=orientation)
    m = fr.m
    if m < 3:
        raise PreconditionError("the minimal system needs m >= 3")
    H = fr.mean_curvature.value
    scale = 1.0 + abs(fr.shape_values).max()
    if abs(H) > 1e-10 * scale:
        raise PreconditionError(
            f"minimal system called with H = {H:.3e} != 0")
    M = fr.metric
    lam = _FactorTerms(fr)
    A = fr.shape_values
    g = M.g_values
    ric_op = fr.ricci_intrinsic_operator
    tr_A_hess_lam = trace_shape_against_hessian(fr, fr.lam)
    A_grad_lam = A @ lam.grad
    normal = (2.0 * lam.value * tr_A_hess_lam
              - (m - 6) * float(A_grad_lam @ g @ lam.grad))
    tangential = (
        2.0 * lam.value * (ric_op @ lam.grad)
        + lam.grad_lam_lap
        - 0.5 * (m - 4) * lam.grad_norm_sq_grad
        - (m - 2) / lam.value * lam.norm_sq * lam.grad
    )
    return _report("minimal", fr, normal, tangential)


def residual_totally_geodesic(imm: Immersion, p,
                              orientation: int = 1) -> ResidualReport:
    """Reduction for totally geodesic immersions in a space form, m >= 3."""
    fr = ImmersionFrame(imm, p, orientation=orientation)
    m = fr.m
    if m < 3:
        raise PreconditionError("the totally geodesic system needs m >= 3")
    if imm.ambient.space_form is None:
        raise PreconditionError("ambient must be a declared space form")
    A = fr.shape_values
    if np.abs(A).max() > 1e-10 * (1.0 + np.abs(A).max()):
        raise PreconditionError(
            f"totally geodesic system called with |A| = {np.abs(A).max():.3e}")
    c = imm.ambient.space_form.curvature
    lam = _FactorTerms(fr)
    tangential = (
        2.0 * (m - 1) * c * lam.value * lam.grad
        + lam.grad_lam_lap
        - 0.5 * (m - 4) * lam.grad_norm_sq_grad
        - (m - 2) / lam.value * lam.norm_sq * lam.grad
    )
    return _report("totally_geodesic", fr, 0.0, tangential)


def residual_umbilic(imm: Immersion, p, orientation: int = 1) -> ResidualReport:
    """Reduction for non-minimal totally umbilical immersions in a space form."""
    fr = ImmersionFrame(imm, p, orientation=orientation)
    m = fr.m
    if imm.ambient.space_form is None:
        raise PreconditionError("ambient must be a declared space form")
    A = fr.shape_values
    H = fr.mean_curvature.value
    scale = 1.0 + abs(H)
    if np.abs(A - H * np.eye(m)).max() > 1e-9 * scale:
        raise PreconditionError("umbilic system called on a non-umbilic input")
    if abs(H) < 1e-10:
        raise PreconditionError("umbilic system requires H != 0 (non-minimal)")
    c = imm.ambient.space_form.curvature
    lam = _FactorTerms(fr)
    H2 = H * H
    normal = (m * m * (c - H2) * lam.value ** 2
              + 4.0 * lam.value * lam.lap
              - (m * m - 8.0) * lam.norm_sq)
    tangential = (
        (2.0 * m * (m - 4) * H2 * lam.value
         - 2.0 * (m - 2) * (m - 1) * (H2 + c) * lam.value
         + (m - 2) ** 2 / lam.value * lam.norm_sq) * lam.grad
        - (m - 2) * lam.grad_lam_lap
        + 0.5 * (m - 2) * (m - 4) * lam.grad_norm_sq_grad
    )
    return _report("totally_umbilical", fr, normal, tangential)


# ----------------------------------------------------------------------
# from-the-definition bitension oracle
# ----------------------------------------------------------------------
def bitension_oracle(imm: Immersion, p) -> np.ndarray:
    """Bitension field of the conformally rescaled immersion, from scratch.

    Evaluates tau = Trace_gbar nabla dphi for the immersion carrying the
    rescaled domain metric gbar = lambda^{-2} (pullback metric), then
    applies the rough Laplacian of the pullback connection and the
    ambient space-form curvature term.  Only the jet evaluator, the
    metric-to-Christoffel helper and the ambient composition helper are
    shared with the residual systems; no shape/normal data is reused.
    """
    imm.require_admissible(p)
    if imm.ambient.space_form is None:
        raise PreconditionError(
            "the bitension oracle needs a declared space-form ambient")
    c = imm.ambient.space_form.curvature
    m = imm.dim
    n = m + 1
    point = np.asarray(p, dtype=float)
    coords = jets.coordinate_jets(point, jets.MAX_ORDER)
    memo: dict = {}
    phi = [jets.eval_jets(comp, coords, memo) for comp in imm.components]
    lam = jets.eval_jets(imm.conformal_factor, coords, memo)
    if lam.value <= 0.0:
        raise PreconditionError("conformal factor must be positive")

    J = [[phi[a].d(i) for a in range(n)] for i in range(m)]
    hmemo: dict = {}
    phi3 = [comp.truncate(3) for comp in phi]
    h = [[jets.eval_jets(imm.ambient.components[a][b], phi3, hmemo)
          for b in range(n)] for a in range(n)]

    # rescaled domain metric and its connection
    lam_m2 = lam.powi(-2)
    gbar = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            entry = linalg.sum_jets([h[a][b] * J[i][a] * J[j][b]
                                     for a in range(n) for b in range(n)])
            entry = entry * lam_m2
            gbar[i][j] = entry
            gbar[j][i] = entry
    Mbar = MetricJets(gbar)
    gamma_dom = Mbar.christoffel
    gamma_amb = ambient_christoffel_jets(imm.ambient, phi, order=2)

    # tension field tau^a (order-2 jets); contract the inverse metric into
    # the Jacobian pairs and domain Christoffels once
    K = [[linalg.sum_jets([Mbar.g_inv[i][j] * J[i][b_] * J[j][d_]
                           for i in range(m) for j in range(m)])
          for d_ in range(n)] for b_ in range(n)]
    L = [linalg.sum_jets([Mbar.g_inv[i][j] * gamma_dom[k][i][j]
                          for i in range(m) for j in range(m)])
         for k in range(m)]
    tau = []
    for a in range(n):
        second = linalg.sum_jets(
            [Mbar.g_inv[i][j] * phi[a].d(i).d(j)
             for i in range(m) for j in range(m)])
        amb = linalg.sum_jets(
            [gamma_amb[a][b_][d_] * K[b_][d_]
             for b_ in range(n) for d_ in range(n)])
        dom = linalg.sum_jets([L[k] * J[k][a] for k in range(m)])
        tau.append(second + amb - dom)

    # first pullback covariant derivative (order-1 jets)
    gam_tau = [[linalg.sum_jets([gamma_amb[a][b_][c_] * tau[c_]
                                 for c_ in range(n)])
                for b_ in range(n)] for a in range(n)]
    nabla_tau = [[None] * n for _ in range(m)]
    for i in range(m):
        for a in range(n):
            corr = linalg.sum_jets(
                [gam_tau[a][b_] * J[i][b_] for b_ in range(n)])
            nabla_tau[i][a] = tau[a].d(i) + corr

    gamma_amb_v = np.array(
        [[[gamma_amb[a][b_][c_].value for c_ in range(n)] for b_ in range(n)]
         for a in range(n)])
    Jv = np.array([[J[i][a].value for a in range(n)] for i in range(m)])
    tau_v = np.array([t.value for t in tau])
    nabla_tau_v = np.array([[nabla_tau[i][a].value for a in range(n)]
                            for i in range(m)])
    gamma_dom_v = np.array(
        [[[gamma_dom[k][i][j].value for j in range(m)] for i in range(m)]
         for k in range(m)])
    ginv_v = Mbar.g_inv_values
    hv = linalg.values(h)

    # second pullback covariant derivative (values)
    rough = np.zeros(n)
    for i in range(m):
        for j in range(m):
            w = ginv_v[i, j]
            if w == 0.0:
                continue
            second = np.empty(n)
            for a in range(n):
                d_nabla = nabla_tau[j][a].d(i).value
                corr = float(
                    np.einsum("bc,b,c->", gamma_amb_v[a], Jv[i], nabla_tau_v[j]))
                second[a] = d_nabla + corr
            dom = np.einsum("k,ka->a", gamma_dom_v[:, i, j], nabla_tau_v)
            rough += w * (second - dom)

    # ambient curvature term for a space form:
    # Trace_gbar R(dphi, tau) dphi = c [ h(tau, dphi_j) gbar^{ij} dphi_i
    #                                   - gbar^{ij} h(dphi_i, dphi_j) tau ]
    h_tau = hv @ tau_v
    curv = np.zeros(n)
    trace_h = 0.0
    for i in range(m):
        for j in range(m):
            w = ginv_v[i, j]
            curv += w * float(Jv[j] @ h_tau) * Jv[i]
            trace_h += w * float(Jv[i] @ hv @ Jv[j])
    curv = c * (curv - trace_h * tau_v)
    return rough - curv


def ambient_norm(imm: Immersion, p, vector: np.ndarray) -> float:
    """h-norm of an ambient vector at phi(p)."""
    point = np.asarray(p, dtype=float)
    y0 = np.array([jets.eval_float(comp, point) for comp in imm.components])
    hv = imm.ambient.metric_values(y0)
    return float(np.sqrt(max(vector @ hv @ vector, 0.0)))


def oracle_report(imm: Immersion, p, orientation: int = 1) -> ResidualReport:
    """Wrap the oracle vector as a normal/tangential residual report."""
    fr = ImmersionFrame(imm, p, orientation=orientation)
    tau2 = bitension_oracle(imm, p)
    hv = fr.h_values
    xi = fr.normal_values
    normal = float(tau2 @ hv @ xi)
    m = fr.m
    Jv = np.array([[fr.jacobian[i][a].value for a in range(m + 1)]
                   for i in range(m)])
    tangent_ambient = tau2 - normal * xi
    rhs = np.array([tangent_ambient @ hv @ Jv[i] for i in range(m)])
    tangential = np.linalg.solve(fr.metric.g_values, rhs)
    return _report("oracle", fr, normal, tangential,
                   oracle_norm=ambient_norm(imm, p, tau2))


RESIDUAL_FUNCTIONS = {
    "general": residual_general,
    "surface": residual_surface,
    "minimal": residual_minimal,
    "totally_geodesic": residual_totally_geodesic,
    "totally_umbilical": residual_umbilic,
    "oracle": oracle_report,
}
