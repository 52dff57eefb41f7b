"""Residual systems: solutions vanish, non-solutions do not, reductions
agree with the general system under their exact conversion factors, and
the independent bitension oracle confirms every zero set."""

import dataclasses

import numpy as np
import pytest

from biconf import catalog, jets, residuals
from biconf.errors import PreconditionError
from biconf.hypersurface import ImmersionFrame
from biconf.residuals import (
    bitension_oracle,
    ambient_norm,
    oracle_report,
    residual_general,
    residual_minimal,
    residual_surface,
    residual_totally_geodesic,
    residual_umbilic,
    trace_shape_against_hessian,
)
from conftest import nonsolution_members, solution_members

SQRT3 = float(np.sqrt(3))


def sphere_slice(m, a, b, lam=None):
    member = catalog.build_example("sphere_umbilic", m=m, a_radius=a,
                                   b_height=b)
    if lam is not None:
        member = catalog.with_conformal_factor(member, lam)
    return member


# ----------------------------------------------------------------------
# the general system on the example families
# ----------------------------------------------------------------------
def test_euclidean_graph_solution_m4(rng):
    member = catalog.build_example("euclidean_graph", m=4, t=0.5)
    for p in member.sample(20, rng):
        assert residual_general(member.immersion, p).max_norm < 1e-8


def test_euclidean_graph_nonsolution(rng):
    # m=5, t=1: condition polynomial = 2 - (-3) - 2 = 3 != 0
    assert catalog.condition_polynomial("euclidean_graph", 5, 1.0) == 3.0
    member = catalog.build_example("euclidean_graph", m=5, t=1.0)
    for p in member.sample(5, rng, generic=True):
        assert residual_general(member.immersion, p).max_norm > 1e-3


@pytest.mark.parametrize("m,t", [(3, SQRT3 - 1), (3, -SQRT3 - 1), (4, 1.0),
                                 (5, 2.0)])
def test_hyperbolic_solutions(m, t, rng):
    member = catalog.build_example("hyperbolic_slice", m=m, t=t)
    for p in member.sample(10, rng):
        assert residual_general(member.immersion, p).max_norm < 1e-8


def test_sphere_solutions(rng):
    for b in (0.5, -0.5):
        member = sphere_slice(4, SQRT3 / 2, b)
        for p in member.sample(10, rng):
            assert residual_general(member.immersion, p).max_norm < 1e-8
    member = catalog.build_example("sphere_equator", m=4)
    for p in member.sample(10, rng):
        assert residual_general(member.immersion, p).max_norm < 1e-8


def test_isometric_reduction_matches_classical_spheres(rng):
    # lambda = 1: biharmonic exactly when the slice radius is 1/sqrt(2)
    one = jets.const(1.0)
    for m in (2, 3, 4):
        member = sphere_slice(m, 1 / np.sqrt(2), 1 / np.sqrt(2), one)
        p = member.sample(1, rng)[0]
        assert residual_general(member.immersion, p).max_norm < 1e-12
    member = sphere_slice(3, 0.8, 0.6, one)
    p = member.sample(1, rng)[0]
    report = residual_general(member.immersion, p)
    fr = ImmersionFrame(member.immersion, p)
    H = fr.mean_curvature.value
    # normal part reduces to m^2 H (c - H^2); tangential part vanishes
    assert report.normal == pytest.approx(9.0 * H * (1.0 - H * H), rel=1e-10)
    assert report.norm_tangential < 1e-12


# ----------------------------------------------------------------------
# the m = 2 surface system
# ----------------------------------------------------------------------
def test_surface_minimal_is_trivial(rng):
    member = catalog.build_example("euclidean_graph", m=2, a_vec=(1.0, 0.5),
                                   b_scalar=1.0, t=0.7)
    for p in member.sample(5, rng):
        rep = residual_surface(member.immersion, p)
        assert rep.max_norm < 1e-13


def test_surface_umbilic_sphere_classification(rng):
    # with a constant factor, the residual vanishes exactly when H^2 = c
    one = jets.const(1.0)
    member = sphere_slice(2, 1 / np.sqrt(2), 1 / np.sqrt(2), one)
    p = member.sample(1, rng)[0]
    assert residual_surface(member.immersion, p).max_norm < 1e-12
    member_bad = sphere_slice(2, 0.8, 0.6, one)
    p = member_bad.sample(1, rng)[0]
    rep = residual_surface(member_bad.immersion, p)
    fr = ImmersionFrame(member_bad.immersion, p)
    H2 = fr.mean_curvature.value ** 2
    lam2 = fr.lam.value ** 2
    # gradient-free factor: residual normal = lam^2 H Delta... reduces to
    # lam^2 H [Ric - |A|^2] = lam^2 H [2(1 - H^2)]
    want = lam2 * fr.mean_curvature.value * 2.0 * (1.0 - H2)
    assert rep.normal == pytest.approx(want, rel=1e-10)


def test_surface_requires_m2(rng):
    member = catalog.build_example("hyperbolic_slice", m=3, t=1.0)
    p = member.sample(1, rng)[0]
    with pytest.raises(PreconditionError):
        residual_surface(member.immersion, p)


def test_surface_reduction_factors(rng):
    # against the general system: normal x lam^2/2, tangential x (-lam^2/4)
    member = sphere_slice(2, 0.8, 0.6)
    for p in member.sample(50, rng):
        gen = residual_general(member.immersion, p)
        surf = residual_surface(member.immersion, p)
        lam2 = gen.metadata["lambda"] ** 2
        scale = max(abs(surf.normal), 1.0)
        assert abs(surf.normal - lam2 / 2 * gen.normal) / scale < 1e-9
        tan_scale = max(np.abs(surf.tangential).max(), 1.0)
        assert np.abs(surf.tangential + lam2 / 4 * gen.tangential).max() \
            / tan_scale < 1e-9


# ----------------------------------------------------------------------
# minimal / totally geodesic reductions
# ----------------------------------------------------------------------
def test_minimal_normal_part_vanishes_for_geodesic(rng):
    member = catalog.build_example("hyperbolic_slice", m=5, t=0.7)
    for p in member.sample(5, rng):
        rep = residual_minimal(member.immersion, p)
        assert rep.norm_normal < 1e-13  # A = 0 kills both normal terms


@pytest.mark.parametrize("m,t", [(5, 2.0), (4, 1.0)])
def test_minimal_solutions(m, t, rng):
    member = catalog.build_example("hyperbolic_slice", m=m, t=t)
    for p in member.sample(10, rng):
        assert residual_minimal(member.immersion, p).max_norm < 1e-8


def test_minimal_rejects_nonminimal(rng):
    member = sphere_slice(4, SQRT3 / 2, 0.5)
    p = member.sample(1, rng)[0]
    with pytest.raises(PreconditionError):
        residual_minimal(member.immersion, p)


@pytest.mark.parametrize("name,params", [
    ("hyperbolic_slice", dict(m=5, t=0.7)),
    ("hyperbolic_slice", dict(m=3, t=-1.2)),
    ("euclidean_graph", dict(m=4, t=0.3)),
    ("sphere_equator", dict(m=4)),
])
def test_minimal_and_geodesic_reduction_factors(name, params, rng):
    # tangential parts equal -(lam^2/(m-2)) x the general tangential part
    member = catalog.build_example(name, **params)
    m = member.m
    for p in member.sample(50, rng):
        gen = residual_general(member.immersion, p)
        mini = residual_minimal(member.immersion, p)
        geo = residual_totally_geodesic(member.immersion, p)
        lam2 = gen.metadata["lambda"] ** 2
        pred = -(lam2 / (m - 2)) * gen.tangential
        scale = max(np.abs(pred).max(), 1.0)
        assert np.abs(mini.tangential - pred).max() / scale < 1e-9
        assert np.abs(geo.tangential - pred).max() / scale < 1e-9
        assert geo.normal == 0.0


@pytest.mark.parametrize("m,t", [(3, SQRT3 - 1), (4, 1.0)])
def test_geodesic_solutions(m, t, rng):
    member = catalog.build_example("hyperbolic_slice", m=m, t=t)
    for p in member.sample(10, rng):
        assert residual_totally_geodesic(member.immersion, p).max_norm < 1e-8


def test_geodesic_equator_solution(rng):
    member = catalog.build_example("sphere_equator", m=4)
    for p in member.sample(20, rng):
        assert residual_totally_geodesic(member.immersion, p).max_norm < 1e-8


def test_geodesic_constant_factor_is_trivial(rng):
    member = catalog.with_conformal_factor(
        catalog.build_example("hyperbolic_slice", m=4, t=1.0),
        jets.const(2.0))
    for p in member.sample(3, rng):
        assert residual_totally_geodesic(member.immersion, p).max_norm == 0.0


def test_geodesic_rejects_curved_input(rng):
    member = sphere_slice(4, SQRT3 / 2, 0.5)
    p = member.sample(1, rng)[0]
    with pytest.raises(PreconditionError):
        residual_totally_geodesic(member.immersion, p)


# ----------------------------------------------------------------------
# umbilic reduction
# ----------------------------------------------------------------------
def test_umbilic_solutions(rng):
    for b in (0.5, -0.5):
        member = sphere_slice(4, SQRT3 / 2, b)
        for p in member.sample(10, rng):
            assert residual_umbilic(member.immersion, p).max_norm < 1e-8


def test_umbilic_m2_constant_factor_algebra(rng):
    # with grad lambda = 0 the normal part is 4 (c - H^2) lambda^2
    one = jets.const(1.0)
    member = sphere_slice(2, 0.8, 0.6, one)
    p = member.sample(1, rng)[0]
    rep = residual_umbilic(member.immersion, p)
    fr = ImmersionFrame(member.immersion, p)
    H2 = fr.mean_curvature.value ** 2
    assert rep.normal == pytest.approx(4.0 * (1.0 - H2), rel=1e-12)
    assert rep.norm_tangential < 1e-14
    member_sol = sphere_slice(2, 1 / np.sqrt(2), 1 / np.sqrt(2), one)
    p = member_sol.sample(1, rng)[0]
    assert residual_umbilic(member_sol.immersion, p).max_norm < 1e-12


def test_umbilic_reduction_factors(rng):
    # normal x lam^2/H, tangential x lam^2 against the general system
    member = sphere_slice(4, 0.8, 0.6)
    for p in member.sample(50, rng):
        gen = residual_general(member.immersion, p)
        umb = residual_umbilic(member.immersion, p)
        lam2 = gen.metadata["lambda"] ** 2
        H = gen.metadata["H"]
        scale = max(abs(umb.normal), 1.0)
        assert abs(umb.normal - lam2 / H * gen.normal) / scale < 1e-9
        tan_scale = max(np.abs(umb.tangential).max(), 1.0)
        assert np.abs(umb.tangential - lam2 * gen.tangential).max() \
            / tan_scale < 1e-9


def test_umbilic_rejects_minimal_input(rng):
    member = catalog.build_example("sphere_equator", m=4)
    p = member.sample(1, rng)[0]
    with pytest.raises(PreconditionError):
        residual_umbilic(member.immersion, p)


# ----------------------------------------------------------------------
# the oracle
# ----------------------------------------------------------------------
def test_oracle_harmonic_surface(rng):
    # minimal surface with constant factor: tau = 0 hence tau_2 = 0
    member = catalog.with_conformal_factor(
        catalog.build_example("euclidean_graph", m=2, a_vec=(1.0, 0.0),
                              b_scalar=1.0, t=0.5),
        jets.const(1.0))
    p = member.sample(1, rng)[0]
    tau2 = bitension_oracle(member.immersion, p)
    assert ambient_norm(member.immersion, p, tau2) < 1e-14


def test_oracle_euclidean_solution_and_nonsolution(rng):
    member = catalog.build_example("euclidean_graph", m=4, t=0.5)
    for p in member.sample(20, rng):
        tau2 = bitension_oracle(member.immersion, p)
        assert ambient_norm(member.immersion, p, tau2) < 1e-6
    member = catalog.build_example("euclidean_graph", m=4, t=2.0)
    for p in member.sample(5, rng, generic=True):
        tau2 = bitension_oracle(member.immersion, p)
        assert ambient_norm(member.immersion, p, tau2) > 1e-3


def test_oracle_vector_matches_isometric_residual(rng):
    # with lambda = 1 the general residual recombined in the ambient frame
    # must equal tau_2 exactly (same object, independent computations)
    one = jets.const(1.0)
    for a, b in ((0.8, 0.6), (1 / np.sqrt(2), 1 / np.sqrt(2))):
        member = sphere_slice(3, a, b, one)
        for p in member.sample(5, rng):
            rep = residual_general(member.immersion, p)
            fr = ImmersionFrame(member.immersion, p)
            Jv = np.array([[fr.jacobian[i][al].value for al in range(4)]
                           for i in range(3)])
            vec = rep.normal * fr.normal_values + Jv.T @ rep.tangential
            tau2 = bitension_oracle(member.immersion, p)
            assert np.abs(vec - tau2).max() < 1e-10 * (1 + np.abs(tau2).max())


def test_oracle_report_decomposition(rng):
    member = sphere_slice(4, 0.8, 0.6)
    p = member.sample(1, rng)[0]
    rep = oracle_report(member.immersion, p)
    tau2 = bitension_oracle(member.immersion, p)
    total = ambient_norm(member.immersion, p, tau2)
    assert rep.system == "oracle"
    assert np.hypot(rep.norm_normal, rep.norm_tangential) == pytest.approx(
        total, rel=1e-10)


@pytest.mark.parametrize("member", solution_members(),
                         ids=lambda m: f"{m.name}-{m.spec}")
def test_zero_set_equivalence_solutions(member, rng):
    for p in member.sample(8, rng):
        assert residual_general(member.immersion, p).max_norm < 1e-7
        tau2 = bitension_oracle(member.immersion, p)
        assert ambient_norm(member.immersion, p, tau2) < 1e-5


@pytest.mark.parametrize("member", nonsolution_members(),
                         ids=lambda m: f"{m.name}-{m.spec}")
def test_zero_set_equivalence_nonsolutions(member, rng):
    for p in member.sample(5, rng, generic=True):
        assert residual_general(member.immersion, p).max_norm > 1e-3
        tau2 = bitension_oracle(member.immersion, p)
        assert ambient_norm(member.immersion, p, tau2) > 1e-3


# ----------------------------------------------------------------------
# structural invariants
# ----------------------------------------------------------------------
def test_orientation_invariance_of_reports(rng):
    member = sphere_slice(4, 0.8, 0.6)
    p = member.sample(1, rng)[0]
    plus = residual_general(member.immersion, p, orientation=+1)
    minus = residual_general(member.immersion, p, orientation=-1)
    assert minus.normal == pytest.approx(-plus.normal, rel=1e-11)
    np.testing.assert_allclose(minus.tangential, plus.tangential, rtol=1e-9,
                               atol=1e-12)
    assert minus.norm_normal == pytest.approx(plus.norm_normal, rel=1e-11)


def test_homothety_invariance_of_zero_sets(rng):
    for name, params in (("hyperbolic_slice", dict(m=5, t=2.0)),
                         ("sphere_umbilic", dict(m=4, a_radius=SQRT3 / 2,
                                                 b_height=0.5))):
        member = catalog.build_example(name, **params)
        scaled = catalog.with_conformal_factor(
            member, jets.const(3.0) * member.conformal_factor)
        for p in scaled.sample(5, rng):
            assert residual_general(scaled.immersion, p).max_norm < 1e-7


def test_report_norms_and_metadata(rng):
    member = catalog.build_example("hyperbolic_slice", m=4, t=0.3)
    p = member.sample(1, rng, generic=True)[0]
    rep = residual_general(member.immersion, p)
    assert rep.norm_normal >= 0 and rep.norm_tangential >= 0
    assert rep.metadata["m"] == 4
    assert rep.metadata["c"] == -1.0
    assert rep.metadata["lambda"] > 0
    d = rep.to_dict()
    assert set(d) == {"system", "point", "normal", "tangential",
                      "norm_normal", "norm_tangential", "metadata"}
    # tangential norm is the g-norm
    fr = ImmersionFrame(member.immersion, p)
    want = float(np.sqrt(rep.tangential @ fr.metric.g_values
                         @ rep.tangential))
    assert rep.norm_tangential == pytest.approx(want, rel=1e-12)


def test_trace_term_frame_independence(rng):
    member = sphere_slice(4, 0.8, 0.6)
    p = member.sample(1, rng)[0]
    fr = ImmersionFrame(member.immersion, p)
    base = trace_shape_against_hessian(fr, fr.log_lam)
    permuted = trace_shape_against_hessian(fr, fr.log_lam,
                                           frame_order=(2, 0, 3, 1))
    assert permuted == pytest.approx(base, rel=1e-10)
    # coordinate-contraction route: trace(A g^{-1} Hess)
    M = fr.metric
    hess = M.hess(fr.log_lam)
    hv = np.array([[hess[i][j].value for j in range(4)] for i in range(4)])
    contraction = float(np.trace(fr.shape_values @ M.g_inv_values @ hv))
    assert contraction == pytest.approx(base, rel=1e-10)


def test_lambda_positivity_enforced(rng):
    member = catalog.build_example("hyperbolic_slice", m=3, t=1.0)
    bad = dataclasses.replace(member.immersion,
                              conformal_factor=jets.affine([0, 0, 1.0], -5.0))
    from biconf.errors import DomainError
    with pytest.raises(DomainError):
        residual_general(bad, (0.1, 0.1, 1.0))
