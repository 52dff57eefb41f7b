"""Jet arithmetic: hand-derived values, finite-difference oracle,
algebraic identities and the expression parser."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from biconf import jets
from biconf.errors import DomainError
from biconf.jets import ParseError
from conftest import central_difference, rel_err


def unit(m, k):
    return tuple(1 if i == k else 0 for i in range(m))


# ----------------------------------------------------------------------
# coordinate jets
# ----------------------------------------------------------------------
def test_jet_variable_basic():
    j = jets.jet_variable((2.0, 3.0), 1, 2)
    assert j.value == 2.0
    assert j.deriv((1, 0)) == 1.0
    assert j.deriv((0, 1)) == 0.0
    assert j.deriv((2, 0)) == 0.0
    assert j.deriv((1, 1)) == 0.0


def test_jet_variable_at_origin_order4():
    m = 5
    for k in range(1, m + 1):
        j = jets.jet_variable((0.0,) * m, k, 4)
        assert j.value == 0.0
        assert j.deriv(unit(m, k - 1)) == 1.0
        others = [s for s in j.space.indices if sum(s) >= 1
                  and s != unit(m, k - 1)]
        assert all(j.deriv(s) == 0.0 for s in others[:20])


def test_jet_variable_validation():
    with pytest.raises(ValueError):
        jets.jet_variable((1.0, 2.0), 0, 2)
    with pytest.raises(ValueError):
        jets.jet_variable((1.0, 2.0), 3, 2)
    with pytest.raises(ValueError):
        jets.jet_variable((1.0, 2.0), 1, 5)
    with pytest.raises(ValueError):
        jets.jet_variable((1.0, 2.0), 1, -1)


def test_variable_composition_into_expression():
    # d1 d2 of x1^2 x2 = 2 x1 = 4 at (2, 3)
    e = jets.x(1) * jets.x(1) * jets.x(2)
    assert jets.partial(e, (2.0, 3.0), (1, 1)) == pytest.approx(4.0, abs=1e-14)


# ----------------------------------------------------------------------
# jet_eval against hand expansions
# ----------------------------------------------------------------------
def test_inverse_one_plus_norm_sq_at_origin():
    # (1 + |x|^2)^{-1} = 1 - |x|^2 + O(|x|^4): value 1, grad 0, hess -2I
    m = 4
    e = jets.Pow(1 + jets.sq_norm(m), -1.0)
    j = jets.jet_eval(e, (0.0,) * m, 2)
    assert j.value == 1.0
    for k in range(m):
        assert j.deriv(unit(m, k)) == 0.0
    for i in range(m):
        for k in range(m):
            alpha = tuple((1 if a == i else 0) + (1 if a == k else 0)
                          for a in range(m))
            expected = -2.0 if i == k else 0.0
            assert j.deriv(alpha) == pytest.approx(expected, abs=1e-14)


def test_negative_integer_power_derivatives():
    # x^{-2} at 1: 1, -2, 6, -24, 120
    e = jets.Pow(jets.x(1), -2.0)
    j = jets.jet_eval(e, (1.0,), 4)
    assert [j.deriv((k,)) for k in range(5)] == pytest.approx(
        [1.0, -2.0, 6.0, -24.0, 120.0], rel=1e-14)


def test_log_of_constant_factor_is_flat():
    e = jets.Ln(jets.const(3.7))
    j = jets.jet_eval(e, (0.5, 0.5), 4)
    assert j.value == pytest.approx(np.log(3.7), rel=1e-15)
    assert np.abs(j.coeffs[1:]).max() == 0.0


def test_partial_product_rule_example():
    e = jets.x(1) * jets.x(2)
    assert jets.partial(e, (7.0, -3.0), (1, 1)) == pytest.approx(1.0)


def test_partial_fourth_derivative_sqrt():
    # d^4 x^{1/2} at 1 = (1/2)(-1/2)(-3/2)(-5/2) = -15/16
    e = jets.Pow(jets.x(1), 0.5)
    assert jets.partial(e, (1.0,), (4,)) == pytest.approx(-15.0 / 16.0,
                                                          rel=1e-13)


def test_partial_affine_power():
    # d1^2 (x1 + 1)^{1/2} at 0 = -1/4
    m = 3
    e = jets.Pow(jets.affine([1.0, 0.0, 0.0], 1.0), 0.5)
    assert jets.partial(e, (0.0,) * m, (2, 0, 0)) == pytest.approx(-0.25,
                                                                   rel=1e-13)


def test_partial_rejects_deep_orders():
    e = jets.x(1)
    with pytest.raises(ValueError):
        jets.partial(e, (1.0,), (5,))


# ----------------------------------------------------------------------
# finite-difference oracle over the corpus
# ----------------------------------------------------------------------
CORPUS = [
    ("inv_one_plus_sq", 3, (0.3, -0.4, 0.5),
     jets.Pow(1 + jets.sq_norm(3), -1.0)),
    ("exp_product", 2, (0.4, -0.2),
     jets.Exp(jets.x(1) * jets.x(2))),
    ("log_mix", 2, (0.5, 0.7),
     jets.Ln(1 + jets.x(1) * jets.x(1) + jets.x(2))),
    ("sqrt_affine_times_x", 2, (0.3, 1.2),
     jets.Pow(jets.x(1) + 2, 0.5) * jets.x(2)),
    ("neg_real_power", 2, (0.4, 1.5),
     jets.Pow(jets.x(2), -1.5)),
    ("hyperbolic_factor", 3, (0.2, -0.1, 1.3),
     jets.Pow(jets.x(3), -2.0)),
    ("graph_factor", 2, (0.6, 0.2),
     jets.Pow(jets.affine([1.0, 0.5], 1.0), 0.5)),
    ("rational", 2, (0.5, -0.3),
     jets.Div(jets.x(1) - 3, 2 + jets.sq_norm(2))),
]


@pytest.mark.parametrize("name,m,point,expr",
                         CORPUS, ids=[c[0] for c in CORPUS])
def test_jet_matches_central_differences(name, m, point, expr):
    j = jets.jet_eval(expr, point, 4)

    def fn(q):
        return jets.eval_float(expr, q)

    for alpha in j.space.indices:
        got = j.deriv(alpha)
        want = central_difference(fn, point, alpha)
        # 1e-5 relative with an absolute floor absorbing the stencil's own
        # truncation noise on (near-)zero derivatives
        assert abs(got - want) <= 1e-5 * max(1.0, abs(want)), \
            (name, alpha, got, want)


# ----------------------------------------------------------------------
# algebraic identities
# ----------------------------------------------------------------------
SAFE_EXPRS = [
    2 + jets.sq_norm(2),
    jets.Exp(jets.x(1) * jets.const(0.5)),
    jets.Pow(1 + jets.sq_norm(2), -1.0),
    jets.affine([0.5, -0.25], 2.0),
    jets.Pow(jets.x(2) + 3, 0.5),
]


@pytest.mark.parametrize("i", range(len(SAFE_EXPRS)))
@pytest.mark.parametrize("j", range(len(SAFE_EXPRS)))
def test_product_rule_leibniz_convolution(i, j):
    # jets of f*g equal the convolution product of the jets of f and g
    f, g = SAFE_EXPRS[i], SAFE_EXPRS[j]
    point = (0.4, 0.7)
    jf = jets.jet_eval(f, point, 4)
    jg = jets.jet_eval(g, point, 4)
    jprod = jets.jet_eval(jets.Mul((f, g)), point, 4)
    scale = np.abs(jprod.coeffs).max() + 1e-30
    assert np.abs((jf * jg).coeffs - jprod.coeffs).max() / scale < 1e-12


@pytest.mark.parametrize("i", range(len(SAFE_EXPRS)))
def test_chain_rule_log_exp_round_trip(i):
    f = SAFE_EXPRS[i]
    point = (0.4, 0.7)
    jf = jets.jet_eval(f, point, 4)
    back = jf.log().exp()
    scale = np.abs(jf.coeffs).max()
    assert np.abs(back.coeffs - jf.coeffs).max() / scale < 1e-12


def test_log_turns_products_into_sums():
    f = 2 + jets.sq_norm(2)
    g = jets.Pow(jets.x(2) + 3, 0.5)
    point = (0.3, 0.9)
    lhs = jets.jet_eval(jets.Ln(jets.Mul((f, g))), point, 4)
    rhs = (jets.jet_eval(jets.Ln(f), point, 4)
           + jets.jet_eval(jets.Ln(g), point, 4))
    assert np.abs(lhs.coeffs - rhs.coeffs).max() < 1e-12


@settings(derandomize=True, max_examples=60, deadline=None)
@given(
    coeffs=st.lists(st.floats(min_value=-2, max_value=2), min_size=3,
                    max_size=3),
    exponent=st.sampled_from([2, 3, -1, -2, 0.5, 1.5]),
    point=st.tuples(st.floats(min_value=-0.8, max_value=0.8),
                    st.floats(min_value=-0.8, max_value=0.8)),
)
def test_power_jets_match_finite_differences(coeffs, exponent, point):
    # (c0 + c1 x1 + c2 x2 + 4)^e stays positive on the sampled box
    base = jets.affine(coeffs[1:], coeffs[0] + 4.0)
    expr = jets.Pow(base, exponent)
    j = jets.jet_eval(expr, point, 3)

    def fn(q):
        return jets.eval_float(expr, q)

    for alpha in [(1, 0), (0, 1), (2, 0), (1, 1), (3, 0)]:
        got = j.deriv(alpha)
        want = central_difference(fn, point, alpha)
        assert abs(got - want) <= 1e-5 * max(1.0, abs(want))


def test_truncation_is_prefix_consistent():
    e = jets.Exp(jets.x(1) * jets.x(2))
    full = jets.jet_eval(e, (0.3, 0.4), 4)
    for r in range(5):
        part = jets.jet_eval(e, (0.3, 0.4), r)
        assert np.allclose(full.truncate(r).coeffs, part.coeffs, rtol=1e-15)


def test_multivariate_compose_matches_direct_evaluation():
    # pulling an expression back through component jets two ways
    point = (0.5, -0.3)
    comps = [jets.jet_eval(jets.x(1) * jets.x(2) + 1, point, 4),
             jets.jet_eval(jets.Exp(jets.x(1)), point, 4),
             jets.jet_eval(jets.sq_norm(2), point, 4)]
    target = jets.Pow(1 + jets.sq_norm(3), -1.0)
    direct = jets.eval_jets(target, comps)
    y0 = tuple(c.value for c in comps)
    composed = jets.compose(jets.jet_eval(target, y0, 4), comps)
    assert np.abs(direct.coeffs - composed.coeffs).max() < 1e-12


# ----------------------------------------------------------------------
# domain errors
# ----------------------------------------------------------------------
def test_log_domain_error_carries_subexpression():
    e = jets.Ln(jets.x(1))
    with pytest.raises(DomainError) as err:
        jets.jet_eval(e, (-1.0,), 2)
    assert err.value.subexpr is not None


def test_division_by_zero_is_domain_error():
    e = jets.Div(jets.const(1.0), jets.x(1))
    with pytest.raises(DomainError):
        jets.jet_eval(e, (0.0,), 2)


def test_real_power_of_negative_is_domain_error():
    e = jets.Pow(jets.x(1), 0.5)
    with pytest.raises(DomainError):
        jets.jet_eval(e, (-2.0,), 2)
    # integer powers of negative values are fine
    e2 = jets.Pow(jets.x(1), 2.0)
    assert jets.jet_eval(e2, (-2.0,), 2).value == 4.0


def test_float_eval_matches_jet_value():
    for _, m, point, expr in CORPUS:
        assert jets.eval_float(expr, point) == pytest.approx(
            jets.jet_eval(expr, point, 0).value, rel=1e-14)


# ----------------------------------------------------------------------
# prefix parser
# ----------------------------------------------------------------------
def test_parse_stereographic_factor():
    e = jets.parse_expr("(pow (+ 1 (dot x x)) -1)", 4)
    p = (0.5, 0.5, 0.5, 0.5)
    assert jets.eval_float(e, p) == pytest.approx(1.0 / 2.0)


def test_parse_variables_and_arithmetic():
    e = jets.parse_expr("(* 2 (pow x3 -2))", 3)
    assert jets.eval_float(e, (9.0, 9.0, 2.0)) == pytest.approx(0.5)
    e2 = jets.parse_expr("(- (exp x1) (ln x2))", 2)
    assert jets.eval_float(e2, (0.0, 1.0)) == pytest.approx(1.0)
    e3 = jets.parse_expr("(/ (+ x1 x2 1) (- x1))", 2)
    assert jets.eval_float(e3, (-2.0, 0.5)) == pytest.approx(-0.25)


@pytest.mark.parametrize("bad", [
    "", "(", ")", "(+)", "(pow x1 x2)", "(dot x1 x)", "(foo 1 2)",
    "(ln x5)", "x9", "(+ 1 2) extra", "(dot x x x)", "(- 1 2 3)",
])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        jets.parse_expr(bad, 3)


def test_parsed_matches_built(rng):
    built = jets.Pow(1 + jets.sq_norm(3), -1.0)
    parsed = jets.parse_expr("(pow (+ 1 (dot x x)) -1)", 3)
    for _ in range(10):
        p = rng.uniform(-1, 1, size=3)
        assert jets.eval_float(parsed, p) == pytest.approx(
            jets.eval_float(built, p), rel=1e-15)
