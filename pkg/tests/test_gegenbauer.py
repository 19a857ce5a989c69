import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special

from rectconv import gegenbauer as geg
from rectconv.errors import DomainError, InvalidArgumentError
from rectconv.poly import ExactPolynomial, cauchy_transform, max_real_root


def test_params_types():
    assert geg.GegenbauerParams.coupled(4, F(1, 2)).alpha == 3
    with pytest.raises(InvalidArgumentError):
        geg.GegenbauerParams(2, 0)
    r = geg.ThetaRatio.of(1)
    assert r.gamma == pytest.approx(math.sqrt(3) / 2)


def test_low_degree_coefficients():
    assert geg.geg_coeffs(0, F(3, 2)) == ExactPolynomial((1,))
    assert geg.geg_coeffs(1, F(3, 2)) == ExactPolynomial((0, 3))
    # alpha = 1 gives Chebyshev polynomials of the second kind
    assert geg.geg_coeffs(3, 1) == ExactPolynomial((0, -4, 0, 8))
    assert geg.geg_coeffs(4, 1) == ExactPolynomial((1, 0, -12, 0, 16))


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 5.0, 7.25])
def test_values_match_scipy(alpha):
    for d in range(0, 16):
        for x in (-0.9, -0.3, 0.2, 0.77, 1.0, 1.4):
            ref = special.eval_gegenbauer(d, alpha, x)
            exact = float(geg.geg_coeffs(d, alpha).exact_value(F(x)))
            assert exact == pytest.approx(ref, rel=1e-10, abs=1e-10)
            assert geg.geg_eval(d, alpha, x) == pytest.approx(ref, rel=1e-10, abs=1e-10)


@pytest.mark.parametrize("alpha", ["1/2", "1", "3/2", "5"])
def test_exact_identities(alpha):
    a = F(alpha)
    for d in range(1, 31):
        assert geg.recurrence_residual(d, a).is_zero
        assert geg.diff_identity_polynomial(d, a).is_zero
        c = geg.geg_coeffs(d, a)
        assert c.exact_value(1) == geg.geg_value_at_one(d, a)
        assert cauchy_transform(c, F(1)) == geg.geg_cauchy_at_one(d, a) == (d + 2 * a) / (2 * a + 1)
    assert geg.diff_identity_residual(7, a, F(1, 3)) == 0
    assert geg.diff_identity_residual(7, a, 0.3) == 0


def test_cauchy_at_one_needs_degree():
    with pytest.raises(InvalidArgumentError):
        geg.geg_cauchy_at_one(0, 1)


def test_maxroot_matches_scipy_roots():
    for alpha in (0.5, 1.0, 2.5, 9.0):
        for d in (1, 2, 3, 7, 15, 30):
            ref = max(special.roots_gegenbauer(d, alpha)[0]) if d > 1 else 0.0
            assert geg.geg_maxroot(d, alpha) == pytest.approx(ref, rel=1e-10, abs=1e-12)
            assert geg.geg_maxroot(d, alpha) == pytest.approx(max_real_root(geg.geg_coeffs(d, alpha)),
                                                              rel=1e-11, abs=1e-12)


def test_gamma_theta():
    assert geg.gamma_theta(0) == 1.0
    assert geg.gamma_theta(1) == pytest.approx(math.sqrt(3) / 2)
    assert geg.gamma_nd(3, 4) == pytest.approx(geg.gamma_theta(0.75))
    with pytest.raises(InvalidArgumentError):
        geg.gamma_theta(-0.1)


@pytest.mark.parametrize("theta", ["1/4", "1", "3"])
def test_coupled_maxroot_increases_below_gamma(theta):
    t = F(theta)
    roots = [geg.coupled_maxroot(d, t) for d in range(1, 41)]
    assert all(u < v for u, v in zip(roots, roots[1:]))
    assert roots[-1] <= geg.gamma_theta(t) + 1e-12
    two = geg.two_step_maxroot(5, t)
    assert two.value == max(two.maxroot_d, two.maxroot_next) == roots[5]


def test_density_normalised_and_support():
    for theta in (0.25, 1.0, 3.0):
        g = geg.gamma_theta(theta)
        mass, _ = integrate.quad(lambda y: geg.asymptotic_density(theta, y), -g, g, limit=200)
        assert mass == pytest.approx(1.0, abs=1e-8)
        assert geg.asymptotic_density(theta, g + 1e-3) == 0.0
    with pytest.raises(InvalidArgumentError):
        geg.asymptotic_density(0, 0.1)


def test_asymptotic_cauchy_forms_agree():
    for theta in (0.0, 0.5, 2.0):
        g = geg.gamma_theta(theta)
        for x in (g + 0.01, 0.999, 1.001, 1.7, 4.0):
            if x <= g:
                continue
            assert geg.asymptotic_cauchy(theta, x) == pytest.approx(geg.asymptotic_cauchy_direct(theta, x),
                                                                    rel=1e-9)
    # regular at x = 1; theta = 0 is the arcsine law 1/sqrt(x**2 - 1)
    assert math.isfinite(geg.asymptotic_cauchy(0.5, 1.0))
    assert geg.asymptotic_cauchy(0.0, 2.0) == pytest.approx(1 / math.sqrt(3))
    with pytest.raises(DomainError):
        geg.asymptotic_cauchy(1.0, 0.5)


def test_quadrature_matches_closed_form_and_plain_quad():
    for theta in (0.25, 1.0, 3.0):
        g = geg.gamma_theta(theta)
        for x in (g + 0.05, 1.0, 2.5):
            closed = geg.asymptotic_cauchy(theta, x)
            assert geg.quadrature_cauchy(theta, x) == pytest.approx(closed, abs=1e-9)
            plain, _ = integrate.quad(lambda y: geg.asymptotic_density(theta, y) / (x - y), -g, g, limit=400)
            assert plain == pytest.approx(closed, abs=1e-6)
    with pytest.raises(InvalidArgumentError):
        geg.quadrature_cauchy(0, 2.0)


def test_cauchy_bound_forms():
    for n, d in ((0, 1), (3, 4), (20, 7)):
        g = geg.gamma_nd(n, d)
        for x in (g + 1e-3, 0.99, 1.2, 3.0):
            if x <= g:
                continue
            b = geg.cauchy_upper_bound(n, d, x)
            assert b == pytest.approx(geg.cauchy_upper_bound_direct(n, d, x), rel=1e-9)
            assert b == pytest.approx(geg.asymptotic_cauchy(n / d, x), rel=1e-12)
            assert geg.ans_f(x, b, n, d) == pytest.approx(0, abs=1e-9)
    with pytest.raises(DomainError):
        geg.cauchy_upper_bound(3, 4, 0.1)


def test_cauchy_transform_below_bound():
    for d in (1, 5, 12, 40):
        for n in (0, 3, 20):
            g = geg.gamma_nd(n, d)
            c = geg.geg_coeffs(d, n + 1)
            for x in np.linspace(g + 1e-3, 3.0, 9):
                assert cauchy_transform(c, float(x)) <= geg.cauchy_upper_bound(n, d, float(x))


def test_cauchy_routes_agree_at_large_degree():
    c = geg.geg_coeffs(200, 101)
    roots = special.roots_gegenbauer(200, 101.0)[0]
    for x in (1.0, 1.2, 2.0):
        oracle = float(np.mean(1.0 / (x - roots)))
        assert cauchy_transform(c, x) == pytest.approx(oracle, rel=1e-9)
        assert geg.geg_cauchy(200, 101, x) == pytest.approx(oracle, rel=1e-9)


def test_ans_check():
    assert geg.ans_check(1.5, 10.0, 2, 3)
    assert geg.ans_check(1.5, 1e-3, 2, 3)  # premise fails, implication holds vacuously
    with pytest.raises(DomainError):
        geg.ans_check(0.1, 1.0, 2, 3)


def test_lambda_values():
    assert geg.lambda_jk(1, 1, 0) == F(3, 4)
    for j in range(1, 6):
        for k in range(1, 6):
            for th in (F(1, 3), F(2)):
                lam = geg.lambda_jk(j, k, th)
                assert 0 <= lam <= 1
                assert lam - geg.lambda_jk(j - 1, k - 1, th) == geg.lambda_diff_closed_form(j, k, th)


def test_normalized_geg_is_one_at_one():
    for j in range(0, 8):
        assert geg.normalized_geg(j, 3, F(1, 2), F(1)) == 1


def test_delta_one():
    for th in (F(1, 4), F(1), F(3)):
        for d in range(1, 12):
            assert geg.delta_poly(1, d, th) == ExactPolynomial((-1, 0, 1)) / (3 + 2 * (d + 1) * th)
    with pytest.raises(InvalidArgumentError):
        geg.delta_poly(0, 3, 1)


def test_fitness_check_simple_and_negative():
    # x**2 - 1 is negative on (0, 1) and positive beyond
    p = ExactPolynomial((-1, 0, 1))
    assert geg.fitness_check(p, 0.0)
    # a root inside (beta, 1) breaks the pattern
    bad = p * ExactPolynomial((F(-1, 2), 1))
    ev = geg.fitness_evidence(bad, 0.0)
    assert not ev.ok and not ev.sturm_ok
    with pytest.raises(InvalidArgumentError):
        geg.fitness_check(p, 1.5)


def test_delta_fitness_small_degrees():
    for th in (F(1, 4), F(1)):
        for d in range(1, 8):
            beta = geg.two_step_maxroot(d, th).value
            ev = geg.fitness_evidence(geg.delta_poly(d, d, th), beta, grid=256)
            assert ev.ok and ev.label == "sturm-certified"


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 25), st.fractions(min_value=F(1, 4), max_value=8, max_denominator=4))
def test_maxroot_inside_unit_interval(d, alpha):
    r = geg.geg_maxroot(d, alpha)
    assert 0 <= r < 1
    assert geg.geg_coeffs(d, alpha).exact_value(F(1)) > 0
