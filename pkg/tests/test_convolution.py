from fractions import Fraction as F
from math import comb, factorial

import pytest
from hypothesis import given, settings, strategies as st

from rectconv.convolution import (
    ConvolutionParams,
    basic_convolution_gegenbauer,
    convolve_with_xdm1,
    gf_coefficient,
    monomial_convolve,
    rect_convolve,
)
from rectconv.errors import InvalidArgumentError
from rectconv.poly import ExactPolynomial, from_roots, is_nonneg_rooted

X = ExactPolynomial.x()
roots_st = st.lists(st.fractions(min_value=0, max_value=10, max_denominator=8), min_size=0, max_size=6)


def _monomial_oracle(i, j, d, k):
    # coefficient straight from the factorial table
    e = i + j - d
    if e < 0:
        return ExactPolynomial()
    c = F(factorial(k + i) * factorial(k + j) * factorial(j) * factorial(i),
          factorial(d + k) * factorial(d) * factorial(e) * factorial(k + e))
    return ExactPolynomial.monomial(e, c)


def test_params_validation():
    with pytest.raises(InvalidArgumentError):
        ConvolutionParams(0)
    with pytest.raises(InvalidArgumentError):
        ConvolutionParams(2, -1)


def test_monomial_examples():
    for d in range(1, 6):
        for k in range(4):
            assert monomial_convolve(d, d, ConvolutionParams(d, k)) == X ** d
    assert monomial_convolve(1, 1, ConvolutionParams(4, 2)).is_zero
    assert monomial_convolve(1, 0, ConvolutionParams(1, 0)) == ExactPolynomial((1,))
    with pytest.raises(InvalidArgumentError):
        monomial_convolve(5, 0, ConvolutionParams(4))


def test_bilinear_extension_matches_monomial_table():
    for d in range(1, 6):
        for k in range(3):
            params = ConvolutionParams(d, k)
            for i in range(d + 1):
                for j in range(d + 1):
                    got = rect_convolve(X ** i, X ** j, params)
                    assert got == _monomial_oracle(i, j, d, k)


def test_identity_and_d1():
    p = from_roots([1, F(5, 2), 4, 4])
    for k in range(4):
        assert rect_convolve(p, X ** 4, ConvolutionParams(4, k)) == p
    a, b = F(3, 7), F(11, 5)
    for k in range(5):
        assert rect_convolve(X - a, X - b, ConvolutionParams(1, k)) == X - (a + b)
    with pytest.raises(InvalidArgumentError):
        rect_convolve(X ** 3, X, ConvolutionParams(2))


def test_xdm1_special_case():
    for d in range(1, 7):
        for k in range(4):
            params = ConvolutionParams(d, k)
            p = from_roots(list(range(1, d + 1)), F(2, 3))
            assert convolve_with_xdm1(p, params) == rect_convolve(p, X ** (d - 1), params)
            assert convolve_with_xdm1(X ** d, params) == X ** (d - 1)
            assert convolve_with_xdm1(ExactPolynomial((4,)), params).is_zero


def test_xdm1_of_basic_polynomial():
    lam = F(3, 2)
    for d in range(2, 7):
        for k in range(4):
            got = convolve_with_xdm1(from_roots([lam] * d), ConvolutionParams(d, k))
            assert got.monic() == from_roots([lam] * (d - 2) + [lam * (k + 1) / (k + d)])


def test_reduction_identity():
    # [p (+)_{d,k} q] = [[p (+)_{d,k} x**(d-1)] (+)_{d-1,k} q] with the normalised x**(d-1) product;
    # the unnormalised operator x p'' + (k+1) p' carries the factor 1/(d (d+k))
    p = from_roots([1, 2, 5, 6])
    q = from_roots([F(1, 2), 3, 7])
    for k in range(4):
        d = 4
        lhs = rect_convolve(p, q, ConvolutionParams(d, k))
        mid = rect_convolve(p, X ** (d - 1), ConvolutionParams(d, k))
        assert lhs == rect_convolve(mid, q, ConvolutionParams(d - 1, k))
        raw = p.derivative().derivative().shift_degree(1) + p.derivative() * (k + 1)
        assert lhs == rect_convolve(raw, q, ConvolutionParams(d - 1, k)) / (d * (d + k))


def test_gegenbauer_closed_form_examples():
    lam, mu = F(2), F(8)  # lam * mu = 16
    assert basic_convolution_gegenbauer(lam, mu, 1, 3) == X - (lam + mu)
    assert basic_convolution_gegenbauer(1, 1, 2, 0) == rect_convolve(from_roots([1, 1]), from_roots([1, 1]),
                                                                      ConvolutionParams(2, 0))
    for d in range(1, 7):
        for n in range(4):
            closed = basic_convolution_gegenbauer(lam, mu, d, n)
            conv = rect_convolve(from_roots([lam] * d), from_roots([mu] * d), ConvolutionParams(d, n))
            assert closed == conv
            assert closed.leading == conv.leading == 1
    with pytest.raises(InvalidArgumentError):
        basic_convolution_gegenbauer(0, 1, 2, 0)


def test_gf_coefficient():
    assert gf_coefficient(3, 5, 2, 0) == ExactPolynomial((1,))
    assert gf_coefficient(F(1, 3), F(2), 0, 1) == X - F(7, 3)
    for d in range(0, 7):
        for k in range(4):
            lam, mu = F(3, 2), F(1, 5)
            scaled = rect_convolve(from_roots([lam] * d), from_roots([mu] * d), ConvolutionParams(max(d, 1), k)) \
                if d else ExactPolynomial((1,))
            assert gf_coefficient(lam, mu, k, d) == scaled * comb(k + d, d)


@settings(max_examples=40, deadline=None)
@given(roots_st, roots_st, st.integers(0, 4))
def test_symmetry_and_degree_law(rp, rq, k):
    d = max(len(rp), len(rq), 1)
    p, q = from_roots(rp, 2), from_roots(rq, F(1, 3))
    params = ConvolutionParams(d, k)
    r = rect_convolve(p, q, params)
    assert r == rect_convolve(q, p, params)
    expected = p.degree + q.degree - d
    assert r.degree == (expected if expected >= 0 else -1)


@settings(max_examples=40, deadline=None)
@given(roots_st, roots_st, roots_st, st.integers(0, 3), st.fractions(max_denominator=9), st.fractions(max_denominator=9))
def test_bilinearity(r1, r2, rq, k, a, b):
    d = max(len(r1), len(r2), len(rq), 1)
    params = ConvolutionParams(d, k)
    p1, p2, q = from_roots(r1), from_roots(r2), from_roots(rq)
    lhs = rect_convolve(p1 * a + p2 * b, q, params)
    assert lhs == rect_convolve(p1, q, params) * a + rect_convolve(p2, q, params) * b


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(min_value=F(1, 8), max_value=8, max_denominator=8), min_size=1, max_size=6),
       st.lists(st.fractions(min_value=F(1, 8), max_value=8, max_denominator=8), min_size=1, max_size=6),
       st.integers(0, 4))
def test_root_preservation(rp, rq, k):
    d = max(len(rp), len(rq))
    r = rect_convolve(from_roots(rp), from_roots(rq), ConvolutionParams(d, k))
    if r.degree >= 1:
        assert is_nonneg_rooted(r)
