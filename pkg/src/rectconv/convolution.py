"""The rectangular additive convolution and its closed forms.

``rect_convolve(p, q, ConvolutionParams(d, k))`` is the bilinear extension of

    x**i (+)_{d,k} x**j = (k+i)! (k+j)! j! i! / ((d+k)! d! (i+j-d)! (k+i+j-d)!) * y**(i+j-d)

for ``i + j >= d`` and zero otherwise.  The integer ``k`` doubles as the
index ``n`` in the Gegenbauer closed form ``C_d^{n+1}``: with ``k = n`` the
convolution of two basic polynomials is a rescaled Gegenbauer polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .errors import InvalidArgumentError
from .gegenbauer import geg_coeffs
from .poly import ExactPolynomial, Polynomial, as_exact, to_fraction


@dataclass(frozen=True)
class ConvolutionParams:
    d: int
    k: int = 0

    def __post_init__(self) -> None:
        if self.d < 1:
            raise InvalidArgumentError(f"d must be >= 1, got {self.d}")
        if self.k < 0:
            raise InvalidArgumentError(f"k must be >= 0, got {self.k}")


def _falling(a: int, j: int) -> int:
    out = 1
    for t in range(j):
        out *= a - t
    return out


def monomial_convolve(i: int, j: int, params: ConvolutionParams) -> ExactPolynomial:
    d, k = params.d, params.k
    if not (0 <= i <= d and 0 <= j <= d):
        raise InvalidArgumentError(f"monomial degrees must lie in [0, {d}], got {i}, {j}")
    e = i + j - d
    if e < 0:
        return ExactPolynomial()
    c = Fraction(
        factorial(k + i) * factorial(k + j) * factorial(j) * factorial(i),
        factorial(d + k) * factorial(d) * factorial(e) * factorial(k + e),
    )
    return ExactPolynomial.monomial(e, c)


def _weight(d: int, k: int, i: int, j: int) -> Fraction:
    # (d-i)!(d-j)!/(d!(d-l)!) * (k+d-i)!(k+d-j)!/((k+d)!(k+d-l)!) with l = i + j
    return Fraction(
        _falling(d - i, j) * _falling(k + d - i, j),
        _falling(d, j) * _falling(k + d, j),
    )


def rect_convolve(p: Polynomial, q: Polynomial, params: ConvolutionParams) -> ExactPolynomial:
    """Exact rectangular additive convolution of ``p`` and ``q``."""
    p, q = as_exact(p), as_exact(q)
    d, k = params.d, params.k
    if p.degree > d or q.degree > d:
        raise InvalidArgumentError(
            f"operand degrees ({p.degree}, {q.degree}) exceed d = {d}"
        )
    if p.is_zero or q.is_zero:
        return ExactPolynomial()
    # a[i] is the coefficient of x**(d-i)
    a = [p.coeffs[d - i] if d - i <= p.degree else Fraction(0) for i in range(d + 1)]
    b = [q.coeffs[d - j] if d - j <= q.degree else Fraction(0) for j in range(d + 1)]
    out = [Fraction(0)] * (d + 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j in range(d + 1 - i):
            if b[j]:
                out[d - i - j] += _weight(d, k, i, j) * ai * b[j]
    return ExactPolynomial(out)


def convolve_with_xdm1(p: Polynomial, params: ConvolutionParams) -> ExactPolynomial:
    """``p (+)_{d,k} x**(d-1)`` via ``(x p'' + (k+1) p') / ((d+k) d)``."""
    p = as_exact(p)
    d, k = params.d, params.k
    if p.degree > d:
        raise InvalidArgumentError(f"deg p = {p.degree} exceeds d = {d}")
    dp = p.derivative()
    num = dp.derivative().shift_degree(1) + dp * (k + 1)
    return num / ((d + k) * d)


def basic_convolution_gegenbauer(lam, mu, d: int, n: int) -> ExactPolynomial:
    """Gegenbauer closed form of ``(x-lam)**d (+)_{d,n} (x-mu)**d``.

    Returns ``(lam*mu)**(d/2) * C_d^{n+1}((y - lam - mu) / (2 sqrt(lam*mu))) / binom(n+d, d)``.
    Because ``C_d`` has the parity of ``d`` only even powers of
    ``sqrt(lam*mu)`` survive, so the result is exact for any rational inputs.
    """
    lam, mu = to_fraction(lam), to_fraction(mu)
    if lam <= 0 or mu <= 0:
        raise InvalidArgumentError("lam and mu must be positive")
    if d < 1 or n < 0:
        raise InvalidArgumentError("need d >= 1 and n >= 0")
    g = geg_coeffs(d, n + 1)
    prod = lam * mu
    shifted = ExactPolynomial((-(lam + mu), 1))
    total = ExactPolynomial()
    for i in range(d // 2 + 1):
        e = d - 2 * i
        c = g.coeffs[e] if e <= g.degree else 0
        if c:
            total = total + (shifted ** e) * (c * prod ** i / Fraction(2) ** e)
    return total / comb(n + d, d)


def gf_coefficient(lam, mu, k: int, d: int) -> ExactPolynomial:
    """Coefficient of ``t**d`` in ``((1 + mu t)(1 + lam t) - y t) ** -(k+1)``.

    Computed with the power-of-series recurrence ``m f_m = sum_i ((a+1) i - m) u_i f_{m-i}``
    on ``u(t) = 1 + (lam + mu - y) t + lam mu t**2``, ``a = -(k+1)``.
    """
    if d < 0 or k < 0:
        raise InvalidArgumentError("need d >= 0 and k >= 0")
    lam, mu = to_fraction(lam), to_fraction(mu)
    u = {1: ExactPolynomial((lam + mu, -1)), 2: ExactPolynomial((lam * mu,))}
    a = -(k + 1)
    f = [ExactPolynomial((1,))]
    for m in range(1, d + 1):
        acc = ExactPolynomial()
        for i in (1, 2):
            if i <= m:
                acc = acc + u[i] * f[m - i] * ((a + 1) * i - m)
        f.append(acc / m)
    return f[d]
