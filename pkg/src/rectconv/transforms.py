"""S, V, H and W transforms, the largest root of W, and the Theta and phi functionals.

For a polynomial ``p`` with nonnegative roots, ``n >= 0`` and ``alpha > 0``

    W(x) = [S p][S V_n p] - alpha**2 [S p]' [S V_n p]'
         = x**(2n) R(x**2),   R(y) = p**2 - 4 n alpha**2 p p' - 4 alpha**2 y p'**2,

so the largest root of ``W`` is the square root of the largest root of ``R``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .convolution import ConvolutionParams, rect_convolve
from .errors import DomainError, InvalidArgumentError, InvariantViolation, PoleError
from .poly import (
    DEFAULT_CONFIG,
    ExactPolynomial,
    Polynomial,
    RootIsolationConfig,
    as_exact,
    max_real_root_exact,
    to_fraction,
)


def _alpha(alpha) -> Fraction:
    a = to_fraction(alpha)
    if a <= 0:
        raise InvalidArgumentError(f"alpha must be > 0, got {alpha}")
    return a


def _n(n: int) -> int:
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise InvalidArgumentError(f"n must be an integer >= 0, got {n!r}")
    return n


def s_transform(p: Polynomial) -> ExactPolynomial:
    """``p(x**2)``."""
    return as_exact(p).compose_power(2)


def v_transform(p: Polynomial, n: int) -> ExactPolynomial:
    """``x**n p(x)``."""
    return as_exact(p).shift_degree(_n(n))


def scale_argument(p: Polynomial, alpha) -> ExactPolynomial:
    """``p(alpha**2 x)``: the rescaling that moves a problem at ``alpha`` to ``alpha = 1``."""
    a = to_fraction(alpha)
    return as_exact(p).compose_affine(a * a, 0)


def h_eval(p: Polynomial, n: int, x):
    """``w (2n/x + w)`` with ``w = 2 x p'(x**2) / p(x**2)``.

    Exact for rational ``x``; float in, float out.
    """
    _n(n)
    p = as_exact(p)
    is_float = isinstance(x, float)
    xf = to_fraction(x)
    if xf <= 0:
        raise DomainError("H-transform needs x > 0")
    y = xf * xf
    val = p.exact_value(y)
    if val == 0:
        raise PoleError(f"S p vanishes at x = {x!r}")
    w = 2 * xf * p.derivative().exact_value(y) / val
    out = w * (Fraction(2 * n) / xf + w)
    return float(out) if is_float else out


@dataclass(frozen=True)
class WTransformResult:
    w_poly: ExactPolynomial
    reduced: ExactPolynomial
    n: int
    alpha: Fraction
    maxroot_w: float | None = None

    def reduced_identity_holds(self) -> bool:
        return self.reduced.compose_power(2).shift_degree(2 * self.n) == self.w_poly


def reduced_w(p: Polynomial, n: int, alpha) -> ExactPolynomial:
    """``R(y) = p**2 - 4 n alpha**2 p p' - 4 alpha**2 y p'**2``."""
    p = as_exact(p)
    a2 = _alpha(alpha) ** 2
    dp = p.derivative()
    return p * p - p * dp * (4 * _n(n) * a2) - (dp * dp).shift_degree(1) * (4 * a2)


def w_polynomial_direct(p: Polynomial, n: int, alpha) -> ExactPolynomial:
    """``W`` straight from its definition as a differential operator on ``S p`` and ``S V_n p``."""
    a2 = _alpha(alpha) ** 2
    sp = s_transform(p)
    svp = s_transform(v_transform(p, n))
    return sp * svp - sp.derivative() * svp.derivative() * a2


def w_polynomial(p: Polynomial, n: int, alpha, with_maxroot: bool = False,
                 cfg: RootIsolationConfig = DEFAULT_CONFIG) -> WTransformResult:
    p = as_exact(p)
    if p.is_zero:
        raise InvalidArgumentError("W-transform of the zero polynomial")
    a = _alpha(alpha)
    r = reduced_w(p, n, a)
    w = r.compose_power(2).shift_degree(2 * n)
    mr = _maxroot_from_reduced(r, cfg) if with_maxroot else None
    return WTransformResult(w, r, n, a, mr)


def _maxroot_from_reduced(r: ExactPolynomial, cfg: RootIsolationConfig) -> float:
    if r.degree < 1:
        raise DomainError("W-transform has no roots apart from x = 0")
    top = max_real_root_exact(r, cfg)
    if top < 0:
        raise InvariantViolation(f"largest root of the reduced W-transform is negative ({float(top)})")
    return math.sqrt(top)


def maxroot_w(p: Polynomial, n: int, alpha, cfg: RootIsolationConfig = DEFAULT_CONFIG) -> float:
    """Largest root of ``W^n_alpha p``, via the reduced polynomial in ``y = x**2``."""
    p = as_exact(p)
    if p.degree < 1:
        raise DomainError("maxroot of W is undefined for constant polynomials")
    return _maxroot_from_reduced(reduced_w(p, n, alpha), cfg)


@dataclass(frozen=True)
class ThetaReport:
    theta: float
    maxroot_w: float
    n: int
    alpha: float
    k: int | None = None
    d: int | None = None
    phi: float | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        out = {"theta": self.theta, "maxroot_w": self.maxroot_w, "n": self.n, "alpha": self.alpha}
        if self.k is not None:
            out.update(k=self.k, d=self.d, phi=self.phi)
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def theta(p: Polynomial, n: int, alpha, cfg: RootIsolationConfig = DEFAULT_CONFIG) -> ThetaReport:
    """``sqrt(n**2 alpha**2 + maxroot(W)**2)``."""
    a = _alpha(alpha)
    mr = maxroot_w(p, n, a, cfg)
    fa = float(a)
    return ThetaReport(math.sqrt((n * fa) ** 2 + mr * mr), mr, n, fa)


def theta_value(p: Polynomial, n: int, alpha, cfg: RootIsolationConfig = DEFAULT_CONFIG) -> float:
    return theta(p, n, alpha, cfg).theta


def basic_theta(lam, j: int, n: int, alpha) -> float:
    """Closed form of Theta for ``c (x - lam)**j``: ``sqrt((n+j)**2 alpha**2 + lam) + alpha j``."""
    a, lam = float(alpha), float(lam)
    return math.sqrt(((n + j) * a) ** 2 + lam) + a * j


def phi_report(p: Polynomial, q: Polynomial, n: int, k: int, d: int, alpha,
               cfg: RootIsolationConfig = DEFAULT_CONFIG) -> ThetaReport:
    p, q = as_exact(p), as_exact(q)
    a = _alpha(alpha)
    r = rect_convolve(p, q, ConvolutionParams(d, k))
    if r.degree < 1:
        raise DomainError("the convolution is constant or zero, so Theta is undefined")
    tp = theta(p, n, a, cfg).theta
    tq = theta(q, n, a, cfg).theta
    tr = theta(r, n, a, cfg)
    value = tp + tq - tr.theta - (k + 2 * d) * float(a)
    notes = () if k == n else ("unverified regime: k != n",)
    return ThetaReport(tr.theta, tr.maxroot_w, n, float(a), k, d, value, notes)


def phi(p: Polynomial, q: Polynomial, n: int, k: int, d: int, alpha,
        cfg: RootIsolationConfig = DEFAULT_CONFIG) -> float:
    """``Theta(p) + Theta(q) - Theta(p (+)_{d,k} q) - (k + 2d) alpha``."""
    return phi_report(p, q, n, k, d, alpha, cfg).phi
