"""Linearised W-transforms and the pinch decomposition ``p = p_tilde + p_hat``.

The linearised transform is ``Wbar^n_zeta p = p (x**n p) - zeta**2 p' (x**n p)'``.
Pinching the two largest distinct roots ``a < b`` of ``p`` at a pivot ``t > b``
replaces ``(x-a)(x-b)`` by

    (x - mu)**2 + kappa (x - rho),   2 / (t - mu) = 1/(t - a) + 1/(t - b),

which keeps the log-derivative at ``t`` and hence the largest root of the
transform.  Since ``Wbar_zeta`` at ``zeta**2 = 4 alpha**2 y`` equals
``y**n R(y)``, the same construction carried out at ``y = maxroot(W)**2`` with
``zeta = 2 alpha maxroot(W)`` preserves the largest root of ``W`` itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ConvergenceError, DomainError, InvalidArgumentError, PoleError
from .poly import (
    DEFAULT_CONFIG,
    ExactPolynomial,
    Polynomial,
    RootIsolationConfig,
    as_exact,
    from_roots,
    is_nonneg_rooted,
    max_real_root,
    real_roots,
    to_fraction,
)
from .transforms import maxroot_w


def _zeta(zeta) -> Fraction:
    z = to_fraction(zeta)
    if z <= 0:
        raise InvalidArgumentError(f"zeta must be > 0, got {zeta}")
    return z


def linear_w(p: Polynomial, n: int, zeta) -> ExactPolynomial:
    """``p (x**n p) - zeta**2 p' (x**n p)'``."""
    if n < 0:
        raise InvalidArgumentError("n must be >= 0")
    p = as_exact(p)
    z = _zeta(zeta)
    vp = p.shift_degree(n)
    return p * vp - p.derivative() * vp.derivative() * (z * z)


def linear_h(p: Polynomial, n: int, x):
    """``L (n/x + L)`` with ``L = p'(x)/p(x)``; exact for rational ``x``."""
    p = as_exact(p)
    is_float = isinstance(x, float)
    xf = to_fraction(x)
    if xf <= 0:
        raise DomainError("linearised H needs x > 0")
    val = p.exact_value(xf)
    if val == 0:
        raise PoleError(f"p vanishes at x = {x!r}")
    ls = p.derivative().exact_value(xf) / val
    out = ls * (Fraction(n) / xf + ls)
    return float(out) if is_float else out


def linear_maxroot(p: Polynomial, n: int, zeta, cfg: RootIsolationConfig = DEFAULT_CONFIG) -> float:
    return max_real_root(linear_w(p, n, zeta), cfg)


def pinch_at_point(a, b, t) -> tuple[Fraction, Fraction, Fraction]:
    """``(mu, kappa, rho)`` for pinching roots ``a < b`` at pivot ``t > b``.

    Inputs are converted to exact rationals, so the returned triple satisfies
    ``(x - mu)**2 + kappa (x - rho) = (x - a)(x - b)`` exactly.
    """
    a, b, t = to_fraction(a), to_fraction(b), to_fraction(t)
    if a == b:
        raise InvalidArgumentError("pinching a double root is degenerate (basic pair)")
    if not (0 <= a < b < t):
        raise InvalidArgumentError(f"need 0 <= a < b < t, got a={a}, b={b}, t={t}")
    mu = t - 2 / (1 / (t - a) + 1 / (t - b))
    kappa = 2 * mu - a - b
    rho = (mu * mu - a * b) / kappa
    return mu, kappa, rho


@dataclass(frozen=True)
class PinchDecomposition:
    p_tilde: ExactPolynomial
    p_hat: ExactPolynomial
    mu: Fraction
    rho: Fraction
    kappa: Fraction
    t: float
    a: Fraction
    b: Fraction
    exact_roots: bool
    maxroot_w: float | None = None

    def residual(self, p: Polynomial) -> Fraction:
        """Largest coefficient of ``p_tilde + p_hat - p`` relative to the largest one of ``p``."""
        p = as_exact(p)
        diff = self.p_tilde + self.p_hat - p
        scale = max(abs(c) for c in p.coeffs)
        return max((abs(c) for c in diff.coeffs), default=Fraction(0)) / scale

    def to_dict(self) -> dict:
        from .poly import polynomial_to_json

        out = {
            "p_tilde": polynomial_to_json(self.p_tilde),
            "p_hat": polynomial_to_json(self.p_hat),
            "mu": str(self.mu),
            "rho": str(self.rho),
            "kappa": str(self.kappa),
            "a": str(self.a),
            "b": str(self.b),
            "t": self.t,
            "exact_roots": self.exact_roots,
        }
        if self.maxroot_w is not None:
            out["maxroot_w"] = self.maxroot_w
        return out


def _snap_root(p: ExactPolynomial, approx: float) -> tuple[Fraction, bool]:
    for bound in (10 ** 6, 10 ** 9, 10 ** 12):
        c = Fraction(approx).limit_denominator(bound)
        if p.exact_value(c) == 0:
            return c, True
    return Fraction(approx), False


def _largest_pair(p: ExactPolynomial, cfg: RootIsolationConfig):
    if p.degree < 2:
        raise InvalidArgumentError("pinching needs degree >= 2")
    cls = is_nonneg_rooted(p)
    if not cls.nonneg:
        raise InvalidArgumentError("pinching needs a polynomial with nonnegative real roots")
    roots = real_roots(p, cfg)
    if len(roots) < 2:
        raise InvalidArgumentError("pinch undefined for basic polynomials")
    (ra, _), (rb, _) = roots[-2], roots[-1]
    a, ea = _snap_root(p, ra)
    b, eb = _snap_root(p, rb)
    exact = ea and eb
    quadratic = from_roots([a, b])
    cofactor, rem = divmod(p, quadratic)
    if exact and not rem.is_zero:
        raise InvalidArgumentError("root snapping produced a non-factor")
    return a, b, cofactor, exact


def _pinch(p: ExactPolynomial, pivot, cfg: RootIsolationConfig):
    lead = p.leading
    monic = p.monic()
    a, b, r, exact = _largest_pair(monic, cfg)
    mu, kappa, rho = pinch_at_point(a, b, pivot)
    p_tilde = from_roots([mu, mu]) * r * lead
    p_hat = ExactPolynomial((-rho, 1)) * r * (kappa * lead)
    return p_tilde, p_hat, mu, rho, kappa, a, b, exact


def linear_pinch(p: Polynomial, n: int, zeta, cfg: RootIsolationConfig = DEFAULT_CONFIG) -> PinchDecomposition:
    """Pinch at ``t = maxroot(Wbar^n_zeta p)``; the linearised largest root is unchanged."""
    p = as_exact(p)
    t = linear_maxroot(p, n, zeta, cfg)
    p_tilde, p_hat, mu, rho, kappa, a, b, exact = _pinch(p, t, cfg)
    return PinchDecomposition(p_tilde, p_hat, mu, rho, kappa, t, a, b, exact)


def quad_equivalence_residual(p: Polynomial, n: int, alpha,
                              cfg: RootIsolationConfig = DEFAULT_CONFIG) -> float:
    """``|maxroot(Wbar_{2 alpha t} p) - t**2| / t**2`` with ``t = maxroot(W^n_alpha p)``."""
    t0 = maxroot_w(p, n, alpha, cfg)
    s = linear_maxroot(p, n, 2 * to_fraction(alpha) * Fraction(t0), cfg)
    return abs(s - t0 * t0) / (t0 * t0)


def quad_pinch(p: Polynomial, n: int, alpha, cfg: RootIsolationConfig = DEFAULT_CONFIG,
               tol: float = 1e-8) -> PinchDecomposition:
    """Pinch that preserves ``maxroot(W^n_alpha p)``.

    With ``t0 = maxroot(W^n_alpha p)`` the pivot is the largest root of the
    linearised transform at ``zeta = 2 alpha t0``, which must equal ``t0**2``.
    """
    p = as_exact(p)
    t0 = maxroot_w(p, n, alpha, cfg)
    zeta = 2 * to_fraction(alpha) * Fraction(t0)
    pivot = linear_maxroot(p, n, zeta, cfg)
    if abs(pivot - t0 * t0) > tol * t0 * t0:
        raise ConvergenceError(
            f"linearised pivot {pivot} disagrees with maxroot(W)**2 = {t0 * t0}"
        )
    p_tilde, p_hat, mu, rho, kappa, a, b, exact = _pinch(p, pivot, cfg)
    return PinchDecomposition(p_tilde, p_hat, mu, rho, kappa, pivot, a, b, exact, t0)
