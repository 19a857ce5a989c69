"""Gegenbauer polynomials: identities, largest-root bounds, Cauchy-transform bounds.

``C_d^alpha`` is generated by ``(1 - 2 x t + t**2) ** -alpha``.  The coupled
family ``C_d^{1 + theta d}`` has its roots inside ``[-gamma_theta, gamma_theta]``
with ``gamma_theta = sqrt(2 theta + 1) / (theta + 1)``; as ``d`` grows its
degree-normalised Cauchy transform increases towards

    (2 theta + 1) / (theta x + (1 + theta) sqrt(x**2 - gamma_theta**2)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from scipy import integrate

from .errors import ConvergenceError, DomainError, InvalidArgumentError, PoleError
from .poly import (
    DEFAULT_CONFIG,
    ExactPolynomial,
    Polynomial,
    RootIsolationConfig,
    SturmChain,
    as_exact,
    cauchy_transform,
    to_fraction,
)


@dataclass(frozen=True)
class GegenbauerParams:
    d: int
    alpha: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", to_fraction(self.alpha))
        if self.d < 0:
            raise InvalidArgumentError("Gegenbauer degree must be >= 0")
        if self.alpha <= 0:
            raise InvalidArgumentError("Gegenbauer alpha must be > 0")

    @classmethod
    def coupled(cls, d: int, theta) -> "GegenbauerParams":
        """The family ``C_d^{1 + theta d}``."""
        return cls(d, 1 + to_fraction(theta) * d)


@dataclass(frozen=True)
class ThetaRatio:
    theta: float
    gamma: float

    @classmethod
    def of(cls, theta) -> "ThetaRatio":
        return cls(float(theta), gamma_theta(theta))


@dataclass(frozen=True)
class TwoStepMaxroot:
    d: int
    theta: float
    value: float
    maxroot_d: float
    maxroot_next: float


def _check_alpha(alpha) -> Fraction:
    a = to_fraction(alpha)
    if a <= 0:
        raise InvalidArgumentError(f"alpha must be > 0, got {alpha}")
    return a


# ---------------------------------------------------------------------------
# Exact coefficients and evaluation


@lru_cache(maxsize=256)
def _family(d: int, alpha: Fraction) -> tuple[ExactPolynomial, ...]:
    polys = [ExactPolynomial((1,))]
    if d >= 1:
        polys.append(ExactPolynomial((0, 2 * alpha)))
    for j in range(1, d):
        nxt = polys[j].shift_degree(1) * (2 * (j + alpha)) - polys[j - 1] * (j + 2 * alpha - 1)
        polys.append(nxt / (j + 1))
    return tuple(polys)


def geg_coeffs(d: int, alpha) -> ExactPolynomial:
    """Exact ``C_d^alpha`` from the three-term recurrence."""
    if d < 0:
        raise InvalidArgumentError("Gegenbauer degree must be >= 0")
    return _family(d, _check_alpha(alpha))[d]


def geg_eval(d: int, alpha, x: float) -> float:
    """``C_d^alpha(x)`` by the forward recurrence in floating point."""
    a = float(alpha)
    x = float(x)
    prev, cur = 1.0, 2.0 * a * x
    if d == 0:
        return prev
    for j in range(1, d):
        prev, cur = cur, (2.0 * (j + a) * x * cur - (j + 2.0 * a - 1.0) * prev) / (j + 1)
    return cur


def _geg_sequence_exact(d: int, alpha: Fraction, x: Fraction) -> list[Fraction]:
    vals = [Fraction(1), 2 * alpha * x]
    for j in range(1, d):
        vals.append((2 * (j + alpha) * x * vals[j] - (j + 2 * alpha - 1) * vals[j - 1]) / (j + 1))
    return vals[: d + 1]


def _geg_scaled(d: int, a: float, x: float) -> tuple[float, int]:
    """``C_d^a(x) = value * 2**exponent`` without overflow."""
    prev, cur, exp = 1.0, 2.0 * a * x, 0
    if d == 0:
        return 1.0, 0
    for j in range(1, d):
        prev, cur = cur, (2.0 * (j + a) * x * cur - (j + 2.0 * a - 1.0) * prev) / (j + 1)
        if abs(cur) > 2.0 ** 500:
            prev, cur, exp = prev * 2.0 ** -500, cur * 2.0 ** -500, exp + 500
    return cur, exp


def geg_cauchy(d: int, alpha, x: float) -> float:
    """Cauchy transform of ``C_d^alpha`` at ``x`` via ``C_d' = 2 alpha C_{d-1}^{alpha+1}``.

    Floating-point route, stable for ``x`` above all roots at large ``d``.
    """
    if d < 1:
        raise InvalidArgumentError("Cauchy transform needs d >= 1")
    a = float(alpha)
    num, e1 = _geg_scaled(d - 1, a + 1.0, x)
    den, e2 = _geg_scaled(d, a, x)
    if den == 0:
        raise PoleError(f"C_{d}^{alpha} vanishes at {x}")
    return 2.0 * a * num / (d * den) * 2.0 ** (e1 - e2)


def geg_value_at_one(d: int, alpha) -> Fraction:
    """``C_d^alpha(1) = binom(d + 2 alpha - 1, d)`` as a rising factorial ratio."""
    a = _check_alpha(alpha)
    out = Fraction(1)
    for i in range(d):
        out *= (2 * a + i) / (i + 1)
    return out


def geg_cauchy_at_one(d: int, alpha) -> Fraction:
    if d < 1:
        raise InvalidArgumentError("Cauchy transform at 1 needs d >= 1")
    a = _check_alpha(alpha)
    return (d + 2 * a) / (2 * a + 1)


def recurrence_residual(d: int, alpha) -> ExactPolynomial:
    """``x C_d - ((d+1) C_{d+1} + (d+2a-1) C_{d-1}) / (2d + 2a)``; the zero polynomial."""
    a = _check_alpha(alpha)
    if d < 1:
        raise InvalidArgumentError("recurrence residual needs d >= 1")
    fam = _family(d + 1, a)
    rhs = (fam[d + 1] * (d + 1) + fam[d - 1] * (d + 2 * a - 1)) / (2 * d + 2 * a)
    return fam[d].shift_degree(1) - rhs


def diff_identity_polynomial(d: int, alpha) -> ExactPolynomial:
    """``(1 - x**2) C_d' + d x C_d - (d + 2a - 1) C_{d-1}``; the zero polynomial."""
    a = _check_alpha(alpha)
    if d < 1:
        raise InvalidArgumentError("differential identity needs d >= 1")
    fam = _family(d, a)
    c = fam[d]
    one_minus_x2 = ExactPolynomial((1, 0, -1))
    return one_minus_x2 * c.derivative() + c.shift_degree(1) * d - fam[d - 1] * (d + 2 * a - 1)


def diff_identity_residual(d: int, alpha, x):
    return diff_identity_polynomial(d, alpha)(x)


# ---------------------------------------------------------------------------
# Largest roots


def gamma_theta(theta) -> float:
    t = float(theta)
    if t < 0:
        raise InvalidArgumentError("theta must be >= 0")
    return math.sqrt(2.0 * t + 1.0) / (t + 1.0)


def gamma_nd(n: int, d: int) -> float:
    """``gamma_{n/d} = sqrt(1 - n**2 / (n+d)**2)``."""
    return math.sqrt(d * (2 * n + d)) / (n + d)


def _zeros_above(d: int, alpha: Fraction, x: Fraction) -> tuple[int, bool]:
    # C_0, ..., C_d form a Sturm sequence: sign variations = zeros of C_d above x
    vals = _geg_sequence_exact(d, alpha, x)
    signs = [(v > 0) - (v < 0) for v in vals]
    nz = [s for s in signs if s]
    return sum(1 for u, v in zip(nz, nz[1:]) if u != v), signs[-1] == 0


def geg_maxroot_exact(d: int, alpha, cfg: RootIsolationConfig = DEFAULT_CONFIG) -> Fraction:
    if d < 1:
        raise InvalidArgumentError("geg_maxroot needs d >= 1")
    a = _check_alpha(alpha)
    lo, hi = Fraction(-1), Fraction(1)
    steps = 0
    while steps < cfg.max_bisections:
        if hi - lo <= max(cfg.abs_tol, cfg.rel_tol * float(max(abs(lo), abs(hi)))):
            break
        mid = (lo + hi) / 2
        above, is_root = _zeros_above(d, a, mid)
        if is_root and above == 0:
            return mid
        if above:
            lo = mid
        else:
            hi = mid
        steps += 1
    return (lo + hi) / 2


def geg_maxroot(d: int, alpha, cfg: RootIsolationConfig = DEFAULT_CONFIG) -> float:
    """Largest root of ``C_d^alpha`` by exact recurrence-Sturm bisection on ``(-1, 1]``."""
    return float(geg_maxroot_exact(d, alpha, cfg))


def coupled_maxroot(d: int, theta, cfg: RootIsolationConfig = DEFAULT_CONFIG) -> float:
    """``gamma^d_theta``: largest root of ``C_d^{1 + theta d}``."""
    return geg_maxroot(d, 1 + to_fraction(theta) * d, cfg)


def two_step_maxroot(d: int, theta, cfg: RootIsolationConfig = DEFAULT_CONFIG) -> TwoStepMaxroot:
    g0 = coupled_maxroot(d, theta, cfg)
    g1 = coupled_maxroot(d + 1, theta, cfg)
    return TwoStepMaxroot(d, float(theta), max(g0, g1), g0, g1)


# ---------------------------------------------------------------------------
# Asymptotic density and Cauchy transform


def asymptotic_density(theta, y: float) -> float:
    t = float(theta)
    if t <= 0:
        raise InvalidArgumentError("asymptotic density needs theta > 0")
    g = gamma_theta(t)
    if abs(y) >= g:
        return 0.0
    return (1.0 + t) / math.pi * math.sqrt(g * g - y * y) / (1.0 - y * y)


def asymptotic_cauchy(theta, x: float) -> float:
    """Limit Cauchy transform, in the rationalised form that is regular at ``x = 1``."""
    t = float(theta)
    if t < 0:
        raise InvalidArgumentError("theta must be >= 0")
    g = gamma_theta(t)
    if x <= g:
        raise DomainError(f"x = {x} must exceed gamma_theta = {g}")
    return (2.0 * t + 1.0) / (t * x + (1.0 + t) * math.sqrt((x - g) * (x + g)))


def asymptotic_cauchy_direct(theta, x: float) -> float:
    """``(-theta x + (1+theta) sqrt(x**2 - gamma**2)) / (x**2 - 1)``; singular-looking at 1."""
    t = float(theta)
    g = gamma_theta(t)
    if x <= g:
        raise DomainError(f"x = {x} must exceed gamma_theta = {g}")
    if x == 1.0:
        raise DomainError("direct form is 0/0 at x = 1; use asymptotic_cauchy")
    return (-t * x + (1.0 + t) * math.sqrt(x * x - g * g)) / (x * x - 1.0)


def cauchy_upper_bound(n: int, d: int, x: float) -> float:
    """``(2n + d) / (n x + sqrt((n+d)**2 (x**2 - 1) + n**2))``, valid for ``x > gamma_{n/d}``."""
    if d < 1 or n < 0:
        raise InvalidArgumentError("need d >= 1 and n >= 0")
    g = gamma_nd(n, d)
    if x <= g:
        raise DomainError(f"x = {x} must exceed gamma_(n/d) = {g}")
    return (2 * n + d) / (n * x + math.sqrt((n + d) ** 2 * (x * x - 1.0) + n * n))


def cauchy_upper_bound_direct(n: int, d: int, x: float) -> float:
    """``(-n x + sqrt((n+d)**2 (x**2-1) + n**2)) / (d (x**2 - 1))``, for ``x != 1``."""
    g = gamma_nd(n, d)
    if x <= g or x == 1.0:
        raise DomainError(f"x = {x} outside the domain of the direct form")
    return (-n * x + math.sqrt((n + d) ** 2 * (x * x - 1.0) + n * n)) / (d * (x * x - 1.0))


def ans_f(x: float, y: float, n: int, d: int) -> float:
    return d * (x * x - 1.0) * y * y + 2.0 * n * x * y - (2 * n + d)


def ans_check(s: float, t: float, n: int, d: int) -> bool:
    """Whether ``f(s, t) >= 0`` implies ``G_{C_d^{n+1}}(s) <= t`` at this point."""
    if t <= 0:
        raise DomainError("t must be positive")
    if s <= gamma_nd(n, d):
        raise DomainError("s must exceed gamma_(n/d)")
    if ans_f(s, t, n, d) < 0:
        return True
    g = cauchy_transform(geg_coeffs(d, n + 1), float(s))
    return g <= t * (1.0 + 1e-12)


def quadrature_cauchy(theta, x: float, tol: float = 1e-10) -> float:
    """Cauchy transform of the limiting density by quadrature in ``z = gamma sin u``."""
    t = float(theta)
    if t <= 0:
        raise InvalidArgumentError("quadrature needs theta > 0")
    g = gamma_theta(t)
    if x <= g:
        raise DomainError(f"x = {x} must exceed gamma_theta = {g}")
    pref = (1.0 + t) / math.pi

    def integrand(u: float) -> float:
        s, c = math.sin(u), math.cos(u)
        return pref * g * g * c * c / ((1.0 - g * g * s * s) * (x - g * s))

    val, err = integrate.quad(integrand, -math.pi / 2, math.pi / 2, epsabs=tol, epsrel=0.0, limit=400)
    if not err <= tol:
        raise ConvergenceError(f"quadrature error estimate {err} above tolerance {tol}")
    return val


# ---------------------------------------------------------------------------
# Normalised polynomials and the Delta fitness argument


def lambda_jk(j: int, k: int, theta) -> Fraction:
    th = to_fraction(theta)
    return (j + 2 * k * th + 2) / (2 * j + 2 * k * th + 2)


def lambda_diff_closed_form(j: int, k: int, theta) -> Fraction:
    """``((j - k) theta - 1) / (2 (1 + j + k theta)(j + (k-1) theta))``."""
    th = to_fraction(theta)
    return ((j - k) * th - 1) / (2 * (1 + j + k * th) * (j + (k - 1) * th))


def normalized_geg_poly(j: int, k: int, theta) -> ExactPolynomial:
    """``p_{j,k} = C_j^{1 + theta k} / C_j^{1 + theta k}(1)``."""
    if j < 0:
        raise InvalidArgumentError("j must be >= 0")
    alpha = 1 + to_fraction(theta) * k
    return geg_coeffs(j, alpha) / geg_value_at_one(j, alpha)


def normalized_geg(j: int, k: int, theta, x):
    return normalized_geg_poly(j, k, theta)(x)


def delta_poly(j: int, d: int, theta) -> ExactPolynomial:
    """``p_{j+1,d+1} p_{j-1,d} - p_{j,d} p_{j,d+1}``."""
    if not 1 <= j <= d:
        raise InvalidArgumentError(f"need 1 <= j <= d, got j={j}, d={d}")
    return (
        normalized_geg_poly(j + 1, d + 1, theta) * normalized_geg_poly(j - 1, d, theta)
        - normalized_geg_poly(j, d, theta) * normalized_geg_poly(j, d + 1, theta)
    )


@dataclass(frozen=True)
class FitnessEvidence:
    grid_ok: bool
    sturm_ok: bool | None
    worst_grid_point: float | None

    @property
    def ok(self) -> bool:
        return self.grid_ok and self.sturm_ok is not False

    @property
    def label(self) -> str:
        return "sturm-certified" if self.sturm_ok else "grid-only"


def _sturm_fit(p: ExactPolynomial, beta: Fraction) -> bool:
    one = Fraction(1)
    if all(c == 0 for c in p.coeffs[1::2]) and beta >= 0:
        # even polynomial: work with E(y), p(x) = E(x**2)
        q, lo = p.even_part_in_square(), beta * beta
    else:
        q, lo = p, beta
    chain = SturmChain(q)
    inner = chain.count(lo, one) - (1 if q.sign_at(one) == 0 else 0)
    outer = chain.count(one, math.inf)
    if inner or outer:
        return False
    return q.sign_at((lo + one) / 2) < 0 and q.sign_at(Fraction(2)) > 0


def fitness_evidence(p: Polynomial, beta: float, grid: int = 2048, x_max: float = 10.0,
                     certify: bool = True) -> FitnessEvidence:
    p = as_exact(p)
    b = float(beta)
    if not b < 1.0:
        raise InvalidArgumentError("beta must be below 1")
    worst = None
    grid_ok = True
    for i in range(1, grid + 1):
        x = b + (1.0 - b) * i / (grid + 1)
        if p.sign_at(Fraction(x)) >= 0:
            grid_ok, worst = False, x
            break
    if grid_ok:
        for i in range(1, grid + 1):
            x = 1.0 + (x_max - 1.0) * i / grid
            if p.sign_at(Fraction(x)) <= 0:
                grid_ok, worst = False, x
                break
    sturm_ok = _sturm_fit(p, Fraction(b)) if certify else None
    return FitnessEvidence(grid_ok, sturm_ok, worst)


def fitness_check(p: Polynomial, beta: float, grid: int = 2048, x_max: float = 10.0,
                  certify: bool = True) -> bool:
    """Negative on ``(beta, 1)`` and positive on ``(1, inf)``; ``beta`` itself is excluded."""
    return fitness_evidence(p, beta, grid, x_max, certify).ok
