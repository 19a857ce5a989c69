"""Exact and floating polynomial arithmetic with real-root isolation.

Polynomials are dense and stored in ascending order: ``coeffs[i]`` is the
coefficient of ``x**i``.  The zero polynomial has an empty coefficient tuple
and degree ``-1``.

All algebra is done over :class:`fractions.Fraction`.  Root isolation uses
Sturm sequences evaluated exactly at dyadic rationals, so the only rounding
happens when a result is handed back as a ``float``.  The largest root has a
faster route: a floating-point guess that is accepted only after an exact
certificate (Descartes' rule above the guess plus a sign change across it).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Iterable, Union

import numpy as np

from .errors import DomainError, InvalidArgumentError, PoleError

Scalar = Union[int, Fraction, float]


def to_fraction(value) -> Fraction:
    """Convert ``value`` to a Fraction exactly (floats keep their binary value)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InvalidArgumentError(f"boolean is not a number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InvalidArgumentError(f"non-finite value {value!r}")
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidArgumentError(f"cannot parse rational {value!r}") from exc
    raise InvalidArgumentError(f"unsupported numeric type {type(value).__name__}")


def _strip(values: list) -> tuple:
    while values and values[-1] == 0:
        values.pop()
    return tuple(values)


@dataclass(frozen=True)
class ExactPolynomial:
    """Polynomial with arbitrary-precision rational coefficients."""

    coeffs: tuple = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _strip([to_fraction(c) for c in self.coeffs]))

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, c: Scalar) -> "ExactPolynomial":
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c: Scalar = 1) -> "ExactPolynomial":
        if degree < 0:
            raise InvalidArgumentError("monomial degree must be nonnegative")
        return cls((0,) * degree + (c,))

    @classmethod
    def x(cls) -> "ExactPolynomial":
        return cls((0, 1))

    # -- basic attributes ---------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def __repr__(self) -> str:
        return f"ExactPolynomial({[str(c) for c in self.coeffs]})"

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "ExactPolynomial":
        if isinstance(other, ExactPolynomial):
            return other
        if isinstance(other, FloatPolynomial):
            return other.to_exact()
        return ExactPolynomial((other,))

    def __add__(self, other) -> "ExactPolynomial":
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return ExactPolynomial(
            [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
        )

    __radd__ = __add__

    def __neg__(self) -> "ExactPolynomial":
        return ExactPolynomial([-c for c in self.coeffs])

    def __sub__(self, other) -> "ExactPolynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "ExactPolynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "ExactPolynomial":
        if not isinstance(other, (ExactPolynomial, FloatPolynomial)):
            c = to_fraction(other)
            return ExactPolynomial([c * a for a in self.coeffs])
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ExactPolynomial()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return ExactPolynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ExactPolynomial":
        c = to_fraction(other)
        if c == 0:
            raise InvalidArgumentError("division of a polynomial by zero")
        return ExactPolynomial([a / c for a in self.coeffs])

    def __pow__(self, k: int) -> "ExactPolynomial":
        if k < 0:
            raise InvalidArgumentError("negative polynomial power")
        result = ExactPolynomial((1,))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other) -> tuple["ExactPolynomial", "ExactPolynomial"]:
        other = self._coerce(other)
        if other.is_zero:
            raise InvalidArgumentError("polynomial division by the zero polynomial")
        rem = list(self.coeffs)
        dd = other.degree
        lead = other.leading
        if len(rem) - 1 < dd:
            return ExactPolynomial(), self
        quot = [Fraction(0)] * (len(rem) - dd)
        for shift in range(len(rem) - 1 - dd, -1, -1):
            c = rem[shift + dd] / lead
            quot[shift] = c
            if c:
                for i, oc in enumerate(other.coeffs):
                    rem[shift + i] -= c * oc
        return ExactPolynomial(quot), ExactPolynomial(rem[:dd])

    def __floordiv__(self, other) -> "ExactPolynomial":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "ExactPolynomial":
        return divmod(self, other)[1]

    # -- calculus and substitution ------------------------------------------

    def derivative(self) -> "ExactPolynomial":
        return ExactPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "ExactPolynomial":
        if self.is_zero:
            raise InvalidArgumentError("the zero polynomial has no monic form")
        return self / self.leading

    def compose_power(self, k: int) -> "ExactPolynomial":
        """Return ``p(x**k)``."""
        out = [Fraction(0)] * (k * self.degree + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[k * i] = c
        return ExactPolynomial(out)

    def shift_degree(self, n: int) -> "ExactPolynomial":
        """Return ``x**n * p(x)``."""
        if n < 0:
            raise InvalidArgumentError("shift must be nonnegative")
        if self.is_zero:
            return self
        return ExactPolynomial((0,) * n + self.coeffs)

    def compose_affine(self, a: Scalar, b: Scalar = 0) -> "ExactPolynomial":
        """Return ``p(a*x + b)``."""
        lin = ExactPolynomial((b, a))
        result = ExactPolynomial()
        for c in reversed(self.coeffs):
            result = result * lin + c
        return result

    def even_part_in_square(self) -> "ExactPolynomial":
        """For an even polynomial ``p(x) = E(x**2)`` return ``E``."""
        if any(c for c in self.coeffs[1::2]):
            raise InvalidArgumentError("polynomial is not even")
        return ExactPolynomial(self.coeffs[0::2])

    # -- evaluation --------------------------------------------------------

    @cached_property
    def _integer_form(self) -> tuple[tuple[int, ...], int]:
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        return tuple(int(c * den) for c in self.coeffs), den

    def _scaled_numerator(self, x: Fraction) -> int:
        """``p(x) * den * q**deg`` as an exact integer, where ``x = u/q``."""
        ints, _ = self._integer_form
        u, q = x.numerator, x.denominator
        acc = 0
        qp = 1
        for c in reversed(ints):
            acc = acc * u + c * qp
            qp *= q
        return acc

    def exact_value(self, x: Scalar) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        xf = to_fraction(x)
        ints, den = self._integer_form
        return Fraction(self._scaled_numerator(xf), den * xf.denominator ** self.degree)

    def sign_at(self, x: Fraction) -> int:
        if self.is_zero:
            return 0
        s = self._scaled_numerator(x)
        return (s > 0) - (s < 0)

    def __call__(self, x):
        return evaluate(self, x)

    # -- conversion --------------------------------------------------------

    def to_float(self) -> "FloatPolynomial":
        return FloatPolynomial([float(c) for c in self.coeffs])

    def to_exact(self) -> "ExactPolynomial":
        return self


@dataclass(frozen=True)
class FloatPolynomial:
    """Polynomial with double-precision coefficients, ascending order."""

    coeffs: tuple = ()

    def __post_init__(self) -> None:
        vals = [float(c) for c in self.coeffs]
        if not all(math.isfinite(v) for v in vals):
            raise InvalidArgumentError("FloatPolynomial coefficients must be finite")
        object.__setattr__(self, "coeffs", _strip(vals))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> float:
        return self.coeffs[-1] if self.coeffs else 0.0

    def derivative(self) -> "FloatPolynomial":
        return FloatPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def to_exact(self) -> ExactPolynomial:
        return ExactPolynomial(self.coeffs)

    def to_float(self) -> "FloatPolynomial":
        return self

    def __call__(self, x):
        return evaluate(self, x)


Polynomial = Union[ExactPolynomial, FloatPolynomial]


def as_exact(p: Polynomial) -> ExactPolynomial:
    if isinstance(p, ExactPolynomial):
        return p
    if isinstance(p, FloatPolynomial):
        return p.to_exact()
    raise InvalidArgumentError(f"expected a polynomial, got {type(p).__name__}")


@dataclass(frozen=True)
class RootIsolationConfig:
    """Stopping rule for bisection: width <= max(abs_tol, rel_tol * |x|)."""

    abs_tol: float = 1e-13
    rel_tol: float = 1e-12
    max_bisections: int = 200

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise InvalidArgumentError("root isolation tolerances must be positive")
        if self.max_bisections < 1:
            raise InvalidArgumentError("max_bisections must be at least 1")


DEFAULT_CONFIG = RootIsolationConfig()


# ---------------------------------------------------------------------------
# Construction and elementary operations


def from_roots(roots: Iterable[Scalar], leading: Scalar = 1) -> ExactPolynomial:
    """Expand ``leading * prod(x - r)`` exactly."""
    lead = to_fraction(leading)
    if lead == 0:
        raise InvalidArgumentError("leading coefficient must be nonzero")
    coeffs = [lead]
    for r in roots:
        r = to_fraction(r)
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= r * c
        coeffs = nxt
    return ExactPolynomial(coeffs)


def evaluate(p: Polynomial, x):
    """Evaluate ``p`` at ``x``.

    Exact polynomials give a Fraction for rational ``x`` and a correctly
    rounded float for float ``x``; float polynomials use Horner in floats.
    """
    if isinstance(p, FloatPolynomial):
        acc = 0.0
        xv = float(x)
        for c in reversed(p.coeffs):
            acc = acc * xv + c
        return acc
    if isinstance(x, float):
        return float(p.exact_value(x))
    return p.exact_value(x)


def derivative(p: Polynomial) -> Polynomial:
    return p.derivative()


def poly_gcd(a: ExactPolynomial, b: ExactPolynomial) -> ExactPolynomial:
    """Monic greatest common divisor (zero only when both inputs are zero)."""
    while not b.is_zero:
        a, b = b, a % b
    return a.monic() if not a.is_zero else a


def squarefree_part(p: ExactPolynomial) -> ExactPolynomial:
    if p.is_zero:
        raise InvalidArgumentError("the zero polynomial has no squarefree part")
    if p.degree < 1:
        return ExactPolynomial((1,))
    g = poly_gcd(p, p.derivative())
    return (p // g).monic()


def squarefree_decomposition(p: ExactPolynomial) -> list[ExactPolynomial]:
    """Yun's algorithm: monic ``[f1, f2, ...]`` with ``p = c * prod(f_i ** i)``."""
    if p.is_zero:
        raise InvalidArgumentError("the zero polynomial has no squarefree decomposition")
    if p.degree < 1:
        return []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p // a
    c = dp // a
    d = c - b.derivative()
    factors = []
    while b.degree > 0:
        f = poly_gcd(b, d)
        factors.append(f)
        b = b // f
        c = d // f
        d = c - b.derivative()
    return factors


# ---------------------------------------------------------------------------
# Sturm machinery


class SturmChain:
    """Sturm sequence of the squarefree part of a nonzero polynomial."""

    def __init__(self, p: ExactPolynomial):
        if p.is_zero:
            raise InvalidArgumentError("Sturm chain of the zero polynomial")
        s = squarefree_part(p)
        chain = [s]
        if s.degree > 0:
            chain.append(s.derivative())
            while True:
                r = chain[-2] % chain[-1]
                if r.is_zero:
                    break
                # positive rescaling keeps the sign pattern, shrinks the rationals
                chain.append(-r / abs(r.leading))
        self.base = s
        self.chain = chain

    def variations(self, x) -> int:
        if x == math.inf or x == -math.inf:
            signs = []
            for q in self.chain:
                sgn = 1 if q.leading > 0 else -1
                if x < 0 and q.degree % 2:
                    sgn = -sgn
                signs.append(sgn)
        else:
            xf = to_fraction(x)
            signs = [q.sign_at(xf) for q in self.chain]
        signs = [s for s in signs if s]
        return sum(1 for u, v in zip(signs, signs[1:]) if u != v)

    def count(self, lo, hi) -> int:
        """Number of distinct real roots in ``(lo, hi]``."""
        return self.variations(lo) - self.variations(hi)


def _as_extended(x):
    if isinstance(x, float) and math.isinf(x):
        return x
    return to_fraction(x)


def real_root_count(p: ExactPolynomial, lo=-math.inf, hi=math.inf) -> int:
    """Distinct real roots of ``p`` in ``(lo, hi]``; endpoints may be +-inf."""
    p = as_exact(p)
    if p.is_zero:
        raise InvalidArgumentError("root count of the zero polynomial")
    lo, hi = _as_extended(lo), _as_extended(hi)
    if not lo < hi:
        return 0
    return SturmChain(p).count(lo, hi)


def _root_bound(s: ExactPolynomial) -> Fraction:
    """Power of two strictly above the Cauchy bound ``1 + max|a_i/a_n|``."""
    lead = abs(s.leading)
    bound = 1 + max((abs(c) / lead for c in s.coeffs[:-1]), default=Fraction(0))
    k = max(0, math.ceil(math.log2(bound)) + 1)
    return Fraction(2) ** k


def _width_ok(lo: Fraction, hi: Fraction, cfg: RootIsolationConfig) -> bool:
    scale = max(abs(lo), abs(hi))
    return hi - lo <= max(cfg.abs_tol, cfg.rel_tol * float(scale))


def _refine(s: ExactPolynomial, lo: Fraction, hi: Fraction, cfg: RootIsolationConfig) -> Fraction:
    """Bisect the unique simple root of ``s`` in ``(lo, hi]``."""
    sign_hi = s.sign_at(hi)
    if sign_hi == 0:
        return hi
    steps = 0
    while not _width_ok(lo, hi, cfg) and steps < cfg.max_bisections:
        mid = (lo + hi) / 2
        sm = s.sign_at(mid)
        if sm == 0:
            return mid
        if sm == sign_hi:
            hi = mid
        else:
            lo = mid
        steps += 1
    return (lo + hi) / 2


def _shift_sign_variations(p: ExactPolynomial, x: Fraction) -> int:
    """Sign variations of the coefficients of ``p(x + z)`` in ``z``.

    Zero variations certify that ``p`` has no root in ``(x, inf)``.
    """
    ints, _ = p._integer_form
    u, q = x.numerator, x.denominator
    acc: list[int] = []
    qp = 1
    # Horner in z with x + z = (u + q z) / q, everything scaled by q**deg
    for c in reversed(ints):
        nxt = [a * u for a in acc] + [0]
        for i, a in enumerate(acc):
            nxt[i + 1] += a * q
        nxt[0] += c * qp
        acc = nxt
        qp *= q
    signs = [(a > 0) - (a < 0) for a in acc if a]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def _certified_max_root(p: ExactPolynomial, cfg: RootIsolationConfig) -> Fraction | None:
    lead = p.leading
    try:
        approx = np.roots([float(c / lead) for c in reversed(p.coeffs)])
    except (OverflowError, np.linalg.LinAlgError):
        return None
    if not np.all(np.isfinite(approx)):
        return None
    real = [z.real for z in approx if abs(z.imag) <= 1e-7 * (1.0 + abs(z.real))]
    if not real:
        return None
    g = max(real)
    half = max(cfg.abs_tol, cfg.rel_tol * abs(g)) / 2
    lo, hi = Fraction(g - half), Fraction(g + half)
    s_lo, s_hi = p.sign_at(lo), p.sign_at(hi)
    if s_hi == 0 or s_lo * s_hi >= 0:
        return None
    if _shift_sign_variations(p, hi) != 0:
        return None
    return (lo + hi) / 2


def max_real_root_exact(p: Polynomial, cfg: RootIsolationConfig = DEFAULT_CONFIG) -> Fraction:
    """Largest real root as a rational within the ``cfg`` tolerance."""
    p = as_exact(p)
    if p.is_zero:
        raise InvalidArgumentError("max root of the zero polynomial")
    if p.degree < 1:
        raise DomainError("a nonzero constant has no real root")
    fast = _certified_max_root(p, cfg)
    if fast is not None:
        return fast
    return max_real_root_sturm(p, cfg)


def max_real_root_sturm(p: Polynomial, cfg: RootIsolationConfig = DEFAULT_CONFIG) -> Fraction:
    """Largest real root by Sturm isolation and bisection alone."""
    p = as_exact(p)
    if p.degree < 1:
        raise DomainError("a constant has no real root")
    sturm = SturmChain(p)
    s = sturm.base
    bound = _root_bound(s)
    lo, hi = -bound, bound
    n_roots = sturm.count(lo, hi)
    if n_roots == 0:
        raise DomainError("polynomial has no real root")
    steps = 0
    while n_roots > 1 and steps < cfg.max_bisections:
        mid = (lo + hi) / 2
        above = sturm.count(mid, hi)
        if above:
            lo, n_roots = mid, above
        else:
            hi = mid
        steps += 1
    return _refine(s, lo, hi, cfg)


def max_real_root(p: Polynomial, cfg: RootIsolationConfig = DEFAULT_CONFIG) -> float:
    """Largest real root of ``p`` (bisection on the squarefree part)."""
    return float(max_real_root_exact(p, cfg))


def real_roots(p: Polynomial, cfg: RootIsolationConfig = DEFAULT_CONFIG) -> list[tuple[float, int]]:
    """All distinct real roots in ascending order, with multiplicities."""
    p = as_exact(p)
    if p.is_zero:
        raise InvalidArgumentError("roots of the zero polynomial")
    found: list[tuple[Fraction, int]] = []
    for mult, factor in enumerate(squarefree_decomposition(p), start=1):
        if factor.degree < 1:
            continue
        sturm = SturmChain(factor)
        bound = _root_bound(factor)
        stack = [(-bound, bound, sturm.count(-bound, bound))]
        while stack:
            lo, hi, c = stack.pop()
            if c == 0:
                continue
            if c == 1:
                found.append((_refine(factor, lo, hi, cfg), mult))
                continue
            mid = (lo + hi) / 2
            upper = sturm.count(mid, hi)
            stack.append((lo, mid, c - upper))
            stack.append((mid, hi, upper))
    found.sort()
    return [(float(r), m) for r, m in found]


# ---------------------------------------------------------------------------
# Classification and transforms of a single polynomial


@dataclass(frozen=True)
class RootClass:
    """Result of :func:`is_nonneg_rooted`.

    ``kind`` is ``"class"`` for a positive-leading polynomial with only
    nonnegative roots and at least one positive root, ``"closure"`` for
    ``c * x**d`` with ``c > 0``, and ``"neither"`` otherwise.
    """

    nonneg: bool
    kind: str

    def __bool__(self) -> bool:
        return self.nonneg


def is_nonneg_rooted(p: Polynomial) -> RootClass:
    """Decide exactly whether every root of ``p`` is real and nonnegative."""
    p = as_exact(p)
    if p.is_zero:
        raise InvalidArgumentError("root class of the zero polynomial")
    nonneg = True
    for factor in squarefree_decomposition(p):
        if factor.degree < 1:
            continue
        sturm = SturmChain(factor)
        if sturm.count(-math.inf, math.inf) != factor.degree:
            nonneg = False
            break
        negatives = sturm.count(-math.inf, Fraction(0)) - (1 if factor.coeffs[0] == 0 else 0)
        if negatives:
            nonneg = False
            break
    if not nonneg or p.leading < 0:
        return RootClass(nonneg, "neither")
    if all(c == 0 for c in p.coeffs[:-1]):
        return RootClass(True, "closure")
    return RootClass(True, "class")


def log_slope(p: Polynomial, x):
    """``p'(x) / p(x)``."""
    if isinstance(p, FloatPolynomial):
        val = evaluate(p, x)
        if val == 0:
            raise PoleError(f"log-derivative pole at x = {x!r}")
        return evaluate(p.derivative(), x) / val
    val = p.exact_value(x)
    if val == 0:
        raise PoleError(f"log-derivative pole at x = {x!r}")
    out = p.derivative().exact_value(x) / val
    return float(out) if isinstance(x, float) else out


def cauchy_transform(p: Polynomial, x):
    """Degree-normalised Cauchy transform ``p'(x) / (deg(p) * p(x))``."""
    if p.degree < 1:
        raise DomainError("Cauchy transform needs degree >= 1")
    return log_slope(p, x) / p.degree


# ---------------------------------------------------------------------------
# JSON wire format: {"coeffs": ["num/den", ...]} in ascending order


def polynomial_to_json(p: Polynomial) -> dict:
    p = as_exact(p)
    return {"coeffs": [f"{c.numerator}/{c.denominator}" for c in p.coeffs]}


def polynomial_to_float_json(p: Polynomial) -> dict:
    return {"coeffs": [float(c) for c in p.coeffs]}


def polynomial_from_json(obj) -> ExactPolynomial:
    if not isinstance(obj, dict):
        raise InvalidArgumentError("polynomial JSON must be an object with a 'coeffs' field")
    if "coeffs" not in obj:
        raise InvalidArgumentError("polynomial JSON is missing the 'coeffs' field")
    raw = obj["coeffs"]
    if not isinstance(raw, list):
        raise InvalidArgumentError("field 'coeffs' must be a list")
    values = []
    for i, item in enumerate(raw):
        if isinstance(item, bool) or not isinstance(item, (str, int, float)):
            raise InvalidArgumentError(f"field 'coeffs[{i}]' must be a 'num/den' string")
        try:
            values.append(to_fraction(item))
        except InvalidArgumentError as exc:
            raise InvalidArgumentError(f"field 'coeffs[{i}]': {exc}") from exc
    return ExactPolynomial(values)


def parse_roots(text: str) -> list[Fraction]:
    """Parse an inline root list such as ``"1,2,5/2"``."""
    text = text.strip()
    if not text:
        return []
    return [to_fraction(tok) for tok in text.split(",")]


def poly_close(a: Polynomial, b: Polynomial, rel: float) -> bool:
    """Coefficientwise comparison relative to the largest coefficient."""
    ca, cb = as_exact(a).coeffs, as_exact(b).coeffs
    n = max(len(ca), len(cb))
    ca = list(ca) + [Fraction(0)] * (n - len(ca))
    cb = list(cb) + [Fraction(0)] * (n - len(cb))
    scale = max([abs(c) for c in ca + cb], default=Fraction(0))
    if scale == 0:
        return True
    return all(abs(u - v) <= rel * scale for u, v in zip(ca, cb))
