"""Exact rational arithmetic and certified comparisons against the regime thresholds.

Rationals are :class:`fractions.Fraction` instances throughout the package.
This module adds the parsing/printing convention, a small closed interval type
with rational endpoints, and the two threshold comparisons used for regime
selection:

* ``sigma`` (about 2.14790), the positive root of ``x^4 - 3x^2 - 3x - 1``. Compared
  by the exact sign of the homogenized polynomial.
* ``tau`` (about 3.1527), given by nested radicals. Compared by refining a
  certified interval enclosure until the comparison resolves.
* ``rho`` (about 2.02309), the positive root of ``x^5 + 2x^4 - x^3 - 10x^2 - 8x - 2``,
  where the two inner symmetric uniform pieces cross. Compared like sigma.
"""

from __future__ import annotations

import operator
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Sequence, Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")

# Hard cap on dyadic refinement depth for the tau enclosure.
TAU_MAX_DEPTH = 4096


class ExactMathError(RuntimeError):
    """An internal invariant of the exact layer was violated."""


class Side(str, Enum):
    BELOW = "below"
    ABOVE = "above"


def parse_rational(text: RationalLike) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` (decimal integers, optional leading minus).

    Integers and Fractions pass through unchanged.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise TypeError(f"cannot parse {type(text).__name__} as a rational")
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        raise ValueError(f"not a rational of the form p or p/q: {text!r}")
    value = Fraction(s)  # raises ZeroDivisionError on q == 0
    return value


def format_rational(value: Fraction | int) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


_ARITH: dict[str, Callable[[Fraction, Fraction], object]] = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


def rational_arith(a: RationalLike, b: RationalLike, op: str) -> Fraction | int:
    """Apply ``op`` in {add, sub, mul, div, cmp} to two rationals.

    ``cmp`` returns -1, 0 or 1. Division by zero raises ``ZeroDivisionError``.
    """
    x, y = parse_rational(a), parse_rational(b)
    if op == "cmp":
        return (x > y) - (x < y)
    try:
        fn = _ARITH[op]
    except KeyError:
        raise ValueError(f"unknown rational operation {op!r}") from None
    return fn(x, y)


@dataclass(frozen=True)
class RationalInterval:
    """Closed interval ``[lo, hi]`` with exact rational endpoints.

    Endpoint arithmetic is exact, so every operation trivially contains the
    exact real result; :meth:`round_outward` coarsens endpoints onto a dyadic
    grid to keep numerator sizes bounded.
    """

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, value: RationalLike) -> RationalInterval:
        v = parse_rational(value)
        return cls(v, v)

    @staticmethod
    def _coerce(other: object) -> RationalInterval:
        if isinstance(other, RationalInterval):
            return other
        if isinstance(other, (int, Fraction)):
            return RationalInterval(Fraction(other), Fraction(other))
        return NotImplemented  # type: ignore[return-value]

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, value: object) -> bool:
        if isinstance(value, RationalInterval):
            return self.lo <= value.lo and value.hi <= self.hi
        return self.lo <= value <= self.hi  # type: ignore[operator]

    def __add__(self, other: object) -> RationalInterval:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RationalInterval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self) -> RationalInterval:
        return RationalInterval(-self.hi, -self.lo)

    def __sub__(self, other: object) -> RationalInterval:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RationalInterval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other: object) -> RationalInterval:
        return -self + other

    def __mul__(self, other: object) -> RationalInterval:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RationalInterval(min(products), max(products))

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> RationalInterval:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval divisor contains zero")
        return self * RationalInterval(1 / o.hi, 1 / o.lo)

    def __rtruediv__(self, other: object) -> RationalInterval:
        return self._coerce(other) / self

    def __pow__(self, k: int) -> RationalInterval:
        result = RationalInterval.point(1)
        for _ in range(k):
            result = result * self
        return result

    def round_outward(self, bits: int) -> RationalInterval:
        """Smallest interval on the ``2**-bits`` grid that contains ``self``."""
        scale = 1 << bits
        lo = Fraction((self.lo * scale).__floor__(), scale)
        hi = Fraction((self.hi * scale).__ceil__(), scale)
        return RationalInterval(lo, hi)

    def __str__(self) -> str:
        return f"[{format_rational(self.lo)}, {format_rational(self.hi)}]"


# ---------------------------------------------------------------------------
# k-th root enclosures by bisection


def _floor_root_scaled(c: Fraction, k: int, depth: int) -> int:
    """Largest integer ``m >= 0`` with ``(m / 2**depth)**k <= c``, by bisection."""
    if c < 0:
        raise ValueError("root of a negative number")
    # (m / 2^d)^k <= p/q  <=>  m^k * q <= p * 2^(d*k)
    p, q = c.numerator, c.denominator
    target = p << (depth * k)
    lo, hi = 0, 1
    while hi**k * q <= target:
        hi <<= 1
    # invariant: lo^k q <= target < hi^k q
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if mid**k * q <= target:
            lo = mid
        else:
            hi = mid
    return lo


def root_enclosure(c: RationalInterval | RationalLike, k: int, depth: int) -> RationalInterval:
    """Enclose the real ``k``-th root of a nonnegative interval on the ``2**-depth`` grid.

    The lower end is the largest grid point whose ``k``-th power is below
    ``c.lo``; the upper end is one grid step above the corresponding point for
    ``c.hi``. Enclosures are nested under increasing ``depth``.
    """
    if not isinstance(c, RationalInterval):
        c = RationalInterval.point(c)
    scale = 1 << depth
    lo = Fraction(_floor_root_scaled(c.lo, k, depth), scale)
    hi = Fraction(_floor_root_scaled(c.hi, k, depth) + 1, scale)
    return RationalInterval(lo, hi)


def tau_enclosure(depth: int) -> RationalInterval:
    """Certified enclosure of ``tau = (2 + cbrt(62 - 3 sqrt 183) + cbrt(62 + 3 sqrt 183)) / 3``.

    Width shrinks like ``2**-depth``; enclosures are nested in ``depth``.
    """
    if depth < 1:
        raise ValueError("depth must be positive")
    root183 = root_enclosure(183, 2, depth)
    u = root_enclosure(62 - 3 * root183, 3, depth)
    v = root_enclosure(62 + 3 * root183, 3, depth)
    return (2 + u + v) / 3


def _check_weights(w1: RationalLike, w2: RationalLike) -> tuple[Fraction, Fraction]:
    a, b = parse_rational(w1), parse_rational(w2)
    if a < 0 or b <= 0:
        raise ValueError(f"need w1 >= 0 and w2 > 0, got ({a}, {b})")
    return a, b


def sigma_polynomial_sign(w1: RationalLike, w2: RationalLike) -> int:
    """Sign of ``w1^4 - 3 w1^2 w2^2 - 3 w1 w2^3 - w2^4``."""
    a, b = parse_rational(w1), parse_rational(w2)
    value = a**4 - 3 * a**2 * b**2 - 3 * a * b**3 - b**4
    return (value > 0) - (value < 0)


def compare_ratio_to_sigma(w1: RationalLike, w2: RationalLike) -> Side:
    """Decide whether ``w1 / w2`` lies below or above sigma (about 2.14790)."""
    a, b = _check_weights(w1, w2)
    sign = sigma_polynomial_sign(a, b)
    if sign == 0:
        raise ExactMathError(f"polynomial vanished at rational ratio {a}/{b}; sigma is irrational")
    return Side.ABOVE if sign > 0 else Side.BELOW


def compare_ratio_to_tau(
    w1: RationalLike, w2: RationalLike, *, max_depth: int = TAU_MAX_DEPTH
) -> Side:
    """Decide whether ``w1 / w2`` lies below or above tau (about 3.1527).

    The enclosure of tau is refined (depth doubling from 16) until the ratio
    falls strictly outside it.
    """
    a, b = _check_weights(w1, w2)
    ratio = a / b
    depth = 16
    while depth <= max_depth:
        enc = tau_enclosure(depth)
        if ratio < enc.lo:
            return Side.BELOW
        if ratio > enc.hi:
            return Side.ABOVE
        depth *= 2
    raise ExactMathError(f"tau comparison unresolved at depth {max_depth} for ratio {ratio}")


def ratio_in_closed_range(
    w1: Fraction, w2: Fraction, lo: Fraction | None, hi: Fraction | None
) -> bool:
    """``lo * w2 <= w1 <= hi * w2`` for rational bounds (``None`` = unbounded)."""
    if lo is not None and w1 < lo * w2:
        return False
    if hi is not None and w1 > hi * w2:
        return False
    return True


# ---------------------------------------------------------------------------
# Univariate polynomials with rational coefficients (lowest degree first)

Poly = Sequence[Fraction]


def poly_eval(p: Poly, x):
    """Horner evaluation; works for Fractions and RationalIntervals alike."""
    acc = Fraction(0) if not isinstance(x, RationalInterval) else RationalInterval.point(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_mul(p: Poly, q: Poly) -> list[Fraction]:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def poly_sub(p: Poly, q: Poly) -> list[Fraction]:
    n = max(len(p), len(q))
    out = [Fraction(0)] * n
    for i, a in enumerate(p):
        out[i] += a
    for i, b in enumerate(q):
        out[i] -= b
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def poly_derivative(p: Poly) -> list[Fraction]:
    if len(p) <= 1:
        return [Fraction(0)]
    return [Fraction(i) * c for i, c in enumerate(p) if i > 0]


def quotient_derivative_numerator(num: Poly, den: Poly) -> list[Fraction]:
    """Numerator ``num' * den - num * den'`` of the derivative of ``num / den``."""
    return poly_sub(poly_mul(poly_derivative(num), den), poly_mul(num, poly_derivative(den)))


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def homogeneous_sign(p: Poly, w1: RationalLike, w2: RationalLike) -> int:
    """Sign of ``w2^d p(w1 / w2)`` for ``p`` of degree ``d`` (exact, allows ``w2 = 0``)."""
    a, b = parse_rational(w1), parse_rational(w2)
    d = len(p) - 1
    return _sign(sum((c * a**k * b ** (d - k) for k, c in enumerate(p)), Fraction(0)))


RHO_POLY: tuple[Fraction, ...] = tuple(Fraction(c) for c in (-2, -8, -10, -1, 2, 1))


def compare_ratio_to_rho(w1: RationalLike, w2: RationalLike) -> Side:
    """Decide whether ``w1 / w2`` lies below or above rho (about 2.02309)."""
    a, b = _check_weights(w1, w2)
    if a / b <= 1:
        return Side.BELOW
    sign = homogeneous_sign(RHO_POLY, a, b)
    if sign == 0:
        raise ExactMathError(f"polynomial vanished at rational ratio {a}/{b}; rho is irrational")
    return Side.ABOVE if sign > 0 else Side.BELOW


def isolate_root(p: Poly, lo: RationalLike, hi: RationalLike, width: RationalLike) -> RationalInterval:
    """Bisect a sign change of ``p`` on ``[lo, hi]`` down to the given width.

    Signs are evaluated exactly. Raises ``ValueError`` when the endpoints do
    not bracket a sign change.
    """
    a, b, w = parse_rational(lo), parse_rational(hi), parse_rational(width)
    sa, sb = _sign(poly_eval(p, a)), _sign(poly_eval(p, b))
    if sa == 0:
        return RationalInterval(a, a)
    if sb == 0:
        return RationalInterval(b, b)
    if sa == sb:
        raise ValueError(f"no sign change of polynomial on [{a}, {b}]")
    while b - a > w:
        m = (a + b) / 2
        sm = _sign(poly_eval(p, m))
        if sm == 0:
            return RationalInterval(m, m)
        if sm == sa:
            a = m
        else:
            b = m
    return RationalInterval(a, b)
