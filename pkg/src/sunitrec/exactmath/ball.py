"""Complex midpoint-radius arithmetic over dyadic rationals.

Midpoints are rounded to the working precision after every operation and the
rounding error is pushed into the radius, so every result encloses all exact
results obtainable from operands inside the input balls. Radii are kept as
short dyadics rounded upward.

Transcendental functions of real balls (log, exp, real powers, pi, e) are
delegated to mpmath's interval context, which rounds outward.
"""

from __future__ import annotations

from contextlib import contextmanager
from contextvars import ContextVar
from fractions import Fraction
from math import isqrt
from typing import Callable, Iterator, Union

from mpmath import iv

from ..errors import PrecisionExhausted

DEFAULT_PRECISION = 128
DEFAULT_PRECISION_CAP = 1 << 16
_RAD_BITS = 40

_precision: ContextVar[int] = ContextVar("sunitrec_precision", default=DEFAULT_PRECISION)
_precision_cap: ContextVar[int] = ContextVar("sunitrec_precision_cap", default=DEFAULT_PRECISION_CAP)

ZERO = Fraction(0)
Rational = Union[int, Fraction]


def get_precision() -> int:
    return _precision.get()


def get_precision_cap() -> int:
    return _precision_cap.get()


@contextmanager
def precision(bits: int) -> Iterator[int]:
    """Run a block at the given working precision (bits of midpoint mantissa)."""
    if bits > _precision_cap.get():
        raise PrecisionExhausted(f"requested {bits} bits exceeds cap {_precision_cap.get()}")
    token = _precision.set(bits)
    try:
        yield bits
    finally:
        _precision.reset(token)


@contextmanager
def precision_cap(bits: int) -> Iterator[int]:
    token = _precision_cap.set(bits)
    try:
        yield bits
    finally:
        _precision_cap.reset(token)


def precision_schedule(start: int = DEFAULT_PRECISION) -> Iterator[int]:
    """Doubling precisions from ``start`` up to the cap; the caller raises when it runs dry."""
    cap = _precision_cap.get()
    p = start
    while p <= cap:
        yield p
        p *= 2


def _dyadic(m: int, e: int) -> Fraction:
    return Fraction(m << e) if e >= 0 else Fraction(m, 1 << -e)


def round_nearest(x: Fraction, prec: int) -> tuple[Fraction, Fraction]:
    """Round x to a dyadic with ``prec`` significant bits; returns (value, |error|)."""
    if x == 0:
        return ZERO, ZERO
    n, d = x.numerator, x.denominator
    if d & (d - 1) == 0 and abs(n).bit_length() <= prec:
        return x, ZERO
    e = abs(n).bit_length() - d.bit_length() - prec
    if e >= 0:
        num, den = n, d << e
    else:
        num, den = n << -e, d
    m, rem = divmod(num, den)
    if 2 * rem >= den:
        m += 1
    val = _dyadic(m, e)
    return val, abs(val - x)


def round_up(x: Fraction, bits: int = _RAD_BITS) -> Fraction:
    """Smallest short dyadic >= x (x >= 0 expected for radii, works for any sign)."""
    if x == 0:
        return ZERO
    n, d = x.numerator, x.denominator
    if d & (d - 1) == 0 and abs(n).bit_length() <= bits:
        return x
    e = abs(n).bit_length() - d.bit_length() - bits
    if e >= 0:
        num, den = n, d << e
    else:
        num, den = n << -e, d
    m = -((-num) // den)
    return _dyadic(m, e)


def round_down(x: Fraction, bits: int = _RAD_BITS) -> Fraction:
    return -round_up(-x, bits)


def sqrt_up(q: Fraction, bits: int = 64) -> Fraction:
    """Dyadic upper bound of sqrt(q), q >= 0."""
    if q <= 0:
        return ZERO
    j = max(0, bits - (q.numerator.bit_length() - q.denominator.bit_length()) // 2)
    scaled = q * (1 << (2 * j))
    n = -((-scaled.numerator) // scaled.denominator)
    r = isqrt(n)
    if r * r < n:
        r += 1
    return Fraction(r, 1 << j)


def sqrt_down(q: Fraction, bits: int = 64) -> Fraction:
    """Dyadic lower bound of sqrt(q), q >= 0."""
    if q <= 0:
        return ZERO
    j = max(0, bits - (q.numerator.bit_length() - q.denominator.bit_length()) // 2)
    scaled = q * (1 << (2 * j))
    return Fraction(isqrt(scaled.numerator // scaled.denominator), 1 << j)


def _abs_up(re: Fraction, im: Fraction) -> Fraction:
    if im == 0:
        return abs(re)
    if re == 0:
        return abs(im)
    return sqrt_up(re * re + im * im)


def _abs_down(re: Fraction, im: Fraction) -> Fraction:
    if im == 0:
        return abs(re)
    if re == 0:
        return abs(im)
    return sqrt_down(re * re + im * im)


class Ball:
    """Closed disk {z : |z - (re + i im)| <= rad} in the complex plane."""

    __slots__ = ("re", "im", "rad")

    def __init__(self, re: Rational = 0, im: Rational = 0, rad: Rational = 0):
        if rad < 0:
            raise ValueError("radius must be nonnegative")
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))
        object.__setattr__(self, "rad", round_up(Fraction(rad)))

    def __setattr__(self, name, value):
        raise AttributeError("Ball is immutable")

    # -- construction --

    @classmethod
    def exact(cls, x: Rational) -> "Ball":
        """Exact ball, no rounding (any rational midpoint)."""
        return cls(x, 0, 0)

    @classmethod
    def from_rational(cls, x: Rational, im: Rational = 0) -> "Ball":
        """Ball with dyadic midpoint enclosing x + i im at the working precision."""
        p = get_precision()
        r, er = round_nearest(Fraction(x), p)
        i, ei = round_nearest(Fraction(im), p)
        return cls(r, i, er + ei)

    @classmethod
    def from_interval(cls, lo: Rational, hi: Rational) -> "Ball":
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise ValueError("empty interval")
        mid, err = round_nearest((lo + hi) / 2, get_precision())
        return cls(mid, 0, (hi - lo) / 2 + err)

    @staticmethod
    def _coerce(x: Union["Ball", Rational]) -> "Ball":
        if isinstance(x, Ball):
            return x
        if isinstance(x, (int, Fraction)):
            return Ball.exact(x)
        raise TypeError(f"cannot use {type(x).__name__} as a Ball")

    @staticmethod
    def _make(re: Fraction, im: Fraction, rad: Fraction) -> "Ball":
        p = get_precision()
        r, er = round_nearest(re, p)
        i, ei = round_nearest(im, p)
        return Ball(r, i, rad + er + ei)

    # -- arithmetic --

    def __add__(self, other):
        o = Ball._coerce(other)
        return Ball._make(self.re + o.re, self.im + o.im, self.rad + o.rad)

    __radd__ = __add__

    def __neg__(self) -> "Ball":
        return Ball(-self.re, -self.im, self.rad)

    def __sub__(self, other):
        o = Ball._coerce(other)
        return Ball._make(self.re - o.re, self.im - o.im, self.rad + o.rad)

    def __rsub__(self, other):
        return Ball._coerce(other) - self

    def __mul__(self, other):
        o = Ball._coerce(other)
        re = self.re * o.re - self.im * o.im
        im = self.re * o.im + self.im * o.re
        rad = ZERO
        if self.rad or o.rad:
            rad = self.mid_abs_upper() * o.rad + o.mid_abs_upper() * self.rad + self.rad * o.rad
        return Ball._make(re, im, rad)

    __rmul__ = __mul__

    def inverse(self) -> "Ball":
        m_lo = self.mid_abs_lower()
        if m_lo <= self.rad:
            raise ZeroDivisionError("ball contains zero")
        n2 = self.re * self.re + self.im * self.im
        rad = ZERO
        if self.rad:
            rad = self.rad / ((m_lo - self.rad) * m_lo)
        return Ball._make(self.re / n2, -self.im / n2, rad)

    def __truediv__(self, other):
        return self * Ball._coerce(other).inverse()

    def __rtruediv__(self, other):
        return Ball._coerce(other) * self.inverse()

    def __pow__(self, e: int) -> "Ball":
        if not isinstance(e, int):
            raise TypeError("use pow_real for non-integer exponents")
        if e < 0:
            return (self ** (-e)).inverse()
        out = Ball.exact(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def conjugate(self) -> "Ball":
        return Ball(self.re, -self.im, self.rad)

    # -- queries --

    def mid_abs_upper(self) -> Fraction:
        return _abs_up(self.re, self.im)

    def mid_abs_lower(self) -> Fraction:
        return _abs_down(self.re, self.im)

    def abs_upper(self) -> Fraction:
        """Upper bound of |z| over the ball."""
        return self.mid_abs_upper() + self.rad

    def abs_lower(self) -> Fraction:
        """Lower bound of |z| over the ball (0 if the ball meets the origin)."""
        return max(ZERO, self.mid_abs_lower() - self.rad)

    def abs(self) -> "Ball":
        """Real ball enclosing |z|."""
        return Ball.from_interval(self.abs_lower(), self.abs_upper())

    def is_real(self) -> bool:
        return self.im == 0

    def lower(self) -> Fraction:
        self._require_real()
        return self.re - self.rad

    def upper(self) -> Fraction:
        self._require_real()
        return self.re + self.rad

    def contains(self, x: Union[Rational, tuple]) -> bool:
        if isinstance(x, tuple):
            xr, xi = Fraction(x[0]), Fraction(x[1])
        else:
            xr, xi = Fraction(x), ZERO
        dr, di = xr - self.re, xi - self.im
        return dr * dr + di * di <= self.rad * self.rad

    def contains_ball(self, other: "Ball") -> bool:
        dr, di = other.re - self.re, other.im - self.im
        if self.rad < other.rad:
            return False
        gap = self.rad - other.rad
        return dr * dr + di * di <= gap * gap

    def contains_zero(self) -> bool:
        return self.contains(0)

    def excludes_zero(self) -> bool:
        return not self.contains_zero()

    def overlaps(self, other: "Ball") -> bool:
        dr, di = other.re - self.re, other.im - self.im
        s = self.rad + other.rad
        return dr * dr + di * di <= s * s

    def _require_real(self) -> None:
        if self.im != 0:
            raise ValueError("operation requires a real ball")

    # -- real functions --

    def log(self) -> "Ball":
        if self.lower() <= 0:
            raise ValueError("log of a ball that is not strictly positive")
        return _iv_apply(iv.log, self)

    def exp(self) -> "Ball":
        return _iv_apply(iv.exp, self)

    def sqrt(self) -> "Ball":
        if self.lower() < 0:
            raise ValueError("sqrt of a ball meeting the negative axis")
        return _iv_apply(iv.sqrt, self)

    def pow_real(self, exponent: Union["Ball", Rational]) -> "Ball":
        """self ** exponent for a strictly positive real ball."""
        if self.lower() <= 0:
            raise ValueError("real power needs a strictly positive base")
        return (self.log() * Ball._coerce(exponent)).exp()

    def max(self, other) -> "Ball":
        o = Ball._coerce(other)
        return Ball.from_interval(max(self.lower(), o.lower()), max(self.upper(), o.upper()))

    def min(self, other) -> "Ball":
        o = Ball._coerce(other)
        return Ball.from_interval(min(self.lower(), o.lower()), min(self.upper(), o.upper()))

    # -- misc --

    def __repr__(self) -> str:
        return f"Ball({float(self.re):.17g}{float(self.im):+.17g}j ± {float(self.rad):.3g})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Ball) and (self.re, self.im, self.rad) == (other.re, other.im, other.rad)

    def __hash__(self) -> int:
        return hash((self.re, self.im, self.rad))


def pi() -> Ball:
    return _iv_const(lambda: iv.pi)


def euler_e() -> Ball:
    return _iv_const(lambda: iv.e)


def _to_iv(x: Fraction):
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


def _raw_to_fraction(raw: tuple) -> Fraction:
    sign, man, exp, bc = raw
    if man == 0:
        if bc != 0 or exp != 0:
            raise ArithmeticError("non-finite interval endpoint")
        return ZERO
    v = _dyadic(int(man), int(exp))
    return -v if sign else v


def _from_iv(x) -> Ball:
    lo_raw, hi_raw = x._mpi_
    return Ball.from_interval(_raw_to_fraction(lo_raw), _raw_to_fraction(hi_raw))


def _iv_apply(fn: Callable, b: Ball) -> Ball:
    old = iv.prec
    iv.prec = get_precision() + 16
    try:
        lo, hi = _to_iv(b.lower()), _to_iv(b.upper())
        arg = iv.mpf([lo.a, hi.b])
        return _from_iv(fn(arg))
    finally:
        iv.prec = old


def _iv_const(fn: Callable) -> Ball:
    old = iv.prec
    iv.prec = get_precision() + 16
    try:
        return _from_iv(fn())
    finally:
        iv.prec = old


def log_int(n: int) -> Ball:
    """Real ball enclosing log n, n >= 1."""
    if n < 1:
        raise ValueError("log of a nonpositive integer")
    if n == 1:
        return Ball.exact(0)
    return Ball.exact(n).log()
