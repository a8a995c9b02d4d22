"""Deterministic decimal rendering of exact rationals and balls for JSON reports."""

from __future__ import annotations

from fractions import Fraction

from .exactmath.ball import Ball

DIGITS = 20


def _floor_log10(x: Fraction) -> int:
    # x > 0
    e = len(str(x.numerator)) - len(str(x.denominator))
    while Fraction(10) ** e > x:
        e -= 1
    while Fraction(10) ** (e + 1) <= x:
        e += 1
    return e


def fmt_directed(x: Fraction, up: bool, digits: int = DIGITS) -> str:
    """Scientific notation rounded toward +inf (up) or -inf (down)."""
    x = Fraction(x)
    if x == 0:
        return "0"
    neg = x < 0
    mag = -x if neg else x
    # rounding the magnitude away from zero gives an upper bound for positives
    away = up != neg
    e = _floor_log10(mag)
    scaled = mag / Fraction(10) ** (e - digits + 1)
    m = -((-scaled.numerator) // scaled.denominator) if away else scaled.numerator // scaled.denominator
    if m >= 10 ** digits:
        m //= 10
        e += 1
        if away and Fraction(m) * Fraction(10) ** (e - digits + 1) < mag:
            m += 1
    s = str(m)
    body = s[0] + ("." + s[1:].rstrip("0") if s[1:].rstrip("0") else "")
    return f"{'-' if neg else ''}{body}e{e:+d}"


def fmt_up(x: Fraction, digits: int = DIGITS) -> str:
    return fmt_directed(x, True, digits)


def fmt_down(x: Fraction, digits: int = DIGITS) -> str:
    return fmt_directed(x, False, digits)


def parse_decimal(s: str) -> Fraction:
    """Exact value of a decimal string written by fmt_directed."""
    return Fraction(s)


def ball_json(b: Ball) -> dict:
    out = {"mid_re": str(b.re), "mid_im": str(b.im), "radius": str(b.rad)}
    approx = f"{float(b.re):.15g}"
    if b.im:
        approx += f"{float(b.im):+.15g}i"
    out["approx"] = approx
    return out
