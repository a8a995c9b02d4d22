"""Logarithmic heights and explicit growth constants of a Binet form.

All constants are certified one-sided bounds: upper bounds are rounded up,
lower bounds rounded down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactmath.ball import Ball, log_int, round_down, round_up
from .exactmath.poly import IntPoly
from .exactmath.roots import RootCluster
from .recurrence import BinetForm, LinearRecurrence, SpectralData

# refinement of the small-n regime stops here; beyond it the Liouville bound is used
SMALL_N_SCAN_LIMIT = 1 << 14


@dataclass(frozen=True)
class HeightBound:
    value: Ball  # natural-log scale
    is_exact: bool

    def upper(self) -> Fraction:
        return self.value.upper()


def height_rational(p: int, q: int = 1) -> HeightBound:
    """h(p/q) = log max(|p|, q) after reducing the fraction."""
    if q == 0:
        raise ZeroDivisionError("denominator must be nonzero")
    x = Fraction(p, q)
    return HeightBound(log_int(max(abs(x.numerator), x.denominator)), True)


def _log_max1(lo: Fraction, hi: Fraction) -> Ball:
    """Ball enclosing log max(1, x) for x in [lo, hi]."""
    lo, hi = max(lo, Fraction(1)), max(hi, Fraction(1))
    if hi == 1:
        return Ball.exact(0)
    return Ball.from_interval(lo, hi).log()


def log_mahler_measure(f: IntPoly, roots: Sequence[RootCluster]) -> Ball:
    """Ball enclosing log M(f) = log|lead| + sum over roots of log max(1, |root|)."""
    if sum(c.multiplicity for c in roots) != f.degree:
        raise ValueError("root clusters do not match the polynomial degree")
    acc = log_int(abs(f.lead))
    for c in roots:
        acc = acc + _log_max1(c.ball.abs_lower(), c.ball.abs_upper()) * c.multiplicity
    return acc


def height_upper_from_poly(f: IntPoly, roots: Sequence[RootCluster], index: int) -> HeightBound:
    """Upper bound log M(f) for the height of the index-th root of f."""
    if not 0 <= index < len(roots):
        raise IndexError("root index out of range")
    exact = f.degree == 1 and f.content() == 1
    return HeightBound(log_mahler_measure(f, roots), exact)


def degree_bound(k: int, t: int) -> int:
    """Degree of the splitting field is at most k! and, crudely, at most k^t."""
    return min(k ** t, math.factorial(k))


@dataclass(frozen=True)
class GrowthConstants:
    height_bound: Fraction  # upper bound for h(alpha_i) and h(beta_{i,l})
    coeff_lower: Fraction  # |f_i(n)| >= this when f_i(n) != 0, n >= 1
    coeff_upper: Fraction  # |f_i(n)| <= this * n^(m_i - 1), n >= 1
    term_upper: Fraction  # |U_n| <= this * n^(k-1) * alpha^n, n >= 1
    n_threshold: int  # beyond it the top coefficient dominates every f_i
    degree_bound: int

    def to_json(self) -> dict:
        from .report import fmt_down, fmt_up

        return {
            "height_bound": fmt_up(self.height_bound),
            "coeff_lower": fmt_down(self.coeff_lower),
            "coeff_upper": fmt_up(self.coeff_upper),
            "term_upper": fmt_up(self.term_upper),
            "n_threshold": self.n_threshold,
            "degree_bound": self.degree_bound,
        }


def _column_norms(bf: BinetForm) -> list[Fraction]:
    size = bf.min_poly.degree
    norms = []
    for i in bf.active:
        a = bf.roots[i].abs_upper()
        for l in range(len(bf.coeff_polys[i])):
            sq = sum((Fraction(n) ** l * a ** n) ** 2 for n in range(size))
            norms.append(round_up(Fraction(math.isqrt(math.ceil(sq)) + 1)))
    return norms


def binet_height_bound(rec: LinearRecurrence, bf: BinetForm) -> Fraction:
    """Upper bound for h(beta_{i,l}) from Cramer's rule.

    Every entry n^l alpha_i^n of the system is an algebraic integer and Galois
    conjugation only permutes its columns, so Hadamard's bound on the
    determinants bounds all conjugates; h(x/y) <= h(x) + h(y) <= 2 log max(1, H).
    """
    norms = _column_norms(bf)
    rhs = math.isqrt(sum(u * u for u in rec.terms(len(norms)))) + 1
    prod = Fraction(1)
    for v in norms:
        prod *= v
    hadamard = max(prod, prod / min(norms) * rhs, Fraction(1))
    return round_up(2 * Ball.exact(hadamard).log().upper())


def _liouville_lower(height: Fraction, degree: int) -> Fraction:
    """|xi| >= exp(-2 D h(xi)) for nonzero algebraic xi of degree <= D."""
    return round_down((Ball.exact(-2 * degree * height)).exp().lower())


def growth_constants(rec: LinearRecurrence, bf: BinetForm, spectral: SpectralData) -> GrowthConstants:
    """Explicit height, coefficient and term-size constants for the Binet form."""
    k, t = rec.order, spectral.t
    D = degree_bound(k, t)
    h_alpha = log_mahler_measure(spectral.char_poly, spectral.roots).upper()
    height = round_up(max(h_alpha, binet_height_bound(rec, bf)))

    betas = [b for i in bf.active for b in bf.coeff_polys[i]]
    beta_max = max(b.abs_upper() for b in betas)
    m_max = max(len(bf.coeff_polys[i]) for i in bf.active)
    coeff_upper = round_up(max(t, m_max) * beta_max)
    term_upper = round_up(t * coeff_upper)

    lows = []
    threshold = 1
    for i in bf.active:
        poly = bf.coeff_polys[i]
        top = poly[-1].abs_lower()
        if len(poly) == 1:
            lows.append(top)
            continue
        rest = sum(b.abs_upper() for b in poly[:-1])
        n0 = max(1, math.ceil(2 * rest / top))
        threshold = max(threshold, n0)
        # n >= n0: |f_i(n)| >= |top| n^(m-1) / 2 >= |top| / 2
        lows.append(top / 2)
        scan = min(n0, SMALL_N_SCAN_LIMIT)
        need_liouville = n0 > SMALL_N_SCAN_LIMIT
        for n in range(1, scan):
            v = bf.f_value(i, n)
            if v.excludes_zero():
                lows.append(v.abs_lower())
            else:
                need_liouville = True
        if need_liouville:
            m = len(poly)
            log_n = log_int(max(n0, 2)).upper()
            h_xi = m * height + Fraction(m * (m - 1), 2) * log_n + log_int(m).upper()
            lows.append(_liouville_lower(h_xi, D))
    coeff_lower = round_down(min(lows))
    return GrowthConstants(height, coeff_lower, coeff_upper, term_upper, threshold, D)

