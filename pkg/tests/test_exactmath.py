from __future__ import annotations

import random
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from sunitrec.errors import PrecisionExhausted
from sunitrec.exactmath import (
    Ball,
    IntPoly,
    certified_roots,
    cyclotomic,
    poly_resultant,
    precision,
    precision_cap,
    ratio_poly,
    squarefree_part,
)
from sunitrec.exactmath.poly import divides, poly_gcd, totient

X = sympy.Symbol("x")


def to_sympy(p: IntPoly) -> sympy.Poly:
    return sympy.Poly(list(reversed(p.coeffs)), X)


# -- ball arithmetic --

def _random_fraction(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-10 ** 30, 10 ** 30), rng.randint(1, 10 ** 30))


def test_inclusion_monotonicity_ten_thousand_pairs():
    rng = random.Random(1)
    ops = ("+", "-", "*", "/")
    with precision(64):
        for i in range(10 ** 4):
            x, y = _random_fraction(rng), _random_fraction(rng)
            if y == 0:
                y = Fraction(1)
            bx, by = Ball.from_rational(x), Ball.from_rational(y)
            op = ops[i % 4]
            if op == "+":
                assert (bx + by).contains(x + y)
            elif op == "-":
                assert (bx - by).contains(x - y)
            elif op == "*":
                assert (bx * by).contains(x * y)
            elif by.excludes_zero():
                assert (bx / by).contains(x / y)


fractions = st.fractions(min_value=-10 ** 6, max_value=10 ** 6, max_denominator=10 ** 6)


@settings(max_examples=300, deadline=None)
@given(fractions, fractions, fractions, fractions, st.integers(8, 200))
def test_complex_operations_contain_exact_result(a, b, c, d, bits):
    with precision(bits):
        x, y = Ball.from_rational(a, b), Ball.from_rational(c, d)
        prod_re, prod_im = a * c - b * d, a * d + b * c
        assert (x * y).contains((prod_re, prod_im))
        assert (x + y).contains((a + c, b + d))
        if (c, d) != (0, 0) and y.excludes_zero():
            n2 = c * c + d * d
            assert (x / y).contains(((a * c + b * d) / n2, (b * c - a * d) / n2))


@settings(max_examples=200, deadline=None)
@given(fractions, st.integers(0, 12))
def test_integer_power_contains_exact(a, e):
    with precision(40):
        assert (Ball.from_rational(a) ** e).contains(a ** e)


@settings(max_examples=100, deadline=None)
@given(st.fractions(min_value=Fraction(1, 10 ** 6), max_value=10 ** 6))
def test_log_exp_sqrt_enclose_mpmath(x):
    b = Ball.exact(x)
    with mpmath.workdps(60):
        xm = mpmath.mpf(x.numerator) / x.denominator
        for ball, ref in ((b.log(), mpmath.log(xm)), (b.exp() if x < 100 else None, mpmath.exp(xm)),
                          (b.sqrt(), mpmath.sqrt(xm))):
            if ball is None:
                continue
            err = abs(Fraction(str(ref)) - ball.re)
            assert err <= ball.rad + abs(Fraction(str(ref))) * Fraction(1, 10 ** 50)


def test_ball_rejects_invalid():
    with pytest.raises(ValueError):
        Ball(0, 0, -1)
    with pytest.raises(ZeroDivisionError):
        Ball(0, 0, 1).inverse()
    with pytest.raises(ValueError):
        Ball.exact(-1).log()
    with pytest.raises(AttributeError):
        Ball.exact(1).re = 2


# -- polynomials --

def test_resultant_examples():
    assert poly_resultant(IntPoly([-1, 0, 1]), IntPoly([1, 1])) == 0
    assert poly_resultant(IntPoly([-2, 0, 1]), IntPoly([-3, 0, 1])) == 1


def product_formula_resultant(pc: list[int], qc: list[int]) -> int:
    """lead(p)^deg(q) * prod q(root) over the roots of p, at 60 digits, rounded."""
    with mpmath.workdps(60):
        roots = mpmath.polyroots(list(reversed(pc)), maxsteps=500, extraprec=500) if len(pc) > 2 else [
            mpmath.mpf(-pc[0]) / pc[1]]
        acc = mpmath.mpf(pc[-1]) ** (len(qc) - 1)
        for z in roots:
            acc *= mpmath.polyval(list(reversed(qc)), z)
        return int(mpmath.nint(mpmath.re(acc)))


small_polys = st.lists(st.integers(-5, 5), min_size=2, max_size=5).filter(lambda c: c[-1] != 0)


@settings(max_examples=200, deadline=None)
@given(small_polys, small_polys)
def test_resultant_vanishes_iff_common_factor(pc, qc):
    p, q = IntPoly(pc), IntPoly(qc)
    res = poly_resultant(p, q)
    assert res == product_formula_resultant(pc, qc)
    common = sympy.gcd(to_sympy(p), to_sympy(q)).degree() > 0
    assert (res == 0) == common
    assert (res == 0) == (poly_gcd(p, q).degree > 0)


@settings(max_examples=100, deadline=None)
@given(small_polys, small_polys)
def test_resultant_detects_planted_common_factor(pc, qc):
    shared = IntPoly([1, -2, 1, 1])
    assert poly_resultant(IntPoly(pc) * shared, IntPoly(qc) * shared) == 0


def test_cyclotomic_examples():
    assert cyclotomic(1) == IntPoly([-1, 1])
    assert cyclotomic(4) == IntPoly([1, 0, 1])
    assert cyclotomic(6) == IntPoly([1, -1, 1])
    with pytest.raises(ValueError):
        cyclotomic(0)


def test_cyclotomic_products_give_x_to_the_q_minus_one():
    for q in range(1, 201):
        prod = IntPoly([1])
        for d in range(1, q + 1):
            if q % d == 0:
                prod = prod * cyclotomic(d)
        assert prod == IntPoly([-1] + [0] * (q - 1) + [1]), q
        assert cyclotomic(q).degree == totient(q)


def test_cyclotomic_matches_sympy():
    for q in (12, 30, 105, 210):
        assert to_sympy(cyclotomic(q)) == sympy.Poly(sympy.cyclotomic_poly(q, X), X)


def test_squarefree_part_examples():
    assert squarefree_part(IntPoly([4, -4, 1])) == IntPoly([-2, 1])
    assert squarefree_part(IntPoly([-1, -1, 1])) == IntPoly([-1, -1, 1])
    assert squarefree_part(IntPoly([0, 0, -1, 1])) == IntPoly([0, -1, 1])


@settings(max_examples=100, deadline=None)
@given(small_polys, st.integers(1, 3))
def test_squarefree_part_matches_sympy(pc, e):
    p = IntPoly(pc) ** e
    sf = squarefree_part(p)
    ref = sympy.Poly(sympy.quo(to_sympy(p), sympy.gcd(to_sympy(p), to_sympy(p).diff(X))), X)
    ref = sympy.Poly(ref.primitive()[1], X)
    if ref.LC() < 0:
        ref = -ref
    assert to_sympy(sf) == ref
    assert sf.lead > 0 and sf.content() == 1


def test_ratio_poly_fibonacci_has_no_minus_one():
    r = ratio_poly(IntPoly([-1, -1, 1]))
    assert not divides(cyclotomic(2), r)
    assert divides(cyclotomic(2), ratio_poly(IntPoly([-1, 0, 1])))


# -- root isolation --

def test_roots_golden_ratio():
    clusters = certified_roots(IntPoly([-1, -1, 1]))
    assert [c.multiplicity for c in clusters] == [1, 1]
    with mpmath.workdps(50):
        phi = (1 + mpmath.sqrt(5)) / 2
        for c, ref in zip(clusters, (phi, 1 - phi)):
            assert abs(Fraction(str(ref)) - c.ball.re) <= c.ball.rad + Fraction(1, 10 ** 45)


def test_roots_of_unity_and_double_root():
    # equal moduli are ordered by ascending argument
    minus, plus = certified_roots(IntPoly([1, 0, 1]))
    assert plus.ball.contains((0, 1)) and minus.ball.contains((0, -1))
    (double,) = certified_roots(IntPoly([4, -4, 1]))
    assert double.multiplicity == 2 and double.ball.contains(2)


@settings(max_examples=60, deadline=None)
@given(small_polys)
def test_roots_cover_polynomial(pc):
    p = IntPoly(pc)
    clusters = certified_roots(p, Fraction(1, 1 << 40))
    assert sum(c.multiplicity for c in clusters) == p.degree
    # disjoint disks
    for i, a in enumerate(clusters):
        for b in clusters[i + 1:]:
            assert not a.ball.overlaps(b.ball)
    # deterministic ordering by descending modulus
    mods = [c.ball.mid_abs_upper() for c in clusters]
    assert all(x >= y - Fraction(1, 1 << 30) for x, y in zip(mods, mods[1:]))
    assert clusters == certified_roots(p, Fraction(1, 1 << 40))
    # the product of (x - root) reproduces p / lead within interval tolerance
    with precision(256):
        coeffs = [Ball.exact(1)]
        for c in clusters:
            for _ in range(c.multiplicity):
                shifted = [Ball.exact(0)] + coeffs
                coeffs = [s - c.ball * (coeffs[j] if j < len(coeffs) else 0) for j, s in enumerate(shifted)]
        for j, b in enumerate(coeffs):
            tol = Ball(b.re, b.im, b.rad + Fraction(1, 1 << 20))
            assert tol.contains(Fraction(pc[j], pc[-1]))


@settings(max_examples=60, deadline=None)
@given(small_polys)
def test_roots_agree_with_mpmath(pc):
    p = IntPoly(pc)
    sf = squarefree_part(p)
    clusters = certified_roots(p)
    with mpmath.workdps(40):
        refs = mpmath.polyroots(list(reversed(sf.coeffs)), maxsteps=400, extraprec=400)
        refs = [(str(z.real), str(z.imag)) for z in refs]
    for ref in refs:
        hits = [c for c in clusters if c.ball.overlaps(
            Ball(Fraction(ref[0]), Fraction(ref[1]), Fraction(1, 10 ** 30)))]
        assert len(hits) == 1


def test_precision_cap_is_enforced():
    # clustered roots 1/2^100 apart cannot be separated within 64 bits
    p = IntPoly([-1, 1]) * IntPoly([-(2 ** 100) - 1, 2 ** 100])
    with precision_cap(64):
        with pytest.raises(PrecisionExhausted):
            certified_roots(p)
    assert len(certified_roots(p)) == 2


@settings(max_examples=30, deadline=None)
@given(st.integers(-20, 20), st.integers(20, 200))
def test_close_real_roots_are_separated(a, k):
    # roots a and a + 2^-k
    p = IntPoly([-a, 1]) * IntPoly([-(a * 2 ** k + 1), 2 ** k])
    clusters = certified_roots(p)
    assert len(clusters) == 2
    assert all(c.is_real and c.multiplicity == 1 for c in clusters)
    assert any(c.ball.contains(a) for c in clusters)
    assert any(c.ball.contains(a + Fraction(1, 2 ** k)) for c in clusters)
