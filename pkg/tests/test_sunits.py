from __future__ import annotations

from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from sunitrec.errors import NotSmooth
from sunitrec.sunits import (
    PrimeSet,
    SUnit,
    admissible_tuples,
    dominates,
    enumerate_sunits,
    factor_over_S,
    is_prime,
    tuple_dominance,
)


def divisibility_scan(primes, bound):
    """Integers 1..bound with no prime factor outside primes, by trial division."""
    out = []
    for n in range(1, bound + 1):
        m = n
        for p in primes:
            while m % p == 0:
                m //= p
        if m == 1:
            out.append(n)
    return out


def test_is_prime_matches_sympy():
    for n in list(range(-5, 3000)) + [2 ** 61 - 1, 2 ** 64 + 13, 2 ** 89 - 1, 3215031751, 3825123056546413051]:
        assert is_prime(n) == sympy.isprime(n), n


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 2 ** 80))
def test_is_prime_property(n):
    assert is_prime(n) == sympy.isprime(n)


def test_prime_set_validation():
    assert PrimeSet.of([5, 2, 3, 2]).primes == (2, 3, 5)
    for bad in ((3, 2), (2, 4), (), (2, 2)):
        with pytest.raises(ValueError):
            PrimeSet(bad)


def test_enumeration_counts():
    assert len(enumerate_sunits(PrimeSet((2, 3)), 10)) == 14
    for bound in (10 ** 2, 10 ** 3):
        units = enumerate_sunits(PrimeSet((2, 3, 5)), bound)
        assert sorted({abs(u.value) for u in units}) == divisibility_scan((2, 3, 5), bound)
        assert len(units) == 2 * len(divisibility_scan((2, 3, 5), bound))


@pytest.mark.parametrize("primes,bound", [((2,), 1 << 20), ((2, 3), 10 ** 5), ((3, 7, 11), 10 ** 5)])
def test_round_trip_and_order(primes, bound):
    S = PrimeSet(primes)
    units = enumerate_sunits(S, bound)
    keys = [u.key() for u in units]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)
    for u in units:
        assert factor_over_S(u.value, S) == u
        assert SUnit.build(S, u.sign, u.exponents) == u


def test_factor_errors():
    S = PrimeSet((2, 3))
    with pytest.raises(ValueError):
        factor_over_S(0, S)
    with pytest.raises(NotSmooth):
        factor_over_S(10, S)
    assert factor_over_S(-12, S) == SUnit(-1, (2, 1), -12)
    with pytest.raises(ValueError):
        SUnit.build(S, 0, (1, 1))
    with pytest.raises(ValueError):
        SUnit.build(S, 1, (1,))


@settings(max_examples=300, deadline=None)
@given(st.integers(-10 ** 12, 10 ** 12).filter(bool))
def test_factor_matches_sympy(z):
    S = PrimeSet((2, 3, 5, 7))
    smooth = set(sympy.factorint(abs(z))) <= {2, 3, 5, 7}
    try:
        u = factor_over_S(z, S)
    except NotSmooth:
        assert not smooth
    else:
        assert smooth and u.value == z


@settings(max_examples=500, deadline=None)
@given(st.integers(-10 ** 6, 10 ** 6).filter(bool), st.integers(-10 ** 9, 10 ** 9).filter(bool),
       st.fractions(min_value=Fraction(1, 50), max_value=100, max_denominator=50), st.booleans())
def test_dominance_is_exact(zi, zr, eps, strict):
    u, v = eps.numerator, eps.denominator
    a, b = abs(zi) ** (u + v), abs(zr) ** v
    assert dominates(zi, zr, eps, strict) == (a < b if strict else a <= b)


def test_dominance_boundary():
    # 4^(1+1/2) = 8 exactly
    assert not dominates(4, 8, Fraction(1, 2), strict=True)
    assert dominates(4, -8, Fraction(1, 2), strict=False)
    assert not dominates(1, 1, Fraction(1), strict=True)
    assert dominates(-1, 1, Fraction(1), strict=False)
    assert tuple_dominance([5], Fraction(1))


def _scan_tuples(S, r, eps, zmax, strict=True):
    units = enumerate_sunits(S, zmax)
    out = set()
    for combo in product(units, repeat=r):
        if tuple_dominance([u.value for u in combo], eps, strict):
            head = tuple(sorted(combo[:-1], key=SUnit.key))
            out.add(head + (combo[-1],))
    return out


def test_admissible_pairs_against_scan():
    S = PrimeSet((2,))
    got = list(admissible_tuples(S, 2, Fraction(1), 8))
    assert set(got) == _scan_tuples(S, 2, Fraction(1), 8)
    assert len(got) == len(set(got))
    vals = {(a.value, b.value) for a, b in got}
    assert (1, 8) in vals and (-2, -8) in vals and (-1, 4) in vals and (2, 4) not in vals


@pytest.mark.parametrize("primes,r,eps,zmax,strict", [
    ((2, 3), 3, Fraction(1, 2), 40, True),
    ((2, 3), 3, Fraction(1, 2), 40, False),
    ((3,), 3, Fraction(1, 3), 81, True),
])
def test_admissible_tuples_canonical_and_complete(primes, r, eps, zmax, strict):
    S = PrimeSet(primes)
    got = list(admissible_tuples(S, r, eps, zmax, strict))
    assert len(got) == len(set(got))
    assert set(got) == _scan_tuples(S, r, eps, zmax, strict)
    for t in got:
        keys = [u.key() for u in t[:-1]]
        assert keys == sorted(keys)


def test_admissible_special_cases():
    S = PrimeSet((2, 3))
    assert [t[0] for t in admissible_tuples(S, 1, Fraction(5), 50)] == enumerate_sunits(S, 50)
    big_eps = list(admissible_tuples(S, 2, Fraction(100), 100))
    assert big_eps and all(abs(t[0].value) == 1 for t in big_eps)
    with pytest.raises(ValueError):
        list(admissible_tuples(S, 0, Fraction(1), 10))
