from __future__ import annotations

import json
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import instance
from sunitrec.bounds import (
    IMPL_CHOICE,
    PROOF_CHAIN,
    MatveevInput,
    chain_inputs,
    final_bound,
    gap_bound,
    matveev_C,
    matveev_lower_bound,
    solve_n_log_bound,
    solve_n_polylog_bound,
    zr_log_bound,
)
from sunitrec.errors import (
    DegenerateRecurrence,
    DominantRootIntegerGt1,
    DominantRootNotRealGt1,
    Eta1Uncertified,
    InvalidMatveevInput,
    NoDominantRoot,
    NotConstantLeadCoefficient,
)
from sunitrec.exactmath import Ball
from sunitrec.exactmath.ball import log_int
from sunitrec.heights import growth_constants
from sunitrec.problem import ProblemInstance
from sunitrec.recurrence import binet_decomposition, new_recurrence, spectral_data
from sunitrec.search import brute_solutions
from sunitrec.sunits import PrimeSet


def custom_instance(coeffs, initials, primes=(2,), r=1, eps=Fraction(1), a=1, b=1):
    return ProblemInstance(new_recurrence(coeffs, initials), PrimeSet.of(primes), a, b, r, Fraction(eps))


def pieces(inst):
    rec = inst.rec
    spectral = spectral_data(rec)
    bf = binet_decomposition(rec, spectral)
    return spectral, bf, growth_constants(rec, bf, spectral)


# -- Matveev --

def test_matveev_constant_values():
    assert abs(float(matveev_C(1, 1).upper()) - 1.1009e6) < 1e3
    assert abs(float(matveev_C(2, 1).upper()) - 7.47e8) < 1e6
    assert matveev_C(2, 2).upper() > matveev_C(2, 1).upper()


@pytest.mark.parametrize("kappa", [1, 2])
def test_matveev_constant_nondecreasing(kappa):
    seq = [matveev_C(m, kappa) for m in range(1, 31)]
    for prev, nxt in zip(seq, seq[1:]):
        assert prev.upper() <= nxt.lower()


def test_matveev_input_validation():
    with pytest.raises(InvalidMatveevInput):
        MatveevInput(1, 1, 1, Fraction(1), (Fraction(1, 10),))
    with pytest.raises(InvalidMatveevInput):
        MatveevInput(1, 1, 1, Fraction(1, 2), (Fraction(1),))
    with pytest.raises(InvalidMatveevInput):
        MatveevInput(2, 1, 1, Fraction(1), (Fraction(1),))
    with pytest.raises(InvalidMatveevInput):
        matveev_C(0, 1)
    with pytest.raises(InvalidMatveevInput):
        matveev_C(1, 3)


def test_matveev_lower_bound_scales_with_log_eb():
    def at(B):
        return matveev_lower_bound(MatveevInput(2, 2, 3, Fraction(B), (Fraction(1), Fraction(2))))
    ratio = at(20) / at(10)
    with mpmath.workdps(40):
        ref = mpmath.log(20 * mpmath.e) / mpmath.log(10 * mpmath.e)
        assert ratio.overlaps(Ball(Fraction(str(ref)), 0, Fraction(1, 10 ** 35)))
    assert at(20).upper() < at(10).lower() < 0


# -- implicit inequality solver --

def test_solve_examples():
    assert [solve_n_log_bound(Fraction(c)) for c in (1, 10, 100)] == [2, 35, 647]
    assert solve_n_log_bound(Fraction(27, 10)) == 2
    with pytest.raises(ValueError):
        solve_n_log_bound(Fraction(0))
    with pytest.raises(ValueError):
        solve_n_polylog_bound(Fraction(1), 0)


def _holds(n: int, c: Fraction, power: int) -> bool:
    with mpmath.workdps(80):
        return n <= mpmath.mpf(c.numerator) / c.denominator * mpmath.log(n) ** power


@settings(max_examples=150, deadline=None)
@given(st.fractions(min_value=1, max_value=10 ** 6, max_denominator=10 ** 4))
def test_solve_is_maximal(c):
    n0 = solve_n_log_bound(c)
    assert not _holds(n0 + 1, c, 1)
    assert not _holds(2 * n0 + 7, c, 1)
    if n0 > 2:
        assert _holds(n0, c, 1)


@settings(max_examples=80, deadline=None)
@given(st.fractions(min_value=1, max_value=10 ** 5, max_denominator=100))
def test_solve_quadratic_log_is_maximal(c):
    n0 = solve_n_polylog_bound(c, 2)
    assert not _holds(n0 + 1, c, 2)
    assert not _holds(3 * n0 + 7, c, 2)
    if n0 > 2:
        assert _holds(n0, c, 2)


def test_solve_handles_huge_constants():
    c = Fraction(10 ** 40)
    n0 = solve_n_polylog_bound(c, 2)
    assert not _holds(n0 + 1, c, 2) and _holds(n0, c, 2)


# -- chain pieces --

def test_shrink_factor_branches():
    # Fibonacci, eps = 1: alpha^(-1/2) ~ 0.786 beats 1/alpha and |alpha_2|/alpha
    fib = instance("fibonacci", (2,))
    spectral, bf, g = pieces(fib)
    ci = chain_inputs(fib, g, spectral, bf)
    assert abs(float(ci.theta_hi) - 0.7861513777574233) < 1e-12
    # x^2 - 5x + 5 with a large eps: the ratio branch |alpha_2|/alpha ~ 0.382 wins
    inst = custom_instance([5, -5], [0, 1], eps=Fraction(1000))
    spectral, bf, g = pieces(inst)
    ci = chain_inputs(inst, g, spectral, bf)
    ratio = spectral.second_modulus.upper() / spectral.dominant.ball.lower()
    assert ci.theta_hi >= ratio and ci.theta_hi - ratio < Fraction(1, 10 ** 15)
    assert abs(float(ci.theta_hi) - 0.3819660112501051) < 1e-12


def test_zr_bound_shape():
    fib = instance("fibonacci", (2,))
    spectral, bf, g = pieces(fib)
    slope, offset = zr_log_bound(fib, g, spectral)
    assert slope >= log_int(2).upper() / 2  # at least log(golden ratio) ~ 0.481
    assert offset > slope
    # the offset does not grow with eps
    offsets = []
    for eps in (Fraction(1, 2), Fraction(1), Fraction(10 ** 6)):
        inst = instance("fibonacci", (2, 3), r=3, eps=eps)
        offsets.append(zr_log_bound(inst, g, spectral)[1])
    assert offsets[0] >= offsets[1] >= offsets[2]


def test_gap_bound_is_deterministic_and_positive():
    inst = instance("pell", (2, 3), r=2)
    spectral, bf, g = pieces(inst)
    first, second = gap_bound(inst, g, bf, spectral), gap_bound(inst, g, bf, spectral)
    assert first == second
    assert first.constant >= max(first.ratio_constant, first.baker_constant) > 0


# -- certificates --

def test_fibonacci_certificate():
    inst = instance("fibonacci", (2, 3, 5))
    cert = final_bound(inst)
    data = cert.to_json()
    assert 10 ** 40 < cert.N0 < 10 ** 70
    assert cert.N0 == max(2, *cert.case_bounds.values())
    assert cert.Z0_log_upper >= cert.zr_linear[0] * cert.N0 + cert.zr_linear[1]
    assert json.dumps(data) == json.dumps(final_bound(inst).to_json())
    names = [e["name"] for e in data["constants_trace"]]
    assert len(names) == len(set(names))
    assert {e["provenance"] for e in data["constants_trace"]} <= {PROOF_CHAIN, IMPL_CHOICE}
    assert data["final_log_power"] == 2


SOUNDNESS_CASES = [
    ("fibonacci", (2,), 1), ("fibonacci", (2, 3), 2), ("pell", (2, 3), 2),
    ("tribonacci", (2,), 2), ("fibonacci", (2, 3, 5), 3), ("order4", (2, 3), 1),
]


@pytest.mark.parametrize("name,primes,r", SOUNDNESS_CASES)
def test_search_solutions_respect_certificate(name, primes, r):
    inst = instance(name, primes, r=r, eps=Fraction(1, 2))
    cert = final_bound(inst)
    slope, offset = cert.zr_linear
    sols = brute_solutions(inst, 40, 1 << 16, require_dominance=True, require_size=True)
    for s in sols:
        assert s.n <= cert.N0
        assert s.n - s.m <= cert.gap_constant * log_int(max(s.n, 3)).lower()
        assert log_int(abs(s.summands[-1].value)).upper() < slope * s.n + offset


@pytest.mark.parametrize("name,small,large", [
    ("fibonacci", (2,), (2, 3)),
    ("pell", (2, 3), (2, 3, 5)),
    ("tribonacci", (3,), (2, 3)),
])
def test_more_primes_never_lower_the_bound(name, small, large):
    assert final_bound(instance(name, large)).N0 >= final_bound(instance(name, small)).N0


@pytest.mark.parametrize("name,primes", [("fibonacci", (2,)), ("pell", (2, 3)), ("tribonacci", (2, 5))])
def test_more_summands_never_lower_the_bound(name, primes):
    bounds = [final_bound(instance(name, primes, r=r)).N0 for r in (1, 2, 3)]
    assert bounds == sorted(bounds)


def test_refusals():
    with pytest.raises(DegenerateRecurrence):
        final_bound(instance("plus_minus_one", (2,)))
    with pytest.raises(DominantRootIntegerGt1):
        final_bound(instance("mersenne", (2,), r=2))
    with pytest.raises(NotConstantLeadCoefficient):
        final_bound(instance("double_root", (2,)))
    # dominant root -(3 + sqrt 5)/2 is negative
    with pytest.raises(DominantRootNotRealGt1):
        final_bound(custom_instance([-3, -1], [0, 1]))
    # Fibonacci inside a recurrence whose dominant root 2 + sqrt 3 never occurs
    with pytest.raises(Eta1Uncertified):
        final_bound(custom_instance([5, -4, -3, 1], [0, 1, 1, 2]))
    # x^2 - 2x + 5: roots 1 +- 2i share the top modulus, ratio not a root of unity
    with pytest.raises(NoDominantRoot):
        final_bound(custom_instance([2, -5], [0, 1]))
