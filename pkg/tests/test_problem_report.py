from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import rec_of
from sunitrec.exactmath import Ball
from sunitrec.problem import ProblemInstance, parse_epsilon
from sunitrec.report import ball_json, fmt_down, fmt_up, parse_decimal
from sunitrec.sunits import PrimeSet


def test_parse_epsilon():
    assert parse_epsilon("1/2") == Fraction(1, 2)
    assert parse_epsilon(3) == 3
    with pytest.raises(TypeError):
        parse_epsilon(0.5)
    for bad in ("0", "-1/3"):
        with pytest.raises(ValueError):
            parse_epsilon(bad)


def test_problem_instance_validation_and_json():
    inst = ProblemInstance(rec_of("fibonacci"), PrimeSet((2, 3)), 1, 2, 3, "2/4")
    assert inst.eps == Fraction(1, 2) and inst.ell == 2
    assert inst.to_json()["epsilon"] == "1/2"
    for a, b, r in ((0, 1, 1), (1, -1, 1), (1, 1, 0)):
        with pytest.raises(ValueError):
            ProblemInstance(rec_of("fibonacci"), PrimeSet((2,)), a, b, r, Fraction(1))


@settings(max_examples=500, deadline=None)
@given(st.fractions(min_value=-10 ** 30, max_value=10 ** 30), st.integers(1, 25))
def test_directed_rounding(x, digits):
    up, down = parse_decimal(fmt_up(x, digits)), parse_decimal(fmt_down(x, digits))
    assert down <= x <= up
    if x:
        assert (up - down) <= abs(x) * Fraction(10) ** (2 - digits)


def test_directed_rounding_examples():
    assert fmt_up(Fraction(1, 3), 3) == "3.34e-1"
    assert fmt_down(Fraction(1, 3), 3) == "3.33e-1"
    assert fmt_up(Fraction(-1, 3), 3) == "-3.33e-1"
    assert fmt_up(Fraction(9999, 1000), 3) == "1e+1"
    assert fmt_up(0) == "0"


def test_ball_json_is_exact():
    b = Ball(Fraction(1, 3), Fraction(-1, 8), Fraction(1, 1024))
    data = ball_json(b)
    assert Fraction(data["mid_re"]) == b.re and Fraction(data["radius"]) == b.rad
    assert data["approx"].endswith("i")
