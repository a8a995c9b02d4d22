from __future__ import annotations

from fractions import Fraction

import pytest

from sunitrec.problem import ProblemInstance
from sunitrec.recurrence import new_recurrence
from sunitrec.sunits import PrimeSet

FIXTURES = {
    "fibonacci": ([1, 1], [0, 1]),
    "pell": ([2, 1], [0, 1]),
    "tribonacci": ([1, 1, 1], [0, 0, 1]),
    "mersenne": ([3, -2], [0, 1]),
    "order4": ([-1, 2, 3, 1], [0, 1, 1, 5]),
    "double_root": ([2, -1], [0, 1]),
    "plus_minus_one": ([0, 1], [0, 1]),
    "plus_minus_i": ([0, -1], [0, 1]),
}

# lines collected by the acceptance tests, printed in the terminal summary
ACCEPTANCE_LINES: dict[int, str] = {}


def rec_of(name: str):
    coeffs, initials = FIXTURES[name]
    return new_recurrence(coeffs, initials)


def instance(name: str, primes, r: int = 1, a: int = 1, b: int = 1, eps=Fraction(1), strict: bool = True):
    return ProblemInstance(rec_of(name), PrimeSet.of(primes), a, b, r, Fraction(eps), strict)


@pytest.fixture
def fib():
    return rec_of("fibonacci")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
