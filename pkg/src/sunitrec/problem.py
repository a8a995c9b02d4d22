"""The equation instance a*U_n + b*U_m = z_1 + ... + z_r."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .recurrence import LinearRecurrence
from .sunits import PrimeSet


def parse_epsilon(text) -> Fraction:
    """Exact positive rational from "u/v", an integer or a Fraction."""
    if isinstance(text, float):
        raise TypeError("epsilon must be exact; pass a string like '1/2'")
    eps = Fraction(text)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    return eps


@dataclass(frozen=True)
class ProblemInstance:
    rec: LinearRecurrence
    S: PrimeSet
    a: int
    b: int
    r: int
    eps: Fraction
    strict_dominance: bool = True

    def __post_init__(self):
        object.__setattr__(self, "eps", parse_epsilon(self.eps))
        if self.a < 1 or self.b < 1:
            raise ValueError("a and b must be positive")
        if self.r < 1:
            raise ValueError("r must be positive")

    @property
    def ell(self) -> int:
        return len(self.S)

    def to_json(self) -> dict:
        return {
            "recurrence": {
                "coefficients": [str(c) for c in self.rec.coefficients],
                "initials": [str(u) for u in self.rec.initials],
            },
            "primes": [str(p) for p in self.S.primes],
            "a": str(self.a),
            "b": str(self.b),
            "r": self.r,
            "epsilon": f"{self.eps.numerator}/{self.eps.denominator}",
            "strict_dominance": self.strict_dominance,
        }
