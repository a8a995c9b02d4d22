"""S-units: factorization over a prime set, bounded enumeration, admissible tuples."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Sequence

from .errors import NotSmooth

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Miller-Rabin; the fixed bases make it deterministic below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeSet:
    primes: tuple[int, ...]

    def __post_init__(self):
        ps = tuple(int(p) for p in self.primes)
        object.__setattr__(self, "primes", ps)
        if not ps:
            raise ValueError("prime set must be nonempty")
        if any(q <= p for p, q in zip(ps, ps[1:])):
            raise ValueError("primes must be strictly increasing")
        bad = [p for p in ps if not is_prime(p)]
        if bad:
            raise ValueError(f"not prime: {bad}")

    @classmethod
    def of(cls, primes: Iterable[int]) -> "PrimeSet":
        """Sorted, deduplicated construction."""
        return cls(tuple(sorted(set(int(p) for p in primes))))

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes)


@dataclass(frozen=True)
class SUnit:
    sign: int
    exponents: tuple[int, ...]
    value: int

    @classmethod
    def build(cls, S: PrimeSet, sign: int, exponents: Sequence[int]) -> "SUnit":
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if len(exponents) != len(S) or any(e < 0 for e in exponents):
            raise ValueError("need one nonnegative exponent per prime")
        v = sign
        for p, e in zip(S.primes, exponents):
            v *= p ** e
        return cls(sign, tuple(exponents), v)

    def key(self) -> tuple[int, int]:
        """Canonical order: by absolute value, negative before positive."""
        return (abs(self.value), self.sign)

    def __str__(self) -> str:
        return str(self.value)


def factor_over_S(z: int, S: PrimeSet) -> SUnit:
    if z == 0:
        raise ValueError("0 is not an S-unit")
    sign = 1 if z > 0 else -1
    rest = abs(z)
    exps = []
    for p in S.primes:
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        exps.append(e)
    if rest != 1:
        raise NotSmooth(f"{z} has a prime factor outside {list(S.primes)}")
    return SUnit(sign, tuple(exps), z)


def _positive_units(S: PrimeSet, bound: int) -> list[tuple[int, tuple[int, ...]]]:
    out = []

    def walk(i: int, value: int, exps: list[int]) -> None:
        if i == len(S.primes):
            out.append((value, tuple(exps)))
            return
        p = S.primes[i]
        e = 0
        while value <= bound:
            exps.append(e)
            walk(i + 1, value, exps)
            exps.pop()
            value *= p
            e += 1

    walk(0, 1, [])
    out.sort()
    return out


def enumerate_sunits(S: PrimeSet, bound: int) -> list[SUnit]:
    """All S-units with |value| <= bound, sorted by (|value|, sign)."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    units = []
    for v, exps in _positive_units(S, bound):
        units.append(SUnit(-1, exps, -v))
        units.append(SUnit(1, exps, v))
    return units


def dominates(zi: int, zr: int, eps: Fraction, strict: bool = True) -> bool:
    """|zi|^(1+eps) < |zr| (or <= when not strict), decided exactly."""
    x, y = abs(zi), abs(zr)
    u, v = eps.numerator, eps.denominator
    if x == 1:
        return 1 < y or (not strict and y == 1)
    # fast path on logs, exact comparison near the boundary
    lhs = (u + v) * math.log(x)
    rhs = v * math.log(y)
    margin = 1e-9 * max(1.0, abs(lhs), abs(rhs))
    if lhs < rhs - margin:
        return True
    if lhs > rhs + margin:
        return False
    a, b = x ** (u + v), y ** v
    return a < b or (not strict and a == b)


def tuple_dominance(values: Sequence[int], eps: Fraction, strict: bool = True) -> bool:
    """The dominance condition for the last entry over all earlier ones."""
    zr = values[-1]
    return all(dominates(z, zr, eps, strict) for z in values[:-1])


def admissible_tuples(
    S: PrimeSet, r: int, eps: Fraction, zmax: int, strict: bool = True
) -> Iterator[tuple[SUnit, ...]]:
    """Canonical r-tuples with the dominance condition; the first r-1 entries are sorted."""
    if r < 1:
        raise ValueError("r must be positive")
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    units = enumerate_sunits(S, zmax)
    if r == 1:
        for u in units:
            yield (u,)
        return
    for zr in units:
        small = [u for u in units if dominates(u.value, zr.value, eps, strict)]
        for head in combinations_with_replacement(small, r - 1):
            yield head + (zr,)

