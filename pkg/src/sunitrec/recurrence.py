"""Integer linear recurrences: exact terms, spectral data, degeneracy, Binet form."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    DominanceUndecided,
    Eta1Uncertified,
    InvalidRecurrence,
    NoDominantRoot,
    NotConstantLeadCoefficient,
)
from .exactmath.ball import Ball, get_precision_cap, precision, precision_schedule
from .exactmath.poly import IntPoly, cyclotomic, divides, poly_gcd, ratio_poly, squarefree_part, totient
from .exactmath.roots import RootCluster, certified_roots, root_multiplicities


@dataclass(frozen=True)
class LinearRecurrence:
    """U_n = a_1 U_{n-1} + ... + a_k U_{n-k} with integer data."""

    coefficients: tuple[int, ...]
    initials: tuple[int, ...]
    _cache: list = field(default_factory=list, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(int(a) for a in self.coefficients))
        object.__setattr__(self, "initials", tuple(int(u) for u in self.initials))
        k = len(self.coefficients)
        if k < 2:
            raise InvalidRecurrence("order must be at least 2")
        if len(self.initials) != k:
            raise InvalidRecurrence(f"need {k} initial terms, got {len(self.initials)}")
        if self.coefficients[-1] == 0:
            raise InvalidRecurrence("last coefficient a_k must be nonzero")
        if not any(self.initials):
            raise InvalidRecurrence("initial terms must not all be zero")
        self._cache.extend(self.initials)

    @property
    def order(self) -> int:
        return len(self.coefficients)

    def char_poly(self) -> IntPoly:
        """x^k - a_1 x^{k-1} - ... - a_k."""
        return IntPoly([-a for a in reversed(self.coefficients)] + [1])

    def term(self, n: int) -> int:
        if n < 0:
            raise ValueError("index must be nonnegative")
        cache = self._cache
        k = self.order
        a = self.coefficients
        while len(cache) <= n:
            cache.append(sum(a[i] * cache[-1 - i] for i in range(k)))
        return cache[n]

    def terms(self, count: int) -> list[int]:
        self.term(max(count - 1, 0))
        return self._cache[:count]


def new_recurrence(coeffs: Sequence[int], initials: Sequence[int]) -> LinearRecurrence:
    return LinearRecurrence(tuple(coeffs), tuple(initials))


def term(rec: LinearRecurrence, n: int) -> int:
    return rec.term(n)


def gamma(rec: LinearRecurrence) -> int:
    """Largest absolute value among the coefficients and initial terms."""
    return max(max(abs(a) for a in rec.coefficients), max(abs(u) for u in rec.initials))


def minimal_polynomial(rec: LinearRecurrence) -> IntPoly:
    """Monic characteristic polynomial of the shortest recurrence the sequence satisfies.

    Berlekamp-Massey over Q on the first 2k terms; the result divides the
    characteristic polynomial, and its roots are exactly the roots whose Binet
    coefficient polynomial is not identically zero.
    """
    s = [Fraction(u) for u in rec.terms(2 * rec.order)]
    c = [Fraction(1)]
    b = [Fraction(1)]
    length, shift, last = 0, 1, Fraction(1)
    for n in range(len(s)):
        disc = s[n] + sum(c[i] * s[n - i] for i in range(1, length + 1))
        if disc == 0:
            shift += 1
            continue
        coef = disc / last
        new_c = c + [Fraction(0)] * max(0, len(b) + shift - len(c))
        for i, bi in enumerate(b):
            new_c[i + shift] -= coef * bi
        if 2 * length <= n:
            b, length, last, shift = c, n + 1 - length, disc, 1
        else:
            shift += 1
        c = new_c
    c = (c + [Fraction(0)] * (length + 1))[: length + 1]
    # connection polynomial 1 + c1 x + ... + cL x^L  ->  x^L + c1 x^{L-1} + ... + cL
    coeffs = list(reversed(c))
    if any(x.denominator != 1 for x in coeffs):
        raise ArithmeticError("minimal polynomial is not integral")
    return IntPoly(int(x) for x in coeffs)


# -- spectral analysis --

@dataclass(frozen=True)
class SpectralData:
    char_poly: IntPoly
    roots: tuple[RootCluster, ...]
    dominance: str  # "dominant", "none" or "undecided"
    dominant_index: Optional[int]
    dominant_is_simple: bool
    dominant_is_real: bool
    dominant_is_integer_gt1: bool
    second_modulus: Optional[Ball]

    @property
    def t(self) -> int:
        return len(self.roots)

    @property
    def dominant(self) -> RootCluster:
        if self.dominant_index is None:
            raise NoDominantRoot("no dominant root")
        return self.roots[self.dominant_index]

    def to_json(self) -> dict:
        from .report import ball_json

        return {
            "char_poly": str(self.char_poly),
            "roots": [
                {"center_re": str(c.ball.re), "center_im": str(c.ball.im), "radius": str(c.ball.rad),
                 "multiplicity": c.multiplicity, "approx": ball_json(c.ball)["approx"]}
                for c in self.roots
            ],
            "dominance": self.dominance,
            "dominant_index": self.dominant_index,
            "dominant_is_simple": self.dominant_is_simple,
            "dominant_is_real": self.dominant_is_real,
            "dominant_is_integer_gt1": self.dominant_is_integer_gt1,
            "second_modulus_upper": None if self.second_modulus is None else str(self.second_modulus.upper()),
        }


def _modulus_intervals(clusters: Sequence[RootCluster]) -> list[tuple[Fraction, Fraction]]:
    return [(c.ball.abs_lower(), c.ball.abs_upper()) for c in clusters]


def _cluster_of(clusters: Sequence[RootCluster], ball: Ball) -> Optional[int]:
    hits = [i for i, c in enumerate(clusters) if c.ball.overlaps(ball)]
    return hits[0] if len(hits) == 1 else None


def _equal_modulus_partner(f: IntPoly, clusters: Sequence[RootCluster], i: int) -> Optional[int]:
    """Index of another cluster provably of the same modulus as cluster i, if found."""
    c = clusters[i]
    if not c.is_real:
        return _cluster_of(clusters, c.ball.conjugate())
    g = poly_gcd(f, f.reflect())
    if g.degree < 1:
        return None
    mults = root_multiplicities(clusters, g)
    if mults is None or mults[i] == 0:
        return None
    j = _cluster_of(clusters, -c.ball)
    return j if j is not None and j != i else None


def _classify(f: IntPoly, clusters: Sequence[RootCluster]) -> tuple[str, Optional[int]]:
    mods = _modulus_intervals(clusters)
    top = max(range(len(clusters)), key=lambda i: mods[i][1])
    if all(mods[top][0] > mods[j][1] for j in range(len(clusters)) if j != top):
        return "dominant", top
    # Roots with a provable equal-modulus partner are never dominant; any other
    # root is excluded once it is no larger than some tied pair.
    tied: set[int] = set()
    for i in range(len(clusters)):
        j = _equal_modulus_partner(f, clusters, i)
        if j is not None:
            tied.update((i, j))
    if tied:
        floor = max(mods[i][0] for i in tied)
        if all(mods[m][1] <= floor for m in range(len(clusters)) if m not in tied):
            return "none", None
    return "undecided", None


def spectral_data(rec: LinearRecurrence, strict: bool = True) -> SpectralData:
    """Certified roots of the characteristic polynomial and dominance classification.

    With ``strict`` (default) a missing or undecided dominant root raises; the
    non-strict form returns the verdict in ``dominance`` instead.
    """
    f = rec.char_poly()
    cap = get_precision_cap()
    bits = 64
    verdict, dom, clusters = "undecided", None, None
    while bits <= cap:
        clusters = certified_roots(f, Fraction(1, 1 << bits), start_prec=min(bits, 64))
        verdict, dom = _classify(f, clusters)
        if verdict != "undecided":
            break
        bits *= 2
    if strict and verdict == "none":
        raise NoDominantRoot(f"characteristic polynomial {f} has several roots of maximal modulus")
    if strict and verdict == "undecided":
        raise DominanceUndecided(f"dominance for {f} unresolved within {cap} bits")

    simple = real = integer_gt1 = False
    second = None
    if dom is not None:
        d = clusters[dom]
        simple = d.multiplicity == 1
        real = d.is_real
        if real:
            lo, hi = d.ball.lower(), d.ball.upper()
            a_k = rec.coefficients[-1]
            cand = range(max(2, -(-lo.numerator // lo.denominator)), hi.numerator // hi.denominator + 1)
            integer_gt1 = any(a_k % n == 0 and f(n) == 0 for n in cand)
        others = [m for i, m in enumerate(_modulus_intervals(clusters)) if i != dom]
        if others:
            second = Ball.from_interval(max(lo for lo, _ in others), max(hi for _, hi in others))
    return SpectralData(
        char_poly=f,
        roots=tuple(clusters),
        dominance=verdict,
        dominant_index=dom,
        dominant_is_simple=simple,
        dominant_is_real=real,
        dominant_is_integer_gt1=integer_gt1,
        second_modulus=second,
    )


def is_degenerate(rec: LinearRecurrence) -> bool:
    """Exact test: does some ratio of distinct characteristic roots have finite order?

    Every such ratio is a root of R = ratio_poly(squarefree part); a ratio of
    order q has degree phi(q) <= k^2 and phi(q) >= sqrt(q/2), so q <= 2k^4.
    """
    sf = squarefree_part(rec.char_poly())
    if sf.degree <= 1:
        return False
    r = ratio_poly(sf)
    k = rec.order
    for q in range(2, 2 * k ** 4 + 1):
        if totient(q) > r.degree:
            continue
        if divides(cyclotomic(q), r):
            return True
    return False


# -- Binet decomposition --

@dataclass(frozen=True)
class BinetForm:
    """U_n = sum_i f_i(n) alpha_i^n with ball coefficients.

    ``coeff_polys[i]`` lists beta_{i,0}, beta_{i,1}, ... for root i (aligned
    with the spectral data); it is empty for roots that do not occur in the
    sequence's minimal recurrence.
    """

    roots: tuple[Ball, ...]
    coeff_polys: tuple[tuple[Ball, ...], ...]
    eta1: Ball
    dominant_index: int
    min_poly: IntPoly
    precision: int

    def f_value(self, i: int, n: int) -> Ball:
        acc = Ball.exact(0)
        with precision(self.precision):
            for c in reversed(self.coeff_polys[i]):
                acc = acc * n + c
        return acc

    def evaluate(self, n: int) -> Ball:
        with precision(self.precision):
            total = Ball.exact(0)
            for i, alpha in enumerate(self.roots):
                if self.coeff_polys[i]:
                    total = total + self.f_value(i, n) * alpha ** n
            return total

    @property
    def active(self) -> list[int]:
        return [i for i, c in enumerate(self.coeff_polys) if c]


def _refined_roots(spectral: SpectralData, bits: int) -> Optional[list[Ball]]:
    fresh = certified_roots(spectral.char_poly, Fraction(1, 1 << bits), start_prec=min(bits, 64))
    out: list[Optional[Ball]] = [None] * len(spectral.roots)
    for c in fresh:
        j = _cluster_of(spectral.roots, c.ball)
        if j is None or out[j] is not None:
            return None
        out[j] = c.ball
    return out  # type: ignore[return-value]


def _solve(matrix: list[list[Ball]], rhs: list[Ball]) -> Optional[list[Ball]]:
    n = len(rhs)
    a = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: a[r][col].abs_lower())
        if a[piv][col].abs_lower() == 0:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col].inverse()
        for r in range(col + 1, n):
            if a[r][col].abs_upper() == 0:
                continue
            factor = a[r][col] * inv
            for c in range(col, n + 1):
                a[r][c] = a[r][c] - factor * a[col][c]
    x: list[Ball] = [Ball.exact(0)] * n
    for r in range(n - 1, -1, -1):
        acc = a[r][n]
        for c in range(r + 1, n):
            acc = acc - a[r][c] * x[c]
        x[r] = acc / a[r][r]
    return x


def binet_decomposition(rec: LinearRecurrence, spectral: SpectralData, start_prec: int = 128) -> BinetForm:
    """Solve the confluent Vandermonde system for the Binet coefficients.

    Precision doubles until the leading coefficient of every occurring f_i,
    and in particular eta_1, is certified nonzero.
    """
    if spectral.dominant_index is None:
        raise NoDominantRoot("Binet form needs a dominant root")
    dom = spectral.dominant_index
    g = minimal_polynomial(rec)
    for prec in precision_schedule(start_prec):
        with precision(prec):
            alphas = _refined_roots(spectral, prec + 8)
            if alphas is None:
                continue
            clusters = [RootCluster(b, c.multiplicity) for b, c in zip(alphas, spectral.roots)]
            mults = root_multiplicities(clusters, g)
            if mults is None:
                continue
            if mults[dom] == 0:
                raise Eta1Uncertified("the dominant root does not occur in the sequence (eta_1 = 0)")
            if mults[dom] > 1:
                raise NotConstantLeadCoefficient(
                    f"dominant root has multiplicity {mults[dom]} in the minimal recurrence"
                )
            cols = [(i, l) for i, m in enumerate(mults) for l in range(m)]
            size = len(cols)
            powers = [[Ball.exact(1)] for _ in alphas]
            for i, a in enumerate(alphas):
                for _ in range(1, size):
                    powers[i].append(powers[i][-1] * a)
            matrix = [[powers[i][n] * n ** l for i, l in cols] for n in range(size)]
            rhs = [Ball.exact(u) for u in rec.terms(size)]
            sol = _solve(matrix, rhs)
            if sol is None:
                continue
            polys: list[list[Ball]] = [[] for _ in alphas]
            for (i, l), b in zip(cols, sol):
                polys[i].append(b)
            if any(p and p[-1].contains_zero() for p in polys):
                continue
            form = BinetForm(
                roots=tuple(alphas),
                coeff_polys=tuple(tuple(p) for p in polys),
                eta1=polys[dom][0],
                dominant_index=dom,
                min_poly=g,
                precision=prec,
            )
            for n in range(51):
                if not form.evaluate(n).contains(rec.term(n)):
                    raise ArithmeticError(f"Binet containment failed at n={n}")
            return form
    raise Eta1Uncertified("Binet coefficients not certified within the precision cap")
