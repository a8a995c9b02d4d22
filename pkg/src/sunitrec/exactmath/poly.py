"""Integer polynomials: exact arithmetic, resultants, square-free parts, cyclotomics."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

Number = Union[int, Fraction]


@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial, coefficients stored lowest degree first.

    Trailing zeros are stripped on construction, so ``coeffs[-1]`` is the
    leading coefficient (the zero polynomial has ``coeffs == ()``).
    """

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int]):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_high(cls, coeffs: Iterable[int]) -> "IntPoly":
        """Build from coefficients listed highest degree first."""
        return cls(list(coeffs)[::-1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x: Number) -> Number:
        acc: Number = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "IntPoly":
        return IntPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def __add__(self, other: "IntPoly") -> "IntPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPoly(x + y for x, y in zip(a, b))

    def __neg__(self) -> "IntPoly":
        return IntPoly(-c for c in self.coeffs)

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        if self.is_zero() or other.is_zero():
            return IntPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    def __pow__(self, e: int) -> "IntPoly":
        out = IntPoly((1,))
        for _ in range(e):
            out = out * self
        return out

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = _gcd(g, c)
        return g

    def primitive(self) -> "IntPoly":
        """Divide out the content and make the leading coefficient positive."""
        if self.is_zero():
            return self
        g = self.content()
        if self.lead < 0:
            g = -g
        return IntPoly(c // g for c in self.coeffs)

    def reflect(self) -> "IntPoly":
        """p(-x)."""
        return IntPoly(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs))

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            body = "" if (mag == 1 and i > 0) else str(mag)
            if i >= 1:
                body += "x" if i == 1 else f"x^{i}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


X = IntPoly((0, 1))


def _require_nonzero(*polys: IntPoly) -> None:
    for p in polys:
        if p.is_zero():
            raise ValueError("zero polynomial not allowed here")


# -- rational polynomial helpers (lists of Fractions, lowest degree first) --

def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _qdivmod(a: Sequence[Number], b: Sequence[Number]) -> tuple[list[Fraction], list[Fraction]]:
    rem = [Fraction(c) for c in a]
    _trim(rem)
    b = _trim([Fraction(c) for c in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    if len(rem) - 1 < db:
        return [], rem
    quot = [Fraction(0)] * (len(rem) - db)
    inv_lead = 1 / b[-1]
    for shift in range(len(rem) - 1 - db, -1, -1):
        c = rem[shift + db] * inv_lead
        quot[shift] = c
        if c:
            for j, bc in enumerate(b):
                rem[shift + j] -= c * bc
    return _trim(quot), _trim(rem[:db])


def _qgcd(a: Sequence[Number], b: Sequence[Number]) -> list[Fraction]:
    x = _trim([Fraction(c) for c in a])
    y = _trim([Fraction(c) for c in b])
    while y:
        _, r = _qdivmod(x, y)
        x, y = y, r
    if not x:
        return x
    lead = x[-1]
    return [c / lead for c in x]


def _to_primitive(p: Sequence[Fraction]) -> IntPoly:
    if not p:
        return IntPoly(())
    den = 1
    for c in p:
        den = den * Fraction(c).denominator // _gcd(den, Fraction(c).denominator)
    return IntPoly(int(Fraction(c) * den) for c in p).primitive()


def _monic_divmod(a: Sequence[int], b: Sequence[int]) -> tuple[list[int], list[int]]:
    # b has leading coefficient +-1: integer long division
    rem = list(a)
    db = len(b) - 1
    if len(rem) - 1 < db:
        return [], rem
    lead = b[-1]
    quot = [0] * (len(rem) - db)
    for shift in range(len(rem) - 1 - db, -1, -1):
        c = rem[shift + db] * lead
        quot[shift] = c
        if c:
            for j, bc in enumerate(b):
                rem[shift + j] -= c * bc
    return _trim(quot), _trim(rem[:db])


def poly_divmod(p: IntPoly, q: IntPoly) -> tuple[IntPoly, IntPoly]:
    """Exact division with remainder; raises if the quotient is not integral."""
    _require_nonzero(q)
    if abs(q.lead) == 1:
        quot, rem = _monic_divmod(p.coeffs, q.coeffs)
        return IntPoly(quot), IntPoly(rem)
    quot, rem = _qdivmod(p.coeffs, q.coeffs)
    if any(c.denominator != 1 for c in quot + rem):
        raise ValueError(f"{p} / {q} is not integral")
    return IntPoly(int(c) for c in quot), IntPoly(int(c) for c in rem)


def divides(q: IntPoly, p: IntPoly) -> bool:
    """True iff q divides p in Q[x]."""
    if abs(q.lead) == 1:
        return not _monic_divmod(p.coeffs, q.coeffs)[1]
    _, rem = _qdivmod(p.coeffs, q.coeffs)
    return not rem


def poly_gcd(p: IntPoly, q: IntPoly) -> IntPoly:
    """Primitive gcd with positive leading coefficient."""
    return _to_primitive(_qgcd(p.coeffs, q.coeffs))


def exact_quotient(p: IntPoly, q: IntPoly) -> IntPoly:
    """p / q over Q, returned primitive; q must divide p."""
    quot, rem = _qdivmod(p.coeffs, q.coeffs)
    if rem:
        raise ValueError(f"{q} does not divide {p}")
    return _to_primitive(quot)


def squarefree_part(p: IntPoly) -> IntPoly:
    """p / gcd(p, p'), primitive with positive leading coefficient."""
    _require_nonzero(p)
    if p.degree <= 0:
        return IntPoly((1,))
    g = poly_gcd(p, p.derivative())
    return exact_quotient(p, g)


def squarefree_decomposition(p: IntPoly) -> list[tuple[IntPoly, int]]:
    """Yun's algorithm: primitive p = prod g_j^j; returns [(g_j, j)] with deg g_j >= 1."""
    _require_nonzero(p)
    out: list[tuple[IntPoly, int]] = []
    if p.degree <= 0:
        return out
    a = [Fraction(c) for c in p.coeffs]
    b = _qgcd(a, _qderiv(a))
    c = _qdivmod(a, b)[0]
    d = _qsub(_qdivmod(_qderiv(a), b)[0], _qderiv(c))
    j = 1
    while len(c) > 1:
        g = _qgcd(c, d)
        if len(g) > 1:
            out.append((_to_primitive(g), j))
        c = _qdivmod(c, g)[0]
        d = _qsub(_qdivmod(d, g)[0], _qderiv(c))
        j += 1
    return out


def _qderiv(p: Sequence[Fraction]) -> list[Fraction]:
    return _trim([i * c for i, c in enumerate(p)][1:])


def _qsub(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    return _trim(out)


def _bareiss_det(m: list[list[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def sylvester_matrix(p: IntPoly, q: IntPoly) -> list[list[int]]:
    m, n = p.degree, q.degree
    size = m + n
    rows = []
    ph = list(reversed(p.coeffs))
    qh = list(reversed(q.coeffs))
    for i in range(n):
        rows.append([0] * i + ph + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + qh + [0] * (size - n - 1 - i))
    return rows


def poly_resultant(p: IntPoly, q: IntPoly) -> int:
    """Determinant of the Sylvester matrix of p and q."""
    _require_nonzero(p, q)
    if p.degree == 0 and q.degree == 0:
        return 1
    if p.degree == 0:
        return p.lead ** q.degree
    if q.degree == 0:
        return q.lead ** p.degree
    return _bareiss_det(sylvester_matrix(p, q))


def ratio_poly(p: IntPoly) -> IntPoly:
    """R(x) = Res_y(p(y), x^d p(y/x)); its roots are all ratios of roots of p.

    Computed by evaluating the univariate resultant at d^2 + 1 integer points
    and interpolating exactly.
    """
    _require_nonzero(p)
    d = p.degree
    if d <= 0:
        return IntPoly((1,))
    npts = d * d + 1
    xs = list(range(npts))
    ys = []
    for x0 in xs:
        q = IntPoly(c * x0 ** (d - i) for i, c in enumerate(p.coeffs))
        ys.append(poly_resultant(p, q))
    coeffs = _interpolate(xs, ys)
    if any(c.denominator != 1 for c in coeffs):
        raise ArithmeticError("ratio polynomial interpolation is not integral")
    return IntPoly(int(c) for c in coeffs)


def _interpolate(xs: Sequence[int], ys: Sequence[int]) -> list[Fraction]:
    # Newton divided differences, then expand to monomial basis.
    n = len(xs)
    dd = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # poly = poly * (x - xs[i]) + dd[i]
        shifted = [Fraction(0)] + poly[:-1]
        poly = [s - xs[i] * c for s, c in zip(shifted, poly)]
        poly[0] += dd[i]
    return poly


def totient(n: int) -> int:
    out, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            out -= out // p
        p += 1
    if m > 1:
        out -= out // m
    return out


@lru_cache(maxsize=None)
def cyclotomic(q: int) -> IntPoly:
    """The q-th cyclotomic polynomial, by dividing x^q - 1 by Phi_d for d | q, d < q."""
    if q < 1:
        raise ValueError("cyclotomic index must be positive")
    num = IntPoly([-1] + [0] * (q - 1) + [1])
    for d in range(1, q):
        if q % d == 0:
            num, rem = poly_divmod(num, cyclotomic(d))
            assert rem.is_zero()
    return num


def taylor_shift(coeffs: Sequence[Number], z: Number) -> list:
    """Coefficients of p(z + h) in powers of h (works for any ring of z)."""
    c = list(coeffs)
    n = len(c)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            c[j] = c[j] + z * c[j + 1]
    return c
