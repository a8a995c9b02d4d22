"""Certified isolation of the complex roots of an integer polynomial.

Approximations come from Aberth-Ehrlich iteration in mpmath at increasing
precision. They are certified afterwards with exact rational arithmetic at
dyadic centers: the disk of radius d*|q(c)/q'(c)| around c contains a root of
the square-free part q (degree d), so d pairwise disjoint such disks hold one
root each. Multiplicities come from matching the Yun factors of p against
the disks with a Taylor exclusion test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from ..errors import PrecisionExhausted
from .ball import Ball, ZERO, get_precision_cap, round_up, sqrt_down, sqrt_up
from .poly import IntPoly, squarefree_decomposition, squarefree_part, taylor_shift

CQ = tuple  # exact complex rational as (re, im)


@dataclass(frozen=True)
class RootCluster:
    ball: Ball
    multiplicity: int

    @property
    def is_real(self) -> bool:
        """Center on the real axis; for a single root of a real polynomial this certifies a real root."""
        return self.ball.im == 0

    @property
    def radius(self) -> Fraction:
        return self.ball.rad


def _cmul(a: CQ, b: CQ) -> CQ:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _cadd(a: CQ, b: CQ) -> CQ:
    return (a[0] + b[0], a[1] + b[1])


def _ceval(coeffs: Sequence[int], z: CQ) -> CQ:
    acc: CQ = (ZERO, ZERO)
    for c in reversed(coeffs):
        acc = _cadd(_cmul(acc, z), (Fraction(c), ZERO))
    return acc


def _abs2(z: CQ) -> Fraction:
    return z[0] * z[0] + z[1] * z[1]


def _mpf_to_fraction(x) -> Fraction:
    sign, man, exp, bc = x._mpf_
    if man == 0:
        return ZERO
    v = Fraction(int(man) << exp) if exp >= 0 else Fraction(int(man), 1 << -exp)
    return -v if sign else v


def _aberth(p: IntPoly, prec: int, start: Optional[list] = None) -> list:
    d = p.degree
    with mpmath.mp.workprec(prec + 20):
        cs = [mpmath.mpf(c) for c in p.coeffs]
        dcs = [i * c for i, c in enumerate(cs)][1:]
        if start is None:
            lead = abs(cs[-1])
            rho = 1 + max(abs(c) / lead for c in cs[:-1])
            zs = [mpmath.mpc(rho / 2) * mpmath.expj(2 * mpmath.pi * j / d + mpmath.mpf("0.4")) for j in range(d)]
        else:
            # conjugate-symmetric starts stay symmetric under the iteration, so a
            # near-double real root misread as a complex pair would never split
            nudge = mpmath.ldexp(1, -(prec // 4))
            zs = [mpmath.mpc(z) + nudge * max(1, abs(z)) * mpmath.expj(0.7 + j) for j, z in enumerate(start)]
        tol = mpmath.ldexp(1, -prec)
        for _ in range(60 + 4 * prec.bit_length() + 4 * d):
            worst = mpmath.mpf(0)
            for i in range(d):
                z = zs[i]
                v = mpmath.polyval(cs[::-1], z)
                dv = mpmath.polyval(dcs[::-1], z)
                if dv == 0:
                    zs[i] = z + tol * (i + 1)
                    worst = mpmath.inf
                    continue
                w = v / dv
                s = mpmath.fsum(1 / (z - zs[j]) for j in range(d) if j != i and zs[j] != z)
                step = w / (1 - w * s)
                zs[i] = z - step
                worst = max(worst, abs(step) / max(1, abs(zs[i])))
            if worst < tol:
                break
        return zs


def _snap(approx: list, prec: int) -> Optional[list[CQ]]:
    """Exact dyadic centers, real where plausibly real, conjugate pairs made exact."""
    thresh = Fraction(1, 1 << max(4, prec // 2))
    reals, uppers, lowers = [], [], []
    for z in approx:
        re, im = _mpf_to_fraction(z.real), _mpf_to_fraction(z.imag)
        scale = max(Fraction(1), abs(re), abs(im))
        if abs(im) <= thresh * scale:
            reals.append((re, ZERO))
        elif im > 0:
            uppers.append((re, im))
        else:
            lowers.append((re, im))
    if len(uppers) != len(lowers):
        return None
    paired = []
    remaining = list(lowers)
    for u in uppers:
        best = min(range(len(remaining)), key=lambda j: _abs2((remaining[j][0] - u[0], remaining[j][1] + u[1])))
        remaining.pop(best)
        paired.append(u)
        paired.append((u[0], -u[1]))
    return reals + paired


def _inclusion_radii(q: IntPoly, centers: list[CQ]) -> Optional[list[Fraction]]:
    d = q.degree
    dq = q.derivative()
    radii = []
    for c in centers:
        v = _ceval(q.coeffs, c)
        if v == (ZERO, ZERO):
            radii.append(ZERO)
            continue
        dv = _ceval(dq.coeffs, c)
        if dv == (ZERO, ZERO):
            return None
        radii.append(round_up(d * sqrt_up(_abs2(v) / _abs2(dv))))
    return radii


def _disjoint(centers: list[CQ], radii: list[Fraction]) -> bool:
    n = len(centers)
    for i in range(n):
        for j in range(i + 1, n):
            s = radii[i] + radii[j]
            if _abs2((centers[i][0] - centers[j][0], centers[i][1] - centers[j][1])) <= s * s:
                return False
    return True


def excludes_root(g: IntPoly, center: CQ, radius: Fraction) -> bool:
    """Certify that g has no root in the closed disk |z - center| <= radius."""
    if radius == 0:
        return _ceval(g.coeffs, center) != (ZERO, ZERO)
    shifted = [t.v for t in taylor_shift([_CQNum((Fraction(c), ZERO)) for c in g.coeffs], _CQNum(center))]
    lo = sqrt_down(_abs2(shifted[0]))
    tail = ZERO
    rpow = Fraction(1)
    for t in shifted[1:]:
        rpow *= radius
        tail += sqrt_up(_abs2(t)) * rpow
    return lo > tail


class _CQNum:
    """Minimal exact complex number so taylor_shift can run on CQ pairs."""

    __slots__ = ("v",)

    def __init__(self, v: CQ):
        self.v = v

    def __mul__(self, other):
        o = other.v if isinstance(other, _CQNum) else other
        return _CQNum(_cmul(self.v, o))

    __rmul__ = __mul__

    def __add__(self, other):
        o = other.v if isinstance(other, _CQNum) else other
        return _CQNum(_cadd(self.v, o))

    __radd__ = __add__


def _match(centers: list[CQ], radii: list[Fraction], decomp: list[tuple[IntPoly, int]]) -> Optional[list[int]]:
    if len(decomp) == 1:
        return [decomp[0][1]] * len(centers)
    mults = []
    for c, r in zip(centers, radii):
        cand = [j for g, j in decomp if not excludes_root(g, c, r)]
        if len(cand) != 1:
            return None
        mults.append(cand[0])
    return mults


def _order_key(c: CQ):
    return (-_abs2(c), math.atan2(float(c[1]), float(c[0])))


def certified_roots(p: IntPoly, target_radius: Fraction = Fraction(1, 1 << 64), start_prec: int = 64) -> list[RootCluster]:
    """All complex roots of p as disjoint certified disks with multiplicities.

    Clusters are ordered by descending modulus of the center, ties by
    ascending principal argument.
    """
    if p.is_zero() or p.degree < 1:
        raise ValueError("need a nonzero polynomial of degree >= 1")
    target_radius = Fraction(target_radius)
    q = squarefree_part(p)
    decomp = squarefree_decomposition(p)
    cap = get_precision_cap()
    approx = None
    prec = start_prec
    while prec <= cap:
        approx = _aberth(q, prec, approx)
        centers = _snap(approx, prec)
        if centers is not None:
            radii = _inclusion_radii(q, centers)
            if radii is not None and max(radii) <= target_radius and _disjoint(centers, radii):
                mults = _match(centers, radii, decomp)
                if mults is not None:
                    clusters = [
                        RootCluster(Ball(c[0], c[1], r), m) for c, r, m in zip(centers, radii, mults)
                    ]
                    order = sorted(range(len(clusters)), key=lambda i: _order_key(centers[i]))
                    return [clusters[i] for i in order]
        prec *= 2
    raise PrecisionExhausted(f"could not isolate roots of {p} within {cap} bits")


def root_multiplicities(clusters: Sequence[RootCluster], g: IntPoly) -> Optional[list[int]]:
    """Multiplicity of each cluster's root in g (0 if not a root), or None if undecided.

    g must divide the polynomial the clusters were computed for.
    """
    if g.degree <= 0:
        return [0] * len(clusters)
    decomp = squarefree_decomposition(g)
    out = []
    for cl in clusters:
        c = (cl.ball.re, cl.ball.im)
        cand = [j for f, j in decomp if not excludes_root(f, c, cl.ball.rad)]
        if len(cand) > 1:
            return None
        out.append(cand[0] if cand else 0)
    if sum(out) != g.degree:
        return None
    return out
