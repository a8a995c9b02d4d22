"""Explicit Baker-type bound for aU_n + bU_m = z_1 + ... + z_r.

Every constant is a rational bound rounded in the sound direction. The chain:

* size of the largest summand:   log|z_r| < zr_slope * max(n,1) + zr_offset
* gap between the indices:       n - m <= gap_constant * log n        (n >= 3)
* final index bound:             n <= final_constant * (log n)^2      (n >= 3)

resolved into an integer N0 with n <= N0 for every solution in scope. The
scope is solutions with n >= m, |aU_n + bU_m| >= |U_n| and
|z_i|^(1+eps) <= |z_r| for i < r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from mpmath import iv

from . import __version__
from .errors import (
    DegenerateRecurrence,
    DominantRootIntegerGt1,
    DominantRootNotRealGt1,
    InvalidMatveevInput,
    NotConstantLeadCoefficient,
)
from .exactmath.ball import Ball, euler_e, log_int, pi, round_down, round_up
from .heights import GrowthConstants, growth_constants
from .problem import ProblemInstance
from .recurrence import BinetForm, SpectralData, binet_decomposition, is_degenerate, spectral_data
from .report import fmt_down, fmt_up

MATVEEV_A_FLOOR = Fraction(4, 25)  # 0.16
# a linear form with a sign term or a non-real logarithm uses the complex constant
KAPPA_COMPLEX = 2
CONST_BITS = 64

PROOF_CHAIN = "proof-chain"
IMPL_CHOICE = "impl-choice"


# -- certified scalar helpers --

def _up(x: Fraction) -> Fraction:
    return round_up(Fraction(x), CONST_BITS)


def _down(x: Fraction) -> Fraction:
    return round_down(Fraction(x), CONST_BITS)


def _log_up(x: Fraction) -> Fraction:
    x = Fraction(x)
    return Fraction(0) if x == 1 else _up(Ball.exact(x).log().upper())


def _log_down(x: Fraction) -> Fraction:
    x = Fraction(x)
    return Fraction(0) if x == 1 else _down(Ball.exact(x).log().lower())


def _pos(x: Fraction) -> Fraction:
    return max(Fraction(0), x)


# -- Matveev --

def matveev_C(m: int, kappa: int) -> Ball:
    """min((1/kappa) (e m / 2)^kappa 30^(m+3) m^3.5, 2^(6m+20))."""
    if m < 1:
        raise InvalidMatveevInput("need at least one logarithm")
    if kappa not in (1, 2):
        raise InvalidMatveevInput("kappa must be 1 or 2")
    first = (euler_e() * m / 2) ** kappa * (30 ** (m + 3)) * (m ** 3) * Ball.exact(m).sqrt() / kappa
    second = Ball.exact(2 ** (6 * m + 20))
    return first.min(second)


@dataclass(frozen=True)
class MatveevInput:
    m: int
    kappa: int
    D: int
    B: Fraction
    A: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "B", Fraction(self.B))
        object.__setattr__(self, "A", tuple(Fraction(a) for a in self.A))
        if len(self.A) != self.m:
            raise InvalidMatveevInput(f"expected {self.m} values A_i, got {len(self.A)}")
        if any(a < MATVEEV_A_FLOOR for a in self.A):
            raise InvalidMatveevInput("every A_i must be at least 0.16")
        if self.B < 1:
            raise InvalidMatveevInput("B must be at least 1")
        if self.D < 1:
            raise InvalidMatveevInput("D must be positive")


def _matveev_factor(m: int, kappa: int, D: int, A: Sequence[Fraction]) -> Ball:
    """C(m,kappa) D^2 log(eD) times the product of the given A-values."""
    prod = Fraction(1)
    for a in A:
        prod *= a
    return matveev_C(m, kappa) * (D * D) * prod * (log_int(D) + 1)


def matveev_lower_bound(inp: MatveevInput) -> Ball:
    """Ball enclosing -C(m,kappa) D^2 A_1...A_m log(eD) log(eB); use .lower() as the bound."""
    log_eB = Ball.exact(inp.B).log() + 1
    return -(_matveev_factor(inp.m, inp.kappa, inp.D, inp.A) * log_eB)


# -- trace --

@dataclass(frozen=True)
class TraceEntry:
    name: str
    value: str
    provenance: str
    formula: str

    def to_json(self) -> dict:
        return {"name": self.name, "value": self.value, "provenance": self.provenance, "formula": self.formula}


@dataclass
class Trace:
    entries: list[TraceEntry] = field(default_factory=list)

    def up(self, name: str, value: Fraction, provenance: str, formula: str) -> Fraction:
        self.entries.append(TraceEntry(name, fmt_up(value), provenance, formula))
        return value

    def down(self, name: str, value: Fraction, provenance: str, formula: str) -> Fraction:
        self.entries.append(TraceEntry(name, fmt_down(value), provenance, formula))
        return value

    def integer(self, name: str, value: int, provenance: str, formula: str) -> int:
        self.entries.append(TraceEntry(name, str(value), provenance, formula))
        return value


# -- quantities shared by the chain --

@dataclass(frozen=True)
class ChainInputs:
    k: int
    t: int
    ell: int
    D: int
    alpha_lo: Fraction
    alpha_hi: Fraction
    log_alpha_lo: Fraction
    log_alpha_hi: Fraction
    second_hi: Fraction  # upper bound for the largest non-dominant modulus
    eta_lo: Fraction  # bounds for |eta|
    eta_hi: Fraction
    height: Fraction
    coeff_upper: Fraction
    term_upper: Fraction
    s_exp: Fraction  # eps / (1 + eps)
    theta_hi: Fraction  # max(1/alpha, alpha^-s, |alpha_2|/alpha)
    log_inv_theta_lo: Fraction
    log3_lo: Fraction
    pi_hi: Fraction


def chain_inputs(inst: ProblemInstance, growth: GrowthConstants, spectral: SpectralData,
                 bf: Optional[BinetForm] = None) -> ChainInputs:
    dom = spectral.dominant
    if not dom.is_real or dom.ball.lower() <= 1:
        raise DominantRootNotRealGt1("dominant root must be real and greater than one")
    alpha_lo, alpha_hi = dom.ball.lower(), dom.ball.upper()
    second_hi = spectral.second_modulus.upper()
    s_exp = inst.eps / (1 + inst.eps)
    alpha_pow = _up(Ball.exact(alpha_lo).pow_real(-s_exp).upper())
    theta_hi = _up(max(1 / alpha_lo, alpha_pow, second_hi / alpha_lo))
    if theta_hi >= 1:
        raise ArithmeticError("could not certify the shrink factor below one")
    eta_lo = eta_hi = Fraction(0)
    if bf is not None:
        eta_lo, eta_hi = bf.eta1.abs_lower(), bf.eta1.abs_upper()
    return ChainInputs(
        k=inst.rec.order,
        t=spectral.t,
        ell=inst.ell,
        D=growth.degree_bound,
        alpha_lo=alpha_lo,
        alpha_hi=alpha_hi,
        log_alpha_lo=_log_down(alpha_lo),
        log_alpha_hi=_log_up(alpha_hi),
        second_hi=second_hi,
        eta_lo=eta_lo,
        eta_hi=eta_hi,
        height=growth.height_bound,
        coeff_upper=growth.coeff_upper,
        term_upper=growth.term_upper,
        s_exp=s_exp,
        theta_hi=theta_hi,
        log_inv_theta_lo=_log_down(1 / theta_hi),
        log3_lo=_log_down(3),
        pi_hi=_up(pi().upper()),
    )


def zr_log_bound(inst: ProblemInstance, growth: GrowthConstants, spectral: SpectralData,
                 trace: Optional[Trace] = None) -> tuple[Fraction, Fraction]:
    """(slope, offset) with log|z_r| < slope * max(n,1) + offset.

    |z_r| - (r-1)|z_r|^(1/(1+eps)) <= |sum z_i| <= (a+b) c N^(k-1) alpha^N with
    N = max(n,1) and c the term constant. Either |z_r|^(eps/(1+eps)) < r, or
    the left side is at least |z_r|/r; log N <= N/e absorbs the power of N.
    """
    tr = trace or Trace()
    ci = chain_inputs(inst, growth, spectral)
    k, r = ci.k, inst.r
    sum_const = tr.up("sum_size_constant", _up((inst.a + inst.b) * ci.term_upper), PROOF_CHAIN,
                      "(a+b) * term_upper bounds |aU_n + bU_m| / (N^(k-1) alpha^N)")
    e_lo = euler_e().lower()
    slope = tr.up("zr_slope", _up(ci.log_alpha_hi + Fraction(k - 1) / e_lo), IMPL_CHOICE,
                  "log(alpha) + (k-1)/e, from log N <= N/e")
    large = _log_up(r * sum_const)
    small = _up((1 + inst.eps) / inst.eps * _log_up(r)) if r > 1 else Fraction(0)
    # the extra slope covers n = 0 where N = 1; the tiny margin makes the bound strict
    offset = tr.up("zr_offset", _up(max(large, small) + slope + Fraction(1, 1 << 20)), IMPL_CHOICE,
                   "max(log(r*sum_size_constant), (1+eps)/eps*log r) + zr_slope")
    return slope, offset


def _a_prime(ci: ChainInputs, p: int) -> Fraction:
    return _up(max(ci.D * _log_up(p), MATVEEV_A_FLOOR))


def _a_alpha(ci: ChainInputs) -> Fraction:
    return _up(max(ci.D * ci.height, ci.log_alpha_hi, MATVEEV_A_FLOOR))


def _a_scaled_eta(ci: ChainInputs, scale: int) -> Fraction:
    """A-value for scale * eta; |log| of a negative real gains at most pi."""
    h = _log_up(scale) + ci.height
    lo, hi = scale * ci.eta_lo, scale * ci.eta_hi
    abs_log = max(abs(_log_down(lo)), abs(_log_up(lo)), abs(_log_down(hi)), abs(_log_up(hi)))
    return _up(max(ci.D * h, abs_log + ci.pi_hi, MATVEEV_A_FLOOR))


def _exponent_scale(inst: ProblemInstance, ci: ChainInputs, slope: Fraction, offset: Fraction,
                    tr: Trace) -> Fraction:
    log_pmin = _log_down(inst.S.primes[0])
    return tr.up("exponent_scale", _up(max(Fraction(1), (slope + _pos(offset)) / log_pmin, Fraction(ci.ell + 2))),
                 PROOF_CHAIN, "B = exponent_scale * n bounds every integer coefficient of the linear form")


@dataclass(frozen=True)
class GapResult:
    constant: Fraction
    ratio_constant: Fraction  # n-m <= this * log n from the crude ratio case
    conjugate_constant: Fraction  # n <= this when the ratio is exactly one
    baker_constant: Fraction


def gap_bound(inst: ProblemInstance, growth: GrowthConstants, bf: BinetForm, spectral: SpectralData,
              trace: Optional[Trace] = None, zr: Optional[tuple[Fraction, Fraction]] = None) -> GapResult:
    """n - m <= constant * log n for n >= 3, for solutions with |aU_n+bU_m| > |eta| alpha^n / 2."""
    tr = trace or Trace()
    ci = chain_inputs(inst, growth, spectral, bf)
    if zr is None:
        zr = zr_log_bound(inst, growth, spectral, tr)
    slope, offset = zr
    a, b, r, k, t = inst.a, inst.b, inst.r, ci.k, ci.t
    tr.up("shrink_factor", ci.theta_hi, PROOF_CHAIN, "max(1/alpha, alpha^(-eps/(1+eps)), |alpha_2|/alpha)")

    # |z_r| > |eta| alpha^n / (2r); divide the equation by z_r
    older = tr.up("gap_older_term", _up(2 * r * b * t * ci.coeff_upper / ci.eta_lo), PROOF_CHAIN,
                  "2 r b t coeff_upper / |eta|: contribution of b U_m")
    tail = tr.up("gap_tail_term", _up(2 * r * a * (t - 1) * ci.coeff_upper / ci.eta_lo), PROOF_CHAIN,
                 "2 r a (t-1) coeff_upper / |eta|: non-dominant part of a U_n")
    small_units = _up((r - 1) * Ball.exact(2 * r / ci.eta_lo).pow_real(ci.s_exp).upper()) if r > 1 else Fraction(0)
    tr.up("gap_small_units_term", small_units, PROOF_CHAIN, "(r-1) (2r/|eta|)^(eps/(1+eps)): z_1..z_(r-1)")
    total = tr.up("gap_total", _up(older + tail + small_units), PROOF_CHAIN,
                  "|ratio - 1| <= gap_total n^(k-1) shrink_factor^(n-m)")

    log2total = _pos(_log_up(2 * total))
    ratio_c = tr.up("gap_far_ratio", _up((log2total / ci.log3_lo + (k - 1)) / ci.log_inv_theta_lo), PROOF_CHAIN,
                    "(log(2 gap_total)/log 3 + k - 1) / log(1/shrink_factor)")

    # ratio exactly one: conjugate alpha -> alpha_j gives (alpha/|alpha_j|)^n <= coeff_upper/|eta|
    gap_ratio = _log_down(ci.alpha_lo / ci.second_hi)
    conj = tr.up("gap_conjugate_case", _up(_pos(_log_up(ci.coeff_upper / ci.eta_lo)) / gap_ratio), PROOF_CHAIN,
                 "log(coeff_upper/|eta|) / log(alpha/|alpha_2|)")

    # Baker step: logarithms of p_1..p_l, a eta, alpha, -1
    scale = _exponent_scale(inst, ci, slope, offset, tr)
    A = [_a_prime(ci, p) for p in inst.S.primes] + [_a_scaled_eta(ci, a), _a_alpha(ci), ci.pi_hi]
    inp = MatveevInput(ci.ell + 3, KAPPA_COMPLEX, ci.D, scale, tuple(A))
    for i, v in enumerate(A):
        tr.up(f"gap_height_term_{i + 1}", v, PROOF_CHAIN, "max(D h(psi), |log psi|, 0.16)")
    tr.up("gap_matveev_C", _up(matveev_C(inp.m, inp.kappa).upper()), PROOF_CHAIN,
          f"C(m, kappa) with m = {inp.m}, kappa = {inp.kappa}")
    factor = tr.up("gap_matveev_factor", _up(_matveev_factor(inp.m, inp.kappa, inp.D, inp.A).upper()), PROOF_CHAIN,
                   "C D^2 A_1...A_m log(eD)")
    lead = _up(factor * (1 + _log_up(scale)) + log2total)
    baker = tr.up("gap_baker", _up((lead / ci.log3_lo + factor + (k - 1)) / ci.log_inv_theta_lo), PROOF_CHAIN,
                  "((factor (1 + log exponent_scale) + log(2 gap_total))/log 3 + factor + k - 1) / log(1/shrink_factor)")
    const = _up(max(ratio_c, conj / ci.log3_lo, baker, 2 / ci.log3_lo))
    tr.up("gap_constant", const, PROOF_CHAIN, "max of the case constants; n - m <= gap_constant log n")
    return GapResult(const, ratio_c, conj, baker)


# -- resolving implicit bounds --

def _iv_prec_for(c: Fraction) -> int:
    return 96 + max(c.numerator.bit_length(), c.denominator.bit_length())


def _ivq(x: Fraction):
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


def _g_positive(q: int, c: Fraction, power: int) -> bool:
    """Certified q - c (log q)^power > 0."""
    val = iv.mpf(q) - _ivq(c) * iv.log(iv.mpf(q)) ** power
    return val.a > 0


def _slope_sign(q: int, c: Fraction, power: int) -> int:
    """Sign of 1 - c power (log q)^(power-1) / q when certified, else 0."""
    L = iv.log(iv.mpf(q))
    val = 1 - _ivq(c) * power * L ** (power - 1) / q
    if val.a > 0:
        return 1
    if val.b < 0:
        return -1
    return 0


def solve_n_polylog_bound(c: Fraction, power: int = 1) -> int:
    """Largest integer n >= 1 with n <= c (log n)^power, reported as at least 2."""
    c = Fraction(c)
    if c <= 0:
        raise ValueError("c must be positive")
    if power < 1:
        raise ValueError("power must be positive")
    old = iv.prec
    iv.prec = _iv_prec_for(c) + 8 * power
    try:
        # from x >= 3 the slope of x - c (log x)^p increases, so "positive with
        # positive slope" holds on a final segment of the integers
        def settled(q: int) -> bool:
            return _slope_sign(q, c, power) > 0 and _g_positive(q, c, power)

        if settled(3):
            q = 3
        else:
            lo, hi = 3, 6
            while not settled(hi):
                lo, hi = hi, hi * 2
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if settled(mid):
                    hi = mid
                else:
                    lo = mid
            q = hi
        n = q - 1
        while n >= 3:
            if not _g_positive(n, c, power):
                return n
            if _slope_sign(n, c, power) < 0:
                break  # decreasing below n, so positive all the way down to 3
            n -= 1
        return 2
    finally:
        iv.prec = old


def solve_n_log_bound(c: Fraction) -> int:
    """Every integer n >= 1 with n <= c log n satisfies n <= the result."""
    return solve_n_polylog_bound(c, 1)


# -- certificate --

@dataclass(frozen=True)
class BoundCertificate:
    instance: ProblemInstance
    hypotheses: dict
    spectral: dict
    growth: GrowthConstants
    zr_linear: tuple[Fraction, Fraction]
    gap_constant: Fraction
    final_constant: Fraction
    final_log_power: int
    N0: int
    Z0_log_upper: Fraction
    case_bounds: dict
    trace: tuple[TraceEntry, ...]

    def to_json(self) -> dict:
        return {
            "version": __version__,
            "config": self.instance.to_json(),
            "hypotheses": self.hypotheses,
            "spectral": self.spectral,
            "growth": self.growth.to_json(),
            "zr_linear": {"slope": fmt_up(self.zr_linear[0]), "offset": fmt_up(self.zr_linear[1])},
            "gap_constant": fmt_up(self.gap_constant),
            "final_constant": fmt_up(self.final_constant),
            "final_log_power": self.final_log_power,
            "case_bounds": {k: str(v) for k, v in self.case_bounds.items()},
            "N0": str(self.N0),
            "Z0": {"log_upper": fmt_up(self.Z0_log_upper)},
            "constants_trace": [e.to_json() for e in self.trace],
        }


SCOPE = ("solutions with n >= m >= 0, |a U_n + b U_m| >= |U_n| and "
         "|z_i|^(1+eps) <= |z_r| for i < r (covers the strict form as well)")


def check_hypotheses(inst: ProblemInstance) -> tuple[SpectralData, BinetForm]:
    """Run the preconditions in a fixed order; raise the first that fails."""
    rec = inst.rec
    if is_degenerate(rec):
        raise DegenerateRecurrence("some ratio of distinct characteristic roots is a root of unity")
    spectral = spectral_data(rec)
    if not spectral.dominant_is_simple:
        raise NotConstantLeadCoefficient("the dominant root is repeated, so its Binet coefficient is not constant")
    if spectral.dominant_is_integer_gt1:
        raise DominantRootIntegerGt1("the dominant root is an integer greater than one")
    dom = spectral.dominant
    if not dom.is_real or dom.ball.lower() <= 1:
        raise DominantRootNotRealGt1("the dominant root must be real and greater than one")
    bf = binet_decomposition(rec, spectral)
    return spectral, bf


def _zero_coefficient_bound(bf: BinetForm) -> int:
    """Integer roots of a non-constant f_i are at most 1 + max|beta_l| / |beta_top|."""
    out = 0
    for i in bf.active:
        poly = bf.coeff_polys[i]
        if len(poly) < 2:
            continue
        top = poly[-1].abs_lower()
        out = max(out, math.floor(1 + max(c.abs_upper() for c in poly[:-1]) / top))
    return out


def final_bound(inst: ProblemInstance) -> BoundCertificate:
    spectral, bf = check_hypotheses(inst)
    rec = inst.rec
    growth = growth_constants(rec, bf, spectral)
    tr = Trace()
    ci = chain_inputs(inst, growth, spectral, bf)
    a, b, r, k, t = inst.a, inst.b, inst.r, ci.k, ci.t

    tr.integer("degree_bound", ci.D, IMPL_CHOICE, "min(k^t, k!) bounds the splitting field degree")
    tr.up("height_bound", growth.height_bound, IMPL_CHOICE,
          "max(log Mahler measure of f, 2 log Hadamard bound of the Binet system)")
    tr.down("coeff_lower", growth.coeff_lower, IMPL_CHOICE, "two-regime lower bound for |f_i(n)|")
    tr.up("coeff_upper", growth.coeff_upper, IMPL_CHOICE, "max(t, max m_i) * max |beta|")
    tr.up("term_upper", growth.term_upper, IMPL_CHOICE, "t * coeff_upper")
    tr.down("eta_abs_lower", ci.eta_lo, PROOF_CHAIN, "certified lower bound for |eta|")

    zr = zr_log_bound(inst, growth, spectral, tr)
    gap = gap_bound(inst, growth, bf, spectral, tr, zr)
    slope, offset = zr
    cases: dict[str, int] = {}

    cases["zero_coefficient"] = tr.integer("zero_coefficient_case", _zero_coefficient_bound(bf), IMPL_CHOICE,
                                           "largest integer root of a non-constant f_i")

    # |aU_n + bU_m| <= |eta| alpha^n / 2 together with |aU_n+bU_m| >= |U_n|
    gap_ratio = _log_down(ci.alpha_lo / ci.second_hi)
    small_log = _pos(_log_up(2 * (t - 1) * ci.coeff_upper / ci.eta_lo))
    small_c = tr.up("small_sum_case_coefficient", _up((small_log / ci.log3_lo + (k - 1)) / gap_ratio), PROOF_CHAIN,
                    "(log(2(t-1) coeff_upper/|eta|)/log 3 + k - 1) / log(alpha/|alpha_2|)")
    cases["small_sum"] = solve_n_log_bound(small_c)

    # second ratio: eta alpha^n (a + b alpha^(m-n)) / z_r
    older = _up(2 * r * b * (t - 1) * ci.coeff_upper / ci.eta_lo)
    tail = _up(2 * r * a * (t - 1) * ci.coeff_upper / ci.eta_lo)
    small_units = _up((r - 1) * Ball.exact(2 * r / ci.eta_lo).pow_real(ci.s_exp).upper()) if r > 1 else Fraction(0)
    total = tr.up("final_total", _up(older + tail + small_units), PROOF_CHAIN,
                  "|ratio - 1| <= final_total n^(k-1) shrink_factor^n")
    log2total = _pos(_log_up(2 * total))
    far_c = tr.up("final_far_ratio", _up((log2total / ci.log3_lo + (k - 1)) / ci.log_inv_theta_lo), PROOF_CHAIN,
                  "(log(2 final_total)/log 3 + k - 1) / log(1/shrink_factor)")
    cases["far_ratio"] = solve_n_log_bound(far_c)

    big = max(a, b)
    lift = _log_down(ci.alpha_lo / max(Fraction(1), ci.second_hi))
    conj = tr.up("final_conjugate_case", _up(_pos(_log_up(2 * big * ci.coeff_upper / ci.eta_lo)) / lift),
                 PROOF_CHAIN, "log(2 max(a,b) coeff_upper/|eta|) / log(alpha/max(1,|alpha_2|))")
    cases["unit_ratio"] = math.floor(conj)

    # Baker step: logarithms of p_1..p_l, eta, alpha, a + b alpha^(m-n), -1
    scale = _exponent_scale(inst, ci, slope, offset, Trace())
    A_fixed = [_a_prime(ci, p) for p in inst.S.primes] + [_a_scaled_eta(ci, 1), _a_alpha(ci), ci.pi_hi]
    m_logs = ci.ell + 4
    # the remaining A-value grows like u0 + u1 log n through the gap bound
    u0 = tr.up("binomial_height_base", _up(max(ci.D * _log_up(2 * a * b), _log_up(a + b), MATVEEV_A_FLOOR)),
               PROOF_CHAIN, "max(D log(2ab), log(a+b), 0.16)")
    u1 = tr.up("binomial_height_slope", _up(ci.D * ci.height * gap.constant), PROOF_CHAIN,
               "D h(alpha) gap_constant")
    factor = tr.up("final_matveev_factor", _up(_matveev_factor(m_logs, KAPPA_COMPLEX, ci.D, A_fixed).upper()), PROOF_CHAIN,
                   f"C({m_logs}, {KAPPA_COMPLEX}) D^2 log(eD) times the fixed A-values")
    c_b = 1 + _log_up(scale)
    inv = ci.log_inv_theta_lo
    p2 = _up(factor * u1 / inv)
    p1 = _up((factor * (u0 + u1 * c_b) + (k - 1)) / inv)
    p0 = _up(_pos(factor * u0 * c_b + _log_up(2 * total)) / inv)
    tr.up("final_quadratic_term", p2, PROOF_CHAIN, "factor * binomial_height_slope / log(1/shrink_factor)")
    tr.up("final_linear_term", p1, PROOF_CHAIN, "(factor (u0 + u1 (1 + log B-scale)) + k - 1) / log(1/shrink_factor)")
    tr.up("final_constant_term", p0, PROOF_CHAIN, "(factor u0 (1 + log B-scale) + log(2 final_total)) / log(1/shrink_factor)")
    log3 = ci.log3_lo
    c_fin = tr.up("final_constant", _up(p2 + p1 / log3 + p0 / (log3 * log3)), IMPL_CHOICE,
                  "n <= final_constant (log n)^2 for n >= 3")
    cases["baker"] = solve_n_polylog_bound(c_fin, 2)

    n0 = max(2, *cases.values())
    tr.integer("N0", n0, PROOF_CHAIN, "max over all cases")
    z0 = tr.up("Z0_log", _up(slope * n0 + offset), PROOF_CHAIN, "log max|z_i| < zr_slope N0 + zr_offset")

    hyp = {
        "non_degenerate": True,
        "dominant_root": "simple, real, greater than one",
        "dominant_not_integer_gt1": True,
        "eta_nonzero": True,
        "eta_abs_lower": fmt_down(ci.eta_lo),
        "scope": SCOPE,
    }
    return BoundCertificate(
        instance=inst,
        hypotheses=hyp,
        spectral=spectral.to_json(),
        growth=growth,
        zr_linear=zr,
        gap_constant=gap.constant,
        final_constant=c_fin,
        final_log_power=2,
        N0=n0,
        Z0_log_upper=z0,
        case_bounds=cases,
        trace=tuple(tr.entries),
    )
