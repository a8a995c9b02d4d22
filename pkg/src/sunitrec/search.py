"""Exhaustive desk-scale search for aU_n + bU_m = z_1 + ... + z_r.

Two independent engines find every solution with 0 <= m <= n <= nmax and all
|z_i| <= zmax:

* ``mitm``: a hash index of all sums of ceil(r/2) S-units, probed with every
  multiset of floor(r/2) S-units;
* ``naive``: numpy-vectorized scan over all ordered (r-1)-tuples with a
  membership test for the last summand.

Solutions are reported once per multiset of summands, sorted by
(|value|, sign), so the last summand has the largest absolute value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Callable, Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import NotSmooth
from .problem import ProblemInstance
from .sunits import SUnit, enumerate_sunits, factor_over_S, tuple_dominance

DEFAULT_INDEX_CAP = 1 << 26
MAX_STATE_STEPS = 10_000_000


@dataclass(frozen=True)
class SolutionRecord:
    n: int
    m: int
    summands: tuple[SUnit, ...]
    lhs_value: int
    satisfies_dominance: bool
    satisfies_size_hypothesis: bool

    def sort_key(self):
        return (self.n, self.m, tuple(u.key() for u in self.summands))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "summands": [str(u.value) for u in self.summands],
            "lhs_value": str(self.lhs_value),
            "satisfies_dominance": self.satisfies_dominance,
            "satisfies_size_hypothesis": self.satisfies_size_hypothesis,
        }

    @classmethod
    def from_json(cls, data: dict, inst: ProblemInstance) -> "SolutionRecord":
        """Rebuild a record; raises KeyError/ValueError/NotSmooth on malformed data."""
        summands = tuple(factor_over_S(int(v), inst.S) for v in data["summands"])
        return cls(
            n=int(data["n"]),
            m=int(data["m"]),
            summands=summands,
            lhs_value=int(data["lhs_value"]),
            satisfies_dominance=bool(data["satisfies_dominance"]),
            satisfies_size_hypothesis=bool(data["satisfies_size_hypothesis"]),
        )


@dataclass
class SearchStats:
    engine: str = ""
    units: int = 0
    pairs_total: int = 0
    pruned_size: int = 0
    pruned_residue: int = 0
    solutions: int = 0
    index_entries: int = 0
    fallback: bool = False

    def to_json(self) -> dict:
        return dict(self.__dict__)


# -- residue prefilter --

def _sequence_mod(coeffs: Sequence[int], initials: Sequence[int], M: int) -> tuple[list[int], int, int]:
    """U_n mod M as (values, preperiod, period) via state-vector cycle detection."""
    k = len(coeffs)
    state = tuple(u % M for u in initials)
    seen = {state: 0}
    values = list(state)
    n = 0
    while True:
        nxt = sum(coeffs[i] * values[-1 - i] for i in range(k)) % M
        values.append(nxt)
        n += 1
        state = tuple(values[n:n + k])
        if state in seen:
            start = seen[state]
            return values, start, n - start
        seen[state] = n
        if n > MAX_STATE_STEPS:
            raise ValueError(f"period of the recurrence mod {M} is too long for the prefilter")


def _unit_residues(primes: Sequence[int], M: int) -> set[int]:
    """{+-prod p_i^e_i mod M : e_i >= 0}: closure of 1 under multiplication by each p_i."""
    reach = {1 % M}
    frontier = [1 % M]
    while frontier:
        x = frontier.pop()
        for p in primes:
            y = x * p % M
            if y not in reach:
                reach.add(y)
                frontier.append(y)
    return reach | {(-x) % M for x in reach}


def _sumset(units: set[int], r: int, M: int) -> np.ndarray:
    one = np.zeros(M, dtype=bool)
    one[list(units)] = True
    acc = one
    for _ in range(r - 1):
        nxt = np.zeros(M, dtype=bool)
        for x in units:
            nxt |= np.roll(acc, x)
        acc = nxt
    return acc


@dataclass
class ResiduePrefilter:
    """Predicate on (n, m): False only when aU_n + bU_m is no sum of r S-units modulo some M."""

    moduli: tuple[int, ...]
    a: int
    b: int
    _tables: list = field(default_factory=list, repr=False)

    def residue(self, j: int, n: int) -> int:
        values, start, period = self._tables[j][:3]
        if n < len(values):
            return values[n]
        return values[start + (n - start) % period]

    def __call__(self, n: int, m: int) -> bool:
        for j, M in enumerate(self.moduli):
            allowed = self._tables[j][3]
            if not allowed[(self.a * self.residue(j, n) + self.b * self.residue(j, m)) % M]:
                return False
        return True


def residue_prefilter(inst: ProblemInstance, moduli: Iterable[int]) -> ResiduePrefilter:
    mods = tuple(int(M) for M in moduli)
    for M in mods:
        if M <= 1:
            raise ValueError("moduli must exceed 1")
        if M > 1 << 32:
            raise ValueError("moduli must be at most 2^32")
    for i, M in enumerate(mods):
        for N in mods[i + 1:]:
            if math.gcd(M, N) != 1:
                raise ValueError(f"moduli {M} and {N} are not coprime")
    pf = ResiduePrefilter(mods, inst.a, inst.b)
    for M in mods:
        values, start, period = _sequence_mod(inst.rec.coefficients, inst.rec.initials, M)
        allowed = _sumset(_unit_residues(inst.S.primes, M), inst.r, M)
        pf._tables.append((values, start, period, allowed))
    return pf


# -- engines --

def _targets(inst: ProblemInstance, nmax: int, zmax: int, keep: Optional[Callable[[int, int], bool]],
             stats: SearchStats) -> Iterator[tuple[int, int, int]]:
    terms = inst.rec.terms(nmax + 1)
    limit = inst.r * zmax
    for n in range(nmax + 1):
        for m in range(n + 1):
            stats.pairs_total += 1
            target = inst.a * terms[n] + inst.b * terms[m]
            if abs(target) > limit:
                stats.pruned_size += 1
                continue
            if keep is not None and not keep(n, m):
                stats.pruned_residue += 1
                continue
            yield n, m, target


def _mitm(inst, targets, units, index_cap, stats) -> set[tuple[int, int, tuple[int, ...]]]:
    vals = [u.value for u in units]
    r = inst.r
    big, small = (r + 1) // 2, r // 2
    size = math.comb(len(vals) + big - 1, big)
    if size > index_cap:
        stats.fallback = True
        return _nested_fallback(inst, targets, units)
    index: dict[int, list[tuple[int, ...]]] = {}
    for combo in combinations_with_replacement(range(len(vals)), big):
        index.setdefault(sum(vals[i] for i in combo), []).append(combo)
    stats.index_entries = size
    probes = [(sum(vals[i] for i in c), c) for c in combinations_with_replacement(range(len(vals)), small)]
    found = set()
    for n, m, target in targets:
        for s, head in probes:
            for tail in index.get(target - s, ()):
                found.add((n, m, tuple(sorted(head + tail))))
    return found


def _nested_fallback(inst, targets, units) -> set[tuple[int, int, tuple[int, ...]]]:
    """r-1 nested loops and an exact smoothness test on the last summand."""
    vals = [u.value for u in units]
    pos = {v: i for i, v in enumerate(vals)}
    zmax = abs(vals[-1])
    found = set()
    for n, m, target in targets:
        for combo in combinations_with_replacement(range(len(vals)), inst.r - 1):
            rest = target - sum(vals[i] for i in combo)
            if rest == 0 or abs(rest) > zmax:
                continue
            try:
                factor_over_S(rest, inst.S)
            except NotSmooth:
                continue
            found.add((n, m, tuple(sorted(combo + (pos[rest],)))))
    return found


def _naive(inst, targets, units) -> set[tuple[int, int, tuple[int, ...]]]:
    vals = np.array([u.value for u in units], dtype=np.int64)
    zmax = int(np.abs(vals).max())
    U = len(vals)
    r = inst.r
    # dense value -> unit index table for the membership test
    lookup = np.full(2 * zmax + 1, -1, dtype=np.int64)
    lookup[vals + zmax] = np.arange(U)
    if r > 1:
        sums = vals.copy()
        for _ in range(r - 2):
            sums = np.add.outer(sums, vals).ravel()
    found = set()
    for n, m, target in targets:
        if r == 1:
            if abs(target) > zmax:
                continue
            rest = np.array([target], dtype=np.int64)
            flat = np.array([0])
        else:
            rest_all = target - sums
            flat = np.nonzero(np.abs(rest_all) <= zmax)[0]
            rest = rest_all[flat]
            if rest.size == 0:
                continue
        idx = lookup[rest + zmax]
        hit = idx >= 0
        if not hit.any():
            continue
        last = idx[hit][:, None]
        if r > 1:
            head = np.stack(np.unravel_index(flat[hit], (U,) * (r - 1)), axis=1)
            combos = np.concatenate([head, last], axis=1)
        else:
            combos = last
        combos = np.unique(np.sort(combos, axis=1), axis=0)
        found.update((n, m, tuple(row)) for row in combos.tolist())
    return found


def brute_solutions(
    inst: ProblemInstance,
    nmax: int,
    zmax: int,
    engine: str = "mitm",
    moduli: Optional[Sequence[int]] = None,
    index_cap: int = DEFAULT_INDEX_CAP,
    require_dominance: bool = False,
    require_size: bool = False,
    stats: Optional[SearchStats] = None,
) -> list[SolutionRecord]:
    """All solutions with 0 <= m <= n <= nmax and |z_i| <= zmax, sorted."""
    if nmax < 0 or zmax < 1:
        raise ValueError("need nmax >= 0 and zmax >= 1")
    stats = stats if stats is not None else SearchStats()
    stats.engine = engine
    units = enumerate_sunits(inst.S, zmax)
    stats.units = len(units)
    keep = residue_prefilter(inst, moduli) if moduli else None
    targets = _targets(inst, nmax, zmax, keep, stats)
    if engine == "mitm":
        found = _mitm(inst, targets, units, index_cap, stats)
    elif engine == "naive":
        if zmax > 1 << 28:
            raise ValueError("naive engine needs zmax <= 2^28")
        found = _naive(inst, targets, units)
    else:
        raise ValueError(f"unknown engine {engine!r}")

    terms = inst.rec.terms(nmax + 1)
    out = []
    for n, m, combo in found:
        summands = tuple(units[i] for i in combo)
        lhs = inst.a * terms[n] + inst.b * terms[m]
        rec = SolutionRecord(
            n=n,
            m=m,
            summands=summands,
            lhs_value=lhs,
            satisfies_dominance=tuple_dominance([u.value for u in summands], inst.eps, inst.strict_dominance),
            satisfies_size_hypothesis=abs(lhs) >= abs(terms[n]),
        )
        if require_dominance and not rec.satisfies_dominance:
            continue
        if require_size and not rec.satisfies_size_hypothesis:
            continue
        out.append(rec)
    out.sort(key=SolutionRecord.sort_key)
    stats.solutions = len(out)
    return out


def verify_solution(inst: ProblemInstance, rec: SolutionRecord) -> bool:
    """Exact recheck of the equation, smoothness, canonical order and flags."""
    if not 0 <= rec.m <= rec.n or len(rec.summands) != inst.r:
        return False
    for u in rec.summands:
        try:
            if factor_over_S(u.value, inst.S) != u:
                return False
        except (NotSmooth, ValueError):
            return False
    keys = [u.key() for u in rec.summands]
    if keys != sorted(keys):
        return False
    lhs = inst.a * inst.rec.term(rec.n) + inst.b * inst.rec.term(rec.m)
    if lhs != rec.lhs_value or lhs != sum(u.value for u in rec.summands):
        return False
    dom = tuple_dominance([u.value for u in rec.summands], inst.eps, inst.strict_dominance)
    size = abs(lhs) >= abs(inst.rec.term(rec.n))
    return dom == rec.satisfies_dominance and size == rec.satisfies_size_hypothesis
