"""Exception hierarchy. Hypothesis failures carry a machine-readable reason code."""

from __future__ import annotations


class SunitrecError(Exception):
    reason = "error"


class PrecisionExhausted(SunitrecError):
    """Working precision passed the configured cap before a result was certified."""

    reason = "precision_exhausted"


class InvalidRecurrence(SunitrecError, ValueError):
    reason = "invalid_recurrence"


class NotSmooth(SunitrecError, ValueError):
    """Integer has a prime factor outside S."""

    reason = "not_smooth"


class InvalidMatveevInput(SunitrecError, ValueError):
    reason = "invalid_matveev_input"


class HypothesisFailure(SunitrecError):
    """A precondition of the bound does not hold, so no certificate is issued."""


class DegenerateRecurrence(HypothesisFailure):
    reason = "degenerate"


class NoDominantRoot(HypothesisFailure):
    reason = "no_dominant_root"


class DominanceUndecided(HypothesisFailure):
    reason = "dominance_undecided"


class DominantRootIntegerGt1(HypothesisFailure):
    reason = "dominant_root_integer_gt1"


class DominantRootNotRealGt1(HypothesisFailure):
    reason = "dominant_root_not_real_gt1"


class NotConstantLeadCoefficient(HypothesisFailure):
    reason = "not_constant_lead_coefficient"


class Eta1Uncertified(HypothesisFailure):
    reason = "eta1_uncertified"
