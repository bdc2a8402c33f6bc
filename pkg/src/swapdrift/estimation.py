"""Overlap estimation, drift detection, and measurement budgets.

An exchange-outcome tally with n+ plus and n- minus counts out of N gives

    V_hat = (n+ - n-) / N,      stderr = 2 sqrt(f+ f- / N),

with f+- the outcome frequencies; stderr equals sqrt((1 - V_hat^2) / N).

A drifting source makes the mean overlap fall with pair separation k:
linearly (rate/2 per step) for diffusive drift, quadratically (rate k^2 / 2)
for systematic drift.  Closing those laws against estimates at separations
1 and 2 recovers the source purity and the drift rate; the increment ratio at
separations 1..3 classifies the drift kind.

Budget formulas answer "how many exchange measurements per separation until
the separation-1 and separation-2 error bars stop overlapping".  Two variants
are exposed everywhere: ``printed`` solves the half-weighted bar condition
(1/2) dV1 + (1/2) dV2 < gap, and ``rederived`` demands the full bars clear the
gap, which costs exactly 4x more.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

from .errors import InvalidInputError, UndefinedRatioError
from .measurement import DecoherenceChannel, OutcomeTally

Variant = Literal["printed", "rederived"]

RATIO_TOL_DEFAULT = 0.1


@dataclass(frozen=True)
class OverlapEstimate:
    """Estimated mean overlap at one pair separation."""

    value: float
    stderr: float
    n: int
    separation: int

    def __post_init__(self):
        if not -1.0 <= self.value <= 1.0:
            raise InvalidInputError(f"estimate {self.value} outside [-1, 1]")
        if self.stderr < 0.0:
            raise InvalidInputError("stderr must be >= 0")
        if self.n < 1:
            raise InvalidInputError("n must be >= 1")
        if self.separation < 1:
            raise InvalidInputError("separation must be >= 1")


@dataclass(frozen=True)
class DiffusiveFit:
    """Purity and linear drift rate recovered from separations 1 and 2."""

    purity: float
    purity_stderr: float
    rate: float
    rate_stderr: float


@dataclass(frozen=True)
class SystematicFit:
    """Purity and quadratic drift rate recovered from separations 1 and 2."""

    purity: float
    purity_stderr: float
    rate: float
    rate_stderr: float


@dataclass(frozen=True)
class RatioEstimate:
    """Increment ratio (V1 - V2) / (V2 - V3) with a propagated error."""

    value: float
    stderr: float


@dataclass(frozen=True)
class SampleBudget:
    """Minimal measurements per separation for a detectable drift signal."""

    n_min: float
    variant: Variant

    def __post_init__(self):
        if not self.n_min > 0.0:
            raise InvalidInputError("n_min must be positive")
        if self.variant not in ("printed", "rederived"):
            raise InvalidInputError(f"unknown variant {self.variant!r}")


@dataclass(frozen=True)
class DriftVerdict:
    """Outcome of the three-separation drift test."""

    drifting: bool
    classification: Literal["stationary", "diffusive", "systematic", "mixed", "inconclusive"]
    ratio: float | None
    ratio_stderr: float | None
    details: dict = field(default_factory=dict)


def estimate_overlap(tally: OutcomeTally) -> OverlapEstimate:
    """Turn an outcome tally into a mean-overlap estimate with its error bar."""
    n = tally.total
    if n < 1:
        raise InvalidInputError("tally is empty")
    f_plus = tally.n_plus / n
    f_minus = tally.n_minus / n
    value = f_plus - f_minus
    stderr = 2.0 * math.sqrt(f_plus * f_minus / n)
    return OverlapEstimate(value=value, stderr=stderr, n=n, separation=tally.separation)


def drift_detected(est_1: OverlapEstimate, est_k: OverlapEstimate) -> bool:
    """Half-weighted bar test: (dV1 + dVk) / 2 < V1 - Vk."""
    if est_1.separation != 1:
        raise InvalidInputError("first argument must be the separation-1 estimate")
    if est_k.separation <= 1:
        raise InvalidInputError("second argument must have separation > 1")
    return 0.5 * est_1.stderr + 0.5 * est_k.stderr < est_1.value - est_k.value


def recover_purity_diffusive(est_1: OverlapEstimate, est_2: OverlapEstimate) -> DiffusiveFit:
    """Close the linear law V_k = purity - k rate / 2 on separations 1 and 2.

    purity = 2 V1 - V2 and rate = 2 (V1 - V2), with errors propagated
    linearly from the two independent estimates.
    """
    _require_separations(est_1, est_2)
    purity = 2.0 * est_1.value - est_2.value
    rate = 2.0 * (est_1.value - est_2.value)
    purity_err = math.sqrt(4.0 * est_1.stderr**2 + est_2.stderr**2)
    rate_err = 2.0 * math.sqrt(est_1.stderr**2 + est_2.stderr**2)
    return DiffusiveFit(purity=purity, purity_stderr=purity_err, rate=rate, rate_stderr=rate_err)


def recover_purity_systematic(est_1: OverlapEstimate, est_2: OverlapEstimate) -> SystematicFit:
    """Close the quadratic law V_k = purity - k^2 rate / 2 on separations 1 and 2.

    rate = 2 (V1 - V2) / 3 and purity = V1 + rate / 2 = (4 V1 - V2) / 3.
    """
    _require_separations(est_1, est_2)
    rate = 2.0 * (est_1.value - est_2.value) / 3.0
    purity = est_1.value + 0.5 * rate
    rate_err = (2.0 / 3.0) * math.sqrt(est_1.stderr**2 + est_2.stderr**2)
    purity_err = math.sqrt(16.0 * est_1.stderr**2 + est_2.stderr**2) / 3.0
    return SystematicFit(purity=purity, purity_stderr=purity_err, rate=rate, rate_stderr=rate_err)


def _require_separations(est_1: OverlapEstimate, est_2: OverlapEstimate) -> None:
    if est_1.separation != 1 or est_2.separation != 2:
        raise InvalidInputError(
            f"recovery needs separations (1, 2), got ({est_1.separation}, {est_2.separation})"
        )


def increment_ratio(
    est_1: OverlapEstimate, est_2: OverlapEstimate, est_3: OverlapEstimate
) -> RatioEstimate:
    """Estimate (V1 - V2) / (V2 - V3) with first-order error propagation.

    Raises UndefinedRatioError when the denominator is smaller than its own
    propagated error, i.e. statistically indistinguishable from zero.
    """
    seps = (est_1.separation, est_2.separation, est_3.separation)
    if seps != (1, 2, 3):
        raise InvalidInputError(f"increment ratio needs separations (1, 2, 3), got {seps}")
    num = est_1.value - est_2.value
    den = est_2.value - est_3.value
    den_err = math.sqrt(est_2.stderr**2 + est_3.stderr**2)
    if abs(den) <= den_err:
        raise UndefinedRatioError(
            f"denominator {den} within its propagated error {den_err}"
        )
    ratio = num / den
    var = (
        est_1.stderr**2
        + (1.0 + ratio) ** 2 * est_2.stderr**2
        + ratio**2 * est_3.stderr**2
    ) / den**2
    return RatioEstimate(value=ratio, stderr=math.sqrt(var))


def classify_drift(
    est_1: OverlapEstimate,
    est_2: OverlapEstimate,
    est_3: OverlapEstimate,
    ratio_tol: float = RATIO_TOL_DEFAULT,
) -> DriftVerdict:
    """Three-separation drift test with increment-ratio classification.

    Stationary when neither separation 2 nor 3 shows a detectable drop.
    Otherwise the increment ratio is matched against 1 (diffusive) and 3/5
    (systematic) within ``ratio_tol``; values strictly between the two bands
    are mixed, anything else (or an undefined ratio) is inconclusive.
    """
    if not 0.0 < ratio_tol < 0.2:
        raise InvalidInputError("ratio_tol must lie in (0, 0.2) so the bands stay disjoint")
    det2 = drift_detected(est_1, est_2)
    det3 = drift_detected(est_1, est_3)
    details = {"detected_sep2": det2, "detected_sep3": det3, "ratio_tol": ratio_tol}
    if not det2 and not det3:
        return DriftVerdict(
            drifting=False, classification="stationary", ratio=None, ratio_stderr=None,
            details=details,
        )
    try:
        ratio = increment_ratio(est_1, est_2, est_3)
    except UndefinedRatioError:
        details["ratio_undefined"] = True
        return DriftVerdict(
            drifting=True, classification="inconclusive", ratio=None, ratio_stderr=None,
            details=details,
        )
    r = ratio.value
    if abs(r - 1.0) <= ratio_tol:
        kind = "diffusive"
    elif abs(r - 3.0 / 5.0) <= ratio_tol:
        kind = "systematic"
    elif 3.0 / 5.0 + ratio_tol < r < 1.0 - ratio_tol:
        kind = "mixed"
    else:
        kind = "inconclusive"
    return DriftVerdict(
        drifting=True, classification=kind, ratio=r, ratio_stderr=ratio.stderr,
        details=details,
    )


def _bar_coefficient(mean_overlap: float, what: str) -> float:
    """sqrt((1 - V^2)) for the error-bar formula; validates V in [-1, 1]."""
    if not -1.0 <= mean_overlap <= 1.0:
        raise InvalidInputError(f"{what} = {mean_overlap} leaves [-1, 1]; frequencies invalid")
    return math.sqrt(1.0 - mean_overlap * mean_overlap)


def _apply_variant(n_printed: float, variant: Variant) -> SampleBudget:
    if variant == "printed":
        return SampleBudget(n_min=n_printed, variant=variant)
    if variant == "rederived":
        return SampleBudget(n_min=4.0 * n_printed, variant=variant)
    raise InvalidInputError(f"unknown variant {variant!r}")


def min_measurements_diffusive(
    purity: float, rate: float, variant: Variant = "printed"
) -> SampleBudget:
    """Measurements per separation to resolve a linear drift of the given rate.

    Solves the bar condition at separations 1 and 2, where the expected
    overlaps are purity - rate/2 and purity - rate:

        N = [(sqrt(1 - V1^2) + sqrt(1 - V2^2)) / rate]^2

    for the ``printed`` variant; ``rederived`` is exactly 4x larger.
    """
    if not 0.0 < rate < 2.0:
        raise InvalidInputError("rate must lie in (0, 2)")
    v1 = _bar_coefficient(purity - rate / 2.0, "separation-1 overlap")
    v2 = _bar_coefficient(purity - rate, "separation-2 overlap")
    return _apply_variant(((v1 + v2) / rate) ** 2, variant)


def min_measurements_systematic(
    purity: float, rate: float, variant: Variant = "printed"
) -> SampleBudget:
    """Measurements per separation to resolve a quadratic drift of the given rate.

    The separation-1/2 gap is 3 rate / 2, three times the diffusive gap at
    equal rate, so systematic drifts are cheaper to detect:

        N = [(sqrt(1 - V1^2) + sqrt(1 - V2^2)) / (3 rate)]^2.
    """
    if not rate > 0.0:
        raise InvalidInputError("rate must be positive")
    v1 = _bar_coefficient(purity - rate / 2.0, "separation-1 overlap")
    v2 = _bar_coefficient(purity - 2.0 * rate, "separation-2 overlap")
    return _apply_variant(((v1 + v2) / (3.0 * rate)) ** 2, variant)


def min_measurements_at_separation(
    purity: float,
    rate: float,
    k: int,
    channel: DecoherenceChannel,
    variant: Variant = "printed",
    decohere_nearest: bool = True,
) -> SampleBudget:
    """Budget for testing separation k against separation 1 under storage noise.

    The gap between the bare overlaps is (k - 1) rate / 2.  Each arm is
    measured through the storage channel, so its frequencies come from the
    decohered mean overlap and its bar is amplified by exp(k eps) (exp(eps)
    for the separation-1 arm; set ``decohere_nearest=False`` to model
    separation-1 pairs measured without any storage interval).
    """
    if k < 2:
        raise InvalidInputError("separation k must be >= 2")
    if not rate > 0.0:
        raise InvalidInputError("rate must be positive")
    v1 = purity - rate / 2.0
    vk = purity - k * rate / 2.0
    # Validate the bare overlaps before mixing in decoherence.
    _bar_coefficient(v1, "separation-1 overlap")
    _bar_coefficient(vk, f"separation-{k} overlap")
    eps, dim = channel.epsilon, channel.dim
    if decohere_nearest:
        a1 = math.exp(-eps)
        term_1 = math.exp(eps) * _bar_coefficient(
            a1 * v1 + (1.0 - a1) / dim, "decohered separation-1 overlap"
        )
    else:
        term_1 = _bar_coefficient(v1, "separation-1 overlap")
    ak = math.exp(-k * eps)
    term_k = math.exp(k * eps) * _bar_coefficient(
        ak * vk + (1.0 - ak) / dim, f"decohered separation-{k} overlap"
    )
    gap = (k - 1) * rate / 2.0
    n_printed = ((term_1 + term_k) / (2.0 * gap)) ** 2
    return _apply_variant(n_printed, variant)


def optimal_separation(
    purity: float,
    rate: float,
    channel: DecoherenceChannel,
    k_max: int,
    variant: Variant = "printed",
    decohere_nearest: bool = True,
) -> int:
    """Separation in [2, k_max] minimising the storage-noise budget (ties: smallest k).

    With no storage noise the budget falls monotonically in k, so the optimum
    is k_max; any positive rate makes the exp(k eps) amplification win
    eventually and pushes the optimum into the interior.
    """
    if k_max < 2:
        raise InvalidInputError("k_max must be >= 2")
    best_k, best_n = None, math.inf
    for k in range(2, k_max + 1):
        n = min_measurements_at_separation(
            purity, rate, k, channel, variant=variant, decohere_nearest=decohere_nearest
        ).n_min
        if n < best_n:
            best_k, best_n = k, n
    if best_k is None:  # pragma: no cover - k_max >= 2 guarantees one candidate
        raise InvalidInputError("no admissible separation")
    return best_k
