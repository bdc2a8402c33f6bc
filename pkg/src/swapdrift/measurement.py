"""Two-copy exchange measurements and storage decoherence.

Measuring the exchange (swap) observable on a product of two states yields
+1 or -1, with expectation equal to the state overlap Tr(rho_a rho_b).
Sampling those outcomes is the only statistical primitive the estimation
layer needs.

Stored copies depolarise: after k storage intervals at rate ``epsilon`` a
state shrinks toward the maximally mixed state by the factor exp(-k epsilon).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np

from .errors import InternalError, InvalidInputError
from .linalg import DensityMatrix, overlap

# Exchange-measurement outcome: one of the two swap eigenvalues.
SwapOutcome = Literal[1, -1]

PROB_CLAMP = 1e-12  # tiny negative probabilities are rounding noise; clamp, never hide more


@dataclass(frozen=True)
class OutcomeTally:
    """Counts of +1 / -1 exchange outcomes at one pair separation."""

    separation: int
    n_plus: int
    n_minus: int

    def __post_init__(self):
        if self.separation < 1:
            raise InvalidInputError("separation must be >= 1")
        if self.n_plus < 0 or self.n_minus < 0:
            raise InvalidInputError("outcome counts must be non-negative")

    @property
    def total(self) -> int:
        return self.n_plus + self.n_minus


@dataclass(frozen=True)
class DecoherenceChannel:
    """Depolarising storage noise: rate per copy interval and Hilbert dimension."""

    epsilon: float
    dim: int

    def __post_init__(self):
        if self.epsilon < 0.0:
            raise InvalidInputError("epsilon must be >= 0")
        if self.dim < 2:
            raise InvalidInputError("dim must be >= 2")


class InferredOverlap(NamedTuple):
    """Overlap reconstructed from a stored-copy measurement, with its error scale."""

    value: float
    error_scale: float


def _clamped_probability(p: float, what: str) -> float:
    if p < -PROB_CLAMP or p > 1.0 + PROB_CLAMP:
        raise InternalError(f"{what} = {p} outside [0, 1] beyond clamp tolerance")
    return min(max(p, 0.0), 1.0)


def sample_swap(
    rho_a: DensityMatrix, rho_b: DensityMatrix, rng: np.random.Generator
) -> SwapOutcome:
    """Draw one exchange outcome; P(+1) = (1 + overlap) / 2.  Consumes one uniform."""
    v = overlap(rho_a, rho_b)
    if v < -PROB_CLAMP or v > 1.0 + PROB_CLAMP:
        raise InternalError(f"overlap {v} outside [0, 1] beyond clamp tolerance")
    p_plus = _clamped_probability(0.5 * (1.0 + v), "outcome probability")
    return 1 if rng.random() < p_plus else -1


def decohere(rho: DensityMatrix, k: int, channel: DecoherenceChannel) -> DensityMatrix:
    """State after k storage intervals: exp(-k eps) rho + (1 - exp(-k eps)) I / dim."""
    if k < 0:
        raise InvalidInputError("interval count k must be >= 0")
    if rho.dim != channel.dim:
        raise InvalidInputError(f"state dim {rho.dim} != channel dim {channel.dim}")
    a = math.exp(-k * channel.epsilon)
    m = a * rho.matrix + (1.0 - a) * np.eye(rho.dim) / rho.dim
    return DensityMatrix(m)


def decohered_overlap(
    rho_new: DensityMatrix, rho_stored: DensityMatrix, k: int, channel: DecoherenceChannel
) -> float:
    """Overlap seen when one copy of the pair sat in storage for k intervals.

    Closed form exp(-k eps) Tr(rho_new rho_stored) + (1 - exp(-k eps)) / dim;
    identical to overlap(rho_new, decohere(rho_stored, k, channel)).
    """
    if k < 0:
        raise InvalidInputError("interval count k must be >= 0")
    if rho_new.dim != channel.dim or rho_stored.dim != channel.dim:
        raise InvalidInputError("state dims must match the channel dim")
    a = math.exp(-k * channel.epsilon)
    return a * overlap(rho_new, rho_stored) + (1.0 - a) / channel.dim


def infer_overlap(measured: float, k: int, channel: DecoherenceChannel) -> InferredOverlap:
    """Invert the storage decoherence on a measured overlap.

    Returns the bare overlap together with the factor exp(k eps) by which any
    error bar on the measured value is amplified.
    """
    if k < 0:
        raise InvalidInputError("interval count k must be >= 0")
    scale = math.exp(k * channel.epsilon)
    value = scale * (measured - (1.0 - math.exp(-k * channel.epsilon)) / channel.dim)
    return InferredOverlap(value=value, error_scale=scale)


def measure_sequence_pairs(
    states,
    separation: int,
    pairs: int,
    rng: np.random.Generator,
    channel: DecoherenceChannel | None = None,
) -> OutcomeTally:
    """Sample exchange outcomes on disjoint pairs (n, n + separation) of a sequence.

    Pair j uses elements j*(separation+1) and j*(separation+1) + separation,
    so no element is shared between pairs.  When a channel is given the
    earlier element of each pair (the one that waited in storage) is decohered
    by ``separation`` intervals before sampling.
    """
    seq = states.states if hasattr(states, "states") else tuple(states)
    if separation < 1:
        raise InvalidInputError("separation must be >= 1")
    if pairs < 1:
        raise InvalidInputError("pairs must be >= 1")
    needed = pairs * (separation + 1)
    if len(seq) < needed:
        raise InvalidInputError(
            f"sequence too short: {len(seq)} states, need {needed} for "
            f"{pairs} disjoint pairs at separation {separation}"
        )
    n_plus = 0
    for j in range(pairs):
        lo = j * (separation + 1)
        early, late = seq[lo], seq[lo + separation]
        if channel is not None:
            early = decohere(early, separation, channel)
        if sample_swap(early, late, rng) == 1:
            n_plus += 1
    return OutcomeTally(separation=separation, n_plus=n_plus, n_minus=pairs - n_plus)
