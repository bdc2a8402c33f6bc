"""Vectorised Monte Carlo over Bloch vectors.

The object pipeline (DensityMatrix + step + sample_swap) validates every
intermediate state, which is the right default but too slow for million-pair
studies.  This module evolves arrays of Bloch vectors with the same rotation
convention as ``linalg.qubit_rotation`` + ``linalg.evolve`` (about the drawn
axis by the angle -2 delta |axis|) and samples exchange outcomes in bulk.
Equivalence with the object path is pinned by tests, not assumed.

Chains here are independent replicas all starting from the same state, which
matches the theory constants evaluated at that state.
"""

from __future__ import annotations

import numpy as np

from .drift import DriftProcess
from .errors import InternalError, InvalidInputError
from .measurement import DecoherenceChannel, OutcomeTally, PROB_CLAMP


def rotate_bloch(vectors: np.ndarray, axes: np.ndarray, delta: float) -> np.ndarray:
    """Rodrigues rotation of each row of ``vectors`` about the matching row of ``axes``.

    The rotation angle is -2 delta |axis|, matching the matrix path
    evolve(rho, qubit_rotation(axis, delta)).  Zero axes leave rows unchanged.
    """
    v = np.asarray(vectors, dtype=float)
    a = np.asarray(axes, dtype=float)
    if v.shape != a.shape or v.ndim != 2 or v.shape[1] != 3:
        raise InvalidInputError(f"need matching (n, 3) arrays, got {v.shape} and {a.shape}")
    norms = np.linalg.norm(a, axis=1)
    ok = norms > 0.0
    n_hat = np.zeros_like(a)
    n_hat[ok] = a[ok] / norms[ok, None]
    theta = -2.0 * delta * norms
    cos_t = np.cos(theta)[:, None]
    sin_t = np.sin(theta)[:, None]
    dot = np.sum(n_hat * v, axis=1)[:, None]
    out = v * cos_t + np.cross(n_hat, v) * sin_t + n_hat * dot * (1.0 - cos_t)
    out[~ok] = v[~ok]
    return out


def draw_axes(process: DriftProcess, count: int, rng: np.random.Generator) -> np.ndarray:
    """Vectorised counterpart of DriftProcess.draw_axis (count rows)."""
    if count < 1:
        raise InvalidInputError("count must be >= 1")
    if process.kind == "systematic":
        return np.tile(process.systematic_axis, (count, 1))
    g = rng.standard_normal((count, 3)) * process.diffusion_sigma
    if process.kind == "diffusive":
        return g
    w = process.mix_weight
    return w * process.systematic_axis + (1.0 - w) * g


def evolve_chains(
    start: np.ndarray, process: DriftProcess, steps: int, chains: int, rng: np.random.Generator
) -> np.ndarray:
    """Final Bloch vectors of ``chains`` independent replicas after ``steps`` steps."""
    if steps < 0:
        raise InvalidInputError("steps must be >= 0")
    v = np.tile(np.asarray(start, dtype=float).reshape(1, 3), (chains, 1))
    for _ in range(steps):
        v = rotate_bloch(v, draw_axes(process, chains, rng), process.delta)
    return v


def chain_distance_sq(
    start: np.ndarray,
    process: DriftProcess,
    separations: tuple[int, ...],
    chains: int,
    rng: np.random.Generator,
) -> dict[int, np.ndarray]:
    """Per-chain squared distances Tr[(rho_0 - rho_k)^2] at each requested separation.

    All separations are read off the same chains, so returned arrays are
    correlated across k; that is what a paired ratio test wants.
    """
    if not separations:
        raise InvalidInputError("need at least one separation")
    seps = sorted(set(int(k) for k in separations))
    if seps[0] < 1:
        raise InvalidInputError("separations must be >= 1")
    v0 = np.tile(np.asarray(start, dtype=float).reshape(1, 3), (chains, 1))
    v = v0.copy()
    out: dict[int, np.ndarray] = {}
    for k in range(1, seps[-1] + 1):
        v = rotate_bloch(v, draw_axes(process, chains, rng), process.delta)
        if k in seps:
            diff = v - v0
            out[k] = 0.5 * np.sum(diff * diff, axis=1)
    return out


def pair_overlaps(
    start: np.ndarray,
    process: DriftProcess,
    separation: int,
    pairs: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Overlaps Tr(rho_0 rho_k) of ``pairs`` independent replicas."""
    if separation < 1:
        raise InvalidInputError("separation must be >= 1")
    v0 = np.asarray(start, dtype=float).reshape(3)
    vk = evolve_chains(v0, process, separation, pairs, rng)
    return 0.5 * (1.0 + vk @ v0)


def swap_outcome_counts(overlaps: np.ndarray, rng: np.random.Generator) -> tuple[int, int]:
    """Sample one exchange outcome per overlap; returns (n_plus, n_minus).

    Consumes exactly one uniform per outcome, in array order, so a scalar
    sample_swap loop over the same stream produces identical outcomes.
    """
    v = np.asarray(overlaps, dtype=float)
    if v.ndim != 1 or v.size < 1:
        raise InvalidInputError("overlaps must be a non-empty 1-d array")
    if np.any(v < -PROB_CLAMP) or np.any(v > 1.0 + PROB_CLAMP):
        bad = v[(v < -PROB_CLAMP) | (v > 1.0 + PROB_CLAMP)][0]
        raise InternalError(f"overlap {bad} outside [0, 1] beyond clamp tolerance")
    p_plus = np.clip(0.5 * (1.0 + v), 0.0, 1.0)
    n_plus = int(np.count_nonzero(rng.random(v.size) < p_plus))
    return n_plus, v.size - n_plus


def measure_drifting_pairs(
    start: np.ndarray,
    process: DriftProcess,
    separation: int,
    pairs: int,
    rng: np.random.Generator,
    channel: DecoherenceChannel | None = None,
) -> OutcomeTally:
    """Bulk tally of exchange outcomes at one separation (storage noise optional)."""
    v = pair_overlaps(start, process, separation, pairs, rng)
    if channel is not None:
        if channel.dim != 2:
            raise InvalidInputError("Bloch-vector chains are qubit-specific (dim 2)")
        a = np.exp(-separation * channel.epsilon)
        v = a * v + (1.0 - a) / channel.dim
    n_plus, n_minus = swap_outcome_counts(v, rng)
    return OutcomeTally(separation=separation, n_plus=n_plus, n_minus=n_minus)
