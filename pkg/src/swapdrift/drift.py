"""Qubit source drift models and their small-angle theory constants.

A drifting source emits state n+1 by conjugating state n with a random
rotation U = exp(i delta r . sigma).  The rotation axis r is

* a fixed unit vector for a purely systematic drift,
* an isotropic Gaussian draw (per-component std ``diffusion_sigma``) for a
  purely diffusive drift,
* the convex blend w * axis + (1 - w) * gaussian for a mixed drift with
  systematic weight w.

For small delta the squared Hilbert-Schmidt distance between states k steps
apart grows quadratically in k for the systematic part and linearly for the
diffusive part; the two per-step constants below quantify those laws.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import rng as rngmod
from .errors import InvalidInputError, UndefinedRatioError
from .linalg import ATOL_STRUCT, DensityMatrix, PAULIS, evolve, purity, qubit_rotation

DriftKind = Literal["systematic", "diffusive", "mixed"]

DELTA_HARD_LIMIT = 0.3
DELTA_WARN_LIMIT = 0.1

# Increment-ratio signatures of the two pure drift kinds (see increment_ratio_theory).
RATIO_DIFFUSIVE = 1.0
RATIO_SYSTEMATIC = 3.0 / 5.0


def _unit_axis(axis) -> np.ndarray:
    a = np.asarray(axis, dtype=float).reshape(-1)
    if a.shape != (3,):
        raise InvalidInputError(f"axis must be a 3-vector, got shape {a.shape}")
    n = float(np.linalg.norm(a))
    if abs(n - 1.0) > 1e-8:
        raise InvalidInputError(f"axis must be unit length, got |a| = {n}")
    return a


@dataclass(frozen=True)
class DriftProcess:
    """Parameters of one drifting source.

    ``delta`` is the per-step rotation angle scale; values above 0.3 are
    rejected and values above 0.1 trigger a warning because the quadratic /
    linear distance laws are leading-order in delta.
    """

    kind: DriftKind
    delta: float
    systematic_axis: np.ndarray | None = None
    diffusion_sigma: float = 0.0
    mix_weight: float = 0.0

    def __post_init__(self):
        if self.kind not in ("systematic", "diffusive", "mixed"):
            raise InvalidInputError(f"unknown drift kind {self.kind!r}")
        if not self.delta > 0.0:
            raise InvalidInputError("delta must be positive")
        if self.delta > DELTA_HARD_LIMIT:
            raise InvalidInputError(f"delta = {self.delta} exceeds hard limit {DELTA_HARD_LIMIT}")
        if self.delta > DELTA_WARN_LIMIT:
            warnings.warn(
                f"delta = {self.delta} > {DELTA_WARN_LIMIT}: leading-order drift "
                "constants become inaccurate",
                stacklevel=2,
            )
        if self.kind in ("systematic", "mixed"):
            if self.systematic_axis is None:
                raise InvalidInputError(f"{self.kind} drift requires systematic_axis")
            axis = _unit_axis(self.systematic_axis)
            axis.setflags(write=False)
            object.__setattr__(self, "systematic_axis", axis)
        if self.kind in ("diffusive", "mixed") and not self.diffusion_sigma > 0.0:
            raise InvalidInputError(f"{self.kind} drift requires diffusion_sigma > 0")
        if self.kind == "mixed":
            if not 0.0 <= self.mix_weight <= 1.0:
                raise InvalidInputError("mix_weight must lie in [0, 1]")
            object.__setattr__(self, "mix_weight", float(self.mix_weight))
        elif self.kind == "systematic":
            object.__setattr__(self, "mix_weight", 1.0)
        else:
            object.__setattr__(self, "mix_weight", 0.0)

    @classmethod
    def systematic(cls, delta: float, axis) -> "DriftProcess":
        return cls(kind="systematic", delta=delta, systematic_axis=np.asarray(axis, float))

    @classmethod
    def diffusive(cls, delta: float, sigma: float) -> "DriftProcess":
        return cls(kind="diffusive", delta=delta, diffusion_sigma=sigma)

    @classmethod
    def mixed(cls, delta: float, axis, sigma: float, weight: float) -> "DriftProcess":
        return cls(
            kind="mixed",
            delta=delta,
            systematic_axis=np.asarray(axis, float),
            diffusion_sigma=sigma,
            mix_weight=weight,
        )

    def draw_axis(self, rng: np.random.Generator) -> np.ndarray:
        """One rotation axis.  Systematic drift consumes no randomness."""
        if self.kind == "systematic":
            return self.systematic_axis
        g = rng.standard_normal(3) * self.diffusion_sigma
        if self.kind == "diffusive":
            return g
        return self.mix_weight * self.systematic_axis + (1.0 - self.mix_weight) * g


def step(rho: DensityMatrix, process: DriftProcess, rng: np.random.Generator) -> DensityMatrix:
    """Advance the source by one emission: rho -> U rho U^dagger."""
    if rho.dim != 2:
        raise InvalidInputError("drift models are qubit-specific (dim 2)")
    axis = process.draw_axis(rng)
    if float(np.linalg.norm(axis)) == 0.0:
        return rho
    return evolve(rho, qubit_rotation(axis, process.delta))


@dataclass(frozen=True)
class SourceSequence:
    """Ordered emissions of one drifting source, all sharing the same purity."""

    states: tuple[DensityMatrix, ...]
    seed: int

    def __post_init__(self):
        if len(self.states) < 1:
            raise InvalidInputError("sequence must contain at least one state")
        p0 = purity(self.states[0])
        for i, s in enumerate(self.states):
            if abs(purity(s) - p0) > ATOL_STRUCT:
                raise InvalidInputError(
                    f"purity drifted at element {i}: {purity(s)} vs {p0}"
                )

    def __len__(self) -> int:
        return len(self.states)


def generate_sequence(
    rho0: DensityMatrix, process: DriftProcess, length: int, seed: int
) -> SourceSequence:
    """Emit ``length`` states starting from rho0, deterministically in ``seed``."""
    if length < 1:
        raise InvalidInputError("length must be >= 1")
    gen = rngmod.make_stream(seed, rngmod.DOMAIN_SEQUENCE)
    states = [rho0]
    for _ in range(length - 1):
        states.append(step(states[-1], process, gen))
    return SourceSequence(states=tuple(states), seed=seed)


@dataclass(frozen=True)
class DriftConstants:
    """Per-step distance constants: quadratic-law (systematic) and linear-law (diffusive)."""

    systematic: float
    diffusive: float

    def __post_init__(self):
        if self.systematic < 0.0 or self.diffusive < 0.0:
            raise InvalidInputError("drift constants must be non-negative")


def systematic_drift_constant(axis, delta: float, rho: DensityMatrix) -> float:
    """Quadratic-law constant of a fixed-axis drift at state rho.

    Equals -delta^2 Tr([a . sigma, rho]^2), i.e. delta^2 times the squared
    Frobenius norm of the commutator (the commutator of Hermitian matrices is
    anti-Hermitian, hence the sign).  For a qubit with Bloch vector v this is
    2 delta^2 |a x v|^2.
    """
    if rho.dim != 2:
        raise InvalidInputError("drift constants are qubit-specific")
    a = _unit_axis(axis)
    op = a[0] * PAULIS[0] + a[1] * PAULIS[1] + a[2] * PAULIS[2]
    c = op @ rho.matrix - rho.matrix @ op
    val = -(delta**2) * float(np.real(np.trace(c @ c)))
    return max(val, 0.0)


def diffusive_drift_constant(sigma: float, delta: float, rho: DensityMatrix) -> float:
    """Linear-law constant of an isotropic Gaussian-axis drift at state rho.

    The Gaussian average of -delta^2 Tr([g . sigma, rho]^2) reduces to a sum
    over the three coordinate axes weighted by sigma^2.  For a qubit with
    Bloch vector v this is 4 delta^2 sigma^2 |v|^2.
    """
    if rho.dim != 2:
        raise InvalidInputError("drift constants are qubit-specific")
    if sigma < 0.0:
        raise InvalidInputError("sigma must be non-negative")
    total = 0.0
    for pauli in PAULIS:
        c = pauli @ rho.matrix - rho.matrix @ pauli
        total += -float(np.real(np.trace(c @ c)))
    return max((delta**2) * (sigma**2) * total, 0.0)


def drift_constants(process: DriftProcess, rho: DensityMatrix) -> DriftConstants:
    """Both theory constants for a process evaluated at a reference state."""
    sys_c = (
        systematic_drift_constant(process.systematic_axis, process.delta, rho)
        if process.systematic_axis is not None
        else 0.0
    )
    dif_c = (
        diffusive_drift_constant(process.diffusion_sigma, process.delta, rho)
        if process.diffusion_sigma > 0.0
        else 0.0
    )
    return DriftConstants(systematic=sys_c, diffusive=dif_c)


def expected_distance_sq(k: int, constants: DriftConstants, weight: float) -> float:
    """Leading-order mean of Tr[(rho_n - rho_{n+k})^2] for a mixed drift.

    The systematic component (weight w) contributes quadratically and the
    diffusive component linearly:

        k^2 w^2 c_sys + k (1 - w)^2 c_dif.
    """
    if k < 0:
        raise InvalidInputError("separation k must be >= 0")
    if not 0.0 <= weight <= 1.0:
        raise InvalidInputError("weight must lie in [0, 1]")
    w = float(weight)
    return (k**2) * (w**2) * constants.systematic + k * ((1.0 - w) ** 2) * constants.diffusive


def increment_ratio_theory(
    weight: float,
    constants: DriftConstants,
    form: Literal["derived", "printed"] = "derived",
) -> float:
    """Expected ratio of successive distance increments at separations 1, 2, 3.

    The ratio (E2 - E1) / (E3 - E2) of expected squared distances
    discriminates drift kinds: 1 for purely diffusive, 3/5 for purely
    systematic, strictly between for mixtures.

    Two algebraic forms are provided.  ``derived`` follows directly from
    ``expected_distance_sq`` and hits the pure-drift limits above.
    ``printed`` is an alternative algebraic form that agrees with ``derived``
    under the relabeling weight -> 1 - weight; it is kept so that the
    discrepancy stays visible.  Both are evaluated in a polynomial form that
    avoids dividing the two constants.
    """
    if not 0.0 <= weight <= 1.0:
        raise InvalidInputError("weight must lie in [0, 1]")
    w = float(weight)
    c_sys, c_dif = constants.systematic, constants.diffusive
    if form == "derived":
        num = 3.0 * w**2 * c_sys + (1.0 - w) ** 2 * c_dif
        den = 5.0 * w**2 * c_sys + (1.0 - w) ** 2 * c_dif
    elif form == "printed":
        num = w**2 * c_dif + 3.0 * (1.0 - w) ** 2 * c_sys
        den = w**2 * c_dif + 5.0 * (1.0 - w) ** 2 * c_sys
    else:
        raise InvalidInputError(f"unknown form {form!r}")
    if den == 0.0:
        raise UndefinedRatioError("increment ratio undefined: both contributions vanish")
    return num / den
