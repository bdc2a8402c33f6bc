"""Finite-dimensional state algebra: density matrices, overlaps, swap operator.

Conventions
-----------
* States are d x d density matrices (Hermitian, unit trace, positive
  semidefinite).  Constructors validate rather than repair: an input that
  misses a tolerance is rejected, never projected back onto the valid set.
* Qubit states may equivalently be given as Bloch vectors v with |v| <= 1,
  rho = (I + v . sigma) / 2.
* ``qubit_rotation(axis, delta)`` builds U = cos(delta |a|) I
  + i sin(delta |a|) (a_hat . sigma), which rotates the Bloch vector about
  a_hat by the angle -2 delta |a| (right-hand rule).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError

ATOL_STRUCT = 1e-10  # structural matrix invariants
ATOL_ALGEBRA = 1e-12  # algebraic identities

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


def _as_square_complex(matrix, name: str) -> np.ndarray:
    m = np.array(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidInputError(f"{name} must be a square matrix, got shape {m.shape}")
    if m.shape[0] < 1:
        raise InvalidInputError(f"{name} must be at least 1x1")
    return m


def _check_density(m: np.ndarray, name: str) -> None:
    d = m.shape[0]
    if d < 2:
        raise InvalidInputError(f"{name} must have dimension >= 2")
    if not np.allclose(m, m.conj().T, atol=ATOL_STRUCT, rtol=0.0):
        raise InvalidInputError(f"{name} is not Hermitian within {ATOL_STRUCT}")
    tr = m.trace()
    if abs(tr - 1.0) > ATOL_STRUCT:
        raise InvalidInputError(f"{name} has trace {tr}, expected 1 within {ATOL_STRUCT}")
    eigs = np.linalg.eigvalsh(m)
    if eigs[0] < -ATOL_STRUCT:
        raise InvalidInputError(f"{name} has negative eigenvalue {eigs[0]:.3e}")
    p = float(np.real(np.trace(m @ m)))
    if not (1.0 / d - ATOL_STRUCT <= p <= 1.0 + ATOL_STRUCT):
        raise InvalidInputError(f"{name} has purity {p} outside [1/{d}, 1]")


@dataclass(frozen=True)
class DensityMatrix:
    """Validated density matrix.  Immutable after construction."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _as_square_complex(self.matrix, "density matrix")
        _check_density(m, "density matrix")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class UnitaryMatrix:
    """Validated unitary matrix.  Immutable after construction."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _as_square_complex(self.matrix, "unitary matrix")
        ident = np.eye(m.shape[0])
        if not np.allclose(m @ m.conj().T, ident, atol=ATOL_STRUCT, rtol=0.0):
            raise InvalidInputError(f"matrix is not unitary within {ATOL_STRUCT}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class BlochVector:
    """Qubit Bloch vector; valid state vectors satisfy |v| <= 1."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if self.norm() > 1.0 + ATOL_ALGEBRA:
            raise InvalidInputError(f"Bloch vector has norm {self.norm()} > 1")

    def norm(self) -> float:
        return float(np.sqrt(self.x * self.x + self.y * self.y + self.z * self.z))

    def __array__(self, dtype=None, copy=None):
        return np.array([self.x, self.y, self.z], dtype=dtype or float)


def _axis_array(axis, name: str = "axis") -> np.ndarray:
    a = np.asarray(axis, dtype=float).reshape(-1)
    if a.shape != (3,):
        raise InvalidInputError(f"{name} must be a 3-vector, got shape {a.shape}")
    return a


def density_from_bloch(v) -> DensityMatrix:
    """Qubit state (I + v . sigma) / 2 for a Bloch vector with |v| <= 1."""
    a = _axis_array(v, "Bloch vector")
    if np.linalg.norm(a) > 1.0 + ATOL_ALGEBRA:
        raise InvalidInputError(f"Bloch vector has norm {np.linalg.norm(a)} > 1")
    m = 0.5 * (np.eye(2, dtype=complex) + a[0] * PAULI_X + a[1] * PAULI_Y + a[2] * PAULI_Z)
    return DensityMatrix(m)


def bloch_from_density(rho: DensityMatrix) -> BlochVector:
    """Bloch vector (Tr rho sigma_x, Tr rho sigma_y, Tr rho sigma_z) of a qubit state."""
    if rho.dim != 2:
        raise InvalidInputError("bloch_from_density requires a qubit state")
    x, y, z = (float(np.real(np.trace(rho.matrix @ s))) for s in PAULIS)
    return BlochVector(x, y, z)


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2), in [1/d, 1]."""
    return float(np.real(np.trace(rho.matrix @ rho.matrix)))


def overlap(rho_a: DensityMatrix, rho_b: DensityMatrix) -> float:
    """Tr(rho_a rho_b); symmetric, in [0, 1] for valid states."""
    if rho_a.dim != rho_b.dim:
        raise InvalidInputError(f"dimension mismatch: {rho_a.dim} vs {rho_b.dim}")
    return float(np.real(np.trace(rho_a.matrix @ rho_b.matrix)))


def swap_operator(dim: int) -> np.ndarray:
    """Exchange operator on a bipartite d x d space: V |i>|j> = |j>|i>.

    Eigenvalues are +1 (symmetric subspace) and -1 (antisymmetric subspace),
    the trace is d, and Tr[(rho_a (x) rho_b) V] = Tr(rho_a rho_b).
    """
    if dim < 2:
        raise InvalidInputError(f"swap operator needs dim >= 2, got {dim}")
    v = np.zeros((dim * dim, dim * dim))
    for i in range(dim):
        for j in range(dim):
            v[i * dim + j, j * dim + i] = 1.0
    return v


def state_distance_sq(rho_a: DensityMatrix, rho_b: DensityMatrix) -> float:
    """Squared Hilbert-Schmidt distance Tr[(rho_a - rho_b)^2].

    Equals purity(a) + purity(b) - 2 overlap(a, b); always >= 0.
    """
    if rho_a.dim != rho_b.dim:
        raise InvalidInputError(f"dimension mismatch: {rho_a.dim} vs {rho_b.dim}")
    d = rho_a.matrix - rho_b.matrix
    return float(np.real(np.trace(d @ d)))


def qubit_rotation(axis, delta: float) -> UnitaryMatrix:
    """Closed-form qubit unitary cos(delta |a|) I + i sin(delta |a|) (a_hat . sigma).

    The axis need not be normalised; the rotation angle scales with |a|.
    A zero axis is rejected.
    """
    a = _axis_array(axis)
    r = float(np.linalg.norm(a))
    if r == 0.0:
        raise InvalidInputError("rotation axis must be non-zero")
    n = a / r
    theta = delta * r
    m = np.cos(theta) * np.eye(2, dtype=complex) + 1j * np.sin(theta) * (
        n[0] * PAULI_X + n[1] * PAULI_Y + n[2] * PAULI_Z
    )
    return UnitaryMatrix(m)


def evolve(rho: DensityMatrix, u: UnitaryMatrix) -> DensityMatrix:
    """Conjugate a state by a unitary: U rho U^dagger."""
    if rho.dim != u.dim:
        raise InvalidInputError(f"dimension mismatch: state {rho.dim}, unitary {u.dim}")
    return DensityMatrix(u.matrix @ rho.matrix @ u.matrix.conj().T)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Random density matrix from a Ginibre ensemble (rank=1 gives a pure state)."""
    if dim < 2:
        raise InvalidInputError("dim must be >= 2")
    k = dim if rank is None else rank
    if not 1 <= k <= dim:
        raise InvalidInputError(f"rank must be in [1, {dim}]")
    g = rng.standard_normal((dim, k)) + 1j * rng.standard_normal((dim, k))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m))
