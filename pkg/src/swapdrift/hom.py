"""Two-photon interference at a balanced beamsplitter.

Each input photon occupies one of M internal modes (spectral bins, say) with
a mode density matrix p_kl.  The two photons enter ports A and B of a 50/50
beamsplitter with the convention

    a_k^dag -> (c_k^dag + i d_k^dag) / sqrt(2),
    b_n^dag -> (i c_n^dag + d_n^dag) / sqrt(2),

where c/d are the output ports.  The coincidence probability (one photon in
each output port) encodes the modal overlap:

    2 P_cc = 1 - Tr(p q).

Two independent code paths compute P_cc: a closed-form trace and a brute
force enumeration of the full two-photon output state; they must agree to
near machine precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, ResourceLimitError
from .linalg import ATOL_STRUCT, _as_square_complex, _check_density

BRUTEFORCE_MODE_LIMIT = 6

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class PhotonModeState:
    """Single-photon mode occupation: an M x M density matrix over internal modes."""

    coeffs: np.ndarray

    def __post_init__(self):
        m = _as_square_complex(self.coeffs, "mode matrix")
        if m.shape[0] < 1:
            raise InvalidInputError("mode matrix needs at least one mode")
        if m.shape[0] == 1:
            # the generic density check requires dim >= 2; a single mode only
            # needs hermiticity and unit trace
            if abs(m[0, 0] - 1.0) > ATOL_STRUCT or abs(m[0, 0].imag) > ATOL_STRUCT:
                raise InvalidInputError("single-mode matrix must equal [[1]]")
        else:
            _check_density(m, "mode matrix")
        m.setflags(write=False)
        object.__setattr__(self, "coeffs", m)

    @property
    def modes(self) -> int:
        return self.coeffs.shape[0]


def two_photon_basis(modes: int) -> tuple[tuple[int, int], ...]:
    """Canonical ordering of two-photon occupation states over 2M output modes.

    Global mode index mu = port * M + internal, port 0 = c, port 1 = d.
    Entries are pairs (mu, nu) with mu <= nu; mu == nu means double occupation.
    """
    pairs = []
    for mu in range(2 * modes):
        for nu in range(mu, 2 * modes):
            pairs.append((mu, nu))
    return tuple(pairs)


@dataclass(frozen=True)
class TwoPhotonOutput:
    """Full two-photon output state in the canonical occupation basis."""

    modes: int
    basis: tuple[tuple[int, int], ...]
    matrix: np.ndarray

    def __post_init__(self):
        total = float(np.real(np.trace(self.matrix)))
        if abs(total - 1.0) > ATOL_STRUCT:
            raise InvalidInputError(f"output probabilities sum to {total}, expected 1")
        self.matrix.setflags(write=False)

    def _sector(self, mu: int, nu: int) -> str:
        pa, pb = mu // self.modes, nu // self.modes
        if pa == 0 and pb == 0:
            return "cc"
        if pa == 1 and pb == 1:
            return "dd"
        return "coincidence"

    def sector_probability(self, sector: str) -> float:
        if sector not in ("cc", "dd", "coincidence"):
            raise InvalidInputError(f"unknown sector {sector!r}")
        diag = np.real(np.diag(self.matrix))
        return float(sum(p for (mu, nu), p in zip(self.basis, diag) if self._sector(mu, nu) == sector))

    @property
    def prob_both_first_port(self) -> float:
        return self.sector_probability("cc")

    @property
    def prob_both_second_port(self) -> float:
        return self.sector_probability("dd")

    @property
    def prob_coincidence(self) -> float:
        return self.sector_probability("coincidence")


def _pair_vectors(modes: int, basis) -> np.ndarray:
    """Columns: the (unnormalised) output ket for each input mode pair (k, n).

    Input a_k^dag b_n^dag |0> maps to half of

        i c_k c_n + c_k d_n - d_k c_n + i d_k d_n   (daggers omitted),

    with the bosonic sqrt(2) on double occupation.
    """
    index = {pair: i for i, pair in enumerate(basis)}
    dim = len(basis)
    vectors = np.zeros((dim, modes * modes), dtype=complex)

    def add(col, mu, nu, amp):
        if mu == nu:
            vectors[index[(mu, mu)], col] += amp * SQRT2
        else:
            vectors[index[(min(mu, nu), max(mu, nu))], col] += amp

    for k in range(modes):
        for n in range(modes):
            col = k * modes + n
            add(col, k, n, 1j)                       # both photons in port c
            add(col, k, modes + n, 1.0)              # c_k with d_n
            add(col, n, modes + k, -1.0)             # c_n with d_k
            add(col, modes + k, modes + n, 1j)       # both photons in port d
    return vectors


def beamsplitter_output(state_a: PhotonModeState, state_b: PhotonModeState) -> TwoPhotonOutput:
    """Propagate the two-photon product state through the balanced beamsplitter."""
    if state_a.modes != state_b.modes:
        raise InvalidInputError(
            f"mode count mismatch: {state_a.modes} vs {state_b.modes}"
        )
    m = state_a.modes
    basis = two_photon_basis(m)
    vectors = _pair_vectors(m, basis)
    weights = np.kron(state_a.coeffs, state_b.coeffs)
    rho_out = vectors @ weights @ vectors.conj().T / 4.0
    return TwoPhotonOutput(modes=m, basis=basis, matrix=rho_out)


def modal_overlap(state_a: PhotonModeState, state_b: PhotonModeState) -> float:
    """Tr(p q) between the two mode matrices."""
    if state_a.modes != state_b.modes:
        raise InvalidInputError(
            f"mode count mismatch: {state_a.modes} vs {state_b.modes}"
        )
    return float(np.real(np.trace(state_a.coeffs @ state_b.coeffs)))


def coincidence_probability_direct(
    state_a: PhotonModeState, state_b: PhotonModeState
) -> float:
    """Closed form P_cc = (1 - Tr(p q)) / 2."""
    return 0.5 * (1.0 - modal_overlap(state_a, state_b))


def coincidence_probability_bruteforce(
    state_a: PhotonModeState, state_b: PhotonModeState
) -> float:
    """P_cc summed over the one-in-each-port sector of the full output state.

    Exponential in mode count; refuses more than BRUTEFORCE_MODE_LIMIT modes.
    """
    if state_a.modes > BRUTEFORCE_MODE_LIMIT:
        raise ResourceLimitError(
            f"brute-force enumeration limited to {BRUTEFORCE_MODE_LIMIT} modes"
        )
    return beamsplitter_output(state_a, state_b).prob_coincidence
