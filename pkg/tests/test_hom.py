"""Two-photon interferometer cross-check.

The closed form P_coincidence = (1 - Tr(p q)) / 2 is validated against a
brute-force propagation of the full two-photon state through the balanced
beamsplitter, for every mode count the enumeration can afford.
"""

from __future__ import annotations

import numpy as np
import pytest

from swapdrift.errors import InvalidInputError, ResourceLimitError
from swapdrift.hom import (
    PhotonModeState,
    beamsplitter_output,
    coincidence_probability_bruteforce,
    coincidence_probability_direct,
    modal_overlap,
    two_photon_basis,
)
from swapdrift.linalg import random_density
from swapdrift.measurement import OutcomeTally
from swapdrift.estimation import estimate_overlap


def mode_state(matrix) -> PhotonModeState:
    return PhotonModeState(np.asarray(matrix, dtype=complex))


def random_mode_state(modes: int, rng: np.random.Generator) -> PhotonModeState:
    if modes == 1:
        return mode_state([[1.0]])
    return PhotonModeState(random_density(modes, rng).matrix)


# ---------------------------------------------------------------------------
# state container and basis
# ---------------------------------------------------------------------------


def test_single_mode_only_identity():
    assert mode_state([[1.0]]).modes == 1
    with pytest.raises(InvalidInputError):
        mode_state([[0.5]])


def test_mode_state_validation():
    with pytest.raises(InvalidInputError):
        mode_state([[0.5, 0.5], [0.1, 0.5]])  # not hermitian
    with pytest.raises(InvalidInputError):
        mode_state([[0.9, 0.0], [0.0, 0.2]])  # trace != 1


def test_two_photon_basis_size_and_order():
    basis = two_photon_basis(2)
    # 2M = 4 global modes -> M(2M + 1) = 10 pairs with mu <= nu
    assert len(basis) == 10
    assert basis[0] == (0, 0)
    assert basis[-1] == (3, 3)
    assert all(mu <= nu for mu, nu in basis)
    assert len(set(basis)) == len(basis)


@pytest.mark.parametrize("modes", [1, 2, 3, 4])
def test_basis_dimension_formula(modes):
    assert len(two_photon_basis(modes)) == modes * (2 * modes + 1)


# ---------------------------------------------------------------------------
# hand-checked special cases
# ---------------------------------------------------------------------------


def test_identical_pure_photons_never_coincide():
    """Perfectly indistinguishable photons always bunch."""
    for coeffs in (
        [[1.0, 0.0], [0.0, 0.0]],
        [[0.0, 0.0], [0.0, 1.0]],
        [[0.5, 0.5], [0.5, 0.5]],
        [[0.5, -0.5j], [0.5j, 0.5]],
    ):
        a = mode_state(coeffs)
        out = beamsplitter_output(a, a)
        assert out.prob_coincidence == pytest.approx(0.0, abs=1e-14)
        # bunching splits evenly between the two output ports
        assert out.prob_both_first_port == pytest.approx(0.5, abs=1e-12)
        assert out.prob_both_second_port == pytest.approx(0.5, abs=1e-12)


def test_single_mode_photons_always_bunch():
    a = mode_state([[1.0]])
    assert coincidence_probability_direct(a, a) == pytest.approx(0.0, abs=1e-14)
    assert coincidence_probability_bruteforce(a, a) == pytest.approx(0.0, abs=1e-14)


def test_orthogonal_photons_coincide_half_the_time():
    a = mode_state([[1.0, 0.0], [0.0, 0.0]])
    b = mode_state([[0.0, 0.0], [0.0, 1.0]])
    assert modal_overlap(a, b) == pytest.approx(0.0, abs=1e-15)
    assert coincidence_probability_direct(a, b) == pytest.approx(0.5, abs=1e-14)
    assert coincidence_probability_bruteforce(a, b) == pytest.approx(0.5, abs=1e-14)


def test_maximally_mixed_pair():
    m = mode_state(np.eye(2) / 2.0)
    # Tr(pq) = 1/2 -> coincidence probability 1/4
    assert coincidence_probability_direct(m, m) == pytest.approx(0.25, abs=1e-14)
    assert coincidence_probability_bruteforce(m, m) == pytest.approx(0.25, abs=1e-14)


# ---------------------------------------------------------------------------
# the two code paths agree everywhere
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("modes", [1, 2, 3, 4])
def test_direct_equals_bruteforce(modes):
    rng = np.random.default_rng(50 + modes)
    for _ in range(12):
        a = random_mode_state(modes, rng)
        b = random_mode_state(modes, rng)
        direct = coincidence_probability_direct(a, b)
        brute = coincidence_probability_bruteforce(a, b)
        assert brute == pytest.approx(direct, abs=1e-12)


@pytest.mark.parametrize("modes", [2, 3])
def test_coincidence_overlap_identity(modes):
    """2 P_coincidence + Tr(p q) = 1 on the brute-force path."""
    rng = np.random.default_rng(60 + modes)
    for _ in range(12):
        a = random_mode_state(modes, rng)
        b = random_mode_state(modes, rng)
        brute = coincidence_probability_bruteforce(a, b)
        assert 2.0 * brute + modal_overlap(a, b) == pytest.approx(1.0, abs=1e-12)


def test_output_state_properties():
    rng = np.random.default_rng(77)
    a = random_mode_state(3, rng)
    b = random_mode_state(3, rng)
    out = beamsplitter_output(a, b)
    assert out.matrix.shape == (21, 21)
    assert np.trace(out.matrix) == pytest.approx(1.0, abs=1e-12)
    # hermitian, positive semidefinite output
    assert np.allclose(out.matrix, out.matrix.conj().T, atol=1e-12)
    assert np.linalg.eigvalsh(out.matrix).min() >= -1e-10
    total = (
        out.prob_both_first_port + out.prob_both_second_port + out.prob_coincidence
    )
    assert total == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(InvalidInputError):
        out.sector_probability("cd")


def test_mode_count_mismatch_rejected():
    rng = np.random.default_rng(5)
    a = random_mode_state(2, rng)
    b = random_mode_state(3, rng)
    with pytest.raises(InvalidInputError):
        beamsplitter_output(a, b)
    with pytest.raises(InvalidInputError):
        modal_overlap(a, b)


def test_bruteforce_mode_limit():
    rng = np.random.default_rng(6)
    a = random_mode_state(7, rng)
    with pytest.raises(ResourceLimitError):
        coincidence_probability_bruteforce(a, a)


# ---------------------------------------------------------------------------
# bridge to the exchange measurement
# ---------------------------------------------------------------------------


def test_bunching_probability_matches_plus_outcome_rate():
    """P(photons bunch) equals P(+1) = (1 + overlap) / 2 of the exchange test."""
    rng = np.random.default_rng(90)
    for _ in range(10):
        a = random_mode_state(2, rng)
        b = random_mode_state(2, rng)
        p_bunch = 1.0 - coincidence_probability_direct(a, b)
        p_plus = 0.5 * (1.0 + modal_overlap(a, b))
        assert p_bunch == pytest.approx(p_plus, abs=1e-12)


def test_coincidence_rate_estimates_overlap():
    """Counting bunching events as +1 outcomes recovers the modal overlap."""
    # overlap 0.5 -> bunch with probability 0.75; a fake tally at that exact
    # rate must estimate the overlap exactly
    tally = OutcomeTally(separation=1, n_plus=750, n_minus=250)
    assert estimate_overlap(tally).value == pytest.approx(0.5, abs=1e-15)
