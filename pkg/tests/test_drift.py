"""Drift processes and their small-step distance laws.

Exact checks use the closed-form distance of a conjugated qubit state:
states k steps apart under a fixed-axis drift sit at squared distance
2 * sin^2(k*delta) * |axis x bloch|^2.  Statistical checks compare the
per-step constants against vectorized Monte Carlo runs.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from swapdrift import montecarlo
from swapdrift.drift import (
    RATIO_DIFFUSIVE,
    RATIO_SYSTEMATIC,
    DriftConstants,
    DriftProcess,
    SourceSequence,
    diffusive_drift_constant,
    drift_constants,
    expected_distance_sq,
    generate_sequence,
    increment_ratio_theory,
    step,
    systematic_drift_constant,
)
from swapdrift.errors import InvalidInputError, UndefinedRatioError
from swapdrift.linalg import (
    DensityMatrix,
    bloch_from_density,
    density_from_bloch,
    purity,
    state_distance_sq,
)
from swapdrift.rng import DOMAIN_CHAINS, make_stream


# ---------------------------------------------------------------------------
# process construction and validation
# ---------------------------------------------------------------------------


def test_systematic_axis_must_be_unit():
    with pytest.raises(InvalidInputError):
        DriftProcess.systematic(0.05, [0.0, 0.0, 2.0])


def test_delta_hard_limit():
    with pytest.raises(InvalidInputError):
        DriftProcess.diffusive(0.31, 1.0)


def test_delta_warn_limit():
    with pytest.warns(UserWarning):
        DriftProcess.diffusive(0.2, 1.0)


def test_negative_sigma_rejected():
    with pytest.raises(InvalidInputError):
        DriftProcess.diffusive(0.05, -1.0)


def test_mixed_weight_bounds():
    with pytest.raises(InvalidInputError):
        DriftProcess.mixed(0.05, [1.0, 0.0, 0.0], 1.0, 1.5)
    with pytest.raises(InvalidInputError):
        DriftProcess.mixed(0.05, [1.0, 0.0, 0.0], 1.0, -0.1)


def test_pure_kinds_pin_the_weight():
    assert DriftProcess.systematic(0.05, [0.0, 0.0, 1.0]).mix_weight == 1.0
    assert DriftProcess.diffusive(0.05, 1.0).mix_weight == 0.0


def test_systematic_draw_consumes_no_randomness():
    process = DriftProcess.systematic(0.05, [0.0, 1.0, 0.0])
    gen_a = np.random.default_rng(5)
    gen_b = np.random.default_rng(5)
    process.draw_axis(gen_a)
    assert gen_a.random() == gen_b.random()


def test_mixed_axis_blend():
    process = DriftProcess.mixed(0.05, [1.0, 0.0, 0.0], 0.7, 0.25)
    gen = make_stream(3, DOMAIN_CHAINS)
    twin = make_stream(3, DOMAIN_CHAINS)
    axis = process.draw_axis(gen)
    g = twin.standard_normal(3) * 0.7
    assert np.allclose(axis, 0.25 * np.array([1.0, 0.0, 0.0]) + 0.75 * g, atol=1e-15)


# ---------------------------------------------------------------------------
# sequences
# ---------------------------------------------------------------------------


def test_generate_sequence_deterministic():
    rho0 = density_from_bloch([0.0, 0.0, 0.9])
    process = DriftProcess.diffusive(0.05, 1.0)
    a = generate_sequence(rho0, process, 12, seed=21)
    b = generate_sequence(rho0, process, 12, seed=21)
    for sa, sb in zip(a.states, b.states):
        assert np.array_equal(sa.matrix, sb.matrix)
    c = generate_sequence(rho0, process, 12, seed=22)
    assert not np.array_equal(a.states[5].matrix, c.states[5].matrix)


def test_sequence_purity_is_constant():
    rho0 = density_from_bloch([0.3, 0.1, 0.2])
    process = DriftProcess.mixed(0.08, [0.0, 0.0, 1.0], 1.0, 0.5)
    seq = generate_sequence(rho0, process, 40, seed=4)
    p0 = purity(rho0)
    for s in seq.states:
        assert purity(s) == pytest.approx(p0, abs=1e-10)


def test_sequence_rejects_varying_purity():
    states = (
        density_from_bloch([0.0, 0.0, 0.9]),
        density_from_bloch([0.0, 0.0, 0.5]),
    )
    with pytest.raises(InvalidInputError):
        SourceSequence(states=states, seed=0)


def test_step_rejects_non_qubit():
    rho = DensityMatrix(np.eye(3, dtype=complex) / 3.0)
    with pytest.raises(InvalidInputError):
        step(rho, DriftProcess.diffusive(0.05, 1.0), np.random.default_rng(0))


def test_systematic_sequence_exact_distance_law():
    """Fixed-axis drift: squared distance after k steps is 2 sin^2(k delta) |a x v|^2."""
    v = np.array([0.6, 0.0, 0.4])
    rho0 = density_from_bloch(v)
    delta = 0.05
    process = DriftProcess.systematic(delta, [0.0, 0.0, 1.0])
    seq = generate_sequence(rho0, process, 9, seed=0)
    cross_sq = float(np.sum(np.cross([0.0, 0.0, 1.0], v) ** 2))
    assert cross_sq == pytest.approx(0.36, abs=1e-15)
    for k in range(1, 9):
        expected = 2.0 * math.sin(k * delta) ** 2 * cross_sq
        assert state_distance_sq(seq.states[0], seq.states[k]) == pytest.approx(
            expected, abs=1e-12
        )


# ---------------------------------------------------------------------------
# theory constants
# ---------------------------------------------------------------------------


def test_systematic_constant_closed_form():
    # 2 delta^2 |a x v|^2 against an explicit cross product
    v = [0.2, -0.3, 0.6]
    axis = np.array([1.0, 2.0, 2.0]) / 3.0
    rho = density_from_bloch(v)
    expected = 2.0 * 0.04**2 * float(np.sum(np.cross(axis, v) ** 2))
    assert systematic_drift_constant(axis, 0.04, rho) == pytest.approx(expected, rel=1e-12)


def test_systematic_constant_vanishes_along_axis():
    rho = density_from_bloch([0.0, 0.0, 0.8])
    assert systematic_drift_constant([0.0, 0.0, 1.0], 0.05, rho) == pytest.approx(0.0, abs=1e-15)


def test_diffusive_constant_closed_form():
    # 4 delta^2 sigma^2 |v|^2
    v = [0.1, 0.5, -0.2]
    rho = density_from_bloch(v)
    expected = 4.0 * 0.03**2 * 1.7**2 * float(np.dot(v, v))
    assert diffusive_drift_constant(1.7, 0.03, rho) == pytest.approx(expected, rel=1e-12)


def test_constants_scale_with_delta_squared():
    rho = density_from_bloch([0.5, 0.0, 0.5])
    axis = [0.0, 1.0, 0.0]
    assert systematic_drift_constant(axis, 0.06, rho) == pytest.approx(
        4.0 * systematic_drift_constant(axis, 0.03, rho), rel=1e-12
    )
    assert diffusive_drift_constant(1.0, 0.06, rho) == pytest.approx(
        4.0 * diffusive_drift_constant(1.0, 0.03, rho), rel=1e-12
    )


def test_systematic_constant_matches_one_step_distance():
    # For small delta the one-step distance equals the constant up to O(delta^4).
    v = [0.7, 0.1, 0.0]
    rho0 = density_from_bloch(v)
    process = DriftProcess.systematic(0.004, [0.0, 0.0, 1.0])
    seq = generate_sequence(rho0, process, 2, seed=0)
    measured = state_distance_sq(seq.states[0], seq.states[1])
    predicted = systematic_drift_constant(process.systematic_axis, 0.004, rho0)
    assert measured == pytest.approx(predicted, rel=1e-4)


def test_diffusive_constant_matches_monte_carlo():
    start = np.array([0.0, 0.0, 0.9])
    rho0 = density_from_bloch(start)
    process = DriftProcess.diffusive(0.05, 1.2)
    gen = make_stream(17, DOMAIN_CHAINS)
    sq = montecarlo.chain_distance_sq(start, process, (1,), 100_000, gen)[1]
    mean = float(np.mean(sq))
    se = float(np.std(sq, ddof=1)) / math.sqrt(sq.size)
    predicted = diffusive_drift_constant(1.2, 0.05, rho0)
    assert abs(mean - predicted) <= 3.0 * se + 0.01 * predicted


def test_mixed_composition_matches_monte_carlo():
    """Separation-k distance: k^2 w^2 (systematic) + k (1-w)^2 (diffusive)."""
    start = np.array([0.0, 0.6, 0.2])
    rho0 = density_from_bloch(start)
    process = DriftProcess.mixed(0.02, [1.0, 0.0, 0.0], 1.0, 0.4)
    consts = drift_constants(process, rho0)
    gen = make_stream(29, DOMAIN_CHAINS)
    sq = montecarlo.chain_distance_sq(start, process, (1, 2, 4), 150_000, gen)
    for k in (1, 2, 4):
        predicted = expected_distance_sq(k, consts, process.mix_weight)
        mean = float(np.mean(sq[k]))
        assert mean == pytest.approx(predicted, rel=0.05)


def test_expected_distance_sq_arithmetic():
    consts = DriftConstants(systematic=0.002, diffusive=0.003)
    # k=3, w=0.5: 9 * 0.25 * 0.002 + 3 * 0.25 * 0.003 = 0.0045 + 0.00225
    assert expected_distance_sq(3, consts, 0.5) == pytest.approx(0.00675, abs=1e-15)


def test_drift_constants_rejects_negative():
    with pytest.raises(InvalidInputError):
        DriftConstants(systematic=-1e-3, diffusive=0.0)


# ---------------------------------------------------------------------------
# increment ratio of the first overlap decays
# ---------------------------------------------------------------------------


def test_ratio_pure_limits():
    consts = DriftConstants(systematic=0.004, diffusive=0.007)
    assert increment_ratio_theory(0.0, consts) == pytest.approx(RATIO_DIFFUSIVE, abs=1e-15)
    assert increment_ratio_theory(1.0, consts) == pytest.approx(RATIO_SYSTEMATIC, abs=1e-15)


def test_ratio_balanced_mixture():
    consts = DriftConstants(systematic=0.002, diffusive=0.002)
    assert increment_ratio_theory(0.5, consts) == pytest.approx(2.0 / 3.0, abs=1e-15)


def test_ratio_printed_is_derived_with_weight_flipped():
    consts = DriftConstants(systematic=0.0013, diffusive=0.0041)
    for w in np.linspace(0.0, 1.0, 21):
        a = increment_ratio_theory(float(w), consts, form="printed")
        b = increment_ratio_theory(1.0 - float(w), consts, form="derived")
        assert a == pytest.approx(b, abs=1e-12)


def test_ratio_monotone_and_bounded():
    consts = DriftConstants(systematic=0.003, diffusive=0.003)
    grid = [increment_ratio_theory(float(w), consts) for w in np.linspace(0.0, 1.0, 41)]
    assert all(RATIO_SYSTEMATIC - 1e-12 <= r <= RATIO_DIFFUSIVE + 1e-12 for r in grid)
    assert all(b < a + 1e-15 for a, b in zip(grid, grid[1:]))


def test_ratio_undefined_when_constants_vanish():
    consts = DriftConstants(systematic=0.0, diffusive=0.0)
    with pytest.raises(UndefinedRatioError):
        increment_ratio_theory(0.5, consts)


def test_ratio_from_systematic_sequence_overlaps():
    """Tiny-step fixed-axis sequence reproduces the 3/5 increment ratio."""
    v = np.array([0.8, 0.0, 0.1])
    rho0 = density_from_bloch(v)
    process = DriftProcess.systematic(3e-6, [0.0, 0.0, 1.0])
    seq = generate_sequence(rho0, process, 4, seed=0)
    d = [state_distance_sq(seq.states[0], seq.states[k]) for k in (1, 2, 3)]
    # overlap increments are distance increments up to the same constant factor
    ratio = (d[1] - d[0]) / (d[2] - d[1])
    assert ratio == pytest.approx(RATIO_SYSTEMATIC, abs=1e-9)


def test_ratio_from_diffusive_chain_overlaps():
    """Diffusive chains: distance grows linearly, so increments are equal."""
    start = np.array([0.0, 0.0, 0.95])
    process = DriftProcess.diffusive(0.01, 1.0)
    gen = make_stream(31, DOMAIN_CHAINS)
    sq = montecarlo.chain_distance_sq(start, process, (1, 2, 3), 200_000, gen)
    means = [float(np.mean(sq[k])) for k in (1, 2, 3)]
    ratio = (means[1] - means[0]) / (means[2] - means[1])
    assert ratio == pytest.approx(RATIO_DIFFUSIVE, abs=0.05)
