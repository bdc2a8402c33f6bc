"""Experiment pipelines behind the CLI: simulate, sweeps, interferometer, validate.

Everything here is deterministic given the configuration seed.  Concurrent
execution (thread pool over separations or sweep points) cannot change any
output byte because each unit of work owns a substream keyed by its position,
and results are gathered in sorted order.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import drift, estimation, hom, linalg, measurement, montecarlo
from . import rng as rngmod
from .config import ExperimentConfig
from .errors import InvalidInputError, UndefinedRatioError


def _fmt(x) -> str:
    """Deterministic scalar formatting for CSV cells and comments."""
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


@dataclass(frozen=True)
class CsvDocument:
    """Comment block + header + rows, rendered byte-identically every time."""

    comments: tuple[str, ...]
    header: tuple[str, ...]
    rows: tuple[tuple, ...]

    def render(self) -> str:
        lines = list(self.comments)
        lines.append(",".join(self.header))
        for row in self.rows:
            lines.append(",".join(_fmt(cell) for cell in row))
        return "\n".join(lines) + "\n"

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.render(), encoding="utf-8", newline="\n")


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


@dataclass
class SimulationReport:
    config: ExperimentConfig
    tallies: dict[int, measurement.OutcomeTally]
    estimates: dict[int, estimation.OverlapEstimate]
    detected: dict[int, bool] = field(default_factory=dict)
    diffusive_fit: estimation.DiffusiveFit | None = None
    systematic_fit: estimation.SystematicFit | None = None
    ratio: estimation.RatioEstimate | None = None
    ratio_undefined: bool = False
    verdict: estimation.DriftVerdict | None = None

    def csv(self) -> CsvDocument:
        comments = list(self.config.echo_lines())
        if self.diffusive_fit is not None:
            f = self.diffusive_fit
            comments.append(
                f"# recovered_diffusive: purity={_fmt(f.purity)} purity_stderr={_fmt(f.purity_stderr)} "
                f"rate={_fmt(f.rate)} rate_stderr={_fmt(f.rate_stderr)}"
            )
        if self.systematic_fit is not None:
            f = self.systematic_fit
            comments.append(
                f"# recovered_systematic: purity={_fmt(f.purity)} purity_stderr={_fmt(f.purity_stderr)} "
                f"rate={_fmt(f.rate)} rate_stderr={_fmt(f.rate_stderr)}"
            )
        for k in sorted(self.detected):
            comments.append(f"# drift_detected separation={k}: {_fmt(self.detected[k])}")
        if self.ratio is not None:
            comments.append(
                f"# increment_ratio: value={_fmt(self.ratio.value)} stderr={_fmt(self.ratio.stderr)}"
            )
        elif self.ratio_undefined:
            comments.append("# increment_ratio: undefined")
        if self.verdict is not None:
            comments.append(f"# classification: {self.verdict.classification}")
        rows = []
        for k in sorted(self.estimates):
            t, e = self.tallies[k], self.estimates[k]
            rows.append((k, t.total, t.n_plus, t.n_minus, e.value, e.stderr))
        return CsvDocument(
            comments=tuple(comments),
            header=("separation", "N", "n_plus", "n_minus", "V_hat", "delta_V"),
            rows=tuple(rows),
        )


def run_simulate(config: ExperimentConfig, workers: int = 1) -> SimulationReport:
    """Generate one source sequence and measure it at every configured separation."""
    length = max(p * (k + 1) for k, p in zip(config.separations, config.pairs))
    sequence = drift.generate_sequence(config.initial, config.process, length, config.seed)

    def measure(index: int) -> measurement.OutcomeTally:
        k = config.separations[index]
        gen = rngmod.make_stream(config.seed, rngmod.DOMAIN_MEASURE, index)
        return measurement.measure_sequence_pairs(
            sequence, k, config.pairs[index], gen, channel=config.channel
        )

    indices = range(len(config.separations))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            tallies_list = list(pool.map(measure, indices))
    else:
        tallies_list = [measure(i) for i in indices]

    tallies = {t.separation: t for t in tallies_list}
    estimates = {k: estimation.estimate_overlap(t) for k, t in tallies.items()}
    report = SimulationReport(config=config, tallies=tallies, estimates=estimates)

    if 1 in estimates:
        for k in sorted(estimates):
            if k > 1:
                report.detected[k] = estimation.drift_detected(estimates[1], estimates[k])
    if 1 in estimates and 2 in estimates:
        report.diffusive_fit = estimation.recover_purity_diffusive(estimates[1], estimates[2])
        report.systematic_fit = estimation.recover_purity_systematic(estimates[1], estimates[2])
    if all(k in estimates for k in (1, 2, 3)):
        try:
            report.ratio = estimation.increment_ratio(estimates[1], estimates[2], estimates[3])
        except UndefinedRatioError:
            report.ratio_undefined = True
        report.verdict = estimation.classify_drift(
            estimates[1], estimates[2], estimates[3], ratio_tol=config.ratio_tol
        )
    return report


# ---------------------------------------------------------------------------
# budget sweeps
# ---------------------------------------------------------------------------


def run_nmin_sweep(
    purities: tuple[float, ...],
    constants: tuple[float, ...],
    kinds: tuple[str, ...] = ("diffusive", "systematic"),
    variants: tuple[str, ...] = ("printed", "rederived"),
    workers: int = 1,
) -> CsvDocument:
    """Budget vs drift constant, one row per (kind, variant, purity, constant)."""
    for kind in kinds:
        if kind not in ("diffusive", "systematic"):
            raise InvalidInputError(f"unknown kind {kind!r}")
    grid = [
        (kind, variant, p1, c)
        for kind in sorted(kinds)
        for variant in sorted(variants)
        for p1 in purities
        for c in constants
    ]

    def solve(point):
        kind, variant, p1, c = point
        fn = (
            estimation.min_measurements_diffusive
            if kind == "diffusive"
            else estimation.min_measurements_systematic
        )
        return (kind, variant, p1, c, fn(p1, c, variant=variant).n_min)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(solve, grid))
    else:
        rows = [solve(point) for point in grid]

    comments = [
        f"# kinds = {json.dumps(sorted(kinds))}",
        f"# variants = {json.dumps(sorted(variants))}",
        f"# purities = {json.dumps(list(purities))}",
        f"# constants = {json.dumps(list(constants))}",
    ]
    return CsvDocument(
        comments=tuple(comments),
        header=("kind", "variant", "P1", "drift_constant", "N_min"),
        rows=tuple(rows),
    )


def run_k_sweep(
    purity: float,
    rate: float,
    dim: int,
    epsilons: tuple[float, ...],
    k_min: int,
    k_max: int,
    variants: tuple[str, ...] = ("printed",),
    decohere_nearest: bool = True,
    workers: int = 1,
) -> CsvDocument:
    """Storage-noise budget vs pair separation for each decoherence rate."""
    if not 2 <= k_min <= k_max <= 2000:
        raise InvalidInputError("need 2 <= k_min <= k_max <= 2000")
    ks = range(k_min, k_max + 1)

    def solve(point):
        eps, variant = point
        channel = measurement.DecoherenceChannel(epsilon=eps, dim=dim)
        vals = [
            estimation.min_measurements_at_separation(
                purity, rate, k, channel, variant=variant, decohere_nearest=decohere_nearest
            ).n_min
            for k in ks
        ]
        return eps, variant, vals

    grid = [(eps, variant) for eps in sorted(epsilons) for variant in sorted(variants)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            solved = list(pool.map(solve, grid))
    else:
        solved = [solve(point) for point in grid]

    comments = [
        f"# P1 = {_fmt(purity)}",
        f"# decohere_distance_one = {_fmt(decohere_nearest)}",
        f"# dim = {dim}",
        f"# drift_constant = {_fmt(rate)}",
        f"# epsilons = {json.dumps(list(sorted(epsilons)))}",
        f"# k_range = [{k_min}, {k_max}]",
        f"# variants = {json.dumps(list(sorted(variants)))}",
    ]
    for eps, variant, vals in solved:
        i = int(np.argmin(vals))
        comments.append(
            f"# minimum epsilon={_fmt(eps)} variant={variant}: k={k_min + i} "
            f"N_min={_fmt(vals[i])}"
        )
    rows = []
    for eps, variant, vals in solved:
        for k, n in zip(ks, vals):
            rows.append((eps, k, n, variant))
    rows.sort(key=lambda r: (r[0], r[1], r[3]))
    return CsvDocument(
        comments=tuple(comments),
        header=("epsilon", "k", "N_min", "variant"),
        rows=tuple(rows),
    )


# ---------------------------------------------------------------------------
# interferometer comparison
# ---------------------------------------------------------------------------


def run_hom(modes: int, pairs: int, seed: int) -> tuple[CsvDocument, bool]:
    """Random mode-state pairs pushed through both coincidence code paths."""
    if not 1 <= modes <= hom.BRUTEFORCE_MODE_LIMIT:
        raise InvalidInputError(f"modes must be in [1, {hom.BRUTEFORCE_MODE_LIMIT}]")
    if pairs < 1:
        raise InvalidInputError("pairs must be >= 1")
    rows = []
    ok = True
    for i in range(pairs):
        gen = rngmod.make_stream(seed, rngmod.DOMAIN_HOM, i)
        a = _random_mode_state(modes, gen)
        b = _random_mode_state(modes, gen)
        direct = hom.coincidence_probability_direct(a, b)
        brute = hom.coincidence_probability_bruteforce(a, b)
        residual = abs(2.0 * brute + hom.modal_overlap(a, b) - 1.0)
        ok = ok and abs(direct - brute) <= 1e-10 and residual <= 1e-10
        rows.append((i, modes, hom.modal_overlap(a, b), direct, brute, residual))
    comments = (
        f"# modes = {modes}",
        f"# pairs = {pairs}",
        f"# seed = {seed}",
    )
    doc = CsvDocument(
        comments=comments,
        header=(
            "pair",
            "modes",
            "overlap",
            "p_coincidence_direct",
            "p_coincidence_bruteforce",
            "identity_residual",
        ),
        rows=tuple(rows),
    )
    return doc, ok


def _random_mode_state(modes: int, gen: np.random.Generator) -> hom.PhotonModeState:
    if modes == 1:
        return hom.PhotonModeState(np.array([[1.0 + 0.0j]]))
    return hom.PhotonModeState(linalg.random_density(modes, gen).matrix)


# ---------------------------------------------------------------------------
# validate: every oracle pair in one place
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ValidationCheck:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[ValidationCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> str:
        return json.dumps(
            {
                "passed": self.passed,
                "checks": [
                    {"name": c.name, "passed": c.passed, "detail": c.detail}
                    for c in self.checks
                ],
            },
            indent=2,
            sort_keys=True,
        )


def _check_swap_trace(seed: int) -> ValidationCheck:
    worst = 0.0
    for d in (2, 3, 4):
        gen = rngmod.make_stream(seed, rngmod.DOMAIN_VALIDATE, 0, d)
        v = linalg.swap_operator(d)
        for _ in range(40):
            a = linalg.random_density(d, gen)
            b = linalg.random_density(d, gen)
            lhs = float(np.real(np.trace(np.kron(a.matrix, b.matrix) @ v)))
            worst = max(worst, abs(lhs - linalg.overlap(a, b)))
    return ValidationCheck(
        name="swap_trace_identity",
        passed=worst <= 1e-10,
        detail=f"max |Tr[(a x b) V] - Tr(ab)| = {worst:.3e} over 120 pairs, d in 2..4",
    )


def _check_hom_two_path(seed: int) -> ValidationCheck:
    worst = 0.0
    for m in (1, 2, 3, 4):
        gen = rngmod.make_stream(seed, rngmod.DOMAIN_VALIDATE, 1, m)
        for _ in range(10):
            a = _random_mode_state(m, gen)
            b = _random_mode_state(m, gen)
            direct = hom.coincidence_probability_direct(a, b)
            brute = hom.coincidence_probability_bruteforce(a, b)
            worst = max(worst, abs(direct - brute))
            worst = max(worst, abs(2.0 * brute + hom.modal_overlap(a, b) - 1.0))
    return ValidationCheck(
        name="hom_two_path",
        passed=worst <= 1e-12,
        detail=f"max two-path / identity residual = {worst:.3e} over 40 pairs, M in 1..4",
    )


def _check_systematic_constant(seed: int) -> ValidationCheck:
    rho0 = linalg.density_from_bloch([1.0, 0.0, 0.0])
    process = drift.DriftProcess.systematic(0.01, [0.0, 0.0, 1.0])
    seq = drift.generate_sequence(rho0, process, 2, seed)
    measured = linalg.state_distance_sq(seq.states[0], seq.states[1])
    predicted = drift.systematic_drift_constant(process.systematic_axis, process.delta, rho0)
    rel = abs(measured - predicted) / predicted
    return ValidationCheck(
        name="systematic_drift_constant_mc",
        passed=rel <= 0.01,
        detail=f"one-step distance {measured:.6e} vs constant {predicted:.6e}, rel err {rel:.2e}",
    )


def _check_diffusive_constant(seed: int) -> ValidationCheck:
    rho0 = linalg.density_from_bloch([0.0, 0.0, 1.0])
    process = drift.DriftProcess.diffusive(0.05, 1.0)
    gen = rngmod.make_stream(seed, rngmod.DOMAIN_VALIDATE, 2)
    sq = montecarlo.chain_distance_sq(np.array([0.0, 0.0, 1.0]), process, (1,), 100_000, gen)[1]
    mean, se = float(np.mean(sq)), float(np.std(sq, ddof=1) / math.sqrt(sq.size))
    predicted = drift.diffusive_drift_constant(1.0, 0.05, rho0)
    z = abs(mean - predicted) / se
    return ValidationCheck(
        name="diffusive_drift_constant_mc",
        passed=z <= 3.0,
        detail=f"mean one-step distance {mean:.6e} vs constant {predicted:.6e}, z = {z:.2f}",
    )


def _check_mixed_composition(seed: int) -> ValidationCheck:
    rho0 = linalg.density_from_bloch([0.0, 0.0, 1.0])
    process = drift.DriftProcess.mixed(0.01, [1.0, 0.0, 0.0], 1.0, 0.5)
    consts = drift.drift_constants(process, rho0)
    predicted = drift.expected_distance_sq(2, consts, process.mix_weight)
    gen = rngmod.make_stream(seed, rngmod.DOMAIN_VALIDATE, 3)
    sq = montecarlo.chain_distance_sq(np.array([0.0, 0.0, 1.0]), process, (2,), 200_000, gen)[2]
    mean = float(np.mean(sq))
    rel = abs(mean - predicted) / predicted
    return ValidationCheck(
        name="mixed_composition_mc",
        passed=rel <= 0.05,
        detail=f"separation-2 mean {mean:.6e} vs composition {predicted:.6e}, rel err {rel:.2e}",
    )


def _check_increment_ratio(seed: int) -> ValidationCheck:
    start = np.array([0.0, 0.0, 1.0])
    rho0 = linalg.density_from_bloch(start)
    worst = 0.0
    detail_parts = []
    for i, weight in enumerate((0.0, 0.5, 1.0)):
        process = _mixed_process(0.05, weight)
        consts = drift.drift_constants(process, rho0)
        theory = drift.increment_ratio_theory(weight, consts, form="derived")
        gen = rngmod.make_stream(seed, rngmod.DOMAIN_VALIDATE, 4, i)
        estimates = {}
        for k in (1, 2, 3):
            tally = montecarlo.measure_drifting_pairs(start, process, k, 400_000, gen)
            estimates[k] = estimation.estimate_overlap(tally)
        ratio = estimation.increment_ratio(estimates[1], estimates[2], estimates[3])
        z = abs(ratio.value - theory) / ratio.stderr
        worst = max(worst, z)
        detail_parts.append(f"w={weight}: ratio {ratio.value:.4f} vs {theory:.4f} (z={z:.2f})")
    return ValidationCheck(
        name="increment_ratio_mc",
        passed=worst <= 3.0,
        detail="; ".join(detail_parts),
    )


def _mixed_process(delta: float, weight: float) -> drift.DriftProcess:
    """Mixture with equal systematic/diffusive constants at the pole state."""
    axis = [1.0, 0.0, 0.0]
    sigma = 1.0 / math.sqrt(2.0)
    if weight == 0.0:
        return drift.DriftProcess.diffusive(delta, sigma)
    if weight == 1.0:
        return drift.DriftProcess.systematic(delta, axis)
    return drift.DriftProcess.mixed(delta, axis, sigma, weight)


def _check_sampler(seed: int) -> ValidationCheck:
    rho_a = linalg.density_from_bloch([0.0, 0.0, 1.0])
    rho_b = linalg.density_from_bloch([0.0, 0.0, 0.8])
    target = linalg.overlap(rho_a, rho_b)
    gen = rngmod.make_stream(seed, rngmod.DOMAIN_VALIDATE, 5)
    n = 100_000
    n_plus, n_minus = montecarlo.swap_outcome_counts(np.full(n, target), gen)
    mean = (n_plus - n_minus) / n
    bound = 3.0 * math.sqrt((1.0 - target**2) / n)
    return ValidationCheck(
        name="swap_sampler_mc",
        passed=abs(mean - target) <= bound,
        detail=f"mean {mean:.5f} vs overlap {target:.5f}, 3-sigma bound {bound:.5f}",
    )


def run_validate(seed: int = 20260816) -> ValidationReport:
    """Execute every oracle pair the package relies on; deterministic in the seed."""
    checks = (
        _check_swap_trace(seed),
        _check_hom_two_path(seed),
        _check_systematic_constant(seed),
        _check_diffusive_constant(seed),
        _check_mixed_composition(seed),
        _check_increment_ratio(seed),
        _check_sampler(seed),
    )
    return ValidationReport(checks=checks)
