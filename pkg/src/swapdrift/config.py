"""JSON experiment configuration for the command-line harness.

A config is one flat JSON object per scenario.  All fields are echoed into
output headers so every emitted row is recomputable from the file plus the
seed alone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .drift import DriftProcess
from .errors import ConfigError
from .linalg import DensityMatrix, density_from_bloch
from .measurement import DecoherenceChannel

_KNOWN_KEYS = {
    "scenario",
    "initial_bloch",
    "initial_matrix",
    "drift_kind",
    "delta",
    "systematic_axis",
    "diffusion_sigma",
    "mix_weight",
    "epsilon",
    "hilbert_dim",
    "separations",
    "pairs_per_separation",
    "seed",
    "out",
    "ratio_tol",
    "decohere_distance_one",
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated simulation scenario."""

    scenario: str
    initial: DensityMatrix
    process: DriftProcess
    channel: DecoherenceChannel | None
    separations: tuple[int, ...]
    pairs: tuple[int, ...]
    seed: int
    out: str | None
    ratio_tol: float
    decohere_nearest: bool
    raw: dict

    def echo_lines(self) -> list[str]:
        """Header comment block: every effective field, sorted, one per line."""
        effective = dict(self.raw)
        effective.setdefault("epsilon", 0.0)
        effective.setdefault("ratio_tol", self.ratio_tol)
        effective.setdefault("decohere_distance_one", self.decohere_nearest)
        effective["seed"] = self.seed
        return [
            f"# {key} = {json.dumps(effective[key], sort_keys=True)}"
            for key in sorted(effective)
        ]


def _vector3(value, field: str, problems: list[str]):
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 3
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)
    ):
        problems.append(f"{field}: must be a list of three numbers")
        return None
    return [float(x) for x in value]


def _complex_matrix(value, field: str, problems: list[str]):
    try:
        rows = [[complex(re, im) for re, im in row] for row in value]
        return np.array(rows, dtype=complex)
    except (TypeError, ValueError):
        problems.append(f"{field}: must be a nested list of [re, im] pairs")
        return None


def config_from_dict(data: dict, seed_override: int | None = None) -> ExperimentConfig:
    """Build a config from a parsed JSON object, accumulating field diagnostics."""
    if not isinstance(data, dict):
        raise ConfigError(["top level: must be a JSON object"])
    problems: list[str] = []
    for key in sorted(set(data) - _KNOWN_KEYS):
        problems.append(f"{key}: unknown field")

    scenario = data.get("scenario", "unnamed")
    if not isinstance(scenario, str):
        problems.append("scenario: must be a string")
        scenario = "unnamed"

    initial = None
    if ("initial_bloch" in data) == ("initial_matrix" in data):
        problems.append("initial_bloch/initial_matrix: exactly one must be given")
    elif "initial_bloch" in data:
        vec = _vector3(data["initial_bloch"], "initial_bloch", problems)
        if vec is not None:
            try:
                initial = density_from_bloch(vec)
            except ValueError as exc:
                problems.append(f"initial_bloch: {exc}")
    else:
        mat = _complex_matrix(data["initial_matrix"], "initial_matrix", problems)
        if mat is not None:
            try:
                initial = DensityMatrix(mat)
            except ValueError as exc:
                problems.append(f"initial_matrix: {exc}")

    kind = data.get("drift_kind")
    delta = data.get("delta")
    process = None
    if kind not in ("systematic", "diffusive", "mixed"):
        problems.append("drift_kind: must be one of systematic, diffusive, mixed")
    elif not isinstance(delta, (int, float)) or isinstance(delta, bool):
        problems.append("delta: must be a number")
    else:
        axis = None
        if kind in ("systematic", "mixed"):
            axis = _vector3(data.get("systematic_axis"), "systematic_axis", problems)
        sigma = data.get("diffusion_sigma", 0.0)
        if kind in ("diffusive", "mixed") and (
            not isinstance(sigma, (int, float)) or isinstance(sigma, bool)
        ):
            problems.append("diffusion_sigma: must be a number")
            sigma = 0.0
        weight = data.get("mix_weight", 0.0)
        if kind == "mixed" and (not isinstance(weight, (int, float)) or isinstance(weight, bool)):
            problems.append("mix_weight: must be a number")
            weight = 0.0
        if not problems or all(not p.startswith(("drift_kind", "delta", "systematic_axis",
                                                 "diffusion_sigma", "mix_weight")) for p in problems):
            try:
                process = DriftProcess(
                    kind=kind,
                    delta=float(delta),
                    systematic_axis=None if axis is None else np.array(axis),
                    diffusion_sigma=float(sigma),
                    mix_weight=float(weight),
                )
            except ValueError as exc:
                problems.append(f"drift process: {exc}")

    epsilon = data.get("epsilon", 0.0)
    channel = None
    if not isinstance(epsilon, (int, float)) or isinstance(epsilon, bool) or epsilon < 0:
        problems.append("epsilon: must be a number >= 0")
    elif epsilon > 0 and initial is not None:
        dim = data.get("hilbert_dim", initial.dim)
        if dim != initial.dim:
            problems.append(f"hilbert_dim: {dim} does not match state dimension {initial.dim}")
        else:
            channel = DecoherenceChannel(epsilon=float(epsilon), dim=initial.dim)

    separations = data.get("separations")
    seps: tuple[int, ...] = ()
    if (
        not isinstance(separations, list)
        or not separations
        or not all(isinstance(k, int) and not isinstance(k, bool) and k >= 1 for k in separations)
        or len(set(separations)) != len(separations)
    ):
        problems.append("separations: must be a non-empty list of distinct integers >= 1")
    else:
        seps = tuple(sorted(separations))

    pairs_raw = data.get("pairs_per_separation")
    pairs: tuple[int, ...] = ()
    if isinstance(pairs_raw, int) and not isinstance(pairs_raw, bool) and pairs_raw >= 1:
        pairs = tuple([pairs_raw] * len(seps))
    elif (
        isinstance(pairs_raw, list)
        and seps
        and len(pairs_raw) == len(seps)
        and all(isinstance(n, int) and not isinstance(n, bool) and n >= 1 for n in pairs_raw)
    ):
        pairs = tuple(pairs_raw)
    else:
        problems.append(
            "pairs_per_separation: must be a positive integer or a list matching separations"
        )

    seed = seed_override if seed_override is not None else data.get("seed")
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        problems.append("seed: required non-negative integer (no wall-clock seeding)")

    out = data.get("out")
    if out is not None and not isinstance(out, str):
        problems.append("out: must be a string path")

    ratio_tol = data.get("ratio_tol", 0.1)
    if not isinstance(ratio_tol, (int, float)) or isinstance(ratio_tol, bool) or not (
        0.0 < ratio_tol < 0.2
    ):
        problems.append("ratio_tol: must be a number in (0, 0.2)")
        ratio_tol = 0.1

    decohere_nearest = data.get("decohere_distance_one", True)
    if not isinstance(decohere_nearest, bool):
        problems.append("decohere_distance_one: must be a boolean")
        decohere_nearest = True

    if process is not None and initial is not None and initial.dim != 2:
        problems.append("initial state: drift simulation is qubit-specific (dim 2)")

    if problems:
        raise ConfigError(sorted(problems))

    return ExperimentConfig(
        scenario=scenario,
        initial=initial,
        process=process,
        channel=channel,
        separations=seps,
        pairs=pairs,
        seed=int(seed),
        out=out,
        ratio_tol=float(ratio_tol),
        decohere_nearest=decohere_nearest,
        raw=dict(data),
    )


def config_from_file(path: str | Path, seed_override: int | None = None) -> ExperimentConfig:
    """Parse and validate a JSON config file."""
    p = Path(path)
    if not p.is_file():
        raise ConfigError([f"config file not found: {p}"])
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError([f"config is not valid JSON: {exc}"]) from exc
    return config_from_dict(data, seed_override=seed_override)
