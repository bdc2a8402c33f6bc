"""Overlap tracking for slowly drifting quantum sources.

The package simulates repeated two-copy overlap measurements on a qubit
source whose state wanders between preparations, predicts how fast the
measured overlap decays for systematic versus diffusive wander, sizes the
number of measurements needed to resolve the decay (optionally through a
depolarizing storage register), and cross-checks the two-copy observable
against an explicit two-photon interferometer calculation.
"""

from .config import ExperimentConfig, config_from_dict, config_from_file
from .drift import (
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
from .errors import (
    ConfigError,
    InternalError,
    InvalidInputError,
    ResourceLimitError,
    UndefinedRatioError,
)
from .estimation import (
    DiffusiveFit,
    DriftVerdict,
    OverlapEstimate,
    RatioEstimate,
    SampleBudget,
    SystematicFit,
    classify_drift,
    drift_detected,
    estimate_overlap,
    increment_ratio,
    min_measurements_at_separation,
    min_measurements_diffusive,
    min_measurements_systematic,
    optimal_separation,
    recover_purity_diffusive,
    recover_purity_systematic,
)
from .harness import (
    SimulationReport,
    ValidationReport,
    run_hom,
    run_k_sweep,
    run_nmin_sweep,
    run_simulate,
    run_validate,
)
from .hom import (
    PhotonModeState,
    TwoPhotonOutput,
    beamsplitter_output,
    coincidence_probability_bruteforce,
    coincidence_probability_direct,
    modal_overlap,
    two_photon_basis,
)
from .linalg import (
    BlochVector,
    DensityMatrix,
    UnitaryMatrix,
    bloch_from_density,
    density_from_bloch,
    evolve,
    overlap,
    purity,
    qubit_rotation,
    random_density,
    state_distance_sq,
    swap_operator,
)
from .measurement import (
    DecoherenceChannel,
    InferredOverlap,
    OutcomeTally,
    decohere,
    decohered_overlap,
    infer_overlap,
    measure_sequence_pairs,
    sample_swap,
)
from .rng import (
    DOMAIN_CHAINS,
    DOMAIN_HOM,
    DOMAIN_MEASURE,
    DOMAIN_SEQUENCE,
    DOMAIN_VALIDATE,
    make_stream,
    stream_key,
)

__version__ = "0.1.0"

__all__ = [
    "BlochVector",
    "ConfigError",
    "DecoherenceChannel",
    "DensityMatrix",
    "DiffusiveFit",
    "DriftConstants",
    "DriftProcess",
    "DriftVerdict",
    "ExperimentConfig",
    "InferredOverlap",
    "InternalError",
    "InvalidInputError",
    "OutcomeTally",
    "OverlapEstimate",
    "PhotonModeState",
    "RatioEstimate",
    "ResourceLimitError",
    "SampleBudget",
    "SimulationReport",
    "SourceSequence",
    "SystematicFit",
    "TwoPhotonOutput",
    "UndefinedRatioError",
    "UnitaryMatrix",
    "ValidationReport",
    "beamsplitter_output",
    "bloch_from_density",
    "classify_drift",
    "coincidence_probability_bruteforce",
    "coincidence_probability_direct",
    "config_from_dict",
    "config_from_file",
    "decohere",
    "decohered_overlap",
    "density_from_bloch",
    "diffusive_drift_constant",
    "drift_constants",
    "drift_detected",
    "estimate_overlap",
    "evolve",
    "expected_distance_sq",
    "generate_sequence",
    "increment_ratio",
    "increment_ratio_theory",
    "infer_overlap",
    "make_stream",
    "measure_sequence_pairs",
    "min_measurements_at_separation",
    "min_measurements_diffusive",
    "min_measurements_systematic",
    "modal_overlap",
    "optimal_separation",
    "overlap",
    "purity",
    "qubit_rotation",
    "random_density",
    "recover_purity_diffusive",
    "recover_purity_systematic",
    "run_hom",
    "run_k_sweep",
    "run_nmin_sweep",
    "run_simulate",
    "run_validate",
    "sample_swap",
    "state_distance_sq",
    "step",
    "swap_operator",
    "stream_key",
    "two_photon_basis",
    "DOMAIN_CHAINS",
    "DOMAIN_HOM",
    "DOMAIN_MEASURE",
    "DOMAIN_SEQUENCE",
    "DOMAIN_VALIDATE",
]
