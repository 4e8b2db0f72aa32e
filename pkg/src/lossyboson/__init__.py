"""Classical simulation of N-photon interference in lossy linear optics.

The package provides three interchangeable sampling backends for
photon-count statistics in layered beam-splitter circuits with per-layer
photon loss, plus the threshold analysis that decides which backend is
accurate where:

* a thermal-replacement sampler for deep, lossy circuits,
* a matrix-product-state sampler for shallow circuits, and
* a brute-force permanent oracle for desk-scale cross-validation.
"""

from .circuit import (
    AlgebraicThreshold,
    CouplerGate,
    Layer,
    LayeredCircuit,
    LossDecomposition,
    NonuniformFactorization,
    PlanParameters,
    SimulationPlan,
    circuit_from_json,
    circuit_to_json,
    decompose_losses,
    depth_threshold_algebraic,
    depth_threshold_exponential,
    factor_nonuniform,
    load_circuit,
    plan,
    random_brickwork,
    save_circuit,
    simulability_condition,
    thermalization_depth,
    transfer_matrix,
)
from .errors import (
    CapacityError,
    DegenerateCircuitError,
    ModelViolationError,
    ResampleSignal,
)
from .mps import (
    MPSState,
    apply_coupler,
    apply_phase,
    canonical_defect,
    canonicalize,
    coupler_fock_amplitudes,
    coupler_mpo,
    init_input,
    lossy_input_sample,
    outcome_probability,
    sample,
    simulate_circuit,
    state_norm,
)
from .numerics import (
    Distribution,
    SingularSystem,
    haar_unitary,
    permanent,
    permanent_naive,
    svd,
    total_variation,
)
from .oracle import (
    chi2_constellation,
    constellation_hermite_moments,
    enumerate_patterns,
    fock_output_distribution,
    lossy_exact_distribution,
    thermal_exact_distribution,
)
from .rng import RandomStream, make_stream, split_stream
from .thermal import (
    Constellation,
    ThermalParams,
    bernoulli_trials_count,
    constellation_size,
    gauss_hermite_constellation,
    propagate,
    sample_output,
    sample_poisson_bernoulli,
    sample_poisson_direct,
    sample_thermal_coherent,
    scattershot_herald,
    thermal_vs_erasure_distance,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraicThreshold",
    "CapacityError",
    "Constellation",
    "CouplerGate",
    "DegenerateCircuitError",
    "Distribution",
    "Layer",
    "LayeredCircuit",
    "LossDecomposition",
    "MPSState",
    "ModelViolationError",
    "NonuniformFactorization",
    "PlanParameters",
    "RandomStream",
    "ResampleSignal",
    "SimulationPlan",
    "SingularSystem",
    "ThermalParams",
    "apply_coupler",
    "apply_phase",
    "bernoulli_trials_count",
    "canonical_defect",
    "canonicalize",
    "chi2_constellation",
    "circuit_from_json",
    "circuit_to_json",
    "constellation_hermite_moments",
    "constellation_size",
    "coupler_fock_amplitudes",
    "coupler_mpo",
    "decompose_losses",
    "depth_threshold_algebraic",
    "depth_threshold_exponential",
    "enumerate_patterns",
    "factor_nonuniform",
    "fock_output_distribution",
    "gauss_hermite_constellation",
    "haar_unitary",
    "init_input",
    "load_circuit",
    "lossy_exact_distribution",
    "lossy_input_sample",
    "make_stream",
    "outcome_probability",
    "permanent",
    "permanent_naive",
    "plan",
    "propagate",
    "random_brickwork",
    "sample",
    "sample_output",
    "sample_poisson_bernoulli",
    "sample_poisson_direct",
    "sample_thermal_coherent",
    "save_circuit",
    "scattershot_herald",
    "simulability_condition",
    "simulate_circuit",
    "split_stream",
    "state_norm",
    "svd",
    "thermal_exact_distribution",
    "thermal_vs_erasure_distance",
    "thermalization_depth",
    "total_variation",
    "transfer_matrix",
    "__version__",
]
