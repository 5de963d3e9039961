"""Chain-coupled distributed observers for closed linear quantum networks.

Construct an N-element observer chain that couples directly to a one-mode
plant, and certify the construction: the internal energy matrix must be
positive definite and the dynamics physically realizable, with the
frequency lineup pinned by a constant-drive fixed point. The simulation
layer then propagates the augmented coefficient dynamics to demonstrate
time-averaged consensus of the observer outputs onto the plant output.
"""

from .analysis import (
    ReducedMatrix,
    SpectralCertificate,
    build_reduced,
    certify_positive_definite,
    laplacian_split,
    verify_exp_bound,
)
from .builder import (
    SCHEME_ALL_HARMONICS,
    SCHEME_ODD_HARMONICS,
    SCHEME_RANDOM,
    SCHEME_UNIFORM,
    SCHEMES,
    AugmentedSystem,
    ChainObserverParams,
    ConsensusTarget,
    ParameterScheme,
    PlantSpec,
    assemble_augmented,
    build_chain,
    check_fixed_point,
    consensus_target,
    make_mu_schedule,
    omegas_from_mu,
)
from .cli import ExperimentConfig, RunReport, load_config, parse_config
from .errors import (
    BoundViolatedError,
    ChainobsError,
    ConfigError,
    ConfigSchemaError,
    ConfigValidationError,
    DegenerateOutputError,
    InvalidDimensionError,
    InvalidInputError,
    InvalidParameterError,
    NotPositiveDefiniteError,
    NumericalFailureError,
    StepTooCoarseError,
    ToleranceExceededError,
    UnsupportedPlantError,
    UnsupportedSchemeError,
)
from .lqs import (
    SYMPLECTIC_UNIT,
    HamiltonianMatrix,
    LinearQuantumSystem,
    SymplecticForm,
    dynamics_from_hamiltonian,
    hamiltonian_drift,
    make_symplectic,
    realizability_residual,
    symplectic_drift,
)
from .simulate import (
    TimeAverage,
    TimeGrid,
    Trajectory,
    coefficient_trajectory,
    consensus_error,
    default_step,
    integral_of_propagator,
    max_frequency,
    propagator,
    spatial_average,
    time_average_exact,
    time_average_quadrature,
)

__version__ = "0.1.0"

__all__ = [
    "AugmentedSystem",
    "BoundViolatedError",
    "ChainObserverParams",
    "ChainobsError",
    "ConfigError",
    "ConfigSchemaError",
    "ConfigValidationError",
    "ConsensusTarget",
    "DegenerateOutputError",
    "ExperimentConfig",
    "HamiltonianMatrix",
    "InvalidDimensionError",
    "InvalidInputError",
    "InvalidParameterError",
    "LinearQuantumSystem",
    "NotPositiveDefiniteError",
    "NumericalFailureError",
    "ParameterScheme",
    "PlantSpec",
    "ReducedMatrix",
    "RunReport",
    "SCHEMES",
    "SCHEME_ALL_HARMONICS",
    "SCHEME_ODD_HARMONICS",
    "SCHEME_RANDOM",
    "SCHEME_UNIFORM",
    "SYMPLECTIC_UNIT",
    "SpectralCertificate",
    "StepTooCoarseError",
    "SymplecticForm",
    "TimeAverage",
    "TimeGrid",
    "ToleranceExceededError",
    "Trajectory",
    "UnsupportedPlantError",
    "UnsupportedSchemeError",
    "assemble_augmented",
    "build_chain",
    "build_reduced",
    "certify_positive_definite",
    "check_fixed_point",
    "coefficient_trajectory",
    "consensus_error",
    "consensus_target",
    "default_step",
    "dynamics_from_hamiltonian",
    "hamiltonian_drift",
    "integral_of_propagator",
    "laplacian_split",
    "load_config",
    "make_mu_schedule",
    "make_symplectic",
    "max_frequency",
    "omegas_from_mu",
    "parse_config",
    "propagator",
    "realizability_residual",
    "spatial_average",
    "symplectic_drift",
    "time_average_exact",
    "time_average_quadrature",
    "verify_exp_bound",
]
