"""Statistics-adapted pulse design for doubly dispersive channels.

Models a random channel as a weighted superposition of cyclic
time-frequency shifts, averages its action into a completely positive
map, and designs precoder/equalizer pairs and multiplexing schemes that
maximize the long-term gain and SINR.  At L=2 the optimum is available in
closed form; numerical oracles, general-L optimizers and a Monte Carlo
harness verify it end to end.
"""

from .bloch import (
    ChannelClass,
    FidelitySolution,
    ScatteringQuad,
    best_case_fidelity,
    bloch_to_matrix,
    classify_channel,
    is_on_bloch_manifold,
    map_matrix_rep,
    matrix_to_bloch,
    optimal_precoder_vector,
    optimal_projectors,
    solve_fidelity,
    worst_case_fidelity,
)
from .errors import (
    DimensionMismatchError,
    InvalidConfigError,
    InvalidDensityOperatorError,
    InvalidSchemeError,
    InvalidWeightsError,
    NonHermitianError,
    NotUnitNormError,
    SingularDenominatorError,
    WHPrecodeError,
)
from .heisenberg import fourier_matrix, pauli, shift_operator
from .linalg import (
    hermitian_eigensystem,
    max_generalized_eigenpair,
    rank_one_projector,
)
from .mc import McReport, SweepRow, estimate_expectations, sweep_p0
from .multiplex import (
    Scheme,
    best_scheme,
    crosstalk,
    frame_bounds,
    select_schemes,
    two_stream_sinr,
)
from .optimize import (
    OptimizationTrace,
    OptimizerConfig,
    alternating_fidelity_max,
    brute_force_bloch_oracle,
    fidelity_lower_bound_search,
    optimal_receiver,
)
from .wssus import (
    ChannelRealization,
    CpPropertyReport,
    ScatteringFunction,
    apply_A,
    apply_adjoint_A,
    apply_interference,
    channel_fidelity,
    realize_channel_matrix,
    sample_realization,
    sinr,
    verify_cp_properties,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelClass",
    "ChannelRealization",
    "CpPropertyReport",
    "DimensionMismatchError",
    "FidelitySolution",
    "InvalidConfigError",
    "InvalidDensityOperatorError",
    "InvalidSchemeError",
    "InvalidWeightsError",
    "McReport",
    "NonHermitianError",
    "NotUnitNormError",
    "OptimizationTrace",
    "OptimizerConfig",
    "ScatteringFunction",
    "ScatteringQuad",
    "Scheme",
    "SingularDenominatorError",
    "SweepRow",
    "WHPrecodeError",
    "alternating_fidelity_max",
    "apply_A",
    "apply_adjoint_A",
    "apply_interference",
    "best_case_fidelity",
    "best_scheme",
    "bloch_to_matrix",
    "brute_force_bloch_oracle",
    "channel_fidelity",
    "classify_channel",
    "crosstalk",
    "estimate_expectations",
    "fidelity_lower_bound_search",
    "fourier_matrix",
    "frame_bounds",
    "hermitian_eigensystem",
    "is_on_bloch_manifold",
    "map_matrix_rep",
    "matrix_to_bloch",
    "max_generalized_eigenpair",
    "optimal_precoder_vector",
    "optimal_projectors",
    "optimal_receiver",
    "pauli",
    "rank_one_projector",
    "realize_channel_matrix",
    "sample_realization",
    "select_schemes",
    "shift_operator",
    "sinr",
    "solve_fidelity",
    "sweep_p0",
    "two_stream_sinr",
    "verify_cp_properties",
    "worst_case_fidelity",
]
