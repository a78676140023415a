"""Jaynes-Cummings dynamics of a two-level atom driven by squeezed coherent light."""

from .dynamics import (
    AtomDensity,
    JointState,
    TimeSeries,
    entropy_series,
    evolve,
    field_purity,
    inversion,
    inversion_envelope,
    linear_entropy,
    mean_linear_entropy,
    reduce_atom,
    state_inversion,
)
from .fields import (
    AmplitudeUnderflowError,
    FieldMoments,
    FockAmplitudes,
    SqueezeParams,
    TruncationError,
    amplitudes,
    choose_cutoff,
    distribution_moments,
    log_distribution_direct,
    mandel_q,
    moments,
    params_from_means,
    photon_distribution,
    photon_variance,
)
from .numerics import DomainError, SolverError
from .optimality import (
    OptimalityReport,
    q_residual,
    scan_optimal,
    solve_min_q,
    solve_min_variance,
    variance_residual,
)

__version__ = "0.1.0"
