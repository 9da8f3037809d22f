"""Grover search simulated as an expectation-value (ensemble) quantum computer."""
from .analytic import (
    RotationState,
    TruncationPlan,
    amplitudes_after,
    attenuation,
    attenuation_after,
    classical_expected_queries,
    m_standard,
    min_truncated_iterations,
    plan_truncation,
    pm_success_probability,
    predicted_ratio,
    theta_of,
)
from .drivers import (
    SearchResult,
    SweepCell,
    SweepRow,
    compare_versions,
    run_standard_ev,
    run_standard_pm,
    run_truncated_ev,
)
from .filtering import (
    ConditionList,
    CorrelationSpec,
    apply_correlation,
    filtered_ev,
    locate_marked_item,
)
from .measurement import (
    EnsembleModel,
    EvReport,
    chebyshev_bound,
    exact_ev_sigma_z,
    projective_sample,
    readout_bits,
    sampled_ev,
)
from .state import (
    SearchInstance,
    StateVector,
    apply_diffusion,
    apply_oracle,
    grover_iterate,
    run_grover,
    uniform_superposition,
)

__version__ = "0.1.0"
