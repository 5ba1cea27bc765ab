"""Finite quantum state tomography with operator frames and projector quorums."""

from .errors import (
    CompletenessError,
    ConditioningError,
    DataError,
    DesignError,
    DimensionError,
    FeasibilityError,
    RangeError,
    ResourceError,
    ScenarioError,
    SpanError,
    StateError,
    TomographyError,
)
from .frames import (
    FrameOperatorData,
    VectorFrame,
    analysis,
    frame_coefficients,
    frame_operator,
    projection_method,
    synthesis,
)
from .opspace import (
    DualFrame,
    GramSuperoperator,
    OperatorBasis,
    build_dual_frame,
    build_gram,
    expand,
    operator_expectations,
    reconstruct,
    trace_inner_product,
)
from .phase import (
    PhaseBasis,
    PhaseDistribution,
    phase_diagonal_reconstruct,
    phase_distribution,
    phase_operator,
    phase_states,
)
from .qudit import (
    BlochVector,
    ProjectorQuorum,
    SuDBasis,
    bloch_contract,
    bloch_expand,
    outcome_probabilities,
    product_quorum,
    projector_quorum,
    qubit_design_quorum,
    qudit_quorum_gram,
    qutrit_sic_quorum,
    reconstruct_from_probabilities,
    su_generators,
)
from .report import TomographyReport, build_report
from .sampling import (
    SampledFrequencies,
    ShotPlan,
    SweepResult,
    error_scaling_sweep,
    simulate_binary_outcomes,
)
from .sdp import (
    SdpDiagnostics,
    SdpPoint,
    SdpProblem,
    TruncationProblem,
    check_slackness,
    duality_gap,
    evaluate_constraint,
    extract_coefficients,
    kernel_projector,
    optimality_diagnostics,
    truncation_certificate,
    truncation_sdp,
)
from .spin import (
    SpinCoherentState,
    SpinQuorum,
    build_spin_quorum,
    quorum_compatibility_report,
    spin_coherent_state,
    spin_probabilities,
    spin_reconstruct,
)
from .states import (
    bell_state,
    computational_state,
    fidelity,
    ghz_state,
    pure_state,
    random_density_matrix,
    trace_distance,
    werner_state,
)

__version__ = "0.1.0"
