"""Opinion dynamics with memory and multi-hop influence.

Build an influence graph, derive a lag-matrix family for one of the
standard use cases, and then simulate, certify stability, and measure the
outcome:

    >>> import fjmm
    >>> W = fjmm.row_stochastic(fjmm.barbell(3))
    >>> family = fjmm.use_case_pair("two-hop", W, beta=0.8)
    >>> model = fjmm.FJMMModel(family, lam=[1, 1, 0, 0, 1, 1], s=[0, 0, 0, 1, 1, 1])
    >>> fjmm.stability_report(model).stable
    True
    >>> fjmm.equilibrium(model).round(4).tolist()
    [0.3077, 0.3077, 0.0, 1.0, 0.6923, 0.6923]
"""

from ._accel import BACKEND as KERNEL_BACKEND
from ._version import __version__
from .dynamics import (
    FJMMModel,
    Trajectory,
    as_susceptibility,
    control_matrix,
    equilibrium,
    hull_envelope,
    simulate,
    simulate_comparison,
    step,
    stubborn_set,
)
from .errors import (
    FJMMError,
    GenerationFailureError,
    InstabilityError,
    InvalidParameterError,
    InvalidStateError,
    InvariantViolationError,
    MatrixValidationError,
    NormalizationError,
    NumericalFailureError,
    SpectralAccuracyError,
)
from .graphs import (
    InfluenceGraph,
    assert_stochastic,
    barbell,
    binary_adjacency,
    complete,
    cycle,
    erdos_renyi,
    globally_reachable,
    reaches_set,
    read_edge_list,
    read_matrix_csv,
    row_stochastic,
    watts_strogatz,
    write_edge_list,
    write_matrix_csv,
)
from .influence import (
    BlendCoefficients,
    LagMatrixFamily,
    as_beta,
    family_from_tag,
    lagged_communication_pair,
    use_case_pair,
    validate_family,
)
from .metrics import (
    ConvergenceDiagnostics,
    PolarizationReport,
    convergence_time,
    estimate_rate,
    mean_trajectory,
    polarization_index,
)
from .spectral import (
    AugmentedSystem,
    StabilityReport,
    augmented,
    closed_form_rho_homogeneous,
    corollary1_sufficient,
    lemma3_rho,
    prop2_check,
    spectral_radius,
    spectral_radius_dense,
    spectral_radius_robust,
    stability_report,
)

__all__ = [
    "__version__",
    "KERNEL_BACKEND",
    # graphs
    "InfluenceGraph",
    "barbell",
    "cycle",
    "complete",
    "erdos_renyi",
    "watts_strogatz",
    "row_stochastic",
    "assert_stochastic",
    "binary_adjacency",
    "reaches_set",
    "globally_reachable",
    "read_edge_list",
    "write_edge_list",
    "read_matrix_csv",
    "write_matrix_csv",
    # influence
    "BlendCoefficients",
    "LagMatrixFamily",
    "as_beta",
    "use_case_pair",
    "lagged_communication_pair",
    "family_from_tag",
    "validate_family",
    # dynamics
    "FJMMModel",
    "Trajectory",
    "as_susceptibility",
    "stubborn_set",
    "step",
    "simulate",
    "simulate_comparison",
    "equilibrium",
    "control_matrix",
    "hull_envelope",
    # spectral
    "AugmentedSystem",
    "StabilityReport",
    "augmented",
    "spectral_radius",
    "spectral_radius_dense",
    "spectral_radius_robust",
    "stability_report",
    "corollary1_sufficient",
    "closed_form_rho_homogeneous",
    "prop2_check",
    "lemma3_rho",
    # metrics
    "PolarizationReport",
    "ConvergenceDiagnostics",
    "polarization_index",
    "mean_trajectory",
    "convergence_time",
    "estimate_rate",
    # errors
    "FJMMError",
    "InvalidParameterError",
    "GenerationFailureError",
    "NormalizationError",
    "MatrixValidationError",
    "InvalidStateError",
    "InstabilityError",
    "NumericalFailureError",
    "InvariantViolationError",
    "SpectralAccuracyError",
]
