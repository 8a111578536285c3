"""Random quantum covariance matrices: sampling, spectra, limit laws, entanglement."""

__version__ = "0.1.0"

from .ensemble import (
    GoeSpec,
    ModeBipartition,
    QuantumCovarianceMatrix,
    RngSeed,
    blocks,
    i_symplectic_form,
    marginal,
    mode_rotation,
    rqcm_from,
    rqcm_shift,
    sample_goe,
    sample_rqcm,
    symplectic_form,
)
from .extend import (
    ExtendabilityReport,
    FeasibilityResult,
    SandwichProblem,
    Status,
    is_k_extendable,
    is_separable,
    lower_bound_matrix,
    max_extendability,
    solve_sandwich,
    upper_bound_k,
)
from .freeprob import (
    DensityCurve,
    EdgeSet,
    edge_L,
    edge_R,
    edge_sqrtF,
    edges,
    eigenvalue_limit_curve,
    energy_per_mode,
    marginal_limit_curve,
    mu_sigma_curve,
    mu_sigma_density,
    purity_rate_LD,
    semicircle_density,
    symplectic_limit_curve,
    symplectic_limit_density,
    theoretical_marginal_density,
)
from .linalg import (
    EigenDecomposition,
    HermitianMatrix,
    NotPDError,
    NotPSDError,
    SymmetricMatrix,
    herm_eigen,
    herm_eigvals,
    log_det_spd,
    pinv_herm,
    psd_sqrt,
    real_embed,
    sym_eigen,
    sym_eigvals,
)
from .spectra import (
    SpectralSample,
    log_purity,
    ppt_defect,
    purity_rate,
    qcm_defect,
    spectrum,
    symplectic_spectrum,
)
from .stats import (
    Histogram,
    SweepConfig,
    SweepSummary,
    histogram,
    l1_distance,
    run_sweep,
)
