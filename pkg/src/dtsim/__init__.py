"""Scale-invariant processes sampled on geometric grids.

Covariance closed forms, quasi-Lamperti transforms, seeded Monte Carlo,
self-similar embeddings, and spectral density matrices for discrete-time
scale-invariant Markov processes observed at the points ``alpha**k``.
"""

from .core import (
    CovarianceSeed,
    DsiParams,
    GeometricGrid,
    HChain,
    convergence_ratio,
    h_ratio,
    h_tilde,
    make_chain,
    make_params,
)
from .covariance import (
    annulus_index,
    dsi_cov_check,
    dtsim_cov,
    kernel_cov,
    markov_triangle_residual,
    pc_counterpart_cov,
    simple_bm_cov,
    simple_bm_seed,
)
from .errors import ConvergenceError, DomainError, DtsimError, GridError, PoleError
from .lamperti import (
    SampledFunction,
    dilate,
    evaluate,
    lamperti_forward,
    lamperti_inverse,
    shift,
    verify_commutation,
)
from .multidim import Embedding, QCov, build_embedding, build_qcov, gamma_k, q_cov
from .simulate import (
    CovEstimate,
    Ensemble,
    empirical_cov,
    simulate_brownian,
    simulate_simple_bm,
)
from .spectral import (
    BkTable,
    FrequencyGrid,
    SpectralMatrix,
    auto_truncation,
    bk_from_pc_cov,
    build_bk_table,
    dsi_cov_from_spectra,
    f_matrix,
    f_matrix_grid,
    fjk,
    fk_from_bk,
    second_term_forms,
    simple_bm_spectral,
    spectral_closed,
    spectral_closed_grid,
    spectral_diag,
    spectral_matrix,
    spectral_matrix_grid,
    spectral_sum,
    spectral_sum_grid,
)
from .verify import CheckResult, perturb_seed, run_checks

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DomainError",
    "DtsimError",
    "GridError",
    "PoleError",
    "DsiParams",
    "GeometricGrid",
    "CovarianceSeed",
    "HChain",
    "make_params",
    "make_chain",
    "h_ratio",
    "h_tilde",
    "convergence_ratio",
    "annulus_index",
    "simple_bm_seed",
    "simple_bm_cov",
    "dtsim_cov",
    "kernel_cov",
    "pc_counterpart_cov",
    "markov_triangle_residual",
    "dsi_cov_check",
    "SampledFunction",
    "evaluate",
    "shift",
    "dilate",
    "lamperti_forward",
    "lamperti_inverse",
    "verify_commutation",
    "Ensemble",
    "CovEstimate",
    "simulate_brownian",
    "simulate_simple_bm",
    "empirical_cov",
    "Embedding",
    "QCov",
    "build_embedding",
    "build_qcov",
    "q_cov",
    "gamma_k",
    "FrequencyGrid",
    "BkTable",
    "SpectralMatrix",
    "auto_truncation",
    "bk_from_pc_cov",
    "build_bk_table",
    "fk_from_bk",
    "fjk",
    "f_matrix",
    "f_matrix_grid",
    "dsi_cov_from_spectra",
    "spectral_sum",
    "spectral_sum_grid",
    "spectral_closed",
    "spectral_closed_grid",
    "second_term_forms",
    "spectral_diag",
    "simple_bm_spectral",
    "spectral_matrix",
    "spectral_matrix_grid",
    "CheckResult",
    "perturb_seed",
    "run_checks",
]
