"""Spectral forward and inverse machinery for 1-D time-fractional diffusion
with a Neumann boundary input.

The library evaluates the two-parameter Mittag-Leffler function, solves the
Neumann Sturm-Liouville eigenproblem for A_p = -d^2/dx^2 - p(x), assembles
the forward solution and boundary kernel from the spectral representation,
cross-checks against an independent L1 finite-difference solver, and inverts
boundary data for the fractional order, the spectral data, and the potential.
"""

from .errors import (
    CompatibilityError,
    DegeneratePotentialError,
    DomainError,
    FracspecError,
    GridError,
    HypothesisViolation,
    NumericError,
    ParameterError,
    PoleProximityError,
)
from .fraccalc import Signal, caputo_l1, halpha_check, rl_integral
from .forward import KernelTable, SolutionField, kernel, solve_forward, trace, verify_duhamel
from .harness import (
    ExperimentReport,
    distinguishability,
    eigenvalue_matching,
    unique_continuation,
)
from .inverse import (
    OrderEstimator,
    PotentialEstimator,
    ResolventModel,
    SpectralFitter,
    SupportSplit,
    estimate_order,
    extract_spectral,
    recover_potential,
    residue_at,
    resolvent_eval,
    support_infimum,
    titchmarsh_check,
)
from .mlf import MLQuery, ml_eval, ml_kernel_integral, ml_laplace, mittag_leffler
from .oracle import convergence_study, solve_l1
from .sturm import Potential, SpectralData, eigen_solve, neumann_steady

__version__ = "0.1.0"

__all__ = [
    "CompatibilityError",
    "DegeneratePotentialError",
    "DomainError",
    "ExperimentReport",
    "FracspecError",
    "GridError",
    "HypothesisViolation",
    "KernelTable",
    "MLQuery",
    "NumericError",
    "OrderEstimator",
    "ParameterError",
    "PoleProximityError",
    "Potential",
    "PotentialEstimator",
    "ResolventModel",
    "Signal",
    "SolutionField",
    "SpectralData",
    "SpectralFitter",
    "SupportSplit",
    "__version__",
    "caputo_l1",
    "convergence_study",
    "distinguishability",
    "eigen_solve",
    "eigenvalue_matching",
    "estimate_order",
    "extract_spectral",
    "halpha_check",
    "kernel",
    "ml_eval",
    "ml_kernel_integral",
    "ml_laplace",
    "mittag_leffler",
    "neumann_steady",
    "recover_potential",
    "residue_at",
    "resolvent_eval",
    "solve_forward",
    "solve_l1",
    "support_infimum",
    "titchmarsh_check",
    "trace",
    "unique_continuation",
    "verify_duhamel",
]
