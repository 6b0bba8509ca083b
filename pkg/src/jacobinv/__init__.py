"""Direct and inverse spectral problems for Jacobi matrices under a one-site
mass-spring perturbation."""

from .core import (
    DEFAULT_TOL,
    FIXTURES,
    AmbiguousClassification,
    BreakdownAtPivot,
    EmptyRange,
    InfeasibleCounts,
    InvalidInput,
    InvalidSystem,
    InvalidTheta,
    JacobiError,
    JacobiMatrix,
    MeasureDegenerate,
    MissingTheta,
    NegativeResidue,
    NonSimpleSpectrum,
    NotRealizable,
    PerturbationParams,
    PoleAtK,
    PoleAtPoint,
    PoleResidueForm,
    SpectralData,
    TolerancePolicy,
    ValidationReport,
    VerificationFailed,
    ZeroBracketFailure,
    validate_jacobi,
    validate_spectral_data,
)
from .eigen import WeightedSpectrum, eigenvalues, eigenvector_weights, sturm_count
from .poly import eval_first_kind, eval_QN, eval_second_kind, qtilde_identity_residual, submatrix
from .perturb import apply_perturbation, mass_ratio_from_unmovable, perturbation_from
from .green import (
    green_nn_poly,
    green_nn_spectral,
    green_nn_two_spectra,
    rational_N,
    rational_N_derivative,
)
from .conditions import (
    ConditionsReport,
    DataClassification,
    InterlacingReport,
    KCase,
    check_conditions,
    check_interlacing,
    classify,
)
from .weyl import Anchor, euclid_continued_fraction, reconstruct_weyl
from .inverse import (
    InverseResult,
    PoleAssignment,
    SolutionFamily,
    assemble_solution,
    build_ghat,
    enumerate_assignments,
    family_count,
    locate_in_family,
    solve_inverse,
)
from .massspring import MassSpringSystem, jacobi_to_system, perturbation_to_physical, system_to_jacobi

__version__ = "0.1.0"
