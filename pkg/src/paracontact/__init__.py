"""Exact symbolic toolkit for paracontact metric (kappa, mu)-structures.

Structures are given on a Lie algebra (constant structure constants) or on
a coordinate frame over R^k whose coefficients are polynomials times
exponentials.  All tensors are computed exactly over Q(sqrt2).
"""

from .algnum import SQRT2, AlgNum, NotASquare
from .scalar import (
    ChartMismatch,
    Scalar,
    ScalarSyntaxError,
    evaluate,
    format_scalar,
    parse_linear_form,
    parse_scalar,
    partial_derivative,
    scalar_arith,
)
from .frame import (
    Connection,
    Curvature,
    Frame,
    FrameError,
    Metric,
    covariant_derivative,
    curvature,
    exterior_derivative_eta,
    levi_civita,
    lie_derivative_metric,
    verify_jacobi,
)
from .structure import (
    Check,
    EngineInconsistency,
    HTensor,
    ParacontactStructure,
    StructureError,
    VerificationReport,
    check_paraSasakian_curvature,
    compute_h,
    is_K_paracontact,
    is_paraSasakian,
    nijenhuis_normality,
    verify_almost_paracontact,
    verify_compatibility,
    verify_h_identities,
    verify_paracontact,
)
from .nullity import NullityResult, check_h_squared, classify_case, nullity_residuals, solve_kappa_mu
from .canonical import (
    CanonicalBasisResult,
    CanonicalFormError,
    PointEvaluation,
    canonical_basis,
    evaluate_at_point,
    h_rank_profile,
    verify_normal_form,
)
from .deformation import deform, deform_kappa_mu, verify_deformation_consistency
from .catalog import BUILTINS, CatalogEntry, ParameterError, get_entry, instantiate_builtin
from .dsl import DocumentError, DocumentRejected, load_document, parse_document, print_document
from .report import FullReport, run_full_report

__version__ = "0.1.0"
