"""Alternator subalgebras and alternator forms of orthogonal involutions
on central simple algebras in characteristic two."""

from .alternator import (AlternatorData, FieldVerdict, PhiData, alternator_subalgebra,
                         alternator_value, field_test, is_direct, phi_and_pfister, psi_kernel,
                         q_is_anisotropic, s_field_test, split_fast_membership, split_fast_value)
from .errors import (AltformError, DimensionMismatch, DivisionByZero, FieldMismatch,
                     InvalidField, InvalidForm, InvalidInvolution, NotAUnit, NotOrthogonal,
                     ParseError, PhiConstructionFailed, UnsupportedProvenance)
from .exactla import Matrix, Subspace, f2span_dim, f2span_equal, semilinear_kernel
from .field2 import GF2k, Poly2, RationalFunctionField, field_from_descriptor, frob_decompose
from .forms import (BilinDiagForm, PfisterForm, TSQForm, pfister_expand, pfister_is_anisotropic,
                    pfister_isometric, pure_subform, tsq_isometric, tsq_matches_transpose_profile)
from .invalg import (InvolutionAlgebra, conjugate, mk_matrix_involution,
                     mk_quaternion_involution, split_isotropy, tensor, tensor_all)

__version__ = "0.1.0"

__all__ = [
    "Matrix",
    "Subspace",
    "f2span_dim",
    "f2span_equal",
    "semilinear_kernel",
    "GF2k",
    "Poly2",
    "RationalFunctionField",
    "field_from_descriptor",
    "frob_decompose",
    "AlternatorData",
    "FieldVerdict",
    "PhiData",
    "alternator_subalgebra",
    "alternator_value",
    "field_test",
    "is_direct",
    "phi_and_pfister",
    "psi_kernel",
    "q_is_anisotropic",
    "s_field_test",
    "split_fast_membership",
    "split_fast_value",
    "AltformError",
    "DimensionMismatch",
    "DivisionByZero",
    "FieldMismatch",
    "InvalidField",
    "InvalidForm",
    "InvalidInvolution",
    "NotAUnit",
    "NotOrthogonal",
    "ParseError",
    "PhiConstructionFailed",
    "UnsupportedProvenance",
    "BilinDiagForm",
    "PfisterForm",
    "TSQForm",
    "pfister_expand",
    "pfister_is_anisotropic",
    "pfister_isometric",
    "pure_subform",
    "tsq_isometric",
    "tsq_matches_transpose_profile",
    "InvolutionAlgebra",
    "conjugate",
    "mk_matrix_involution",
    "mk_quaternion_involution",
    "split_isotropy",
    "tensor",
    "tensor_all",
]
