"""Outlier-free spline discretizations of the Laplacian on [0, 1] and boxes.

Spline spaces on uniform (or shifted-uniform) breakpoints whose mass and
stiffness matrices are Toeplitz-plus/minus-Hankel, diagonalized by fast
sine/cosine transforms, with every eigenvalue obeying a relative error bound.
"""
from .errors import (DomainError, InvalidOrderError, OutlierFreeError, SingularMatrixError,
                     SizeError, ThresholdError)
from .exact_splines import (Rational, SymbolCoeffs, alpha_coeffs, cardinal_eval,
                            cardinal_inner)
from .iga import (Kind, ShiftScale, SpaceSpec, assemble_closed_form, assemble_exact,
                  assemble_quadrature, basis_eval, extraction_matrix, gauss_legendre,
                  opt_breakpoints)
from .spectrum import (LaplaceEigs, OutlierReport, TensorSpec, exact_continuous_eigs,
                       laplace_eigs_1d, outlier_report, tensor_eigs, tensor_residual_check)
from .symbols import SymbolFn, error_bound_rhs, mass_symbol_lower_bound, ratio_symbol, symbol_eval
from .tau import (EigenSystem, HankelVariant, StructuredMatrix, TauAlgebra, build_hankel,
                  build_toeplitz, structured_matvec, structured_solve, tau_apply,
                  tau_apply_transpose, tau_eigensystem, tau_transform_column)

__version__ = "0.1.0"
