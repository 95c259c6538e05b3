"""Reconstruction of analytic, non-periodic functions from truncated Fourier data.

Library layout:

- ``numerics``: quadrature, spherical Bessel, zeta, Jacobi SVD, pencil eigensolve
- ``fourier_core``: coefficient model, test functions, norms
- ``polyspace``: Legendre-basis polynomials, the Legendre-Fourier matrix,
  endpoint-derivative correspondence, extremal witness polynomials
- ``framebound``: the stability constant B_{n,m}, its growth lower bound and
  zeta-form oracles
- ``reconstruct``: the three reconstruction maps (coefficient interpolation,
  polynomial least squares, Fourier extension)
- ``conditioning``: condition numbers and the parameter-selection rule
- ``experiments`` / ``cli``: reproducible experiment drivers and figures
"""

__version__ = "0.1.0"

from .fourier_core import (  # noqa: F401
    CoeffVec,
    TestFunction,
    bernstein_radius,
    coeffs_exact,
    evaluate_truncated_series,
    norm_l2,
    norm_m,
)
from .framebound import BnmReport, b_star, bnm, sup_zeta_bound, witness_ratio, zeta_form_bound  # noqa: F401
from .numerics import QuadratureRule, SvdResult, gauss_legendre, gen_sym_eig_max, riemann_zeta, spherical_bessel, svd  # noqa: F401
from .polyspace import LegendrePoly, TPolyCoeffs, WitnessPoly, build_witness, endpoint_correspondence, eval_chebyshev_shifted, legendre_fourier_matrix  # noqa: F401
from .reconstruct import ExtensionFn, LsSolveInfo, fe_matrix, fourier_extension, iprm, l2_error, ls_solve, poly_ls  # noqa: F401
from .conditioning import ConditionReport, kappa_fe_power, kappa_fe_randomized, kappa_pls, select_max_n  # noqa: F401
