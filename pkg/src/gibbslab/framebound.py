"""The stability constant B_{n,m} and its growth lower bounds.

B_{n,m} is the largest L^2(-1,1) norm of a degree-n polynomial whose first
2m+1 Fourier coefficients have unit l^2 norm; with the orthonormal Legendre
parametrization it equals the reciprocal of the smallest singular value of
the Legendre-Fourier cross matrix.

Three independent routes to (lower bounds of) the same quantity live here:

- ``bnm``: exact, via the Jacobi SVD (or an mpmath path in dd mode);
- ``witness_ratio``: the factored extremal polynomial summed directly;
- ``zeta_form_bound`` / ``sup_zeta_bound``: exact-series quadratic forms in
  zeta values, for degrees small enough that monomial coefficients are safe.

The closed-form lower bound is

    b_star(n, m) = sqrt(1 + n/(8m) + (n/(16m)) (9/4)^{n^2/(8m)}),

the constant-explicit form delivered by the witness-chain argument
(gamma^{2 q^2/m} with q ~ n/4 and gamma > 9/4).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .numerics import gen_sym_eig_max, riemann_zeta, svd
from .polyspace import TPolyCoeffs, build_witness, check_legendre_fourier, _lf_real

LOG10_CAP_DOUBLE = 8.0    # predicted growth cap for plain double precision
LOG10_CAP_DD = 16.0       # cap for the double-double (mpmath-backed) mode
ZETA_FORM_DEGREE_CAP = 9  # monomial-cancellation cap
_DD_DPS = 60


class PrecisionRegimeError(RuntimeError):
    """Predicted growth exceeds what the selected precision can resolve."""


@dataclass(frozen=True)
class BnmReport:
    n: int
    m: int
    b_value: float
    b_star: float
    sigma_min: float
    precision_mode: str


def b_star(n: int, m: int) -> float:
    """Closed-form lower bound sqrt(1 + n/(8m) + (n/(16m)) (9/4)^{n^2/(8m)})."""
    if m < 1:
        raise ValueError("need m >= 1")
    if n < 0:
        raise ValueError("need n >= 0")
    if n == 0:
        return 1.0
    L = (n * n / (8.0 * m)) * math.log(2.25)
    if L < 700.0:
        return math.sqrt(1.0 + n / (8.0 * m) + (n / (16.0 * m)) * math.exp(L))
    # log-domain: the third term dominates completely
    half_log = 0.5 * (math.log(n / (16.0 * m)) + L)
    return math.exp(half_log) if half_log < 709.0 else math.inf


def growth_log10(n: int, m: int) -> float:
    """log10 of the conservative growth envelope (9/4)^{n^2/m} form.

    This envelope over-predicts the observed B_{n,m} by orders of magnitude,
    which is exactly what a precision-regime guard wants.
    """
    if n == 0:
        return 0.0
    X = (n * n / m) * math.log10(2.25) + math.log10(n / (16.0 * m))
    if X > 30.0:
        return 0.5 * X
    return 0.5 * math.log10(1.0 + n / (8.0 * m) + 10.0 ** X)


def _sigma_min_dd(n: int, m: int) -> float:
    """Smallest singular value of the cross matrix at double-double precision.

    Entries and the SVD are evaluated with mpmath at 60 significant digits;
    the column phases are irrelevant for singular values, so the real form is
    used (sqrt(2k+1) j_k(pi j), parity signs on negative rows).
    """
    with mpmath.workdps(_DD_DPS):
        pi = mpmath.pi
        A = mpmath.zeros(2 * m + 1, n + 1)
        A[m, 0] = mpmath.mpf(1)
        for j in range(1, m + 1):
            z = pi * j
            pref = mpmath.sqrt(pi / (2 * z))
            for k in range(n + 1):
                jk = pref * mpmath.besselj(k + mpmath.mpf(1) / 2, z)
                val = mpmath.sqrt(2 * k + 1) * jk
                A[m + j, k] = val
                A[m - j, k] = val if k % 2 == 0 else -val
        svals = mpmath.svd_r(A, compute_uv=False)
        smin = min(svals[i] for i in range(svals.rows))
        return float(smin)


def bnm(n: int, m: int, precision_mode: str = "double", check_matrix: bool = False) -> BnmReport:
    """B_{n,m} = 1/sigma_min of the Legendre-Fourier cross matrix.

    precision_mode 'double' requires the predicted growth envelope <= 1e8;
    'dd' extends the admissible range to 1e16 through the mpmath path.
    """
    if n < 0 or m < 0:
        raise ValueError("need n >= 0 and m >= 0")
    if precision_mode not in ("double", "dd"):
        raise ValueError(f"unknown precision mode {precision_mode!r}")
    if 2 * m + 1 < n + 1:
        # fewer coefficients than polynomial dimensions: a null direction
        # carries unit L2 norm with zero coefficient norm; exact in any mode
        return BnmReport(n=n, m=m, b_value=math.inf, b_star=b_star(n, m) if m >= 1 else 1.0,
                         sigma_min=0.0, precision_mode=precision_mode)
    if m >= 1:
        predicted = growth_log10(n, m)
        cap = LOG10_CAP_DOUBLE if precision_mode == "double" else LOG10_CAP_DD
        if predicted > cap:
            raise PrecisionRegimeError(
                f"predicted growth 1e{predicted:.1f} at (n={n}, m={m}) exceeds the "
                f"{precision_mode} cap 1e{cap:.0f}"
                + (" (use precision_mode='dd')" if precision_mode == "double" else "")
            )
    if check_matrix:
        check_legendre_fourier(n, m)
    if precision_mode == "dd" and m >= 1:
        smin = _sigma_min_dd(n, m)
    else:
        smin = float(svd(_lf_real(n, m)).s[-1])
    b_value = 1.0 / smin if smin > 0.0 else math.inf
    return BnmReport(
        n=n,
        m=m,
        b_value=b_value,
        b_star=b_star(n, m) if m >= 1 else 1.0,
        sigma_min=smin,
        precision_mode=precision_mode,
    )


# ----------------------------------------------------------------------
# Witness ratio (direct summation route)
# ----------------------------------------------------------------------

WITNESS_TAIL_TERMS = 10 ** 6


def witness_ratio(q: int, m: int, tail_terms: int = WITNESS_TAIL_TERMS) -> float:
    """B(n, m, P) for the factored witness P, n = 4q+1.

    sqrt of (sum_{1<=|j|} P(1/j)^2) / (sum_{1<=|j|<=m} P(1/j)^2); P is odd so
    the two-sided sums reduce to one-sided ones.  The infinite sum is a
    direct sum to ``tail_terms`` plus the first-order tail correction
    J * P(1/J)^2 (relative tail error O(m/J)).
    """
    P = build_witness(q, m)
    j = np.arange(1, tail_terms + 1, dtype=np.float64)
    vals = P(1.0 / j)
    sq = vals * vals
    num = float(np.sum(sq)) + tail_terms * float(sq[-1])
    den = float(np.sum(sq[:m]))
    return math.sqrt(num / den)


# ----------------------------------------------------------------------
# Zeta quadratic forms (exact-series route, degree <= 9)
# ----------------------------------------------------------------------

def _parity_zeta_matrix(n: int) -> np.ndarray:
    # (1 + (-1)^{k+l}) zeta(k+l): the two-sided sums over +-j annihilate
    # the odd k+l entries, leaving 2 zeta(k+l) on matched parities.
    Z = np.zeros((n, n))
    for k in range(1, n + 1):
        for l in range(1, n + 1):
            if (k + l) % 2 == 0:
                Z[k - 1, l - 1] = 2.0 * riemann_zeta(k + l)
    return Z


def _parity_partial_matrix(n: int, m: int) -> np.ndarray:
    Zm = np.zeros((n, n))
    for k in range(1, n + 1):
        for l in range(1, n + 1):
            if (k + l) % 2 == 0:
                s = k + l
                Zm[k - 1, l - 1] = 2.0 * math.fsum(float(j) ** (-s) for j in range(1, m + 1))
    return Zm


def zeta_form_bound(p, m: int) -> float:
    """B(n, m, p~) by exact series for the numerator, finite sum below.

    Accepts a TPolyCoeffs or a coefficient array b_1..b_n (n <= 9, p~(0)=0).
    The numerator sum_{1<=|j|} |p~(1/j)|^2 equals
    sum_{k,l} Re(b_k conj(b_l)) (1+(-1)^{k+l}) zeta(k+l).
    """
    if m < 1:
        raise ValueError("need m >= 1")
    b = p.b if isinstance(p, TPolyCoeffs) else np.atleast_1d(np.asarray(p, dtype=np.complex128))
    n = b.size
    if n > ZETA_FORM_DEGREE_CAP:
        raise ValueError(f"degree {n} exceeds cap {ZETA_FORM_DEGREE_CAP}")
    num = 0.0
    for k in range(1, n + 1):
        for l in range(1, n + 1):
            if (k + l) % 2 == 0:
                num += 2.0 * (b[k - 1] * b[l - 1].conjugate()).real * riemann_zeta(k + l)
    tp = p if isinstance(p, TPolyCoeffs) else TPolyCoeffs(b=b)
    j = np.arange(1, m + 1, dtype=np.float64)
    den = float(np.sum(np.abs(tp.eval_tilde(1.0 / j)) ** 2
                       + np.abs(tp.eval_tilde(-1.0 / j)) ** 2))
    if den <= 0.0:
        raise ValueError("p~ vanishes at every sampled 1/j; the ratio is undefined")
    return math.sqrt(num / den)


def sup_zeta_bound(n: int, m: int) -> float:
    """sup of B(n, m, p~) over all p~ with p~(0) = 0, degree <= n (n <= 9).

    The supremum of the quadratic-form ratio is the largest eigenvalue of
    the pencil (Z, Z_m) with the parity-respecting entries above; it lower
    bounds B_{n,m} and is numerically tight.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if n > ZETA_FORM_DEGREE_CAP:
        raise ValueError(f"degree {n} exceeds cap {ZETA_FORM_DEGREE_CAP}")
    if m < 1:
        raise ValueError("need m >= 1")
    Z = _parity_zeta_matrix(n)
    Zm = _parity_partial_matrix(n, m)
    return math.sqrt(gen_sym_eig_max(Z, Zm))
