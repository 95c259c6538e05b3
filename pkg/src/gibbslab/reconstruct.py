"""The three reconstruction maps from the first 2m+1 Fourier coefficients.

All three are linear least-squares fits of the data in coefficient space,
differing only in the reconstruction space:

- coefficient interpolation (IPRM): degree-2m polynomial, square solve,
  deliberately unregularized so its instability is observable;
- polynomial least squares (PLS): degree-2n polynomial, n <= m;
- Fourier extension (FE): trigonometric series of degree n on [-T, T].

One truncated-SVD solver backs all of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fourier_core import CoeffVec, TestFunction, norm_l2
from .polyspace import LegendrePoly, legendre_fourier_matrix


class IprmSolveError(RuntimeError):
    """Square interpolation solve failed; carries the condition estimate."""

    def __init__(self, m: int, cond: float):
        self.m = m
        self.cond = cond
        super().__init__(
            f"coefficient interpolation solve failed at m={m} "
            f"(estimated condition number {cond:.3e})"
        )


@dataclass(frozen=True)
class LsSolveInfo:
    rank_used: int
    svd_cutoff: float
    residual_norm: float


def ls_solve(A, b, cutoff_rel: float = 1e-14) -> tuple[np.ndarray, LsSolveInfo]:
    """Minimum-norm least squares with singular values < cutoff_rel*s_max dropped.

    cutoff_rel = 0 keeps every positive singular value (raw solve).  A zero
    matrix yields the flagged rank-0 solution x = 0.
    """
    if not 0.0 <= cutoff_rel < 1.0:
        raise ValueError("cutoff must lie in [0, 1)")
    A = np.asarray(A)
    b = np.asarray(b)
    if A.ndim != 2 or b.shape[0] != A.shape[0]:
        raise ValueError("incompatible dimensions")
    U, s, Vh = np.linalg.svd(A, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        x = np.zeros(A.shape[1], dtype=np.result_type(A, b))
        return x, LsSolveInfo(0, cutoff_rel, float(np.linalg.norm(b)))
    keep = s > cutoff_rel * s[0] if cutoff_rel > 0 else s > 0.0
    rank = int(np.count_nonzero(keep))
    coeff = (U[:, keep].conj().T @ b) / s[keep]
    x = Vh[keep].conj().T @ coeff
    residual = float(np.linalg.norm(A @ x - b))
    return x, LsSolveInfo(rank, cutoff_rel, residual)


def _as_legendre(x: np.ndarray) -> LegendrePoly:
    scale = float(np.max(np.abs(x))) if x.size else 0.0
    if scale > 0 and float(np.max(np.abs(x.imag))) <= 1e-10 * scale:
        return LegendrePoly(x.real)
    return LegendrePoly(x)


def iprm(c: CoeffVec) -> LegendrePoly:
    """The unique degree-2m polynomial matching all 2m+1 coefficients.

    Raw square solve (cutoff 0); the solve degrades as the interpolation
    matrix becomes exponentially ill-conditioned with m.
    """
    A = legendre_fourier_matrix(2 * c.m, c.m)
    x, info = ls_solve(A, c.values, 0.0)
    if info.rank_used < 2 * c.m + 1 or not np.all(np.isfinite(x)):
        s = np.linalg.svd(A, compute_uv=False)
        positive = s[s > 0]
        cond = float(s[0] / positive[-1]) if positive.size else math.inf
        raise IprmSolveError(c.m, cond)
    return _as_legendre(x)


def poly_ls(c: CoeffVec, n: int) -> LegendrePoly:
    """argmin over degree-2n polynomials of the coefficient misfit, n <= m."""
    if n > c.m:
        raise ValueError(f"need n <= m for an overdetermined fit (n={n}, m={c.m})")
    if n < 0:
        raise ValueError("n must be >= 0")
    A = legendre_fourier_matrix(2 * n, c.m)
    x, _ = ls_solve(A, c.values, 1e-14)
    return _as_legendre(x)


# ----------------------------------------------------------------------
# Fourier extensions
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ExtensionFn:
    """sum_{|k|<=n} a_k exp(i k pi x / T): a Fourier series on [-T, T]."""

    T: float
    n: int
    a: np.ndarray

    def __post_init__(self):
        if self.T <= 1.0:
            raise ValueError("extension half-length T must exceed 1")
        a = np.asarray(self.a, dtype=np.complex128)
        if a.shape != (2 * self.n + 1,):
            raise ValueError(f"expected {2 * self.n + 1} coefficients")
        object.__setattr__(self, "a", a)

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        k = np.arange(-self.n, self.n + 1)
        return np.exp(1j * math.pi * np.multiply.outer(x, k) / self.T) @ self.a


def fe_matrix(n: int, m: int, T: float) -> np.ndarray:
    """Coefficients on [-1,1] of the extension modes: sqrt(2) sinc(pi(k/T - j)).

    The removable singularity at k/T - j = 0 (rational T) is exact through
    np.sinc.
    """
    if T <= 1.0:
        raise ValueError("extension half-length T must exceed 1")
    j = np.arange(-m, m + 1)[:, None]
    k = np.arange(-n, n + 1)[None, :]
    return math.sqrt(2.0) * np.sinc(k / T - j).astype(np.complex128)


def fourier_extension(c: CoeffVec, n: int, T: float,
                      cutoff_rel: float = 1e-14) -> tuple[ExtensionFn, LsSolveInfo]:
    """Best coefficient fit in the extension space, truncated-SVD regularized."""
    A = fe_matrix(n, c.m, T)
    x, info = ls_solve(A, c.values, cutoff_rel)
    return ExtensionFn(T=T, n=n, a=x), info


def l2_error(f: TestFunction, approx, N: int = 1000) -> float:
    """||f - approx|| on [-1, 1] by N-node Gauss-Legendre."""
    return norm_l2(lambda x: f(x) - np.asarray(approx(x)), N)
