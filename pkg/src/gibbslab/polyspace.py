"""Polynomials in the orthonormal Legendre basis and their Fourier data.

The cross matrix A with A[j, k] = (k-th orthonormal Legendre polynomial)^_j
links the two norms of interest: for p = sum c_k Pbar_k one has
||p||_{L^2} = ||c|| and ||(p-hat_j)_{|j|<=m}|| = ||A c||, so extremal growth
questions reduce to singular values of A.

Also here: the endpoint-derivative correspondence p -> p~ with
p_hat_j = (-1)^j p~(1/j), and the extremal witness polynomial
t * T_q(affine(t^2)) * prod_i (t^2 - 1/i^2) evaluated only in factored form
(its monomial coefficients are astronomically large; expansion is reserved
for the degree <= 9 zeta-form oracle).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre as npleg

from .fourier_core import SQRT2
from .numerics import gauss_legendre, spherical_bessel_all

ENDPOINT_DEGREE_CAP = 60  # factorial growth guard for derivative magnitudes


class MatrixConsistencyError(RuntimeError):
    """Closed-form and quadrature coefficient paths disagree."""


class DegreeCapError(ValueError):
    pass


# ----------------------------------------------------------------------
# LegendrePoly
# ----------------------------------------------------------------------

def _orthonormal_scale(degree: int) -> np.ndarray:
    k = np.arange(degree + 1)
    return np.sqrt((2 * k + 1) / 2.0)


@dataclass(frozen=True)
class LegendrePoly:
    """Coefficients c_0..c_d against Pbar_k = sqrt((2k+1)/2) P_k.

    Orthonormality makes the L^2(-1,1) norm the plain Euclidean norm of
    the coefficients.  Coefficients are real for real data; the complex
    dtype is kept when a solver hands back residual imaginary parts.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs))
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coefficients must be a non-empty 1-d array")
        if not np.iscomplexobj(c):
            c = c.astype(np.float64)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, x):
        scaled = self.coeffs * _orthonormal_scale(self.degree)
        if np.iscomplexobj(scaled):
            return npleg.legval(x, scaled.real) + 1j * npleg.legval(x, scaled.imag)
        return npleg.legval(x, scaled)

    def norm_l2(self) -> float:
        return float(np.linalg.norm(self.coeffs))


def write_legendre_csv(p: LegendrePoly, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "c_k"])
        for k, ck in enumerate(np.real(p.coeffs)):
            w.writerow([k, f"{ck:.17g}"])


def read_legendre_csv(path) -> LegendrePoly:
    coeffs = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        next(reader)
        for row in reader:
            if row and not row[0].startswith("#"):
                coeffs.append(float(row[1]))
    return LegendrePoly(np.asarray(coeffs))


# ----------------------------------------------------------------------
# Legendre-Fourier cross matrix
# ----------------------------------------------------------------------

@lru_cache(maxsize=256)
def _lf_real(n: int, m: int) -> np.ndarray:
    """Phase-stripped real form: entry (j, k) = sqrt(2k+1) j_k(pi j).

    The full matrix is this times the column phases (-i)^k, a diagonal
    unitary, so singular values agree; framebound works on this one.
    """
    A = np.zeros((2 * m + 1, n + 1))
    A[m, 0] = 1.0
    k = np.arange(n + 1)
    scale = np.sqrt(2 * k + 1.0)
    parity = np.where(k % 2 == 0, 1.0, -1.0)
    for j in range(1, m + 1):
        jk = spherical_bessel_all(n, math.pi * j)
        A[m + j, :] = scale * jk
        A[m - j, :] = scale * jk * parity
    A.flags.writeable = False
    return A


def legendre_fourier_matrix(n: int, m: int) -> np.ndarray:
    """Complex (2m+1) x (n+1) matrix of coefficients (Pbar_k)^_j.

    Closed form sqrt(2k+1) (-i)^k j_k(pi j) for j != 0; row j = 0 is e_0.
    """
    if n < 0 or m < 0:
        raise ValueError("need n >= 0 and m >= 0")
    phases = (-1j) ** np.arange(n + 1)
    return _lf_real(n, m) * phases[None, :]


def legendre_fourier_matrix_quadrature(n: int, m: int) -> np.ndarray:
    """Same matrix through composite Gauss-Legendre panels (oracle path)."""
    if n < 0 or m < 0:
        raise ValueError("need n >= 0 and m >= 0")
    panels = max(8, m)
    base = gauss_legendre(16)
    width = 2.0 / panels
    left = -1.0 + width * np.arange(panels)
    nodes = (left[:, None] + 0.5 * width * (base.nodes[None, :] + 1.0)).ravel()
    weights = np.tile(0.5 * width * base.weights, panels)
    # orthonormal Legendre values at the nodes
    L = np.zeros((nodes.size, n + 1))
    L[:, 0] = 1.0
    if n >= 1:
        L[:, 1] = nodes
    for k in range(1, n):
        L[:, k + 1] = ((2 * k + 1) * nodes * L[:, k] - k * L[:, k - 1]) / (k + 1)
    L *= _orthonormal_scale(n)[None, :]
    j = np.arange(-m, m + 1)
    E = np.exp(-1j * math.pi * np.outer(j, nodes))
    return (E @ (weights[:, None] * L)) / SQRT2


def check_legendre_fourier(n: int, m: int, tol: float = 1e-11) -> float:
    """Cross-validate the two construction paths; raises on disagreement."""
    diff = np.max(np.abs(legendre_fourier_matrix(n, m)
                         - legendre_fourier_matrix_quadrature(n, m)))
    if diff > tol:
        raise MatrixConsistencyError(
            f"Bessel and quadrature paths disagree by {diff:.3e} at (n={n}, m={m})"
        )
    return float(diff)


# ----------------------------------------------------------------------
# Endpoint-derivative correspondence
# ----------------------------------------------------------------------

def _legendre_deriv_at_one(k: int, r: int) -> float:
    # P_k^{(r)}(1) = (k+r)! / (2^r r! (k-r)!)
    if r > k:
        return 0.0
    return float(math.factorial(k + r) // (math.factorial(r) * math.factorial(k - r))) / 2.0 ** r


def _endpoint_derivatives(p: LegendrePoly, r: int) -> tuple[complex, complex]:
    """(p^{(r)}(1), p^{(r)}(-1)) from the closed-form Legendre endpoint values."""
    at_plus = 0.0 + 0.0j
    at_minus = 0.0 + 0.0j
    for k, ck in enumerate(p.coeffs):
        base = _legendre_deriv_at_one(k, r)
        if base == 0.0:
            continue
        scaled = ck * math.sqrt((2 * k + 1) / 2.0) * base
        at_plus += scaled
        at_minus += scaled * (-1.0) ** (k + r)
    return at_plus, at_minus


@dataclass(frozen=True)
class TPolyCoeffs:
    """Coefficients b_1..b_n of p~(t) = sum_k b_k t^k (no constant term).

    For j != 0 the coefficients of the source polynomial satisfy
    p_hat_j = (-1)^j p~(1/j); the j = 0 coefficient rides separately.
    """

    b: np.ndarray
    hat_p0: complex = 0.0

    def __post_init__(self):
        object.__setattr__(self, "b", np.atleast_1d(np.asarray(self.b, dtype=np.complex128)))

    @property
    def degree(self) -> int:
        return self.b.size

    def eval_tilde(self, t):
        t = np.asarray(t, dtype=np.float64)
        out = np.zeros(t.shape, dtype=np.complex128)
        for bk in self.b[::-1]:
            out = (out + bk) * t
        return out

    def coefficient(self, j: int) -> complex:
        if j == 0:
            return complex(self.hat_p0)
        return complex((-1.0) ** j * self.eval_tilde(1.0 / j))


def endpoint_correspondence(p: LegendrePoly) -> TPolyCoeffs:
    """b_k = -(1/(sqrt2 (i pi)^k)) [p^{(k-1)}(1) - p^{(k-1)}(-1)], k = 1..deg."""
    n = p.degree
    if n > ENDPOINT_DEGREE_CAP:
        raise DegreeCapError(f"degree {n} exceeds cap {ENDPOINT_DEGREE_CAP}")
    b = np.zeros(n, dtype=np.complex128)
    for k in range(1, n + 1):
        d1, dm1 = _endpoint_derivatives(p, k - 1)
        b[k - 1] = -(d1 - dm1) / (SQRT2 * (1j * math.pi) ** k)
    return TPolyCoeffs(b=b, hat_p0=complex(p.coeffs[0]))


# ----------------------------------------------------------------------
# Shifted Chebyshev evaluation and the extremal witness
# ----------------------------------------------------------------------

def eval_chebyshev_shifted(q: int, interval: tuple[float, float], x):
    """T_q composed with the affine map [a, b] -> [-1, 1].

    Inside the interval: cos(q arccos y).  Outside (|y| > 1): the growth
    form (1/2)((|y|+s)^q + (|y|-s)^q) with s = sqrt(y^2-1), sign (+-1)^q
    restored for y < -1; no monomial expansion anywhere.
    """
    a, b = interval
    if not a < b:
        raise ValueError("interval must satisfy a < b")
    scalar = np.isscalar(x)
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    y = (2.0 * x - (a + b)) / (b - a)
    out = np.empty_like(y)
    inside = np.abs(y) <= 1.0
    out[inside] = np.cos(q * np.arccos(y[inside]))
    yo = np.abs(y[~inside])
    s = np.sqrt(yo * yo - 1.0)
    grow = 0.5 * ((yo + s) ** q + (yo - s) ** q)
    sign = np.where(y[~inside] < 0, (-1.0) ** q, 1.0)
    out[~inside] = sign * grow
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class WitnessPoly:
    """t * T_q(affine(t^2)) * prod_{i=1..q} (t^2 - 1/i^2), degree 4q+1.

    The Chebyshev factor lives on [1/m^2, 1/(q+1)^2]; the product factor
    pins zeros at t = 1/i for i = 1..q.  Odd in t.  Evaluation is always
    through this factored form.
    """

    q: int
    m: int

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("q must be >= 1")
        if self.m < self.q + 2:
            raise ValueError(
                f"need m >= q+2 for a non-degenerate Chebyshev interval (q={self.q}, m={self.m})"
            )

    @property
    def degree(self) -> int:
        return 4 * self.q + 1

    @property
    def interval(self) -> tuple[float, float]:
        return (1.0 / self.m ** 2, 1.0 / (self.q + 1) ** 2)

    def __call__(self, t):
        scalar = np.isscalar(t)
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        t2 = t * t
        out = t * eval_chebyshev_shifted(self.q, self.interval, t2)
        for i in range(1, self.q + 1):
            out = out * (t2 - 1.0 / i ** 2)
        return float(out[0]) if scalar else out


def build_witness(q: int, m: int) -> WitnessPoly:
    """Extremal odd polynomial used to force growth of the stability constant."""
    return WitnessPoly(q=q, m=m)
