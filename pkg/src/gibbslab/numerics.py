"""Self-contained numerical kernels.

Gauss-Legendre quadrature (Newton on the three-term recurrence), spherical
Bessel functions (upward / normalized downward recurrence), Riemann zeta at
integer arguments (head sum + Euler-Maclaurin tail), a one-sided Jacobi SVD
with compensated accumulation, and the symmetric-definite generalized
eigenvalue reduction.

Everything here is a pure function of its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._compensated import (
    comp_combine,
    comp_combine_c,
    comp_norm_sq,
    comp_vdot,
)

GAUSS_LEGENDRE_MAX_N = 20000
SPHERICAL_BESSEL_MAX_ORDER = 500
ZETA_MAX_S = 64
GEN_EIG_MAX_SIZE = 13  # cancellation cap for the zeta quadratic forms


class NotPositiveDefiniteError(ValueError):
    """Cholesky pivot failure; carries the failing pivot index."""

    def __init__(self, pivot: int):
        self.pivot = pivot
        super().__init__(f"matrix is not positive definite (pivot {pivot} <= 0)")


# ----------------------------------------------------------------------
# Gauss-Legendre quadrature
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureRule:
    """Nodes/weights on [-1, 1]; exact for polynomials of degree <= 2*order-1."""

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def integrate(self, f) -> float | complex:
        return self.weights @ f(self.nodes)


@lru_cache(maxsize=64)
def gauss_legendre(N: int) -> QuadratureRule:
    """N-point Gauss-Legendre rule on [-1, 1], nodes ascending and symmetric.

    Newton iteration on P_N from the Tricomi initial guess; O(N^2) work, so
    the rule is usable up to the configured cap of 20000 points.
    """
    if N < 1:
        raise ValueError("node count must be >= 1")
    if N > GAUSS_LEGENDRE_MAX_N:
        raise ValueError(f"node count {N} exceeds cap {GAUSS_LEGENDRE_MAX_N}")
    if N == 1:
        nodes = np.zeros(1)
        weights = np.full(1, 2.0)
    else:
        i = np.arange(N)
        x = np.cos(math.pi * (i + 0.75) / (N + 0.5))
        for _ in range(100):
            p0 = np.ones_like(x)
            p1 = x.copy()
            for k in range(2, N + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = N * (x * p1 - p0) / (x * x - 1.0)
            dx = p1 / dp
            x -= dx
            if np.max(np.abs(dx)) < 1e-15:
                break
        # one clean-up pass for the weights' derivative values
        p0 = np.ones_like(x)
        p1 = x.copy()
        for k in range(2, N + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        dp = N * (x * p1 - p0) / (x * x - 1.0)
        weights = 2.0 / ((1.0 - x * x) * dp * dp)
        # enforce exact symmetry about 0
        x = 0.5 * (x - x[::-1])
        weights = 0.5 * (weights + weights[::-1])
        order_idx = np.argsort(x)
        x = x[order_idx]
        weights = weights[order_idx]
        nodes = x
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return QuadratureRule(nodes=nodes, weights=weights, order=N)


# ----------------------------------------------------------------------
# Spherical Bessel j_k
# ----------------------------------------------------------------------

def _j0(z: float) -> float:
    return math.sin(z) / z


def _j1(z: float) -> float:
    return math.sin(z) / (z * z) - math.cos(z) / z


def spherical_bessel_ex(k: int, z: float) -> tuple[float, bool]:
    """j_k(z) together with an underflow flag (|j_k| < 1e-300 -> (signed 0, True)).

    Upward recurrence for k <= z (stable there), Miller's normalized downward
    recurrence for k > z.  Normalization uses whichever of j_0, j_1 is larger
    in magnitude, so arguments near zeros of sin are safe.
    """
    if z <= 0.0:
        raise ValueError("argument must be > 0")
    if k < 0:
        raise ValueError("order must be >= 0")
    if k > SPHERICAL_BESSEL_MAX_ORDER:
        raise ValueError(f"order {k} exceeds cap {SPHERICAL_BESSEL_MAX_ORDER}")
    if k == 0:
        return _j0(z), False
    if k == 1:
        return _j1(z), False

    if k <= z:
        jm, jn = _j0(z), _j1(z)
        for n in range(1, k):
            jm, jn = jn, (2 * n + 1) / z * jn - jm
        return jn, False

    # downward pass from a start order with enough headroom for convergence
    start = k + 30 + int(2.0 * math.sqrt(k))
    jp = 0.0
    jn = 1e-30
    target = 0.0
    raw0 = raw1 = 0.0
    for n in range(start, 0, -1):
        jm = (2 * n + 1) / z * jn - jp
        jp, jn = jn, jm
        if abs(jn) > 1e250:
            jn *= 1e-250
            jp *= 1e-250
            target *= 1e-250
        if n - 1 == k:
            target = jn
        if n - 1 == 1:
            raw1 = jn
        if n - 1 == 0:
            raw0 = jn
    t0, t1 = _j0(z), _j1(z)
    if abs(t0) >= abs(t1):
        scale = t0 / raw0
    else:
        scale = t1 / raw1
    with np.errstate(over="ignore"):
        value = target * scale
    if value != 0.0 and abs(value) < 1e-300 or value == 0.0:
        return math.copysign(0.0, value if value != 0.0 else scale * target), True
    return value, False


def spherical_bessel(k: int, z: float) -> float:
    """j_k(z); see spherical_bessel_ex for the underflow contract."""
    return spherical_bessel_ex(k, z)[0]


def spherical_bessel_all(kmax: int, z: float) -> np.ndarray:
    """j_0(z)..j_kmax(z) in one pass (same recurrences as spherical_bessel)."""
    if z <= 0.0:
        raise ValueError("argument must be > 0")
    if kmax < 0:
        raise ValueError("order must be >= 0")
    if kmax > SPHERICAL_BESSEL_MAX_ORDER:
        raise ValueError(f"order {kmax} exceeds cap {SPHERICAL_BESSEL_MAX_ORDER}")
    out = np.zeros(kmax + 1)
    out[0] = _j0(z)
    if kmax == 0:
        return out
    out[1] = _j1(z)
    if kmax == 1:
        return out
    if kmax <= z:
        for n in range(1, kmax):
            out[n + 1] = (2 * n + 1) / z * out[n] - out[n - 1]
        return out
    start = kmax + 30 + int(2.0 * math.sqrt(kmax))
    raw = np.zeros(start + 2)
    raw[start + 1] = 0.0
    raw[start] = 1e-30
    for n in range(start, 0, -1):
        raw[n - 1] = (2 * n + 1) / z * raw[n] - raw[n + 1]
        if abs(raw[n - 1]) > 1e250:
            raw[n - 1:] *= 1e-250
    t0, t1 = out[0], out[1]
    scale = t0 / raw[0] if abs(t0) >= abs(t1) else t1 / raw[1]
    with np.errstate(over="ignore", under="ignore"):
        vals = raw[: kmax + 1] * scale
    vals[np.abs(vals) < 1e-300] = 0.0
    return vals


# ----------------------------------------------------------------------
# Riemann zeta at integer s
# ----------------------------------------------------------------------

@lru_cache(maxsize=None)
def riemann_zeta(s: int) -> float:
    """zeta(s) for integer 2 <= s <= 64, relative accuracy ~1e-15.

    Head sum (10^6 terms for s = 2, 3, else 10^4) plus the Euler-Maclaurin
    tail through the B_6 term.
    """
    if s < 2:
        raise ValueError("zeta series diverges for s < 2")
    if s > ZETA_MAX_S:
        raise ValueError(f"s {s} exceeds cap {ZETA_MAX_S}")
    N = 1_000_000 if s <= 3 else 10_000
    j = np.arange(1, N, dtype=np.float64)
    with np.errstate(under="ignore"):
        head = math.fsum(np.power(j, -float(s)).tolist())
    Nf = float(N)
    tail = Nf ** (1 - s) / (s - 1)
    tail += 0.5 * Nf ** (-s)
    tail += s / 12.0 * Nf ** (-s - 1)
    tail -= s * (s + 1) * (s + 2) / 720.0 * Nf ** (-s - 3)
    tail += s * (s + 1) * (s + 2) * (s + 3) * (s + 4) / 30240.0 * Nf ** (-s - 5)
    return head + tail


# ----------------------------------------------------------------------
# One-sided Jacobi SVD
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class SvdResult:
    """A = u @ diag(s) @ vh with s descending and non-negative."""

    u: np.ndarray
    s: np.ndarray
    vh: np.ndarray


def svd(A) -> SvdResult:
    """Full (economy) SVD by one-sided Jacobi with compensated rotations.

    The point of this kernel is high *relative* accuracy of the smallest
    singular value (1e-10 at condition numbers up to 1e8), which plain
    bidiagonalization SVDs do not deliver.  Rotated columns are combined
    through error-free transformations before rounding, and Gram entries
    near the cancellation regime are re-accumulated exactly.
    """
    A = np.asarray(A)
    if A.ndim != 2 or min(A.shape) < 1:
        raise ValueError("expected a 2-d matrix with both dimensions >= 1")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    if A.shape[0] < A.shape[1]:
        res = svd(A.conj().T)
        return SvdResult(u=res.vh.conj().T, s=res.s, vh=res.u.conj().T)

    complex_input = np.iscomplexobj(A)
    work = A.astype(np.complex128 if complex_input else np.float64, copy=True)
    n = work.shape[1]
    V = np.eye(n, dtype=work.dtype)
    colsq = np.array([comp_norm_sq(work[:, p]) for p in range(n)])

    tol = 1e-14
    guard = 1e-4
    for _sweep in range(64):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                ap, aq = colsq[p], colsq[q]
                if ap == 0.0 or aq == 0.0:
                    continue
                denom = math.sqrt(ap) * math.sqrt(aq)
                g = np.vdot(work[:, p], work[:, q])
                if abs(g) < guard * denom:
                    g = comp_vdot(work[:, p], work[:, q])
                if abs(g) <= tol * denom:
                    continue
                rotated = True
                absg = abs(g)
                tau = (aq - ap) / (2.0 * absg)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                sig = c * t
                if complex_input:
                    w = g / absg
                    new_p = comp_combine_c(complex(c), work[:, p], -sig * w.conjugate(), work[:, q])
                    new_q = comp_combine_c(sig * w, work[:, p], complex(c), work[:, q])
                    vp = comp_combine_c(complex(c), V[:, p], -sig * w.conjugate(), V[:, q])
                    vq = comp_combine_c(sig * w, V[:, p], complex(c), V[:, q])
                else:
                    sgn = 1.0 if g >= 0 else -1.0
                    new_p = comp_combine(c, work[:, p], -sig * sgn, work[:, q])
                    new_q = comp_combine(sig * sgn, work[:, p], c, work[:, q])
                    vp = comp_combine(c, V[:, p], -sig * sgn, V[:, q])
                    vq = comp_combine(sig * sgn, V[:, p], c, V[:, q])
                work[:, p], work[:, q] = new_p, new_q
                V[:, p], V[:, q] = vp, vq
                colsq[p] = comp_norm_sq(work[:, p])
                colsq[q] = comp_norm_sq(work[:, q])
        if not rotated:
            break
    else:
        raise RuntimeError("Jacobi SVD failed to converge in 64 sweeps")

    svals = np.sqrt(np.array([comp_norm_sq(work[:, p]) for p in range(n)]))
    order = np.argsort(svals)[::-1]
    svals = svals[order]
    work = work[:, order]
    V = V[:, order]
    U = np.zeros_like(work)
    for p in range(n):
        if svals[p] > 0.0:
            U[:, p] = work[:, p] / svals[p]
        else:
            # exact-zero column: complete with an orthonormalized basis vector
            e = np.zeros(work.shape[0], dtype=work.dtype)
            e[p % work.shape[0]] = 1.0
            for r in range(p):
                e -= np.vdot(U[:, r], e) * U[:, r]
            nrm = np.linalg.norm(e)
            if nrm > 0:
                U[:, p] = e / nrm
    return SvdResult(u=U, s=svals, vh=V.conj().T)


# ----------------------------------------------------------------------
# Generalized symmetric-definite eigenvalue (largest)
# ----------------------------------------------------------------------

def _cholesky_with_pivot(M: np.ndarray) -> np.ndarray:
    # a pivot below 1e-12 of its diagonal entry is rounding noise of an
    # exactly singular matrix, not a definite direction
    n = M.shape[0]
    L = np.zeros_like(M)
    for i in range(n):
        d = M[i, i] - L[i, :i] @ L[i, :i]
        if not math.isfinite(d) or d <= 1e-12 * abs(M[i, i]):
            raise NotPositiveDefiniteError(i)
        L[i, i] = math.sqrt(d)
        for r in range(i + 1, n):
            L[r, i] = (M[r, i] - L[r, :i] @ L[i, :i]) / L[i, i]
    return L


def gen_sym_eig_max(Z, Zm) -> float:
    """Largest lambda with Z v = lambda Zm v; Zm must be positive definite.

    Cholesky reduction Zm = L L^T followed by a symmetric eigensolve of
    L^{-1} Z L^{-T}.  Sizes are capped at 13x13: the intended quadratic
    forms live on monomial scales where larger systems would be dominated
    by cancellation.
    """
    Z = np.asarray(Z, dtype=np.float64)
    Zm = np.asarray(Zm, dtype=np.float64)
    if Z.shape != Zm.shape or Z.ndim != 2 or Z.shape[0] != Z.shape[1]:
        raise ValueError("Z and Zm must be square matrices of the same size")
    if Z.shape[0] > GEN_EIG_MAX_SIZE:
        raise ValueError(f"size {Z.shape[0]} exceeds cap {GEN_EIG_MAX_SIZE}")
    L = _cholesky_with_pivot(0.5 * (Zm + Zm.T))
    Y = np.linalg.solve(L, 0.5 * (Z + Z.T))
    C = np.linalg.solve(L, Y.T).T
    return float(np.linalg.eigvalsh(0.5 * (C + C.T))[-1])
