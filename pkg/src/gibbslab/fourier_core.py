"""Fourier-coefficient data model and the analytic test-function families.

Coefficients use the normalization

    f_hat_j = (1/sqrt(2)) * integral_{-1}^{1} f(x) exp(-i j pi x) dx,

under which Parseval is exact: ||f||_{L^2(-1,1)}^2 = sum_j |f_hat_j|^2.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .numerics import gauss_legendre

SQRT2 = math.sqrt(2.0)

#: analyticity radius sentinel for entire functions
BernsteinRadius = float


class QuadratureConvergenceError(RuntimeError):
    """Panel budget exhausted before the coefficient integrals settled."""

    def __init__(self, failed_j):
        self.failed_j = list(failed_j)
        super().__init__(
            f"coefficient quadrature did not converge for j in {self.failed_j[:8]}"
        )


# ----------------------------------------------------------------------
# Test functions
# ----------------------------------------------------------------------

_FAMILIES = ("exp_layer", "real_pole", "runge", "cosine")


@dataclass(frozen=True)
class TestFunction:
    """Analytic test function on [-1, 1].

    exp_layer(a):  exp(a (x - 1))        boundary layer of width ~1/a
    real_pole(a):  1 / (a + 1 - a x)     real pole at (a+1)/a > 1
    runge(a):      1 / (1 + a^2 x^2)     poles at +-i/a
    cosine(w):     cos(w pi x)           entire, oscillatory
    """

    family: str
    parameter: float

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family in ("real_pole", "runge"):
            if self.parameter <= 0:
                raise ValueError("pole families need parameter > 0")
        elif self.parameter < 0:
            raise ValueError("parameter must be >= 0")

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        a = self.parameter
        if self.family == "exp_layer":
            return np.exp(a * (x - 1.0))
        if self.family == "real_pole":
            return 1.0 / (a + 1.0 - a * x)
        if self.family == "runge":
            return 1.0 / (1.0 + a * a * x * x)
        return np.cos(a * math.pi * x)

    @property
    def label(self) -> str:
        return f"{self.family}({self.parameter:g})"


def exp_layer(a: float) -> TestFunction:
    return TestFunction("exp_layer", a)


def real_pole(a: float) -> TestFunction:
    return TestFunction("real_pole", a)


def runge(a: float) -> TestFunction:
    return TestFunction("runge", a)


def cosine(omega: float) -> TestFunction:
    return TestFunction("cosine", omega)


#: the eight functions of the error-comparison experiment
FIG3_FUNCTIONS = (
    exp_layer(1.0),
    exp_layer(100.0),
    real_pole(9.0),
    real_pole(49.0),
    runge(5.0),
    runge(10.0),
    cosine(7.0 * SQRT2),
    cosine(14.0 * SQRT2),
)


def parse_test_function(spec: str) -> TestFunction:
    """Parse 'family:parameter', e.g. 'runge:10' or 'cosine:9.8995'."""
    try:
        family, _, param = spec.partition(":")
        return TestFunction(family.strip(), float(param))
    except (ValueError, TypeError) as exc:
        raise ValueError(f"bad test-function spec {spec!r}: {exc}") from None


def bernstein_radius(f: TestFunction) -> BernsteinRadius:
    """Parameter of the largest ellipse (foci +-1) of analyticity; inf if entire.

    real_pole(a): pole x0 = (a+1)/a, rho = x0 + sqrt(x0^2 - 1).
    runge(a): poles +-i/a, rho = (1 + sqrt(1 + a^2)) / a.
    """
    if f.family in ("exp_layer", "cosine"):
        return math.inf
    a = f.parameter
    if f.family == "real_pole":
        x0 = (a + 1.0) / a
        return x0 + math.sqrt(x0 * x0 - 1.0)
    return (1.0 + math.sqrt(1.0 + a * a)) / a


# ----------------------------------------------------------------------
# Coefficient vectors
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class CoeffVec:
    """Complex coefficients indexed j = -m..m, stored at offset j + m."""

    m: int
    values: np.ndarray

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("half-width m must be >= 0")
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (2 * self.m + 1,):
            raise ValueError(f"expected {2 * self.m + 1} values, got {v.shape}")
        object.__setattr__(self, "values", v)

    def __getitem__(self, j: int) -> complex:
        if abs(j) > self.m:
            raise IndexError(f"|j| = {abs(j)} exceeds half-width {self.m}")
        return complex(self.values[j + self.m])

    def truncate(self, m: int) -> "CoeffVec":
        if m > self.m:
            raise ValueError("cannot extend a coefficient vector")
        lo = self.m - m
        return CoeffVec(m, self.values[lo:lo + 2 * m + 1].copy())


def norm_m(c: CoeffVec) -> float:
    """l2 norm of the stored coefficients, sqrt(sum |c_j|^2)."""
    return float(np.linalg.norm(c.values))


def evaluate_truncated_series(c: CoeffVec, x) -> np.ndarray | complex:
    """(1/sqrt 2) sum_{|j|<=m} c_j exp(i j pi x) for x in [-1, 1]."""
    scalar = np.isscalar(x)
    xa = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if np.any(np.abs(xa) > 1.0 + 1e-12):
        raise ValueError("evaluation points must lie in [-1, 1]")
    j = np.arange(-c.m, c.m + 1)
    out = np.exp(1j * math.pi * np.outer(xa, j)) @ c.values / SQRT2
    return complex(out[0]) if scalar else out


# ----------------------------------------------------------------------
# Coefficient generation
# ----------------------------------------------------------------------

def coeffs_exact(f: TestFunction, m: int) -> CoeffVec:
    """First 2m+1 coefficients of a test function.

    exp_layer and cosine use closed forms (antiderivative / orthogonality);
    the pole families use oscillation-aware composite Gauss-Legendre panels,
    refined until successive levels agree to 1e-12 relative (with an absolute
    floor at the rounding level of the integrand's scale).
    """
    if m < 0:
        raise ValueError("half-width m must be >= 0")
    j = np.arange(-m, m + 1)
    a = f.parameter
    if f.family == "exp_layer":
        if a == 0.0:
            vals = np.zeros(2 * m + 1, dtype=np.complex128)
            vals[m] = SQRT2
        else:
            sign = np.where(j % 2 == 0, 1.0, -1.0)
            vals = sign * (1.0 - math.exp(-2.0 * a)) / (SQRT2 * (a - 1j * math.pi * j))
        return CoeffVec(m, vals)
    if f.family == "cosine":
        vals = (np.sinc(a - j) + np.sinc(a + j)).astype(np.complex128) / SQRT2
        return CoeffVec(m, vals)
    return CoeffVec(m, _panel_coeffs(f, m))


_PANEL_NODES = 16
_PANEL_BUDGET = 4096


def _composite_nodes(panels: int):
    base = gauss_legendre(_PANEL_NODES)
    width = 2.0 / panels
    left = -1.0 + width * np.arange(panels)
    nodes = (left[:, None] + 0.5 * width * (base.nodes[None, :] + 1.0)).ravel()
    weights = np.tile(0.5 * width * base.weights, panels)
    return nodes, weights


def _panel_coeffs(f: TestFunction, m: int) -> np.ndarray:
    j_all = np.arange(-m, m + 1)
    vals = np.zeros(2 * m + 1, dtype=np.complex128)
    prev = np.full(2 * m + 1, np.nan, dtype=np.complex128)
    converged = np.zeros(2 * m + 1, dtype=bool)
    panels = 8
    while panels <= _PANEL_BUDGET:
        nodes, weights = _composite_nodes(panels)
        fx = f(nodes) * weights
        # rounding floor of any summation of these products
        l1 = math.fsum(np.abs(fx).tolist()) / SQRT2
        for pos in np.flatnonzero(~converged):
            jj = int(j_all[pos])
            z = fx * np.exp(-1j * math.pi * jj * nodes)
            row = complex(math.fsum(z.real.tolist()), math.fsum(z.imag.tolist())) / SQRT2
            old = prev[pos]
            prev[pos] = row
            if np.isnan(old.real):
                continue
            # accept only once the oscillation is resolved (>= max(8,|j|) panels)
            if panels // 2 < max(8, abs(jj)):
                continue
            if abs(row - old) <= max(1e-12 * abs(row), 1e-15 * l1):
                vals[pos] = row
                converged[pos] = True
        if converged.all():
            return vals
        panels *= 2
    raise QuadratureConvergenceError(j_all[~converged])


# ----------------------------------------------------------------------
# L2 norm on [-1, 1] by quadrature
# ----------------------------------------------------------------------

def norm_l2(g, N: int = 1000) -> float:
    """Gauss-Legendre approximation of sqrt(int_{-1}^1 |g(x)|^2 dx)."""
    if N < 2:
        raise ValueError("need at least 2 quadrature nodes")
    rule = gauss_legendre(N)
    gx = np.asarray(g(rule.nodes))
    if not np.all(np.isfinite(gx)):
        raise ValueError("function evaluated to a non-finite value on a node")
    return math.sqrt(float(rule.weights @ np.abs(gx) ** 2))


# ----------------------------------------------------------------------
# CSV round-trip (columns j, re, im; 17 significant digits)
# ----------------------------------------------------------------------

def write_coeffs_csv(c: CoeffVec, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["j", "re", "im"])
        for j in range(-c.m, c.m + 1):
            v = c[j]
            w.writerow([j, f"{v.real:.17g}", f"{v.imag:.17g}"])


def read_coeffs_csv(path) -> CoeffVec:
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:3]] != ["j", "re", "im"]:
            raise ValueError(f"{path}: expected header 'j,re,im'")
        for lineno, row in enumerate(reader, start=2):
            if not row or row[0].startswith("#"):
                continue
            try:
                rows.append((int(row[0]), float(row[1]) + 1j * float(row[2])))
            except (ValueError, IndexError):
                raise ValueError(f"{path}: malformed row at line {lineno}") from None
    if not rows:
        raise ValueError(f"{path}: no coefficient rows")
    js = sorted(r[0] for r in rows)
    m = max(abs(js[0]), abs(js[-1]))
    if sorted(js) != list(range(-m, m + 1)):
        raise ValueError(f"{path}: indices must cover -m..m without gaps")
    vals = np.zeros(2 * m + 1, dtype=np.complex128)
    for j, v in rows:
        vals[j + m] = v
    return CoeffVec(m, vals)
