"""Compensated (double-double style) floating-point primitives.

Error-free transformations: TwoSum and Dekker's TwoProd (no FMA in numpy,
so products are split 26/27 bits). They are used inside the one-sided
Jacobi SVD to keep small singular values at full relative accuracy:
rotation updates are computed as value+error pairs before rounding back
to double, and dot products accumulate exactly via math.fsum over the
product hi/lo parts.
"""

from __future__ import annotations

import math

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    """s, e with s = fl(a+b) and a + b = s + e exactly."""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def two_prod(a, b):
    """p, e with p = fl(a*b) and a*b = p + e exactly (Dekker split)."""
    p = a * b
    ta = _SPLITTER * a
    ahi = ta - (ta - a)
    alo = a - ahi
    tb = _SPLITTER * b
    bhi = tb - (tb - b)
    blo = b - bhi
    e = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, e


def comp_dot(x, y):
    """Dot product sum(x*y) with one final rounding (real arrays)."""
    p, e = two_prod(np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64))
    return math.fsum(p.tolist()) + math.fsum(e.tolist())


def comp_norm_sq(x):
    """Sum of squares |x|^2 with one final rounding; x real or complex."""
    x = np.asarray(x)
    if np.iscomplexobj(x):
        return comp_dot(x.real, x.real) + comp_dot(x.imag, x.imag)
    return comp_dot(x, x)


def comp_vdot(x, y):
    """conj(x).y with compensated accumulation; returns complex for complex input."""
    x = np.asarray(x)
    y = np.asarray(y)
    if np.iscomplexobj(x) or np.iscomplexobj(y):
        xr, xi = np.real(x), np.imag(x)
        yr, yi = np.real(y), np.imag(y)
        re = comp_dot(xr, yr) + comp_dot(xi, yi)
        im = comp_dot(xr, yi) - comp_dot(xi, yr)
        return complex(re, im)
    return comp_dot(x, y)


def comp_combine(c1, x, c2, y):
    """c1*x + c2*y elementwise with the rounding of a double-double intermediate.

    c1, c2 are real scalars; x, y real arrays. The result is a plain float64
    array but each entry is the correctly rounded value of the exact
    combination up to O(eps^2) terms, which is what keeps massive
    cancellation (tiny Jacobi-rotated columns) accurate.
    """
    p1, e1 = two_prod(c1, x)
    p2, e2 = two_prod(c2, y)
    s, e0 = two_sum(p1, p2)
    return s + (e0 + e1 + e2)


def comp_combine_c(c1, x, c2, y):
    """Like comp_combine but c1, c2 complex scalars and x, y complex arrays."""
    xr, xi = np.real(x), np.imag(x)
    yr, yi = np.real(y), np.imag(y)
    re = _four_term(c1.real, xr, -c1.imag, xi, c2.real, yr, -c2.imag, yi)
    im = _four_term(c1.real, xi, c1.imag, xr, c2.real, yi, c2.imag, yr)
    return re + 1j * im


def _four_term(a1, x1, a2, x2, a3, x3, a4, x4):
    p1, e1 = two_prod(a1, x1)
    p2, e2 = two_prod(a2, x2)
    p3, e3 = two_prod(a3, x3)
    p4, e4 = two_prod(a4, x4)
    s, f1 = two_sum(p1, p2)
    s, f2 = two_sum(s, p3)
    s, f3 = two_sum(s, p4)
    return s + (f1 + f2 + f3 + e1 + e2 + e3 + e4)
