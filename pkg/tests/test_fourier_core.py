import math

import numpy as np
import pytest

from gibbslab.fourier_core import (
    SQRT2,
    CoeffVec,
    QuadratureConvergenceError,
    TestFunction as TFun,
    bernstein_radius,
    coeffs_exact,
    cosine,
    evaluate_truncated_series,
    exp_layer,
    norm_l2,
    norm_m,
    parse_test_function,
    read_coeffs_csv,
    real_pole,
    runge,
    write_coeffs_csv,
    _panel_coeffs,
)
from gibbslab.numerics import gauss_legendre

ALL_FAMILIES = [exp_layer(1.0), exp_layer(100.0), real_pole(9.0), real_pole(49.0),
                runge(5.0), runge(10.0), cosine(7.0 * SQRT2), cosine(14.0 * SQRT2)]


def quad_coefficient(f, j, N=200):
    """Independent oracle: single-coefficient Gauss-Legendre quadrature."""
    r = gauss_legendre(N)
    return (r.weights @ (f(r.nodes) * np.exp(-1j * j * math.pi * r.nodes))) / SQRT2


# ----------------------------------------------------------------------
# coefficient generation
# ----------------------------------------------------------------------

def test_constant_function_coefficients():
    c = coeffs_exact(exp_layer(0.0), 4)
    assert c[0] == pytest.approx(SQRT2, rel=1e-15)
    for j in range(1, 5):
        assert c[j] == 0.0 and c[-j] == 0.0


def test_exp_layer_zero_mode_closed_form():
    # (1 - e^{-2})/sqrt(2), cross-checked against 200-node quadrature
    c = coeffs_exact(exp_layer(1.0), 0)
    closed = (1.0 - math.exp(-2.0)) / SQRT2
    assert closed == pytest.approx(0.61141028, abs=5e-9)
    assert c[0] == pytest.approx(closed, rel=1e-14)
    assert c[0] == pytest.approx(quad_coefficient(exp_layer(1.0), 0), rel=1e-13)


def test_cosine_coefficients_match_stated_form():
    w = 3.7
    c = coeffs_exact(cosine(w), 6)
    for j in range(-6, 7):
        want = (np.sinc(w - j) + np.sinc(w + j)) / SQRT2
        assert c[j] == pytest.approx(want, rel=1e-15)
        assert c[j] == pytest.approx(quad_coefficient(cosine(w), j), rel=1e-12)


def test_cosine_zero_frequency_reduces_to_constant():
    c = coeffs_exact(cosine(0.0), 3)
    assert c[0] == pytest.approx(SQRT2, rel=1e-15)


@pytest.mark.parametrize("f", [real_pole(9.0), runge(5.0), runge(10.0)])
def test_pole_family_coefficients_against_quadrature(f):
    m = 12
    c = coeffs_exact(f, m)
    for j in range(-m, m + 1):
        ref = quad_coefficient(f, j, N=400)
        assert abs(c[j] - ref) <= 1e-11 * max(abs(ref), 1e-3), j


@pytest.mark.parametrize("f", ALL_FAMILIES)
def test_conjugate_symmetry(f):
    m = 25
    c = coeffs_exact(f, m)
    for j in range(1, m + 1):
        ref = c[j].conjugate()
        assert abs(c[-j] - ref) <= 1e-13 * max(abs(ref), 1e-300)


@pytest.mark.parametrize("f", [exp_layer(1.0), exp_layer(100.0), cosine(7.0 * SQRT2)])
def test_closed_form_matches_panel_quadrature(f):
    m = 200
    closed = coeffs_exact(f, m).values
    panel = _panel_coeffs(f, m)
    # relative 1e-12 down to the summation rounding floor eps*int|f|
    r = gauss_legendre(400)
    floor = 8 * np.finfo(float).eps * float(r.weights @ np.abs(f(r.nodes)))
    for idx in range(2 * m + 1):
        assert abs(closed[idx] - panel[idx]) <= max(1e-12 * abs(closed[idx]), floor), idx - m


@pytest.mark.parametrize("f", ALL_FAMILIES)
def test_parseval_consistency(f):
    # quadrature L2 norm of the truncated series vs coefficient norm
    m = 40
    c = coeffs_exact(f, m)
    series_norm = norm_l2(lambda x: evaluate_truncated_series(c, x), N=1000)
    assert series_norm == pytest.approx(norm_m(c), rel=1e-10)


def test_quadrature_budget_exhaustion_reports_j():
    with pytest.raises(QuadratureConvergenceError) as exc:
        coeffs_exact(real_pole(1e7), 2)
    assert exc.value.failed_j


# ----------------------------------------------------------------------
# series evaluation
# ----------------------------------------------------------------------

def test_series_of_constant():
    c = CoeffVec(3, np.array([0, 0, 0, SQRT2, 0, 0, 0], dtype=complex))
    x = np.linspace(-1, 1, 17)
    assert np.allclose(evaluate_truncated_series(c, x), 1.0, atol=1e-15)


def sawtooth_coeffs(m):
    # f(x) = x has f-hat_j = sqrt(2) i (-1)^j / (j pi), f-hat_0 = 0
    vals = np.zeros(2 * m + 1, dtype=complex)
    for j in range(1, m + 1):
        v = SQRT2 * 1j * (-1.0) ** j / (j * math.pi)
        vals[m + j] = v
        vals[m - j] = v.conjugate()
    return CoeffVec(m, vals)


def test_sawtooth_coefficient_formula_against_quadrature():
    c = sawtooth_coeffs(6)
    for j in range(-6, 7):
        ref = quad_coefficient(lambda x: x, j)
        assert abs(c[j] - ref) <= 1e-13


def test_series_odd_symmetry_at_zero():
    c = sawtooth_coeffs(50)
    assert abs(evaluate_truncated_series(c, 0.0)) <= 1e-13


def test_series_interior_convergence_and_boundary_overshoot():
    c = sawtooth_coeffs(200)
    mid = evaluate_truncated_series(c, 0.5)
    assert abs(mid - 0.5) <= 1e-2
    x = np.linspace(0.95, 1.0, 400)
    overshoot = np.max(np.abs(evaluate_truncated_series(c, x) - x))
    assert overshoot >= 0.1  # no uniform convergence near the endpoint


def test_series_rejects_outside_domain():
    c = sawtooth_coeffs(3)
    with pytest.raises(ValueError):
        evaluate_truncated_series(c, 1.5)


# ----------------------------------------------------------------------
# norms
# ----------------------------------------------------------------------

def test_norm_m_zero_vector():
    assert norm_m(CoeffVec(2, np.zeros(5, dtype=complex))) == 0.0


def test_norm_m_constant_is_sqrt2():
    for m in (0, 3, 10):
        assert norm_m(coeffs_exact(exp_layer(0.0), m)) == pytest.approx(SQRT2, rel=1e-15)


def test_norm_m_unit_vector():
    v = np.zeros(7, dtype=complex)
    v[1] = 1.0
    assert norm_m(CoeffVec(3, v)) == 1.0


def test_norm_l2_constant():
    assert norm_l2(lambda x: np.ones_like(x)) == pytest.approx(SQRT2, rel=1e-14)


def test_norm_l2_linear():
    assert norm_l2(lambda x: x) == pytest.approx(math.sqrt(2.0 / 3.0), rel=1e-14)


def test_norm_l2_cosine():
    # int cos^2(pi x) over [-1,1] = 1 by the half-angle identity
    assert norm_l2(lambda x: np.cos(math.pi * x)) == pytest.approx(1.0, rel=1e-13)


def test_norm_l2_propagates_nonfinite():
    with pytest.raises(ValueError):
        norm_l2(lambda x: np.where(x > 0.999, np.nan, 1.0))


def test_norm_l2_needs_two_nodes():
    with pytest.raises(ValueError):
        norm_l2(lambda x: x, N=1)


# ----------------------------------------------------------------------
# analyticity radius
# ----------------------------------------------------------------------

def test_bernstein_radius_real_pole():
    # pole x0 = 10/9; rho = x0 + sqrt(x0^2 - 1) (Joukowski image)
    x0 = 10.0 / 9.0
    want = x0 + math.sqrt(x0 * x0 - 1.0)
    assert want == pytest.approx(1.5954, abs=1e-4)
    assert bernstein_radius(real_pole(9.0)) == pytest.approx(want, rel=1e-15)


def test_bernstein_radius_runge():
    want = (1.0 + math.sqrt(26.0)) / 5.0
    assert want == pytest.approx(1.2198, abs=1e-4)
    assert bernstein_radius(runge(5.0)) == pytest.approx(want, rel=1e-15)


def test_bernstein_radius_entire_families():
    assert bernstein_radius(exp_layer(3.0)) == math.inf
    assert bernstein_radius(cosine(11.0)) == math.inf


# ----------------------------------------------------------------------
# container and serialization
# ----------------------------------------------------------------------

def test_coeffvec_validation():
    with pytest.raises(ValueError):
        CoeffVec(2, np.zeros(4, dtype=complex))
    with pytest.raises(ValueError):
        CoeffVec(-1, np.zeros(1, dtype=complex))
    c = CoeffVec(1, np.array([1, 2, 3], dtype=complex))
    with pytest.raises(IndexError):
        c[2]


def test_coeffvec_truncate():
    c = coeffs_exact(runge(5.0), 10)
    t = c.truncate(4)
    assert t.m == 4
    for j in range(-4, 5):
        assert t[j] == c[j]
    with pytest.raises(ValueError):
        c.truncate(11)


def test_csv_round_trip_exact(tmp_path):
    rng = np.random.default_rng(3)
    vals = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    vals *= 10.0 ** rng.integers(-12, 12, size=9)
    c = CoeffVec(4, vals)
    path = tmp_path / "coeffs.csv"
    write_coeffs_csv(c, path)
    back = read_coeffs_csv(path)
    assert back.m == 4
    assert np.array_equal(back.values, c.values)


def test_csv_rejects_malformed(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("j,re,im\n0,1.0,not-a-number\n")
    with pytest.raises(ValueError, match="line 2"):
        read_coeffs_csv(path)
    path.write_text("wrong,header\n")
    with pytest.raises(ValueError, match="header"):
        read_coeffs_csv(path)


def test_parse_test_function():
    f = parse_test_function("runge:10")
    assert f.family == "runge" and f.parameter == 10.0
    with pytest.raises(ValueError):
        parse_test_function("lorentz:3")
    with pytest.raises(ValueError):
        parse_test_function("runge:abc")


def test_family_validation():
    with pytest.raises(ValueError):
        TFun("runge", 0.0)
    with pytest.raises(ValueError):
        TFun("exp_layer", -1.0)
    assert exp_layer(0.0).label == "exp_layer(0)"
