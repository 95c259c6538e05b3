import math

import numpy as np
import pytest

from gibbslab.framebound import (
    PrecisionRegimeError,
    b_star,
    bnm,
    growth_log10,
    sup_zeta_bound,
    witness_ratio,
    zeta_form_bound,
)
from gibbslab.numerics import NotPositiveDefiniteError, riemann_zeta
from gibbslab.polyspace import TPolyCoeffs, build_witness


# ----------------------------------------------------------------------
# b_star (closed-form growth lower bound)
# ----------------------------------------------------------------------

def test_b_star_zero_degree():
    assert b_star(0, 7) == 1.0


def test_b_star_small_values():
    # sqrt(1 + n/(8m) + (n/(16m)) (9/4)^{n^2/(8m)})
    want = math.sqrt(1.0 + 0.125 + 0.0625 * 2.25 ** 0.5)
    assert b_star(4, 4) == pytest.approx(want, rel=1e-15)
    want11 = math.sqrt(1.0 + 1.0 / 8.0 + (1.0 / 16.0) * 2.25 ** (1.0 / 8.0))
    assert b_star(1, 1) == pytest.approx(want11, rel=1e-15)


def test_b_star_log_domain_no_overflow():
    big = b_star(4000, 1)
    assert big > 1e100  # evaluates through the log domain without error


def test_b_star_monotone_in_m():
    vals = [b_star(12, m) for m in range(6, 40)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_b_star_rejects_bad_args():
    with pytest.raises(ValueError):
        b_star(3, 0)
    with pytest.raises(ValueError):
        b_star(-1, 3)


# ----------------------------------------------------------------------
# bnm
# ----------------------------------------------------------------------

def test_bnm_constants_are_exact():
    for m in (0, 1, 5, 40):
        rep = bnm(0, m)
        assert rep.b_value == pytest.approx(1.0, rel=1e-14)


def test_bnm_matches_reciprocal_sigma_min():
    rep = bnm(6, 9)
    assert rep.b_value == pytest.approx(1.0 / rep.sigma_min, rel=1e-12)
    assert rep.b_value >= 1.0
    assert rep.b_value >= b_star(6, 9)


def test_bnm_strong_convergence_regression():
    # B_{4,m} -> 1; the threshold m >= 110 for B <= 1.01 is a frozen regression
    assert bnm(4, 110).b_value <= 1.01
    assert bnm(4, 200).b_value <= 1.01


def test_bnm_4_4_value_and_oracle_agreement():
    rep = bnm(4, 4)
    assert rep.b_value >= b_star(4, 4)
    # frozen regression, cross-checked against the zeta-form pencil oracle
    assert rep.b_value == pytest.approx(1.3284830211989616, rel=1e-10)
    assert sup_zeta_bound(4, 4) == pytest.approx(rep.b_value, rel=1e-8)


def test_bnm_wide_case_is_infinite():
    rep = bnm(5, 2)  # 2m+1 = 5 < 6 coefficients cannot see all of P_5
    assert rep.b_value == math.inf
    assert rep.sigma_min == 0.0


def test_bnm_precision_regime_error():
    with pytest.raises(PrecisionRegimeError, match="dd"):
        bnm(30, 15)
    # the same point is admissible in dd mode
    assert 8.0 < growth_log10(30, 15) <= 16.0


def test_bnm_dd_agrees_with_double():
    a = bnm(17, 9).b_value
    b = bnm(17, 9, precision_mode="dd").b_value
    assert a == pytest.approx(b, rel=1e-10)


def test_bnm_check_matrix_path():
    rep = bnm(4, 6, check_matrix=True)
    assert rep.b_value >= 1.0


def test_bnm_rejects_bad_mode():
    with pytest.raises(ValueError):
        bnm(2, 2, precision_mode="quad")


# ----------------------------------------------------------------------
# witness ratio
# ----------------------------------------------------------------------

def test_witness_ratio_exceeds_one():
    for q, m in [(1, 3), (2, 5), (3, 8)]:
        assert witness_ratio(q, m) > 1.0


def test_witness_ratio_below_sup():
    for q, m in [(1, 4), (1, 12), (2, 7), (3, 12)]:
        wr = witness_ratio(q, m)
        B = bnm(4 * q + 1, m).b_value
        assert wr <= B * (1.0 + 1e-6), (q, m)


def test_witness_ratio_proof_inequality_samples():
    for q, m in [(1, 3), (2, 6), (4, 20), (6, 30)]:
        gamma = (1.0 + q / m) ** (m / q)
        floor = 1.0 + q / (2.0 * m) + (q / (4.0 * m)) * gamma ** (2.0 * q * q / m)
        assert witness_ratio(q, m) ** 2 >= floor, (q, m)


def test_witness_ratio_tail_insensitive():
    a = witness_ratio(2, 10, tail_terms=10**6)
    b = witness_ratio(2, 10, tail_terms=2 * 10**6)
    assert a == pytest.approx(b, rel=1e-6)


# ----------------------------------------------------------------------
# zeta-form oracle
# ----------------------------------------------------------------------

def test_zeta_form_linear_polynomial():
    # p~(t) = t, m = 1: numerator 2 zeta(2), denominator 2 -> sqrt(pi^2/6)
    val = zeta_form_bound(np.array([1.0]), 1)
    assert val == pytest.approx(math.sqrt(math.pi**2 / 6.0), rel=1e-14)
    assert val == pytest.approx(1.2825498301618641, rel=1e-12)


def test_zeta_form_agrees_with_direct_summation():
    # odd degree <= 9 surrogates: t(t^2-1), t(t^2-1)(t^2-1/4)
    for coeffs in ([0.0, 0.0, 0.0, 0.0, 1.0, 0.0, -1.25, 0.0, 0.25],
                   [-1.0, 0.0, 1.0],):
        b = np.array(coeffs[::-1]) if False else np.array(coeffs)
        tp = TPolyCoeffs(b=b)
        for m in (2, 6, 15):
            j = np.arange(1, 2_000_001, dtype=np.float64)
            vals = np.abs(tp.eval_tilde(1.0 / j)) ** 2 + np.abs(tp.eval_tilde(-1.0 / j)) ** 2
            num = float(np.sum(vals)) + j.size * float(vals[-1]) / 2.0
            den = float(np.sum(vals[:m]))
            direct = math.sqrt(num / den)
            assert zeta_form_bound(tp, m) == pytest.approx(direct, rel=1e-6), (coeffs, m)


def test_zeta_form_dominated_by_bnm():
    rng = np.random.default_rng(8)
    for m in (9, 20, 50):
        B = bnm(9, m).b_value
        for _ in range(10):
            b = rng.standard_normal(9)
            assert zeta_form_bound(b, m) <= B * (1.0 + 1e-6)


def test_zeta_form_degree_cap():
    with pytest.raises(ValueError):
        zeta_form_bound(np.ones(10), 5)


# ----------------------------------------------------------------------
# sup over the zeta pencil
# ----------------------------------------------------------------------

def test_sup_zeta_scalar_case():
    # n = 1: sqrt(zeta(2) / sum_{j<=m} j^{-2})
    for m in (1, 4, 9):
        partial = sum(1.0 / j**2 for j in range(1, m + 1))
        assert sup_zeta_bound(1, m) == pytest.approx(
            math.sqrt(riemann_zeta(2) / partial), rel=1e-12)
    assert sup_zeta_bound(1, 1) == pytest.approx(1.2825498301618641, rel=1e-12)


def test_sup_zeta_below_bnm():
    for n in range(1, 10):
        for m in (n, n + 5, 30):
            assert sup_zeta_bound(n, m) <= bnm(n, m).b_value * (1.0 + 1e-6), (n, m)


def test_sup_zeta_monotone_in_m():
    for n in (3, 7):
        vals = [sup_zeta_bound(n, m) for m in range(n, n + 15)]
        assert all(a >= b * (1.0 - 1e-12) for a, b in zip(vals, vals[1:]))


def test_sup_zeta_dominates_witness():
    # the witness is an odd polynomial of degree 4q+1 covered by the pencil
    for q, m in [(1, 4), (1, 10), (2, 8), (2, 20)]:
        assert witness_ratio(q, m) <= sup_zeta_bound(4 * q + 1, m) * (1.0 + 1e-9)


def test_sup_zeta_dominates_single_witness_zeta_form():
    # sup over samples cannot be beaten by individual degree <= 9 polynomials
    rng = np.random.default_rng(13)
    for m in (9, 25):
        sup = sup_zeta_bound(9, m)
        for _ in range(20):
            assert zeta_form_bound(rng.standard_normal(9), m) <= sup * (1.0 + 1e-9)


def test_sup_zeta_rejects_rank_deficient_partial_sums():
    # n = 9 needs at least 5 nodes for the odd-parity block
    with pytest.raises(NotPositiveDefiniteError):
        sup_zeta_bound(9, 4)


def test_sup_zeta_degree_cap():
    with pytest.raises(ValueError):
        sup_zeta_bound(10, 20)


# ----------------------------------------------------------------------
# chain sanity at bounded scale
# ----------------------------------------------------------------------

def test_growth_chain_small_grid():
    # b_star <= witness-backed bounds <= sup-type bounds <= B
    for q, m in [(1, 4), (2, 8)]:
        n = 4 * q + 1
        B = bnm(n, m).b_value
        wr = witness_ratio(q, m)
        sup = sup_zeta_bound(n, m)
        assert b_star(n, m) <= B
        assert wr <= sup * (1.0 + 1e-9)
        assert sup <= B * (1.0 + 1e-6)
