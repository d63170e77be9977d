import json
import math
from fractions import Fraction

import numpy as np
import pytest

from jacobi_moments.errors import DomainError
from jacobi_moments.moments import (
    MomentExpansion,
    build_almost_triangular,
    lemma_det_closed,
    lemma_det_direct,
    moment_expansion,
    moment_mf1_oracle,
    stationary_moment,
    stationary_moment_quadrature,
    ucoef,
    ucoef_dpq,
    vtilde,
    vtilde_dpq,
)
from jacobi_moments.numerics import exact_det, gamma_ratio, pochhammer
from jacobi_moments.partitions import Hook, ModelParams, hooks_of_weight, subhooks
from jacobi_moments.verify import param_grid

rs = ModelParams.from_rs


def test_vtilde_examples():
    assert vtilde(1, 1, rs(1, 1, 2)) == 6
    assert vtilde(1, 1, rs(1, 0, 0)) == 1
    with pytest.raises(DomainError):
        vtilde(1, 2, rs(1, 0, 0))


def test_ucoef_examples():
    assert ucoef(1, 1, rs(1, 1, 2)) == Fraction(1, 2)
    assert ucoef(1, 1, rs(1, 0, 0)) == 1
    with pytest.raises(DomainError):
        ucoef(2, 1, rs(1, 0, 0))
    with pytest.raises(DomainError):
        ucoef(1, 2, rs(3, 0, 0))


@pytest.mark.parametrize("params", list(param_grid(4, 2, 3)))
def test_both_coefficient_forms_agree(params):
    for a1 in range(1, 7):
        for t1 in range(1, a1 + 1):
            assert vtilde(a1, t1, params) == vtilde_dpq(a1, t1, params)
    for la in range(1, params.m + 1):
        for lt in range(1, la + 1):
            assert ucoef(la, lt, params) == ucoef_dpq(la, lt, params)


def test_moment_expansion_examples():
    e = moment_expansion(1, ModelParams(1, 2, 5))
    assert e.stationary == Fraction(2, 5)
    assert e.terms == ((5, Fraction(3, 5)),)
    assert e.evaluate(0) == 1.0
    assert moment_expansion(2, ModelParams(1, 1, 2)).stationary == Fraction(1, 3)


def test_stationary_examples():
    assert stationary_moment(1, rs(1, 1, 2)) == Fraction(2, 5)
    for n in range(1, 8):
        assert stationary_moment(n, rs(1, 0, 0)) == Fraction(1, n + 1)
    # value frozen from the tensor quadrature below
    assert stationary_moment(1, rs(2, 0, 0)) == 1
    assert stationary_moment_quadrature(1, rs(2, 0, 0)) == pytest.approx(1.0, abs=1e-8)


def test_quadrature_examples():
    assert stationary_moment_quadrature(1, rs(1, 1, 2)) == pytest.approx(0.4, abs=1e-12)
    assert stationary_moment_quadrature(2, rs(1, 0, 0)) == pytest.approx(1 / 3, abs=1e-12)
    with pytest.raises(DomainError):
        stationary_moment_quadrature(1, rs(4, 0, 0))


@pytest.mark.parametrize("params", [rs(1, 1, 2), ModelParams(2, 3, 6)])
@pytest.mark.parametrize("n", [1, 3])
def test_mf1_oracle_examples(params, n):
    assert moment_mf1_oracle(n, params) == moment_expansion(n, params)


@pytest.mark.parametrize("params", list(param_grid(3, 2, 2)))
def test_t0_identity_and_bounds(params):
    for n in range(1, 6):
        e = moment_expansion(n, params)
        assert e.at_zero() == params.m
        assert 0 < e.stationary < params.m
        assert all(rate >= params.d for rate in e.rates)
        assert e.rates == sorted(set(e.rates))
        for t in np.arange(0, 5.01, 0.1):
            assert 0 < e.evaluate(t) <= params.m + 1e-12


@pytest.mark.parametrize("r", range(6))
@pytest.mark.parametrize("s", range(6))
def test_first_moment_single_matrix(r, s):
    e = moment_expansion(1, rs(1, r, s))
    assert e.stationary == Fraction(r + 1, r + s + 2)
    assert e.terms == ((r + s + 2, Fraction(s + 1, r + s + 2)),)


@pytest.mark.parametrize("params", list(param_grid(3, 2, 2)))
def test_stationary_matches_beta_and_quadrature(params):
    for n in range(1, 5):
        exact = stationary_moment(n, params)
        if params.m == 1:
            assert exact == pochhammer(params.r + 1, n) / pochhammer(params.r + params.s + 2, n)
        assert stationary_moment_quadrature(n, params) == pytest.approx(float(exact), rel=1e-8)


def test_first_moment_stationary_is_mp_over_d():
    # consequence of Haar invariance: E tr(P Y Q Y^* P) = m p / d
    for params in param_grid(4, 3, 3):
        assert stationary_moment(1, params) == Fraction(params.m * params.p, params.d)


def test_json_round_trip():
    e = moment_expansion(3, ModelParams(2, 3, 6))
    obj = json.loads(e.dumps())
    assert obj["stationary"] == "17/35"
    assert all(isinstance(t["coeff"], str) and "/" in t["coeff"] for t in obj["terms"])
    back = MomentExpansion.from_json(obj)
    assert back == e
    for t in (0.0, 0.3, 2.0):
        assert abs(back.evaluate(t) - e.evaluate(t)) <= 1e-15


# --- almost upper-triangular matrix and the determinant lemma ---


def test_almost_triangular_examples():
    b = build_almost_triangular(Hook(2, 1), Hook(2, 1), rs(2, 1, 1))
    assert b.is_upper_triangular()
    b = build_almost_triangular(Hook(1, 1), Hook(1), rs(2, 0, 0))
    assert b[2, 1] == 0  # (-1)_2 = 0: l(alpha) = l(tau) + 1 is upper triangular
    b = build_almost_triangular(Hook(1, 2), Hook(1), rs(3, 0, 0))
    assert b[3, 2] == Fraction(-1, 6)


@pytest.mark.parametrize("params", list(param_grid(5, 2, 2)))
def test_almost_triangular_structure(params):
    m, r, s = params.m, params.r, params.s
    for n in range(1, 7):
        for alpha in hooks_of_weight(n, m):
            for tau in subhooks(alpha):
                b = build_almost_triangular(alpha, tau, params)
                la, lt = alpha.length, tau.length
                for i in range(1, m + 1):
                    for j in range(1, i - 1):
                        assert b[i, j] == 0
                if la < lt + 2:
                    assert b.is_upper_triangular()
                for j in range(1, m):
                    if lt + 1 <= j <= la - 1:
                        want = Fraction((-1) ** (m - j) * math.factorial(m - j)) / gamma_ratio([r + s + 2 * m - 2 * j + 2], [])
                        assert b[j + 1, j] == want
                    else:
                        assert b[j + 1, j] == 0


def test_lemma_examples():
    for params in param_grid(4, 2, 2, m_min=2):
        assert lemma_det_closed(2, 1, params) == Fraction(1, params.r + params.s + 2 * params.m - 2)
    assert lemma_det_closed(3, 1, rs(3, 0, 0)) == Fraction(1, 24)
    assert lemma_det_direct(3, 1, rs(3, 0, 0)) == Fraction(1, 24)
    assert lemma_det_closed(2, 1, rs(2, 1, 1)) == Fraction(1, 4) == lemma_det_direct(2, 1, rs(2, 1, 1))
    with pytest.raises(DomainError):
        lemma_det_closed(2, 2, rs(3, 0, 0))


@pytest.mark.parametrize("params", list(param_grid(6, 2, 2, m_min=2)))
def test_lemma_matches_submatrix_of_b(params):
    """The lemma's matrix is the rescaled l(tau)+1..l(alpha) block of b."""
    m, rs_ = params.m, params.r + params.s
    for la in range(2, m + 1):
        for lt in range(1, la):
            alpha, tau = Hook(2, la - 1), Hook(1, lt - 1)
            b = build_almost_triangular(alpha, tau, params)
            idx = range(lt + 1, la + 1)
            n_i = {i: alpha.part(i) + m - i for i in idx}
            m_j = {j: tau.part(j) + m - j for j in idx}
            block = [
                [b[i, j] * (-1) ** m_j[j] * gamma_ratio([rs_ + 2 * m_j[j] + 2], [n_i[i] + 1]) for j in idx]
                for i in idx
            ]
            assert exact_det(block) == lemma_det_closed(la, lt, params) == lemma_det_direct(la, lt, params)
