import math

import pytest

from jacobi_moments.capacity import capacity_series, capacity_stationary, truncation_bound
from jacobi_moments.errors import DomainError
from jacobi_moments.partitions import ModelParams
from jacobi_moments.verify import param_grid


def test_small_rho_vanishes():
    params = ModelParams(2, 3, 6)
    res = capacity_series(params, 0.3, 1e-9, 10)
    assert abs(res.value) < 3e-9


@pytest.mark.parametrize("rho", [0.1, 0.5, 0.9])
def test_identity_channel_at_time_zero(rho):
    for params in param_grid(3, 2, 2):
        res = capacity_series(params, 0.0, rho, 60)
        assert abs(res.value - params.m * math.log1p(rho)) <= res.truncation_bound + 1e-14


def test_uniform_stationary_law():
    # m = p = 1, d = 2: the stationary eigenvalue is uniform on [0, 1]
    params = ModelParams(1, 1, 2)
    res = capacity_stationary(params, 0.5, 60)
    exact = 3 * math.log(1.5) - 1
    assert abs(res.value - exact) <= res.truncation_bound + 1e-14
    assert res.value == pytest.approx(0.216395, abs=1e-6)


@pytest.mark.parametrize("rho", [0.2, 0.6, 0.9])
def test_tail_bound_is_valid(rho):
    params = ModelParams(2, 3, 7)
    for t in (0.0, 0.05, 0.5, math.inf):
        for n in (5, 10, 20):
            short = capacity_series(params, t, rho, n)
            long = capacity_series(params, t, rho, 2 * n)
            assert abs(short.value - long.value) <= short.truncation_bound


def test_monotone_in_rho():
    params = ModelParams(2, 4, 7)
    values = [capacity_series(params, 0.4, rho, 60).value for rho in (0.1, 0.3, 0.5, 0.7)]
    assert values == sorted(values)


def test_decreases_towards_stationary():
    params = ModelParams(2, 3, 6)
    values = [capacity_series(params, t, 0.5, 40).value for t in (0.0, 0.1, 0.5, 2.0)]
    assert values == sorted(values, reverse=True)
    assert values[-1] == pytest.approx(capacity_stationary(params, 0.5, 40).value, abs=1e-4)


def test_rho_one_flagged():
    res = capacity_series(ModelParams(1, 2, 5), 1.0, 1.0, 40)
    assert not res.bound_convergent
    assert res.truncation_bound == pytest.approx(1 / 41)
    assert capacity_series(ModelParams(1, 2, 5), 1.0, 0.5, 40).bound_convergent


def test_truncation_bound_formula():
    assert truncation_bound(2, 0.5, 3) == pytest.approx(2 * 0.5**4 / (4 * 0.5))


@pytest.mark.parametrize("rho, n_terms, t", [(0.0, 10, 1.0), (1.5, 10, 1.0), (-0.1, 10, 1.0), (0.5, 0, 1.0), (0.5, 10, -1.0)])
def test_domain_errors(rho, n_terms, t):
    with pytest.raises(DomainError):
        capacity_series(ModelParams(1, 2, 5), t, rho, n_terms)


def test_json_schema():
    obj = capacity_stationary(ModelParams(1, 2, 5), 0.5, 12).to_json()
    assert set(obj) == {"rho", "t", "N", "value", "bound"}
    assert obj["t"] == "inf" and obj["N"] == 12
