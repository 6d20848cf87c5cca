import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import poly
from dacyclic.checks import bell_number, partition_count
from dacyclic.identities import (PartitionTuple, T_eta, discrepancy, enumerate_A_m, faa_weight, log1m_rhs,
                                 radial_power, random_series, rm_log1p_faa, verify_faa_di_bruno,
                                 verify_log1m_expansion, verify_R_exp_identity, verify_R_log_identity)
from dacyclic.series import TruncatedSeries, log_series, reciprocal

TOL = 1e-9


# --- A_m ------------------------------------------------------------------------------

def test_A_m_small():
    assert enumerate_A_m(1) == [(1,)]
    assert enumerate_A_m(2) == [(0, 1), (2, 0)]
    assert enumerate_A_m(3) == [(0, 0, 1), (1, 1, 0), (3, 0, 0)]
    with pytest.raises(ValueError):
        enumerate_A_m(0)


def test_A_m_sorted_and_valid():
    for m in range(1, 9):
        etas = enumerate_A_m(m)
        assert etas == sorted(etas)
        assert len(set(etas)) == len(etas)
        assert all(sum((i + 1) * e for i, e in enumerate(eta)) == m for eta in etas)


def test_partition_counts_oracle():
    known = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]
    for m in range(1, 13):
        assert partition_count(m) == known[m]
        assert len(enumerate_A_m(m)) == known[m]


def test_bell_sums():
    known = [1, 1, 2, 5, 15, 52, 203, 877, 4140]
    for m in range(1, 9):
        assert bell_number(m) == known[m]
        assert sum(faa_weight(eta) for eta in enumerate_A_m(m)) == pytest.approx(known[m], rel=1e-12)


def test_partition_tuple_validation():
    eta = PartitionTuple((1, 1, 0))
    assert eta.m == 3 and eta.size == 2 and eta.factorial == 1
    assert PartitionTuple((4, 0, 0, 0)).factorial == 24
    for bad in [(), (1, 1), (-1, 1), (0, 0, 2)]:
        with pytest.raises(ValueError):
            PartitionTuple(bad)


def test_T_eta_examples():
    F = poly(1, {(1,): 1.0}, cap=6)  # F = z, R^k F = z
    assert np.allclose(T_eta(F, (2, 0)).univariate_coefficients(), [0, 0, 1, 0, 0, 0, 0])
    G = poly(1, {(2,): 1.0}, cap=6)  # R^k z^2 = 2^k z^2
    assert np.allclose(T_eta(G, (1, 1, 0)).univariate_coefficients()[4], 2 * 4)
    assert np.allclose(T_eta(G, (0, 0, 1)).univariate_coefficients()[2], 8)


def test_m2_closed_form():
    cap = 12
    F = poly(1, {(1,): 1.0}, cap=cap)
    inv = reciprocal(F + 1.0)
    expected = F * inv - F * F * inv * inv
    assert rm_log1p_faa(F, 2).max_abs_diff(expected) <= 1e-13
    assert radial_power(log_series(F + 1.0), 2).max_abs_diff(expected) <= 1e-12


@given(st.integers(0, 2**32 - 1), st.sampled_from([(1, 12), (2, 8), (3, 6)]), st.integers(1, 5))
def test_faa_di_bruno_property(seed, shape, m):
    d, cap = shape
    F = random_series(np.random.default_rng(seed), d, cap, constant=0.0)
    assert verify_faa_di_bruno(F, m) <= TOL


def test_faa_di_bruno_with_nonzero_constant():
    F = random_series(np.random.default_rng(1), 2, 8, constant=0.5 + 0.5j)
    assert verify_faa_di_bruno(F, 4) <= TOL
    with pytest.raises(ValueError):
        verify_faa_di_bruno(TruncatedSeries.constant(-2.0, 1, 4), 1)
    with pytest.raises(ZeroDivisionError):
        rm_log1p_faa(TruncatedSeries.constant(-1.0, 1, 4), 1)


# --- R identities -------------------------------------------------------------------

@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(0, 3))
def test_R_exp_identity(seed, d, n):
    rng = np.random.default_rng(seed)
    cap = (10, 8, 6)[d - 1]
    phi = random_series(rng, d, cap, degree=3)
    psi = random_series(rng, d, cap, degree=3, constant=1.0)
    assert verify_R_exp_identity(phi, psi, n) <= TOL


@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(0, 3))
def test_R_log_identity(seed, d, n):
    rng = np.random.default_rng(seed)
    cap = (10, 8, 6)[d - 1]
    phi = random_series(rng, d, cap, degree=3, constant=1.0, scale=0.4)
    assert verify_R_log_identity(phi, n) <= TOL


def test_R_identity_argument_checks():
    one = TruncatedSeries.constant(1.0, 1, 3)
    with pytest.raises(ValueError):
        verify_R_exp_identity(one, TruncatedSeries.zero(1, 3), 0)
    with pytest.raises(ValueError):
        verify_R_exp_identity(one, one, -1)
    with pytest.raises(ValueError):
        verify_R_log_identity(TruncatedSeries.constant(-1.0, 1, 3), 0)


def test_wrong_exponent_is_detected():
    rng = np.random.default_rng(3)
    phi = random_series(rng, 1, 8, degree=3, constant=1.0, scale=0.4)
    L = log_series(phi)
    from dacyclic.series import radial_derivative
    lhs = radial_derivative(phi**2 * L)
    wrong = (2 * L + 1.0) * phi**2 * radial_derivative(phi)
    assert discrepancy(lhs, wrong) > 1e-3


# --- (1 - phi) log(1 - phi) -----------------------------------------------------------

@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_log1m_expansion(seed, d):
    phi = random_series(np.random.default_rng(seed), d, (12, 9, 7)[d - 1], degree=3, constant=0.0, scale=0.5)
    assert verify_log1m_expansion(phi) <= TOL


def test_log1m_sum_from_two_misses_half_phi_squared():
    phi = random_series(np.random.default_rng(8), 2, 8, degree=3, constant=0.0, scale=0.5)
    gap = log1m_rhs(phi, start=2) - log1m_rhs(phi, start=1)
    assert gap.max_abs_diff(-(phi * phi) * 0.5) <= 1e-13
    assert verify_log1m_expansion(phi, start=2) > 1e-3


def test_log1m_univariate_coefficients():
    # (1 - z) log(1 - z) = -z + sum_{k>=2} z^k / (k (k - 1))
    z = poly(1, {(1,): 1.0}, cap=10)
    got = log1m_rhs(z).univariate_coefficients()
    expected = [0, -1] + [1 / (k * (k - 1)) for k in range(2, 11)]
    assert np.allclose(got, expected, atol=1e-15)
    with pytest.raises(ValueError):
        verify_log1m_expansion(z + 1.0)


def test_random_series_shape():
    rng = np.random.default_rng(0)
    f = random_series(rng, 2, 6, degree=2, constant=3.0)
    assert f.constant_term == 3.0 and f.degree == 2 and f.cap == 6
    assert math.isclose(discrepancy(f, f), 0.0)
