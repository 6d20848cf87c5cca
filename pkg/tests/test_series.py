import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import brute_product, coeff_close, poly
from dacyclic.series import (HomogeneousPart, MultiIndex, TruncatedSeries, evaluate, exp_series,
                             homogeneous_parts, log_series, multiply, principal_log, radial_derivative,
                             reciprocal, substitute)


# --- strategies --------------------------------------------------------------

def series_strategy(d=None, cap=None, max_deg=4, const=None):
    @st.composite
    def build(draw):
        dd = d or draw(st.integers(1, 3))
        cc = cap if cap is not None else draw(st.integers(0, 6))
        n_terms = draw(st.integers(0, 6))
        terms = {}
        for _ in range(n_terms):
            alpha = tuple(draw(st.integers(0, max_deg)) for _ in range(dd))
            re = draw(st.floats(-2, 2, allow_nan=False))
            im = draw(st.floats(-2, 2, allow_nan=False))
            terms[alpha] = complex(re, im)
        if const is not None:
            terms[(0,) * dd] = const
        return TruncatedSeries.from_terms(dd, cc, terms)
    return build()


def same_shape_pair():
    @st.composite
    def build(draw):
        d = draw(st.integers(1, 3))
        cap = draw(st.integers(0, 6))
        return draw(series_strategy(d, cap)), draw(series_strategy(d, cap)), draw(series_strategy(d, cap))
    return build()


# --- MultiIndex ----------------------------------------------------------------

def test_multi_index_accessors():
    a = MultiIndex((2, 0, 3))
    assert a.degree == 5 and a.dimension == 3
    assert a.factorial == 12
    assert math.isclose(a.log_factorial, math.log(12))


def test_multi_index_large_factorial_in_log_space():
    a = MultiIndex((400, 300))
    assert math.isclose(a.log_factorial, math.lgamma(401) + math.lgamma(301), rel_tol=1e-12)


@pytest.mark.parametrize("bad", [(), (-1, 2)])
def test_multi_index_rejects_bad_input(bad):
    with pytest.raises(ValueError):
        MultiIndex(bad)


# --- construction and invariants ------------------------------------------------

def test_terms_above_cap_are_dropped_and_duplicates_summed():
    f = TruncatedSeries.from_terms(2, 2, [((1, 0), 1.0), ((1, 0), 2.0), ((3, 0), 5.0)])
    assert f[(1, 0)] == 3.0
    assert f.nnz == 1
    with pytest.raises(IndexError):
        f[(3, 0)]


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        TruncatedSeries.from_terms(2, 2, [((1,), 1.0)])
    with pytest.raises(ValueError):
        multiply(poly(1, {(1,): 1}), poly(2, {(1, 0): 1}))


def test_equality_up_to_smaller_cap():
    f = TruncatedSeries.univariate([1, 2, 3], 2)
    g = TruncatedSeries.univariate([1, 2, 3, 4], 3)
    assert f == g
    assert f != TruncatedSeries.univariate([1, 2, 4], 2)


def test_cap_zero_is_legal():
    c = TruncatedSeries.constant(3.0, 2, 0)
    assert (c * c).constant_term == 9.0
    assert log_series(c).constant_term == pytest.approx(math.log(3))
    assert reciprocal(c).constant_term == pytest.approx(1 / 3)


# --- multiply -------------------------------------------------------------------

def test_difference_of_squares():
    f = poly(1, {(0,): 1, (1,): 1}, cap=4) * poly(1, {(0,): 1, (1,): -1}, cap=4)
    assert coeff_close(f, {(0,): 1, (2,): -1})


def test_square_of_trinomial_matches_hand_expansion():
    s = poly(2, {(0, 0): 1, (1, 0): 1, (0, 1): 1}, cap=2)
    expected = {(0, 0): 1, (1, 0): 2, (0, 1): 2, (2, 0): 1, (1, 1): 2, (0, 2): 1}
    assert coeff_close(s * s, expected)


def test_result_cap_is_minimum():
    f = TruncatedSeries.univariate([1, 1], 5)
    g = TruncatedSeries.univariate([1, 1], 3)
    assert (f * g).cap == 3


@given(same_shape_pair())
def test_multiply_matches_brute_force_convolution(fgh):
    f, g, _ = fgh
    assert coeff_close(multiply(f, g), brute_product(f, g), tol=1e-9)


@given(same_shape_pair())
def test_ring_axioms(fgh):
    f, g, h = fgh
    assert (f * g).max_abs_diff(g * f) <= 1e-12
    assert ((f * g) * h).max_abs_diff(f * (g * h)) <= 1e-9
    assert (f * (g + h)).max_abs_diff(f * g + f * h) <= 1e-9
    one = TruncatedSeries.constant(1.0, f.dimension, f.cap)
    assert (f * one) == f


@given(st.lists(st.integers(-5, 5), min_size=12, max_size=12))
def test_ring_axioms_exact_on_integer_coefficients(vals):
    # integer coefficients keep every product exactly representable
    def mk(offset):
        return poly(2, {(i, j): complex(vals[(offset + 2 * i + j) % 12], vals[(offset + i) % 12])
                        for i in range(3) for j in range(3 - i)}, cap=4)
    f, g, h = mk(0), mk(5), mk(7)
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h


# --- reciprocal ------------------------------------------------------------------

def test_geometric_series():
    g = reciprocal(TruncatedSeries.univariate([1, -1], 10))
    assert np.allclose(g.univariate_coefficients(), np.ones(11))


def test_reciprocal_bivariate_binomial_coefficients():
    g = reciprocal(poly(2, {(0, 0): 1, (1, 0): -1, (0, 1): -1}, cap=8))
    for a in range(9):
        for b in range(9 - a):
            assert g[(a, b)] == pytest.approx(math.comb(a + b, a), rel=1e-12)


def test_reciprocal_of_constant():
    assert reciprocal(TruncatedSeries.constant(2.0, 1, 3)).coefficients() == {(0,): 0.5}


def test_reciprocal_zero_constant_rejected():
    with pytest.raises(ZeroDivisionError):
        reciprocal(TruncatedSeries.univariate([0, 1], 3))


@given(series_strategy(const=1.5 - 0.5j))
def test_reciprocal_roundtrip(f):
    one = TruncatedSeries.constant(1.0, f.dimension, f.cap)
    assert (f * reciprocal(f)).max_abs_diff(one) <= 1e-9 * (1 + f.max_abs()) ** (f.cap + 1)


# --- log / exp -------------------------------------------------------------------

def test_mercator_series():
    L = log_series(TruncatedSeries.univariate([1, -1], 15))
    expected = [0] + [-1 / n for n in range(1, 16)]
    assert np.allclose(L.univariate_coefficients(), expected, atol=1e-15)


def test_log_of_e():
    assert log_series(TruncatedSeries.constant(math.e, 2, 4)).coefficients() == pytest.approx({(0, 0): 1.0})


def test_log_is_additive():
    a = poly(2, {(0, 0): 1, (1, 0): -1}, cap=8)
    b = poly(2, {(0, 0): 1, (0, 1): -1}, cap=8)
    assert log_series(a * b).max_abs_diff(log_series(a) + log_series(b)) <= 1e-14


def test_log_principal_branch_on_negative_constant():
    L = log_series(TruncatedSeries.univariate([-2, 1], 3))
    assert L.constant_term == pytest.approx(complex(math.log(2), math.pi))
    assert principal_log(complex(-1, -0.0)).imag == pytest.approx(math.pi)


def test_log_zero_constant_rejected():
    with pytest.raises(ValueError):
        log_series(TruncatedSeries.univariate([0, 1], 2))


def test_exp_of_zero_and_of_variable():
    assert exp_series(TruncatedSeries.zero(1, 5)).coefficients() == {(0,): 1}
    E = exp_series(TruncatedSeries.univariate([0, 1], 12))
    assert np.allclose(E.univariate_coefficients(), [1 / math.factorial(n) for n in range(13)], atol=1e-16)


def test_exp_log_roundtrip_example():
    p = poly(2, {(0, 0): 3, (1, 0): 1, (0, 2): 1}, cap=10)
    assert exp_series(log_series(p)).max_abs_diff(p) <= 1e-13


@given(series_strategy(const=2.0 + 1.0j))
def test_exp_log_roundtrip(f):
    tol = 1e-9 * (1 + f.max_abs()) ** (f.cap + 1)
    assert exp_series(log_series(f)).max_abs_diff(f) <= tol


@given(series_strategy(const=0.3 - 1.0j))
def test_log_exp_roundtrip(f):
    # |Im f(0)| < pi, so the principal log of exp(f(0)) is f(0)
    tol = 1e-9 * (1 + f.max_abs()) ** (f.cap + 1)
    assert log_series(exp_series(f)).max_abs_diff(f) <= tol


def test_log_degree_one_and_up_ignore_branch():
    p = poly(1, {(0,): -3, (1,): 1, (2,): 0.5}, cap=8)
    a = log_series(p)
    b = log_series(p * (-1.0))
    assert (a - b).truncate(8).max_abs_diff(TruncatedSeries.constant(a.constant_term - b.constant_term, 1, 8)) < 1e-14


# --- radial derivative ----------------------------------------------------------

def test_radial_derivative_scales_by_degree():
    f = poly(2, {(0, 0): 1, (2, 1): 1, (1, 0): 4})
    R = radial_derivative(f)
    assert R.coefficients() == {(1, 0): 4, (2, 1): 3}


@given(same_shape_pair())
def test_radial_derivative_is_a_derivation(fgh):
    f, g, _ = fgh
    lhs = radial_derivative(f * g)
    rhs = radial_derivative(f) * g + f * radial_derivative(g)
    assert lhs.max_abs_diff(rhs) <= 1e-9


# --- substitute -----------------------------------------------------------------

def test_substitute_geometric_into_product():
    f = reciprocal(TruncatedSeries.univariate([1, -1], 10))
    w = poly(2, {(1, 1): 1}, cap=10)
    out = substitute(f, w)
    assert coeff_close(out, {(k, k): 1 for k in range(6)})


def test_substitute_identity():
    w = poly(3, {(1, 0, 0): 2, (0, 1, 1): -1}, cap=5)
    assert substitute(TruncatedSeries.univariate([0, 1], 5), w) == w


def test_substitute_log1p_matches_multivariate_log():
    c = 3.0**1.5
    w = poly(3, {(1, 1, 1): c}, cap=12)
    f = log_series(TruncatedSeries.univariate([1, 1], 4))
    direct = log_series(w + 1.0)
    out = substitute(f, w)
    assert out.cap == 12
    for k in range(5):
        assert out[(k, k, k)] == pytest.approx(direct[(k, k, k)], rel=1e-12, abs=1e-12)


def test_substitute_rejects_constant_inner():
    with pytest.raises(ValueError):
        substitute(TruncatedSeries.univariate([1, 1], 3), TruncatedSeries.univariate([1, 1], 3))


# --- evaluate and homogeneous parts ---------------------------------------------

def test_evaluate_examples():
    assert evaluate(poly(2, {(0, 0): 1, (1, 0): -1}), (0.5, 0)) == pytest.approx(0.5)
    assert evaluate(TruncatedSeries.zero(2, 4), (0.1, 0.2)) == 0


def test_evaluate_truncated_kernel_against_geometric_partial_sum():
    w = np.array([0.3 + 0.1j, -0.2j])
    cap = 12
    # k_w(z) = sum_n <z, w>^n = 1 / (1 - sum_j z_j conj(w_j))
    lin = poly(2, {(1, 0): np.conj(w[0]), (0, 1): np.conj(w[1])}, cap=cap)
    k = reciprocal(1.0 - lin)
    z = np.array([0.5, 0.4 + 0.2j])
    s = np.dot(z, np.conj(w))
    assert evaluate(k, z) == pytest.approx(sum(s**n for n in range(cap + 1)), rel=1e-13)


def test_evaluate_many_points_matches_single():
    f = poly(2, {(0, 0): 1, (1, 2): 2j, (3, 0): -1})
    pts = np.array([[0.1, 0.2], [0.3j, -0.4]])
    many = evaluate(f, pts)
    assert many[1] == pytest.approx(evaluate(f, pts[1]))


def test_homogeneous_parts_examples(rng):
    f = poly(2, {(0, 0): 1, (1, 0): 2, (1, 1): 1})
    parts = homogeneous_parts(f)
    assert [p.degree for p in parts] == [0, 1, 2]
    assert len(homogeneous_parts(poly(2, {(2, 0): 1, (1, 1): 3}))) == 1
    terms = {(a, b): complex(*rng.standard_normal(2)) for a in range(6) for b in range(6 - a)}
    g = poly(2, terms)
    total = TruncatedSeries.zero(2, g.cap)
    for p in homogeneous_parts(g):
        total = total + p.series
    assert total == g


def test_homogeneous_part_validates_support():
    with pytest.raises(ValueError):
        HomogeneousPart(1, poly(1, {(0,): 1, (1,): 1}))


@given(series_strategy(const=1.0), st.integers(0, 5))
def test_cap_monotonicity(f, lower):
    lower = min(lower, f.cap)
    for op in (reciprocal, log_series, exp_series):
        assert op(f).truncate(lower) == op(f.truncate(lower))
