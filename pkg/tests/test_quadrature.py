import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dacyclic.errors import InstabilityError
from dacyclic.quadrature import (LemmaF, adaptive_gauss_legendre, dirichlet_integral_F, dirichlet_integral_F_mc,
                                 disk_integral, lemma_h, lemma_h_integral, lemma_h_integral_direct,
                                 lemma_h_integral_mc, mc_disk_integral, slice_besov_integral)
from dacyclic.sampling import R_MAX, SampleConfig, radial_grid, sphere_samples
from dacyclic.series import TruncatedSeries
from dacyclic.transforms import random_stable_coefficients

# --- generic rules -------------------------------------------------------------------

def test_adaptive_gauss_legendre():
    res = adaptive_gauss_legendre(np.sin, 0.0, math.pi, 1e-13)
    assert res.converged and res.value == pytest.approx(2.0, abs=1e-13)
    res = adaptive_gauss_legendre(np.sqrt, 0.0, 1.0, 1e-10)
    assert res.value == pytest.approx(2 / 3, abs=1e-9)


@pytest.mark.parametrize("a,b", [(0, 0), (1, 1), (3, 3), (10, 10), (2, 0), (5, 3), (20, 20)])
def test_disk_integral_monomials(a, b):
    res = disk_integral(lambda z: np.real(z**a * np.conj(z) ** b), 1e-12)
    expected = 1 / (a + 1) if a == b else 0.0
    assert res.converged
    assert res.value == pytest.approx(expected, abs=1e-12)


def test_disk_integral_log_singularity_at_boundary():
    # int |1/(1-z)|^2 |1-z|^2 ... use log|1 - z|, integrable, mean value 0 over the disk
    res = disk_integral(lambda z: np.log(np.abs(1 - z)), 1e-8, singular_angles=[0.0])
    assert res.value == pytest.approx(0.0, abs=1e-7)


def test_mc_disk_integral_uniform():
    res = mc_disk_integral(lambda z: np.abs(z) ** 2, 400_000, seed=2)
    assert abs(res.value - 0.5) <= 4 * res.error_estimate
    again = mc_disk_integral(lambda z: np.abs(z) ** 2, 400_000, seed=2)
    assert again.value == res.value


# --- radial weight h ------------------------------------------------------------------

def test_lemma_h_values():
    assert lemma_h(1.0) == 1.0
    assert lemma_h(math.e) == pytest.approx(math.e**2 / 4)


FROZEN_H = {1.0: 2.81365232646064, 1.1: 1.77098, 1.5: 1.53115, 2.0: 1.46291, 4.0: 1.41066}


@pytest.mark.parametrize("a", sorted(FROZEN_H))
def test_lemma_h_frozen(a):
    res = lemma_h_integral(a)
    assert res.converged and res.error_estimate <= 1e-10
    tol = 1e-12 if a == 1.0 else 5e-6
    assert res.value == pytest.approx(FROZEN_H[a], abs=tol)
    assert res.value <= 16.0


@given(st.floats(1.0, 50.0), st.floats(-math.pi, math.pi))
def test_lemma_h_rotation_invariant_and_bounded(a, phase):
    lam = a * complex(math.cos(phase), math.sin(phase))
    v = lemma_h_integral(lam).value
    assert v == pytest.approx(lemma_h_integral(a).value, rel=1e-12)
    assert 0 < v <= 16.0


def test_lemma_h_large_modulus_limit():
    # h(2a/|z - lam|) -> 4 / (1 + log 2)^2 uniformly as a -> infinity
    assert lemma_h_integral(1e6).value == pytest.approx(4 / (1 + math.log(2)) ** 2, rel=1e-5)


def test_lemma_h_rejects_interior():
    with pytest.raises(ValueError):
        lemma_h_integral(0.5)
    with pytest.raises(ValueError):
        lemma_h_integral_mc(0.9j, 10)


@pytest.mark.parametrize("a", [1.5, 2.0, 4.0])
def test_lemma_h_direct_rule_agrees(a):
    assert lemma_h_integral_direct(a * 1j, 1e-9).value == pytest.approx(lemma_h_integral(a).value, abs=1e-7)


@pytest.mark.parametrize("a", [1.0, 1.1, 2.0])
def test_lemma_h_monte_carlo(a):
    mc = lemma_h_integral_mc(a * np.exp(0.7j), 1_000_000, seed=5)
    exact = lemma_h_integral(a).value
    assert abs(mc.value - exact) <= 3 * mc.error_estimate


# --- |F'|^2 ----------------------------------------------------------------------------

REFERENCE_F = [
    ([1.0, -1.0], 1, 0.6619822841),
    ([1.0, -2.0, 1.0], 2, 1.0473320302),
    (list(np.convolve([1.0, -1.0], [1.0, -1j])), 2, 0.9634043816),
    ([1.0, 0.0, -1.0], 2, 0.8912071240),
    ([2.0, 1.0], 1, 0.0894931070),
]


@pytest.mark.parametrize("coeffs,n,expected", REFERENCE_F)
def test_dirichlet_integral_F_reference(coeffs, n, expected):
    res = dirichlet_integral_F(coeffs, n)
    assert res.converged
    assert res.value == pytest.approx(expected, abs=1e-8)
    assert res.value <= 16 * n * n


def test_squaring_symmetry():
    # F for p(z^2) is G(z^2); the two-to-one map doubles the area integral
    a = dirichlet_integral_F([1.0, 0.0, -1.0], 2).value
    b = dirichlet_integral_F([1.0, -1.0], 2).value
    assert a == pytest.approx(2 * b, abs=2e-9)


def test_rotation_of_roots():
    w = np.exp(1.3j)
    a = dirichlet_integral_F([1.0, -1.0], 1).value
    b = dirichlet_integral_F([1.0, -w], 1).value
    assert a == pytest.approx(b, abs=1e-9)


@pytest.mark.parametrize("coeffs,n", [([1.0, -1.0], 1), ([1.0, -2.0, 1.0], 2), ([2.0, 1.0], 1)])
def test_dirichlet_integral_F_monte_carlo(coeffs, n):
    mc = dirichlet_integral_F_mc(coeffs, n, 1_000_000, seed=9)
    q = dirichlet_integral_F(coeffs, n).value
    assert abs(mc.value - q) <= 3 * mc.error_estimate


def test_constant_polynomial_gives_zero():
    assert dirichlet_integral_F([3.0], 0).value == 0.0


def test_F_rejects_bad_input():
    with pytest.raises(InstabilityError) as info:
        dirichlet_integral_F([1.0, -2.0], 1)
    assert info.value.witness == pytest.approx(0.5)
    with pytest.raises(ValueError):
        dirichlet_integral_F([1.0, -1.0, 0.5], 1)


def test_denominator_real_part_at_least_one():
    rng = np.random.default_rng(4)
    r = radial_grid(60)
    theta = np.linspace(-math.pi, math.pi, 181)
    z = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    for deg in range(1, 6):
        for _ in range(5):
            lf = LemmaF(random_stable_coefficients(rng, deg), deg)
            assert np.min(lf.denominator(z).real) >= 1 - 1e-9
    lf = LemmaF([1.0, -2.0, 1.0], 2)
    assert np.min(lf.denominator(z).real) >= 1 - 1e-9


def test_double_root_is_merged():
    lf = LemmaF(np.convolve(np.convolve([1.0, -1.0], [1.0, -1.0]), [1.0, 0.5]), 3)
    mults = sorted(m for _, m in lf.clusters)
    assert mults == [1, 2]
    assert any(abs(c - 1) < 1e-7 and abs(abs(c) - 1) < 1e-15 for c, _ in lf.clusters)


@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_random_stable_bound(seed, deg):
    c = random_stable_coefficients(np.random.default_rng(seed), deg)
    res = dirichlet_integral_F(c, deg)
    assert res.value <= 16 * deg * deg


# --- sampling -------------------------------------------------------------------------

def test_sphere_samples_moments_and_determinism():
    for d in (1, 2, 4):
        z = sphere_samples(d, 4000, seed=3)
        assert np.allclose(np.linalg.norm(z, axis=1), 1.0)
        m = np.mean(np.abs(z[:, 0]) ** 2)
        assert abs(m - 1 / d) <= 3 / math.sqrt(4000)
        assert np.array_equal(z, sphere_samples(d, 4000, seed=3))
    # a prefix of a longer run is the shorter run
    assert np.array_equal(sphere_samples(3, 10, 1), sphere_samples(3, 20, 1)[:10])


def test_radial_grid():
    r = radial_grid(4)
    assert np.allclose(r[:3], [0.25, 0.5, 0.75]) and r[-1] == R_MAX < 1.0


# --- sphere averages ---------------------------------------------------------------

def test_slice_besov_linear():
    p = TruncatedSeries.from_terms(2, None, {(0, 0): 1.0, (1, 0): -1.0})
    res = slice_besov_integral(p, 1, SampleConfig(40, 10, 0))
    assert 0 < res.value <= 16.0
    assert res.error_estimate < 0.1
    # every slice lies below the one through the boundary zero
    assert res.value < dirichlet_integral_F([1.0, -1.0], 1).value


def test_slice_besov_detects_instability():
    p = TruncatedSeries.from_terms(2, None, {(0, 0): 1.0, (1, 0): -3.0})
    with pytest.raises(InstabilityError):
        slice_besov_integral(p, 1, SampleConfig(5, 10, 0))
