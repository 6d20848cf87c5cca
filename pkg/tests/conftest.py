import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from dacyclic.series import TruncatedSeries

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def poly(d, terms, cap=None):
    """Shorthand: ``poly(2, {(1, 0): 1, (0, 0): 2})``."""
    return TruncatedSeries.from_terms(d, cap, terms)


def brute_product(f, g):
    """Coefficient map of ``f*g`` by the naive double loop."""
    cap = min(f.cap, g.cap)
    out = {}
    for a, x in f.items():
        for b, y in g.items():
            c = tuple(i + j for i, j in zip(a, b))
            if sum(c) <= cap:
                out[c] = out.get(c, 0) + x * y
    return out


def coeff_close(f, expected: dict, tol=1e-12):
    got = f.coefficients()
    keys = set(got) | {tuple(k) for k in expected}
    return all(abs(got.get(k, 0) - expected.get(tuple(k), 0)) <= tol for k in keys)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
