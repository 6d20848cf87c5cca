"""Stable polynomials, the iterated-logarithm ladder and sampled estimates.

A polynomial on the ball of ``C^d`` is *stable* when it has no zeros in the
open ball.  Stability is checked by slicing: along a direction ``zeta`` on
the sphere, ``p(lambda zeta)`` is a one-variable polynomial whose roots are
found with :func:`numpy.roots` (eigenvalues of the companion matrix).

The ladder is ``G_1(w) = w`` and ``G_{k+1}(w) = log(1 + G_k(w))``, applied
to ``w = log(1/f)``.  Every logarithm is solved as a graded series, so only
the constant term depends on the branch, and the principal branch is taken
at the origin.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchError, InstabilityError
from .sampling import SampleConfig, radial_grid, sphere_samples
from .series import TruncatedSeries, log_series, ray_values, reciprocal, slice_coefficients

__all__ = [
    "STABILITY_TOL",
    "StablePolynomial",
    "StabilityEvidence",
    "normalize_stable",
    "iterated_log",
    "bounded_argument_estimate",
    "argument_along_ray",
    "sup_norm_estimate",
    "slice",
    "stability_check",
    "slice_roots",
    "random_stable_coefficients",
    "random_stable_polynomial",
]

STABILITY_TOL = 1e-9
UNIT_TOL = 1e-12


@dataclass(frozen=True)
class StabilityEvidence:
    """Smallest slice-root modulus seen over the sampled directions."""

    min_root_modulus: float
    stable: bool
    directions: int
    witness_direction: tuple | None = None
    witness_root: complex | None = None
    tolerance: float = STABILITY_TOL

    @property
    def witness_point(self):
        """``root * direction``: a zero of ``p`` (inside the ball when unstable)."""
        if self.witness_direction is None or self.witness_root is None:
            return None
        return tuple(complex(self.witness_root * z) for z in self.witness_direction)

    def as_dict(self) -> dict:
        point = self.witness_point
        return {
            "min_root_modulus": None if math.isinf(self.min_root_modulus) else self.min_root_modulus,
            "stable": self.stable,
            "directions": self.directions,
            "tolerance": self.tolerance,
            "witness_point": None if point is None else [[z.real, z.imag] for z in point],
        }


@dataclass(frozen=True)
class StablePolynomial:
    """A polynomial together with the degree ``n`` used in the normalizations.

    ``base`` is stored with its cap equal to its total degree.  The optional
    ``stability_evidence`` is whatever :func:`stability_check` returned.
    """

    base: TruncatedSeries
    declared_degree: int
    stability_evidence: StabilityEvidence | None = None

    def __post_init__(self):
        deg = self.base.degree
        if deg < 0 or self.base.constant_term == 0:
            raise ValueError("a stable polynomial needs p(0) != 0")
        if self.base.cap != deg:
            object.__setattr__(self, "base", self.base.truncate(deg))
        if self.declared_degree < deg:
            raise ValueError(f"declared degree {self.declared_degree} is below the total degree {deg}")

    @classmethod
    def from_series(cls, base: TruncatedSeries, degree: int | None = None) -> "StablePolynomial":
        return cls(base, base.degree if degree is None else int(degree))

    @property
    def dimension(self) -> int:
        return self.base.dimension

    def with_evidence(self, evidence: StabilityEvidence) -> "StablePolynomial":
        return StablePolynomial(self.base, self.declared_degree, evidence)


def _as_series(p) -> TruncatedSeries:
    return p.base if isinstance(p, StablePolynomial) else p


def normalize_stable(p: StablePolynomial) -> TruncatedSeries:
    """``q = p / (2^n p(0))``, which has ``q(0) = 2^-n`` and ``|q| <= 1`` on the ball."""
    c0 = p.base.constant_term
    if c0 == 0:
        raise ValueError("p(0) must be nonzero")
    return p.base * (1.0 / (2.0**p.declared_degree * c0))


def iterated_log(f: TruncatedSeries, n: int) -> TruncatedSeries:
    """``G_n(log(1/f))`` through the cap of ``f``.

    Level 1 is ``log(1/f)``; level ``k+1`` is ``log(1 + level k)``.  Raises
    :class:`BranchError` when ``1 + F_k(0)`` lies on ``(-inf, 0]``.
    """
    if n < 1:
        raise ValueError("ladder level must be >= 1")
    if f.constant_term == 0:
        raise ValueError("f(0) must be nonzero")
    F = log_series(reciprocal(f))
    for k in range(1, n):
        c = 1.0 + F.constant_term
        if c.imag == 0 and c.real <= 0:
            raise BranchError(k, c)
        F = log_series(F + 1.0)
    return F


# ---------------------------------------------------------------------------
# slicing and roots
# ---------------------------------------------------------------------------

def slice(f: TruncatedSeries, direction) -> TruncatedSeries:  # noqa: A001 - domain name
    """The one-variable series ``lambda -> f(lambda * zeta)`` for a unit ``zeta``."""
    zeta = np.asarray(direction, dtype=complex).ravel()
    if zeta.size != f.dimension:
        raise ValueError("direction dimension mismatch")
    if abs(np.linalg.norm(zeta) - 1.0) > UNIT_TOL:
        raise ValueError(f"direction has norm {np.linalg.norm(zeta)!r}, expected 1")
    coeffs = slice_coefficients(f, zeta[None, :])[0]
    return TruncatedSeries.univariate(coeffs, f.cap)


def slice_roots(coeffs) -> np.ndarray:
    """Roots of ``sum_k coeffs[k] lambda^k`` (ascending coefficients)."""
    c = np.asarray(coeffs, dtype=complex)
    nz = np.nonzero(np.abs(c) > 0)[0]
    if nz.size == 0:
        raise ValueError("zero polynomial")
    c = c[: nz[-1] + 1]
    if c.size == 1:
        return np.zeros(0, dtype=complex)
    return np.roots(c[::-1])


def stability_check(p, cfg: SampleConfig | None = None) -> StabilityEvidence:
    """Minimum slice-root modulus over the sampled directions.

    In one variable every direction gives the same root moduli, so a single
    slice is used.  The verdict is ``stable`` iff the minimum is at least
    ``1 - 1e-9``; zeros on the unit sphere are allowed.
    """
    base = _as_series(p)
    if base.degree < 0:
        raise ValueError("zero polynomial")
    cfg = cfg or SampleConfig()
    count = 1 if base.dimension == 1 else cfg.sphere_samples
    zeta = sphere_samples(base.dimension, count, cfg.rng_seed)
    if base.dimension == 1:
        zeta = np.ones((1, 1), dtype=complex)
    coeffs = slice_coefficients(base, zeta)
    best = math.inf
    wit_dir = wit_root = None
    for z, c in zip(zeta, coeffs):
        roots = slice_roots(c)
        if roots.size == 0:
            continue
        i = int(np.argmin(np.abs(roots)))
        if abs(roots[i]) < best:
            best = float(abs(roots[i]))
            wit_dir, wit_root = tuple(complex(v) for v in z), complex(roots[i])
    return StabilityEvidence(best, best >= 1.0 - STABILITY_TOL, count, wit_dir, wit_root)


# ---------------------------------------------------------------------------
# argument and sup-norm estimates
# ---------------------------------------------------------------------------

def _horner(c: np.ndarray, r):
    out = np.zeros(np.shape(r), dtype=complex)
    for a in c[::-1]:
        out = out * r + a
    return out


def argument_along_ray(coeffs, radii, refine: int = 8, max_halvings: int = 60) -> np.ndarray:
    """Continuous ``Im log(p(r) / p(0))`` at the given increasing radii.

    ``coeffs`` are the ascending coefficients of a slice ``p(lambda zeta)``.
    The segment ``[0, radii[-1]]`` is walked in steps that are halved until
    every step changes the argument by less than ``pi/2``.  A zero on the
    segment raises :class:`InstabilityError` with the radius as witness.
    """
    c = np.asarray(coeffs, dtype=complex)
    radii = np.asarray(radii, dtype=float)
    knots = np.concatenate([[0.0], radii])
    # base mesh: each knot interval split into ``refine`` steps
    t = np.linspace(0.0, 1.0, refine + 1)[:-1]
    mesh = np.concatenate([lo + (hi - lo) * t for lo, hi in zip(knots[:-1], knots[1:])] + [[knots[-1]]])
    vals = _horner(c, mesh)
    scale = np.max(np.abs(c))
    zero = np.abs(vals) <= 1e-300 + 1e-15 * scale
    if zero.any():
        raise InstabilityError("slice vanishes on the segment", witness=float(mesh[np.argmax(zero)]))
    steps = np.angle(vals[1:] / vals[:-1])
    bad = np.nonzero(np.abs(steps) >= np.pi / 2)[0]
    for i in bad:
        steps[i] = _refined_step(c, mesh[i], mesh[i + 1], vals[i], vals[i + 1], max_halvings, scale)
    total = np.concatenate([[0.0], np.cumsum(steps)])
    idx = np.arange(1, knots.size) * refine
    return total[idx]


def _refined_step(c, a, b, va, vb, depth, scale) -> float:
    step = np.angle(vb / va)
    if abs(step) < np.pi / 2:
        return float(step)
    if depth == 0:
        raise InstabilityError("argument does not settle under step halving; zero on the segment",
                               witness=float(0.5 * (a + b)))
    m = 0.5 * (a + b)
    vm = complex(_horner(c, m))
    if abs(vm) <= 1e-300 + 1e-15 * scale:
        raise InstabilityError("slice vanishes on the segment", witness=float(m))
    return (_refined_step(c, a, m, va, vm, depth - 1, scale)
            + _refined_step(c, m, b, vm, vb, depth - 1, scale))


def bounded_argument_estimate(p, cfg: SampleConfig | None = None) -> float:
    """``max |Im(log p(z) - log p(0))|`` over ``z = r zeta`` on the sample grid."""
    base = _as_series(p)
    if base.constant_term == 0:
        raise ValueError("p(0) must be nonzero")
    cfg = cfg or SampleConfig()
    zeta = sphere_samples(base.dimension, cfg.sphere_samples, cfg.rng_seed)
    r = radial_grid(cfg.radial_grid)
    coeffs = slice_coefficients(base, zeta)
    best = 0.0
    for z, c in zip(zeta, coeffs):
        try:
            arg = argument_along_ray(c, r)
        except InstabilityError as exc:
            raise InstabilityError(str(exc), witness=tuple(complex(exc.witness * v) for v in z)) from exc
        best = max(best, float(np.max(np.abs(arg))))
    return best


def sup_norm_estimate(f: TruncatedSeries, cfg: SampleConfig | None = None) -> float:
    """``max |f|`` over the sample grid: a lower bound for the sup norm."""
    cfg = cfg or SampleConfig()
    zeta = sphere_samples(f.dimension, cfg.sphere_samples, cfg.rng_seed)
    r = radial_grid(cfg.radial_grid)
    return float(np.max(np.abs(ray_values(f, zeta, r))))


# ---------------------------------------------------------------------------
# random stable polynomials
# ---------------------------------------------------------------------------

def random_stable_coefficients(rng: np.random.Generator, degree: int) -> np.ndarray:
    """Ascending coefficients of ``prod_j (1 - z / lambda_j)``.

    The roots have modulus ``1 + |N(0, 1)|`` and uniform phase, so the
    polynomial is stable with ``p(0) = 1``.
    """
    mod = 1.0 + np.abs(rng.standard_normal(degree))
    lam = mod * np.exp(2j * np.pi * rng.random(degree))
    c = np.array([1.0 + 0j])
    for root in lam:
        c = np.convolve(c, [1.0, -1.0 / root])
    return c


def random_stable_polynomial(rng: np.random.Generator, degree: int) -> StablePolynomial:
    c = random_stable_coefficients(rng, degree)
    return StablePolynomial(TruncatedSeries.univariate(c), degree)
