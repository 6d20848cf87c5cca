"""Norms on spaces of analytic functions on the ball, and tail diagnostics.

Two families are supported.

* The Drury-Arveson space ``H^2_d``, with the coefficient norm
  ``sum_alpha alpha!/|alpha|! |c_alpha|^2``.
* Radially weighted Besov spaces ``B^N_omega``, where ``omega = mu x sigma``
  for a radial measure ``mu``.  With ``f = sum_n f_n`` split into
  homogeneous parts::

      ||f||^2 = omega(B_d) |f(0)|^2 + sum_{n>=1} n^(2N) omega_n ||f_n||^2_{H^2_d}

  and ``omega_n`` comes from :mod:`dacyclic.weights`.

The classical Dirichlet space is the case ``d = 1``, ``mu = delta_1`` and
``N = 1/2``: then the degree-n increment is ``n |c_n|^2``, which is the
coefficient form of ``|f(0)|^2 + int_D |f'|^2 dA/pi``.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .quadrature import QuadResult, disk_integral
from .sampling import SampleConfig, radial_grid, sphere_samples
from .series import HomogeneousPart, TruncatedSeries, radial_derivative, ray_values
from .weights import RadialMeasure, WeightSequence, omega, parse_measure, sphere_ratio

__all__ = [
    "SpaceSpec",
    "parse_space",
    "h2d_weight",
    "degree_norms_sq",
    "h2d_norm_sq",
    "hardy_sphere_norm_sq",
    "besov_norm_sq",
    "dirichlet_norm_sq_integral",
    "TailProfile",
    "tail_profile",
    "decay_verdict",
    "bloch_seminorm_estimate",
]

CONSISTENT = "consistent-with-membership"
DIVERGING = "diverging"
INCONCLUSIVE = "inconclusive"

# log-log slope thresholds for the verdict (policy, not theory)
SLOPE_CONSISTENT = -1.05
SLOPE_DIVERGING = -0.95


@dataclass(frozen=True)
class SpaceSpec:
    """Which norm to use: ``kind`` is ``"h2d"`` or ``"besov"``.

    For ``"h2d"`` only ``dimension`` matters.  For ``"besov"`` the order
    ``N`` may be any real number ``>= 0``.
    """

    kind: str
    dimension: int
    order: float = 0.0
    measure: RadialMeasure = field(default_factory=RadialMeasure.sigma)
    label: str = ""

    def __post_init__(self):
        if self.kind not in ("h2d", "besov"):
            raise ValueError(f"unknown space kind {self.kind!r}")
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        if self.order < 0:
            raise ValueError("order must be >= 0")
        if not self.label:
            object.__setattr__(self, "label", self._default_label())

    def _default_label(self) -> str:
        if self.kind == "h2d":
            return f"h2d:d={self.dimension}"
        return f"besov:d={self.dimension},N={self.order:g},measure={self.measure.describe()}"

    @classmethod
    def h2d(cls, d: int) -> "SpaceSpec":
        return cls("h2d", d)

    @classmethod
    def dirichlet(cls) -> "SpaceSpec":
        return cls("besov", 1, 0.5, RadialMeasure.sigma(), "dirichlet")

    @classmethod
    def besov(cls, d: int, order: float, measure: RadialMeasure | None = None) -> "SpaceSpec":
        return cls("besov", d, float(order), measure or RadialMeasure.sigma())

    @classmethod
    def b1v_ball2(cls) -> "SpaceSpec":
        """``B^1_V`` on the ball of ``C^2`` (normalized volume measure)."""
        return cls("besov", 2, 1.0, RadialMeasure.lebesgue())

    @property
    def weights(self) -> WeightSequence:
        return WeightSequence(self.dimension, self.measure)

    def degree_weights(self, cap: int) -> np.ndarray:
        """Factor multiplying ``||f_n||^2_{H^2_d}`` for ``n = 0..cap``."""
        if self.kind == "h2d":
            return np.ones(cap + 1)
        w = self.weights
        out = np.empty(cap + 1)
        out[0] = omega(w, 0)
        for n in range(1, cap + 1):
            out[n] = float(n) ** (2 * self.order) * omega(w, n)
        return out


def parse_space(text: str) -> SpaceSpec:
    """Parse ``h2d:d=<d>``, ``dirichlet``, ``bv`` or ``besov:d=<d>,N=<N>,measure=<m>``.

    ``bv`` is shorthand for ``besov:d=2,N=1,measure=lebesgue``.  The
    measure string is the last field and may itself contain ``=`` (for
    example ``measure=power:beta=0.5``).
    """
    text = text.strip()
    if text == "dirichlet":
        return SpaceSpec.dirichlet()
    if text == "bv":
        return SpaceSpec.b1v_ball2()
    kind, sep, rest = text.partition(":")
    if not sep:
        raise ValueError(f"cannot parse space {text!r}")
    fields = {}
    if kind == "besov" and "measure=" in rest:
        head, _, meas = rest.partition("measure=")
        fields["measure"] = meas
        rest = head.rstrip(",")
    for part in filter(None, rest.split(",")):
        key, eq, val = part.partition("=")
        if not eq:
            raise ValueError(f"bad field {part!r} in space {text!r}")
        fields[key.strip()] = val.strip()
    try:
        d = int(fields.pop("d"))
    except KeyError:
        raise ValueError(f"space {text!r} needs d=<dimension>") from None
    if kind == "h2d":
        if fields:
            raise ValueError(f"unexpected fields {sorted(fields)} for h2d")
        return SpaceSpec.h2d(d)
    if kind == "besov":
        order = float(fields.pop("N", 0.0))
        measure = parse_measure(fields.pop("measure", "sigma"))
        if fields:
            raise ValueError(f"unexpected fields {sorted(fields)} for besov")
        return SpaceSpec.besov(d, order, measure)
    raise ValueError(f"unknown space kind {kind!r}")


# ---------------------------------------------------------------------------
# coefficient norms
# ---------------------------------------------------------------------------

def h2d_weight(exps: np.ndarray) -> np.ndarray:
    """``alpha!/|alpha|!`` for each exponent row, i.e. one over the multinomial.

    Small degrees use exact integer multinomials; large ones go through
    log-gamma.
    """
    exps = np.atleast_2d(np.asarray(exps, dtype=np.int64))
    deg = exps.sum(axis=1)
    out = np.empty(exps.shape[0])
    for i, (row, n) in enumerate(zip(exps, deg)):
        if n <= 150:
            multinomial = 1
            left = int(n)
            for a in row:
                multinomial *= math.comb(left, int(a))
                left -= int(a)
            out[i] = 1.0 / multinomial
        else:
            out[i] = math.exp(sum(math.lgamma(a + 1) for a in row) - math.lgamma(n + 1))
    return out


def degree_norms_sq(f: TruncatedSeries) -> np.ndarray:
    """``||f_n||^2_{H^2_d}`` for every degree ``n = 0..cap``."""
    out = np.zeros(f.cap + 1)
    for n, (e, c) in enumerate(f.blocks):
        if c.size:
            out[n] = float(np.dot(h2d_weight(e), np.abs(c) ** 2))
    return out


def h2d_norm_sq(f: TruncatedSeries) -> float:
    """Drury-Arveson norm squared of the truncation."""
    return float(degree_norms_sq(f).sum())


def hardy_sphere_norm_sq(p) -> float:
    """``||p||^2`` in ``H^2`` of the sphere for a homogeneous polynomial.

    Uses ``n!(d-1)!/(n+d-1)! * ||p||^2_{H^2_d}``.  Accepts a
    :class:`HomogeneousPart` or a homogeneous :class:`TruncatedSeries`.
    """
    if isinstance(p, HomogeneousPart):
        n, series = p.degree, p.series
    else:
        series = p
        degrees = [k for k, (_, c) in enumerate(series.blocks) if c.size]
        if len(degrees) > 1:
            raise ValueError(f"input is not homogeneous (degrees {degrees})")
        n = degrees[0] if degrees else 0
    return sphere_ratio(n, series.dimension) * h2d_norm_sq(series)


def besov_norm_sq(f: TruncatedSeries, s: SpaceSpec) -> float:
    """Norm squared of the truncation in the space ``s``."""
    if f.dimension != s.dimension:
        raise ValueError(f"series has dimension {f.dimension}, space has {s.dimension}")
    return float(np.dot(s.degree_weights(f.cap), degree_norms_sq(f)))


def dirichlet_norm_sq_integral(f, derivative: Callable | None = None, value_at_0: complex | None = None,
                               tol: float = 1e-10) -> QuadResult:
    """``|f(0)|^2 + int_D |f'|^2 dA/pi`` by quadrature.

    ``f`` is either a one-variable :class:`TruncatedSeries` (its derivative
    is taken exactly) or ``None`` together with an explicit ``derivative``
    callable and ``value_at_0``.
    """
    if isinstance(f, TruncatedSeries):
        if f.dimension != 1:
            raise ValueError("the Dirichlet integral needs a one-variable series")
        c = f.univariate_coefficients()
        dc = c[1:] * np.arange(1, c.size)
        derivative = lambda z: np.polynomial.polynomial.polyval(z, dc) if dc.size else 0 * z  # noqa: E731
        value_at_0 = c[0]
    elif derivative is None or value_at_0 is None:
        raise ValueError("give a series, or both derivative and value_at_0")
    res = disk_integral(lambda z: np.abs(derivative(z)) ** 2, tol)
    return QuadResult(abs(value_at_0) ** 2 + res.value, res.error_estimate, res.evaluations, res.converged)


# ---------------------------------------------------------------------------
# tail profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TailProfile:
    """Partial norms ``s_D`` of the truncations to degree ``D = 0..cap``."""

    space: SpaceSpec
    increments: np.ndarray

    @property
    def partial_norms(self) -> np.ndarray:
        return np.cumsum(self.increments)

    @property
    def degree_cap(self) -> int:
        return self.increments.size - 1

    def slope(self) -> float | None:
        """Least-squares slope of ``log(increment)`` against ``log(D)``.

        Uses the degrees ``D >= max(1, cap/2)`` with a positive increment.
        ``None`` when fewer than two such degrees exist (a flat tail).
        """
        cap = self.degree_cap
        lo = max(1, int(math.ceil(cap / 2)))
        deg = np.arange(lo, cap + 1)
        inc = self.increments[lo:]
        scale = max(float(self.partial_norms[-1]), 1e-300)
        keep = inc > 1e-28 * scale
        if keep.sum() < 2:
            return None
        x = np.log(deg[keep])
        y = np.log(inc[keep])
        return float(np.polyfit(x, y, 1)[0])

    def verdict(self) -> str:
        return decay_verdict(self.slope())

    def rows(self):
        for d, (s, inc) in enumerate(zip(self.partial_norms, self.increments)):
            yield d, float(s), float(inc)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("degree,partial_norm_sq,increment\n")
        for d, s, inc in self.rows():
            buf.write(f"{d},{s:.17g},{inc:.17g}\n")
        return buf.getvalue()

    def as_dict(self) -> dict:
        slope = self.slope()
        return {
            "space": self.space.label,
            "degree_cap": self.degree_cap,
            "norm_sq": float(self.partial_norms[-1]),
            "slope": slope,
            "verdict": self.verdict(),
            "partial_norm_sq": [float(v) for v in self.partial_norms],
            "increment": [float(v) for v in self.increments],
        }


def tail_profile(f: TruncatedSeries, s: SpaceSpec) -> TailProfile:
    if f.dimension != s.dimension:
        raise ValueError(f"series has dimension {f.dimension}, space has {s.dimension}")
    inc = s.degree_weights(f.cap) * degree_norms_sq(f)
    return TailProfile(s, inc)


def decay_verdict(slope: float | None) -> str:
    """Map a tail slope to a verdict string.

    The partial sums converge when increments decay faster than ``1/D``;
    a fitted slope within 0.05 of ``-1`` is called inconclusive.  A flat
    tail (finitely many nonzero terms) is consistent with membership.
    """
    if slope is None or slope < SLOPE_CONSISTENT:
        return CONSISTENT
    if slope > SLOPE_DIVERGING:
        return DIVERGING
    return INCONCLUSIVE


# ---------------------------------------------------------------------------
# Bloch seminorm
# ---------------------------------------------------------------------------

def bloch_seminorm_estimate(f: TruncatedSeries, samples: SampleConfig | None = None) -> float:
    """``max |Rf(z)| (1 - |z|)`` over the radial grid times the sphere samples.

    A lower bound for the Bloch seminorm of the truncation.
    """
    cfg = samples or SampleConfig()
    zeta = sphere_samples(f.dimension, cfg.sphere_samples, cfg.rng_seed)
    r = radial_grid(cfg.radial_grid)
    vals = np.abs(ray_values(radial_derivative(f), zeta, r))
    return float(np.max(vals * (1.0 - r)[None, :]))
