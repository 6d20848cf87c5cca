"""Admissible radial measures and the weight sequence they induce.

For a measure ``mu`` on ``[0, 1]`` and dimension ``d`` the weight attached to
the homogeneous part of degree ``n`` is::

    omega_n = n! (d-1)! / (n+d-1)! * integral r^(2n) dmu(r)

The first factor is ``||f_n||^2`` on the sphere divided by ``||f_n||^2`` in the
Drury-Arveson space; the second is the ``2n``-th radial moment of ``mu``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from scipy.special import betaln

__all__ = ["RadialMeasure", "WeightSequence", "moment", "omega", "omega_exact", "sphere_ratio", "parse_measure"]

MONOTONE_CHECK = 64

_KINDS = ("point_mass_at_1", "normalized_lebesgue", "power_weight", "custom_moments")


@dataclass(frozen=True)
class RadialMeasure:
    """A rotation-invariant measure described by its radial part.

    ``point_mass_at_1`` gives the sphere measure (``mass`` times sigma),
    ``normalized_lebesgue`` is ``2r dr`` (normalized volume), ``power_weight``
    is ``(1-r^2)^beta 2r dr`` rescaled to total mass one, and
    ``custom_moments`` takes the moments ``m(n) = int r^(2n) dmu`` directly,
    either as a sequence or a callable.
    """

    kind: str
    mass: float = 1.0
    beta: float = 0.0
    moments: Sequence[float] | Callable[[int], float] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown measure kind {self.kind!r}")
        if self.kind == "point_mass_at_1" and not self.mass > 0:
            raise ValueError("point mass must be positive")
        if self.kind == "power_weight" and not self.beta > -1:
            raise ValueError("power weight needs beta > -1")
        if self.kind == "custom_moments":
            if self.moments is None:
                raise ValueError("custom_moments needs a moment table or function")
            vals = [self._raw_moment(n) for n in range(MONOTONE_CHECK)
                    if callable(self.moments) or n < len(self.moments)]
            if any(v <= 0 for v in vals):
                raise ValueError("moments must be positive")
            if any(b > a for a, b in zip(vals, vals[1:])):
                raise ValueError("moments must be non-increasing")

    @classmethod
    def sigma(cls, mass: float = 1.0) -> "RadialMeasure":
        return cls("point_mass_at_1", mass=mass)

    @classmethod
    def lebesgue(cls) -> "RadialMeasure":
        return cls("normalized_lebesgue")

    @classmethod
    def power(cls, beta: float) -> "RadialMeasure":
        return cls("power_weight", beta=beta)

    @classmethod
    def from_moments(cls, moments) -> "RadialMeasure":
        if not callable(moments):
            moments = tuple(float(m) for m in moments)
        return cls("custom_moments", moments=moments)

    def _raw_moment(self, n: int) -> float:
        if callable(self.moments):
            return float(self.moments(n))
        if n >= len(self.moments):
            raise ValueError(f"moment table has only {len(self.moments)} entries, need index {n}")
        return float(self.moments[n])

    @property
    def total_mass(self) -> float:
        return moment(self, 0)

    def describe(self) -> str:
        if self.kind == "point_mass_at_1":
            return "sigma" if self.mass == 1 else f"sigma:mass={self.mass}"
        if self.kind == "normalized_lebesgue":
            return "lebesgue"
        if self.kind == "power_weight":
            return f"power:beta={self.beta}"
        return "moments"


def _exact_moment(mu: RadialMeasure, n: int):
    if mu.kind == "point_mass_at_1" and float(mu.mass).is_integer():
        return Fraction(int(mu.mass))
    if mu.kind == "normalized_lebesgue":
        return Fraction(1, n + 1)
    return None


def moment(mu: RadialMeasure, n: int) -> float:
    """``int_[0,1] r^(2n) dmu(r)``."""
    if n < 0:
        raise ValueError("moment index must be >= 0")
    if mu.kind == "point_mass_at_1":
        return float(mu.mass)
    if mu.kind == "normalized_lebesgue":
        return 1.0 / (n + 1)
    if mu.kind == "power_weight":
        # int_0^1 s^n (1-s)^beta ds / int_0^1 (1-s)^beta ds
        return math.exp(betaln(n + 1, mu.beta + 1) - betaln(1, mu.beta + 1))
    return mu._raw_moment(n)


@lru_cache(maxsize=None)
def _sphere_ratio(n: int, d: int) -> Fraction:
    """``n!(d-1)!/(n+d-1)!`` as an exact fraction."""
    return Fraction(1, math.comb(n + d - 1, d - 1))


def sphere_ratio(n: int, d: int) -> float:
    """``||f_n||^2_{H^2(sphere)} / ||f_n||^2_{H^2_d}`` for degree-n homogeneous f_n."""
    if n < 0:
        raise ValueError("degree must be >= 0")
    if n + d < 1000:
        return float(_sphere_ratio(n, d))
    return math.exp(math.lgamma(n + 1) + math.lgamma(d) - math.lgamma(n + d))


class WeightSequence:
    """Cached ``omega_n`` for a dimension and a radial measure."""

    def __init__(self, dimension: int, measure: RadialMeasure):
        if dimension < 1:
            raise ValueError("dimension must be >= 1")
        self.dimension = dimension
        self.measure = measure
        self._cache: dict[int, float] = {}

    def __call__(self, n: int) -> float:
        return omega(self, n)

    def __repr__(self) -> str:
        return f"WeightSequence(d={self.dimension}, measure={self.measure.describe()})"


def omega_exact(w: WeightSequence, n: int) -> Fraction | None:
    """``omega_n`` as an exact fraction when the moment is rational, else ``None``."""
    if n < 0:
        raise ValueError("weight index must be >= 0")
    m = _exact_moment(w.measure, n)
    return None if m is None else _sphere_ratio(n, w.dimension) * m


def omega(w: WeightSequence, n: int) -> float:
    if n < 0:
        raise ValueError("weight index must be >= 0")
    hit = w._cache.get(n)
    if hit is not None:
        return hit
    d = w.dimension
    exact = _exact_moment(w.measure, n)
    if exact is not None and n + d < 1000:
        val = float(_sphere_ratio(n, d) * exact)
    else:
        val = sphere_ratio(n, d) * moment(w.measure, n)
    w._cache[n] = val
    return val


def parse_measure(text: str) -> RadialMeasure:
    """Parse ``sigma``, ``lebesgue``, ``power:beta=<x>`` or ``moments:<path>``."""
    text = text.strip()
    if text == "sigma":
        return RadialMeasure.sigma()
    if text == "lebesgue":
        return RadialMeasure.lebesgue()
    if text.startswith("power:"):
        key, _, val = text[len("power:"):].partition("=")
        if key.strip() != "beta" or not val:
            raise ValueError(f"bad power measure {text!r}; expected power:beta=<x>")
        return RadialMeasure.power(float(val))
    if text.startswith("moments:"):
        with open(text[len("moments:"):]) as fh:
            table = json.load(fh)
        if not isinstance(table, list):
            raise ValueError("moment file must hold a JSON array")
        return RadialMeasure.from_moments(table)
    raise ValueError(f"unknown measure {text!r}")
