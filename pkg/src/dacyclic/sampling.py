"""Seeded sample sets on the unit sphere and along radii of the ball."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["SampleConfig", "sphere_samples", "radial_grid", "direction_rng"]

# Outermost radius sampled; boundary zeros of stable polynomials sit at r = 1.
R_MAX = 1.0 - 1e-9


@dataclass(frozen=True)
class SampleConfig:
    sphere_samples: int = 200
    radial_grid: int = 50
    rng_seed: int = 0

    def __post_init__(self):
        if self.sphere_samples < 1 or self.radial_grid < 1:
            raise ValueError("sample counts must be >= 1")

    def as_dict(self) -> dict:
        return {"sphere_samples": self.sphere_samples, "radial_grid": self.radial_grid,
                "rng_seed": self.rng_seed}


def direction_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for one direction, so chunked runs agree with serial ones."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def sphere_samples(d: int, count: int, seed: int = 0) -> np.ndarray:
    """``count`` points on the unit sphere of ``C^d``, shape ``(count, d)``.

    Each point is a normalized standard complex Gaussian vector, which is
    distributed according to the rotation-invariant measure sigma.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    out = np.empty((count, d), dtype=complex)
    for i in range(count):
        g = direction_rng(seed, i).standard_normal(2 * d)
        v = g[:d] + 1j * g[d:]
        out[i] = v / np.linalg.norm(v)
    return out


def radial_grid(count: int) -> np.ndarray:
    """``count`` radii in ``(0, 1)``: ``k/count`` for ``k < count``, then ``R_MAX``."""
    r = np.arange(1, count + 1, dtype=float) / count
    r[-1] = R_MAX
    return r
