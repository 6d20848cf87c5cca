"""Integration on the disk, the sphere and the ball, with error estimates.

All disk integrals are taken against normalized area ``dA/pi``.

The disk rule is a tensor Gauss-Legendre rule in polar coordinates.  Radial
panels halve in width toward ``r = 1`` and angular panels halve in width
around requested singular angles, so an integrand that blows up at a few
boundary points is sampled on a geometrically graded mesh.

For the two logarithmic singularities that actually occur here (the
integrand of :func:`lemma_h_integral` at ``|lambda| = 1`` and the integrand
of :func:`dirichlet_integral_F` at boundary zeros of ``p``), the remaining
mass within distance ``eps`` of the singular point decays only like
``1/log(1/eps)``, so no amount of mesh refinement reaches a small error.
Both routines therefore treat the singular neighbourhood analytically:

* ``lemma_h_integral``: the integrand depends only on ``|z - lambda|``, so
  the disk integral reduces to a one-dimensional integral over circles
  centred at ``lambda``, which after ``rho = 2|lambda| e^{-t}`` has a
  bounded integrand and an explicit tail.
* ``dirichlet_integral_F``: a box of side ``eps`` at each boundary zero is
  cut out of the mesh and replaced by the integral of the leading-order
  local model ``1 / (rho^2 |C/m + t - i phi|^2)``, which has a closed-form
  radial integral.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import InstabilityError
from .sampling import SampleConfig, sphere_samples
from .series import TruncatedSeries, slice_coefficients

__all__ = [
    "QuadResult",
    "gauss_legendre",
    "adaptive_gauss_legendre",
    "disk_integral",
    "mc_disk_integral",
    "lemma_h",
    "lemma_h_integral",
    "lemma_h_integral_direct",
    "lemma_h_integral_mc",
    "dirichlet_integral_F_mc",
    "LemmaF",
    "dirichlet_integral_F",
    "slice_besov_integral",
    "sphere_samples",
]

STABILITY_TOL = 1e-9
CLUSTER_TOL = 1e-6


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    evaluations: int
    converged: bool

    def as_dict(self) -> dict:
        return {
            "value": float(self.value),
            "error_estimate": float(self.error_estimate),
            "evaluations": int(self.evaluations),
            "converged": bool(self.converged),
        }


@lru_cache(maxsize=64)
def gauss_legendre(order: int):
    """Nodes and weights on ``[-1, 1]``."""
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _panel_nodes(edges: np.ndarray, order: int):
    x, w = gauss_legendre(order)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (0.5 * (hi + lo) + half * x[None, :]).ravel()
    weights = (half * w[None, :]).ravel()
    return nodes, weights


def adaptive_gauss_legendre(f: Callable, a: float, b: float, tol: float = 1e-12,
                            order: int = 10, max_panels: int = 20000) -> QuadResult:
    """Adaptive bisection with an ``order`` / ``2*order`` Gauss-Legendre pair.

    A panel is accepted once the two rules agree to its share of ``tol``;
    the returned estimate is the sum of the ``2*order`` values and the error
    estimate the sum of the accepted disagreements.
    """
    width = b - a
    stack = [(a, b)]
    total = 0.0
    err = 0.0
    evals = 0
    accepted = 0
    converged = True
    while stack:
        lo, hi = stack.pop()
        nodes_lo, w_lo = _panel_nodes(np.array([lo, hi]), order)
        nodes_hi, w_hi = _panel_nodes(np.array([lo, hi]), 2 * order)
        q_lo = float(np.dot(w_lo, f(nodes_lo)))
        q_hi = float(np.dot(w_hi, f(nodes_hi)))
        evals += 3 * order
        diff = abs(q_hi - q_lo)
        share = tol * (hi - lo) / width
        if diff <= share or accepted + len(stack) >= max_panels or hi - lo < 1e-14 * width:
            if diff > share:
                converged = False
            total += q_hi
            err += diff
            accepted += 1
        else:
            mid = 0.5 * (lo + hi)
            stack.append((mid, hi))
            stack.append((lo, mid))
    return QuadResult(total, err, evals, converged and err <= tol)


# ---------------------------------------------------------------------------
# disk rule
# ---------------------------------------------------------------------------

def _wrap(theta):
    return (np.asarray(theta) + np.pi) % (2 * np.pi) - np.pi


def _radial_edges(depth: int) -> np.ndarray:
    inner = 1.0 - 0.5 ** np.arange(1, depth + 1)
    return np.concatenate([[0.0], inner, [1.0]])


def _angular_edges(singular: Sequence[tuple[float, int]], base: int) -> np.ndarray:
    edges = list(np.linspace(-np.pi, np.pi, base + 1))
    for theta, depth in singular:
        edges.append(float(_wrap(theta)))
        for j in range(1, depth + 1):
            for s in (-1.0, 1.0):
                edges.append(float(_wrap(theta + s * 0.5**j)))
    edges = np.unique(np.asarray(edges))
    keep = np.concatenate([[True], np.diff(edges) > 1e-15])
    edges = edges[keep]
    edges[0], edges[-1] = -np.pi, np.pi
    return edges


def polar_grid_integral(g: Callable, r_edges: np.ndarray, t_edges: np.ndarray,
                        order: int, skip: Sequence[tuple[int, int]] = ()):
    """Tensor Gauss-Legendre value of ``int g dA/pi`` over the listed cells.

    ``skip`` holds ``(radial_panel, angular_panel)`` cells left out.
    Returns ``(value, evaluations)``.
    """
    r, rw = _panel_nodes(r_edges, order)
    t, tw = _panel_nodes(t_edges, order)
    z = r[:, None] * np.exp(1j * t)[None, :]
    w = (rw * r)[:, None] * tw[None, :]
    if skip:
        w = w.copy()
        for i, j in skip:
            w[i * order:(i + 1) * order, j * order:(j + 1) * order] = 0.0
    vals = np.asarray(g(z), dtype=float)
    return float(np.sum(w * vals)) / np.pi, z.size


def disk_integral(g: Callable, tol: float = 1e-10, singular_angles: Sequence[float] = (),
                  order: int = 16, base_panels: int = 8, start_depth: int = 2,
                  max_depth: int = 40) -> QuadResult:
    """``int_D g dA/pi`` with dyadic refinement toward ``r = 1``.

    ``g`` takes an array of complex points and returns real values.  At each
    level the radial panels and the angular panels around
    ``singular_angles`` are refined once more; the error estimate is the
    change between successive levels.  ``converged`` is false if the change
    is still above ``tol`` at ``max_depth``.
    """
    prev = None
    evals = 0
    for depth in range(start_depth, max_depth + 1):
        t_edges = _angular_edges([(a, depth) for a in singular_angles], base_panels)
        val, n = polar_grid_integral(g, _radial_edges(depth), t_edges, order)
        evals += n
        if prev is not None:
            err = abs(val - prev)
            if err <= tol:
                return QuadResult(val, err, evals, True)
        prev = val
    return QuadResult(prev, err, evals, False)


def mc_disk_integral(g: Callable, n_points: int = 1_000_000, seed: int = 0,
                     singular_points: Sequence[complex] = (), local: Callable | None = None,
                     batch: int = 250_000) -> QuadResult:
    """Monte Carlo estimate of ``int_D g dA/pi``.

    Without ``singular_points`` this is plain uniform rejection sampling on
    the disk.  With them, half of the points are drawn near the listed
    points: around ``s_k`` the offset is ``2 e^{-t} e^{i theta}`` with ``t``
    of density ``(1+t)^-2``, and every sample is weighted by the mixture
    density.  This keeps the variance finite for integrands behaving like
    ``1 / (|z-s|^2 log^2 |z-s|)``.

    Offsets below double-precision resolution of ``s_k + w`` still carry
    mass of order ``1/t``, so near-point samples are evaluated through
    ``local(k, t, theta)``, which must return ``|w|^2 g(s_k + w)`` computed
    from ``(t, theta)`` directly.  Without ``local``, ``g`` is called at
    ``s_k + w`` (adequate only when ``g`` is bounded).

    ``error_estimate`` is one standard error.
    """
    rng = np.random.default_rng(seed)
    sing = np.asarray(list(singular_points), dtype=complex)
    k = sing.size
    p_uni = 1.0 if k == 0 else 0.5
    sums = 0.0
    sq = 0.0
    done = 0
    while done < n_points:
        m = min(batch, n_points - done)
        n_uni = m if k == 0 else int(rng.binomial(m, p_uni))
        z = _uniform_disk(rng, n_uni)
        vals = np.asarray(g(z), dtype=float)
        if k:
            dens = p_uni / np.pi + _singular_density(z, sing, 1.0 - p_uni)
            est = vals / (np.pi * dens)
        else:
            est = vals
        sums += est.sum()
        sq += np.dot(est, est)
        if k:
            n_s = m - n_uni
            which = rng.integers(0, k, size=n_s)
            t = 1.0 / (1.0 - rng.random(n_s)) - 1.0
            theta = rng.uniform(-np.pi, np.pi, n_s)
            for j in range(k):
                sel = which == j
                tj, thj = t[sel], theta[sel]
                s = sing[j]
                unit = np.exp(1j * thj)
                # |s + w| < 1  <=>  2 Re(conj(s) e^{i theta}) + rho < (1 - |s|^2) / rho
                with np.errstate(over="ignore"):
                    gap = (1.0 - abs(s) ** 2) * np.exp(tj - math.log(2.0)) if abs(s) != 1 else 0.0
                rho = 2.0 * np.exp(-tj)
                inside = 2.0 * np.real(np.conj(s) * unit) + rho < gap
                scaled = np.zeros(tj.size)
                if inside.any():
                    if local is not None:
                        scaled[inside] = local(j, tj[inside], thj[inside])
                    else:
                        zz = s + rho[inside] * unit[inside]
                        scaled[inside] = rho[inside] ** 2 * np.asarray(g(zz), dtype=float)
                # rho^2 times the mixture density at these points
                own = (1.0 - p_uni) / k / (2 * np.pi * (1.0 + tj) ** 2)
                rest = p_uni * rho**2 / np.pi
                for i2 in range(k):
                    if i2 != j:
                        zz = s + rho * unit
                        rest = rest + rho**2 * _singular_density(zz, sing[i2:i2 + 1], (1.0 - p_uni) / k)
                est = scaled / (np.pi * (own + rest))
                sums += est.sum()
                sq += np.dot(est, est)
        done += m
    mean = sums / n_points
    var = max(sq / n_points - mean**2, 0.0)
    return QuadResult(float(mean), math.sqrt(var / n_points), n_points, True)


def _singular_density(z, sing, mass):
    out = np.zeros(np.shape(z))
    for s in sing:
        rho = np.abs(z - s)
        ok = (rho <= 2.0) & (rho > 0)
        safe = np.where(ok, rho, 1.0)
        t = np.log(2.0 / safe)
        out += np.where(ok, mass / len(sing) / (2 * np.pi * safe**2 * (1 + t) ** 2), 0.0)
    return out


def _uniform_disk(rng: np.random.Generator, n: int) -> np.ndarray:
    out = np.empty(0, dtype=complex)
    while out.size < n:
        need = n - out.size
        cand = rng.uniform(-1, 1, int(need * 1.3) + 16) + 1j * rng.uniform(-1, 1, int(need * 1.3) + 16)
        out = np.concatenate([out, cand[np.abs(cand) < 1.0]])
    return out[:n]


# ---------------------------------------------------------------------------
# x^2 / (1 + log x)^2 against the disk
# ---------------------------------------------------------------------------

def lemma_h(x):
    """``h(x) = x^2 / (1 + log x)^2`` for ``x >= 1``."""
    x = np.asarray(x, dtype=float)
    return x**2 / (1.0 + np.log(x)) ** 2


def _arc_length(a: float, rho):
    """Angle of the circle ``|z - a| = rho`` (``a >= 1``) lying inside the disk."""
    c = (1.0 - a * a - rho * rho) / (2.0 * a * rho)
    return 2.0 * (np.pi - np.arccos(np.clip(c, -1.0, 1.0)))


def lemma_h_integral(lam: complex, tol: float = 1e-10) -> QuadResult:
    """``int_D h(2|lam| / |z - lam|) dA(z)/pi`` for ``|lam| >= 1``.

    Integrating over circles about ``lam`` and substituting
    ``rho = 2a e^{-t}`` (``a = |lam|``) gives::

        (4 a^2 / pi) int arc(2a e^{-t}) / (1 + t)^2 dt,
        t in [log(2a/(a+1)), log(2a/(a-1))]

    with a bounded integrand.  For ``a = 1`` the upper limit is infinite and
    the arc tends to ``pi``; that constant part is integrated exactly.
    The value depends only on ``|lam|``.
    """
    a = abs(complex(lam))
    if a < 1.0:
        raise ValueError(f"|lambda| = {a} < 1")
    if a - 1.0 <= 1e-14:
        # arc(2e^{-t}) = pi - 2 arcsin(e^{-t}); s = sqrt(t) smooths t = 0
        res = adaptive_gauss_legendre(
            lambda s: 2 * s * np.arcsin(np.exp(-s * s)) / (1 + s * s) ** 2, 0.0, 7.0, tol / 4)
        tail = math.exp(-49.0)
        value = 4.0 - (8.0 / math.pi) * res.value
        err = (8.0 / math.pi) * (res.error_estimate + tail)
        return QuadResult(value, err, res.evaluations, err <= tol)
    t0 = math.log(2 * a / (a + 1))
    t1 = math.log(2 * a / (a - 1))
    half = 0.5 * (t1 - t0)

    # t = t0 + half (1 - cos u): removes the square-root endpoint behaviour of arc
    def integrand(u):
        t = t0 + half * (1.0 - np.cos(u))
        return half * np.sin(u) * _arc_length(a, 2 * a * np.exp(-t)) / (1.0 + t) ** 2

    scale = 4 * a * a / math.pi
    res = adaptive_gauss_legendre(integrand, 0.0, math.pi, tol / scale)
    return QuadResult(scale * res.value, scale * res.error_estimate, res.evaluations,
                      res.converged)


def lemma_h_integral_direct(lam: complex, tol: float = 1e-10, **kw) -> QuadResult:
    """Same integral by the generic disk rule (only reliable away from ``|lam| = 1``)."""
    lam = complex(lam)
    a = abs(lam)
    return disk_integral(lambda z: lemma_h(2 * a / np.abs(z - lam)), tol,
                         singular_angles=[math.atan2(lam.imag, lam.real)], **kw)


def lemma_h_integral_mc(lam: complex, n_points: int = 1_000_000, seed: int = 0) -> QuadResult:
    """Monte Carlo oracle for :func:`lemma_h_integral` (independent of the radial reduction)."""
    lam = complex(lam)
    a = abs(lam)
    if a < 1.0:
        raise ValueError(f"|lambda| = {a} < 1")
    near = [lam] if a < 2.0 else []

    def local(_, t, theta):
        # |w|^2 h(2a/|w|) with |w| = 2 e^{-t}
        return 4 * a * a / (1.0 + math.log(a) + t) ** 2

    return mc_disk_integral(lambda z: lemma_h(2 * a / np.abs(z - lam)), n_points, seed,
                            singular_points=near, local=local)


# ---------------------------------------------------------------------------
# |F'|^2 for F = log(1 + log(2^n p(0) / p))
# ---------------------------------------------------------------------------

def _univariate_coeffs(p) -> np.ndarray:
    base = getattr(p, "base", p)
    if isinstance(base, TruncatedSeries):
        c = base.univariate_coefficients()
    else:
        c = np.asarray(p, dtype=complex).ravel()
    nz = np.nonzero(c)[0]
    if nz.size == 0:
        raise ValueError("zero polynomial")
    return c[: nz[-1] + 1]


class LemmaF:
    """``F(z) = log(1 + log(2^n p(0) / p(z)))`` for a stable one-variable ``p``.

    The inner logarithm uses the branch that is continuous on the disk and
    real at 0, namely ``n log 2 - sum_j log(1 - z / lambda_j)``; each term is
    a principal log of a number with positive real part.
    """

    def __init__(self, p, n: int):
        self.coeffs = _univariate_coeffs(p)
        self.degree = self.coeffs.size - 1
        if n < self.degree:
            raise ValueError(f"n = {n} is below the degree {self.degree}")
        self.n = n
        raw = np.roots(self.coeffs[::-1]) if self.degree else np.zeros(0, complex)
        # Polish: a cluster is replaced by its mean (which is far more accurate
        # than its members for a multiple zero) and centres within
        # STABILITY_TOL of the circle are put on it.
        polished = []
        for c, m in _cluster_roots(raw):
            if abs(abs(c) - 1.0) <= STABILITY_TOL:
                c = c / abs(c)
            polished.append((c, m))
        inside = [c for c, _ in polished if abs(c) < 1.0]
        if inside:
            w = min(inside, key=abs)
            raise InstabilityError(f"root {w} lies inside the unit disk", witness=complex(w))
        self.clusters = polished
        self.roots = np.array([c for c, m in polished for _ in range(m)], dtype=complex)

    def log_ratio(self, z):
        """``log(p(z) / p(0))`` on the continuous branch, from the factored form."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for c, m in self.clusters:
            out += m * np.log(1.0 - z / c)
        return out

    def denominator(self, z):
        """``1 + log(2^n p(0) / p(z))``; its real part is at least 1 on the disk."""
        return 1.0 + self.n * math.log(2.0) - self.log_ratio(z)

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        dlog = np.zeros(z.shape, dtype=complex)
        for c, m in self.clusters:
            dlog += m / (z - c)
        return -dlog / self.denominator(z)

    def abs_derivative_sq(self, z):
        return np.abs(self.derivative(z)) ** 2

    def local_scaled(self, center: complex, mult: int, t, theta):
        """``rho^2 |F'(center + rho e^{i theta})|^2`` with ``rho = 2 e^{-t}``.

        The cluster at ``center`` is treated as an exact zero of order
        ``mult``, so nothing is lost when ``center + w`` rounds to ``center``.
        """
        t = np.asarray(t, dtype=float)
        unit = np.exp(1j * np.asarray(theta, dtype=float))
        rho = 2.0 * np.exp(-t)
        z = center + rho * unit
        others = [r for r in self.roots if abs(r - center) > CLUSTER_TOL]
        num = mult / unit
        den = 1.0 + self.n * math.log(2.0) + 0j
        for r in others:
            num = num + rho / (z - r)
            den = den - np.log(1.0 - z / r)
        log_w = (math.log(2.0) - t - math.log(abs(center))) + 1j * np.angle(-unit * np.conj(center))
        den = den - mult * log_w
        return np.abs(num) ** 2 / np.abs(den) ** 2

    def boundary_clusters(self, eps: float):
        """Clusters whose centre is within ``eps * 1e-6`` of the unit circle."""
        return [(c, m) for c, m in self.clusters if abs(c) - 1.0 < eps * 1e-6]

    def local_constant(self, center: complex, mult: int) -> complex:
        """``C`` in ``1 + log(2^n p(0)/p) ~ C - m log(1 - z/center)`` near ``center``."""
        others = [r for r in self.roots if abs(r - center) > CLUSTER_TOL]
        lam = center / abs(center)
        return 1.0 + self.n * math.log(2.0) - sum(np.log(1.0 - lam / r) for r in others)


def dirichlet_integral_F_mc(p, n: int, n_points: int = 1_000_000, seed: int = 0) -> QuadResult:
    """Monte Carlo oracle for :func:`dirichlet_integral_F`."""
    lf = LemmaF(p, n)
    if lf.degree == 0:
        return QuadResult(0.0, 0.0, 0, True)
    near = [(c, m) for c, m in lf.clusters if abs(c) < 2.0]
    return mc_disk_integral(lf.abs_derivative_sq, n_points, seed,
                            singular_points=[c for c, _ in near],
                            local=lambda j, t, th: lf.local_scaled(*near[j], t, th))


def _cluster_roots(roots: np.ndarray):
    clusters: list[list[complex]] = []
    for r in roots:
        for c in clusters:
            if abs(r - np.mean(c)) < CLUSTER_TOL:
                c.append(r)
                break
        else:
            clusters.append([r])
    return [(complex(np.mean(c)), len(c)) for c in clusters]


def _corner_model(c_over_m: complex, eps: float, order: int = 32) -> float:
    """``int |F'|^2 dA/pi`` of the local model over an ``eps`` box at a boundary zero.

    In ``w = 1 - z/lambda = rho e^{i phi}`` the box is ``0 <= Re w <= eps``,
    ``|Im w| <= eps``; with ``t = -log rho`` the model integrand is
    ``1 / ((a + t)^2 + (b - phi)^2)`` against ``dt dphi``.
    """
    a, b = c_over_m.real, c_over_m.imag
    x, w = gauss_legendre(order)
    total = 0.0
    for lo, hi in ((-np.pi / 2, -np.pi / 4), (-np.pi / 4, np.pi / 4), (np.pi / 4, np.pi / 2)):
        phi = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x
        rho_max = eps / np.maximum(np.cos(phi), np.abs(np.sin(phi)))
        big_t = -np.log(rho_max) + a
        c = np.abs(b - phi)
        safe = np.where(c > 1e-12, c, 1.0)
        j = np.where(c > 1e-12, np.arctan(safe / big_t) / safe, 1.0 / big_t)
        total += 0.5 * (hi - lo) * float(np.dot(w, j))
    return total / np.pi


def dirichlet_integral_F(p, n: int, tol: float = 1e-8, order: int = 12,
                         base_panels: int = 16, eps_depth: int = 32,
                         max_rounds: int = 3) -> QuadResult:
    """``int_D |F'(z)|^2 dA/pi`` for ``F = log(1 + log(2^n p(0)/p))``.

    ``p`` is a stable one-variable polynomial (coefficient sequence, a
    ``TruncatedSeries`` of dimension 1, or anything with such a ``.base``)
    and ``n >= deg p``.  ``F'`` is evaluated in closed form,
    ``-(p'/p) / (1 + log(2^n p(0)/p))``.  The mesh is graded toward every
    zero of ``p`` within distance 1 of the circle; a zero on the circle gets
    its ``2^-eps_depth`` corner replaced by the local model.  The error
    estimate is the disagreement between Gauss orders ``order`` and
    ``order - 4`` plus a bound on the model error.
    """
    lf = LemmaF(p, n)
    if lf.degree == 0:
        return QuadResult(0.0, 0.0, 0, True)
    err = math.inf
    evals = 0
    val = math.nan
    for _ in range(max_rounds):
        eps = 0.5**eps_depth
        boundary = lf.boundary_clusters(eps)
        singular = []
        depth_r = 4
        for c, m in lf.clusters:
            delta = abs(c) - 1.0
            if delta >= 1.0:
                continue
            if any(c == bc for bc, _ in boundary):
                depth = eps_depth
            else:
                depth = min(int(math.ceil(math.log2(1.0 / delta))) + 5, 60)
            singular.append((math.atan2(c.imag, c.real), depth))
            depth_r = max(depth_r, depth)
        r_edges = _radial_edges(depth_r)
        t_edges = _angular_edges(singular, base_panels)
        skip = []
        model = 0.0
        model_err = 0.0
        if boundary:
            outer = np.nonzero(r_edges[:-1] >= 1.0 - eps * (1 + 1e-9))[0]
            mids = 0.5 * (t_edges[:-1] + t_edges[1:])
            for c, m in boundary:
                theta = math.atan2(c.imag, c.real)
                near = np.nonzero(np.abs(_wrap(mids - theta)) < eps)[0]
                skip.extend((int(i), int(j)) for i in outer for j in near)
                cm = lf.local_constant(c, m) / m
                piece = _corner_model(cm, eps)
                model += piece
                spread = sum(1.0 / max(abs(c - r), 1e-300) for r in lf.roots
                             if abs(r - c) > CLUSTER_TOL)
                model_err += 10.0 * eps * (1.0 + spread) * piece
        g = lf.abs_derivative_sq
        hi, n_hi = polar_grid_integral(g, r_edges, t_edges, order, skip)
        lo, n_lo = polar_grid_integral(g, r_edges, t_edges, order - 4, skip)
        evals += n_hi + n_lo
        val = hi + model
        err = abs(hi - lo) + model_err
        if err <= tol:
            return QuadResult(val, err, evals, True)
        order += 8
        base_panels *= 2
    return QuadResult(val, err, evals, False)


def slice_besov_integral(p: TruncatedSeries, n: int, cfg: SampleConfig,
                         tol: float = 1e-6) -> QuadResult:
    """Sphere average of the slice integrals ``int_D |(F_zeta)'|^2 dA/pi``.

    ``F = log(1 + log(2^n p(0)/p))`` for a stable polynomial ``p`` on the
    ball; ``F_zeta(lam) = F(lam zeta)``.  Directions come from
    :func:`sphere_samples` with ``cfg``; the result carries the sample mean
    and its standard error.
    """
    base = getattr(p, "base", p)
    if base.constant_term == 0:
        raise ValueError("p(0) must be nonzero")
    directions = sphere_samples(base.dimension, cfg.sphere_samples, cfg.rng_seed)
    coeffs = slice_coefficients(base, directions)
    values = np.empty(len(directions))
    evals = 0
    converged = True
    for i, c in enumerate(coeffs):
        try:
            res = dirichlet_integral_F(c, n, tol)
        except InstabilityError as exc:
            raise InstabilityError(f"slice along {directions[i]} is unstable: {exc}",
                                   witness=exc.witness * directions[i]) from exc
        values[i] = res.value
        evals += res.evaluations
        converged &= res.converged
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(values.size)) if values.size > 1 else math.inf
    return QuadResult(mean, stderr, evals, converged)
