"""Seeded verification suites: every bound and identity checked on fixed inputs.

Each suite returns a list of :class:`CheckResult` rows.  A row records the
observed quantity, the bound it is compared with, and pass/fail.  The CLI
``verify`` command and the acceptance tests both run these.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .identities import (enumerate_A_m, faa_weight, random_series, verify_faa_di_bruno,
                         verify_log1m_expansion, verify_R_exp_identity, verify_R_log_identity)
from .quadrature import dirichlet_integral_F, lemma_h_integral, lemma_h_integral_mc, slice_besov_integral
from .sampling import SampleConfig
from .series import TruncatedSeries
from .transforms import StablePolynomial, bounded_argument_estimate, random_stable_polynomial
from .weights import RadialMeasure, WeightSequence, omega, omega_exact

__all__ = [
    "CheckResult",
    "SUITES",
    "ALIASES",
    "run_suite",
    "stable_corpus",
    "ball_examples",
    "partition_count",
    "bell_number",
]

IDENTITY_TOL = 1e-9
H_BOUND = 16.0
H_ERR_MAX = 1e-4
ARG_SLACK = 1e-6
STDERR_MAX = 0.5


@dataclass
class CheckResult:
    suite: str
    case: str
    observed: float
    bound: float
    passed: bool
    detail: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"suite": self.suite, "case": self.case, "observed": self.observed,
                "bound": self.bound, "passed": self.passed, **self.detail}


# ---------------------------------------------------------------------------
# inputs
# ---------------------------------------------------------------------------

def stable_corpus(seed: int = 0, count: int = 50) -> list[tuple[str, StablePolynomial]]:
    """``count`` random stable one-variable polynomials of degree 1..4, then ``1 - z``."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        deg = int(rng.integers(1, 5))
        out.append((f"random[{i}] deg {deg}", random_stable_polynomial(rng, deg)))
    out.append(("1 - z", StablePolynomial(TruncatedSeries.univariate([1.0, -1.0]), 1)))
    return out


def ball_examples() -> list[tuple[str, StablePolynomial]]:
    """Stable polynomials on the balls of ``C^2`` and ``C^3`` with boundary zeros."""
    p1 = TruncatedSeries.from_terms(3, None, {(0, 0, 0): 1.0, (1, 1, 1): -(3.0**1.5)})
    p2 = TruncatedSeries.from_terms(3, None, {(0, 0, 0): 1.0, (2, 0, 0): -1.0, (0, 2, 0): -1.0,
                                              (0, 0, 2): -1.0})
    lin = TruncatedSeries.from_terms(2, None, {(0, 0): 1.0, (1, 0): -0.5, (0, 1): -0.5})
    return [
        ("1 - 3^(3/2) z1 z2 z3", StablePolynomial(p1, 3)),
        ("1 - (z1^2 + z2^2 + z3^2)", StablePolynomial(p2, 2)),
        ("1 - (z1 + z2)/2", StablePolynomial(lin, 1)),
    ]


def partition_count(m: int) -> int:
    """Number of integer partitions of ``m`` (dynamic programming)."""
    ways = [1] + [0] * m
    for part in range(1, m + 1):
        for total in range(part, m + 1):
            ways[total] += ways[total - part]
    return ways[m]


def bell_number(m: int) -> int:
    """Bell number via the Bell triangle."""
    row = [1]
    for _ in range(m):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def suite_argument(seed: int = 0, cfg: SampleConfig | None = None) -> list[CheckResult]:
    """Sampled argument of stable polynomials against ``n pi``."""
    cfg = cfg or SampleConfig(sphere_samples=200, radial_grid=50, rng_seed=seed)
    rows = []
    for name, p in stable_corpus(seed) + ball_examples():
        val = bounded_argument_estimate(p, cfg)
        bound = p.declared_degree * math.pi
        rows.append(CheckResult("argument", name, val, bound, val <= bound + ARG_SLACK,
                                {"n": p.declared_degree, "d": p.dimension}))
    return rows


H_MODULI = (1.0, 1.1, 1.5, 2.0, 4.0)
H_PHASES = (0.0, 0.5 * math.pi, 2.0, -2.5)


def suite_h_integral(seed: int = 0, mc_points: int = 1_000_000, tol: float = 1e-10) -> list[CheckResult]:
    """``int_D h(2|lambda|/|z - lambda|) dA/pi <= 16`` with a Monte Carlo cross-check."""
    rows = []
    for i, a in enumerate(H_MODULI):
        for j, phase in enumerate(H_PHASES):
            lam = a * complex(math.cos(phase), math.sin(phase))
            q = lemma_h_integral(lam, tol)
            mc = lemma_h_integral_mc(lam, mc_points, seed=seed + 17 * i + j)
            sigma = math.hypot(mc.error_estimate, q.error_estimate)
            z = abs(q.value - mc.value) / sigma if sigma > 0 else 0.0
            ok = q.value <= H_BOUND and q.error_estimate <= H_ERR_MAX and z <= 3.0
            rows.append(CheckResult("h-integral", f"|lambda|={a:g} phase={phase:.4g}", q.value, H_BOUND, ok,
                                    {"error_estimate": q.error_estimate, "mc_value": mc.value,
                                     "mc_stderr": mc.error_estimate, "z_score": z}))
    return rows


def suite_log_dirichlet(seed: int = 0, tol: float = 1e-8) -> list[CheckResult]:
    """``int_D |F'|^2 dA/pi <= 16 n^2`` for ``F = log(1 + log(2^n p(0)/p))``."""
    corpus = stable_corpus(seed)
    corpus.append(("(1 - z)(1 - iz)", StablePolynomial(TruncatedSeries.univariate(
        np.convolve([1.0, -1.0], [1.0, -1j])), 2)))
    rows = []
    for name, p in corpus:
        n = p.declared_degree
        res = dirichlet_integral_F(p.base, n, tol)
        bound = 16.0 * n * n
        rows.append(CheckResult("log-dirichlet", name, res.value, bound, res.value - res.error_estimate <= bound,
                                {"n": n, **{k: v for k, v in res.as_dict().items() if k != "value"}}))
    return rows


def suite_slice_besov(seed: int = 0, cfg: SampleConfig | None = None) -> list[CheckResult]:
    """Sphere average of slice integrals against ``16 n^2``."""
    cfg = cfg or SampleConfig(sphere_samples=200, radial_grid=50, rng_seed=seed)
    one_minus = TruncatedSeries.from_terms(2, None, {(0, 0): 1.0, (1, 0): -1.0})
    p2 = ball_examples()[1][1]
    rows = []
    for name, p, n in (("1 - z1 on B_2", one_minus, 1), ("1 - (z1^2 + z2^2 + z3^2) on B_3", p2.base, 2)):
        res = slice_besov_integral(p, n, cfg)
        bound = 16.0 * n * n
        ok = res.value <= bound and res.error_estimate <= STDERR_MAX
        rows.append(CheckResult("slice-besov", name, res.value, bound, ok,
                                {"n": n, "stderr": res.error_estimate, "directions": cfg.sphere_samples,
                                 "converged": res.converged}))
    return rows


FAA_SHAPES = ((1, 12), (2, 10), (3, 8))


def suite_faa_di_bruno(seed: int = 0, per_shape: int = 20, max_m: int = 5) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    rows = []
    for d, cap in FAA_SHAPES:
        worst = 0.0
        for _ in range(per_shape):
            F = random_series(rng, d, cap, constant=0.0)
            worst = max(worst, max(verify_faa_di_bruno(F, m) for m in range(1, max_m + 1)))
        rows.append(CheckResult("faa-di-bruno", f"d={d} D={cap} m<={max_m}", worst, IDENTITY_TOL,
                                worst <= IDENTITY_TOL, {"inputs": per_shape}))
    for m in range(1, 13):
        count = len(enumerate_A_m(m))
        rows.append(CheckResult("faa-di-bruno", f"|A_{m}| = p({m})", count, partition_count(m),
                                count == partition_count(m)))
    for m in range(1, 9):
        total = sum(faa_weight(eta) for eta in enumerate_A_m(m))
        rows.append(CheckResult("faa-di-bruno", f"weight sum m={m} = Bell", total, bell_number(m),
                                abs(total - bell_number(m)) <= 1e-9 * bell_number(m)))
    return rows


def _identity_inputs(seed: int, count: int):
    rng = np.random.default_rng(seed)
    for i in range(count):
        d = 1 + i % 3
        cap = (12, 9, 7)[d - 1]
        yield i, d, cap, rng


def suite_r_identities(seed: int = 0, count: int = 20) -> list[CheckResult]:
    rows = []
    worst_exp = worst_log = 0.0
    for i, d, cap, rng in _identity_inputs(seed, count):
        n = i % 3
        phi = random_series(rng, d, cap, degree=3)
        psi = random_series(rng, d, cap, degree=3, constant=1.0)
        worst_exp = max(worst_exp, verify_R_exp_identity(phi, psi, n))
        base = random_series(rng, d, cap, degree=3, constant=1.0, scale=0.4)
        worst_log = max(worst_log, verify_R_log_identity(base, n))
    rows.append(CheckResult("r-identities", "R(psi^(n+2) exp(-phi/psi))", worst_exp, IDENTITY_TOL,
                            worst_exp <= IDENTITY_TOL, {"inputs": count}))
    rows.append(CheckResult("r-identities", "R(phi^(n+1) log phi)", worst_log, IDENTITY_TOL,
                            worst_log <= IDENTITY_TOL, {"inputs": count}))
    return rows


def suite_log1m(seed: int = 0, count: int = 20) -> list[CheckResult]:
    worst = 0.0
    for _, d, cap, rng in _identity_inputs(seed + 1, count):
        phi = random_series(rng, d, cap, degree=3, constant=0.0, scale=0.5)
        worst = max(worst, verify_log1m_expansion(phi))
    return [CheckResult("log1m", "(1-phi) log(1-phi) series", worst, IDENTITY_TOL, worst <= IDENTITY_TOL,
                        {"inputs": count})]


def suite_weights(max_n: int = 200) -> list[CheckResult]:
    rows = []
    w = WeightSequence(2, RadialMeasure.lebesgue())
    exact = all(n * n * omega_exact(w, n) == Fraction(n * n, (n + 1) ** 2) for n in range(1, max_n + 1))
    vals = [n * n * omega(w, n) for n in range(1, max_n + 1)]
    rows.append(CheckResult("weights", "d=2 lebesgue: n^2 w_n = n^2/(n+1)^2", min(vals), 0.25,
                            exact and min(vals) >= 0.25 and max(vals) < 1.0, {"max": max(vals)}))
    w3 = WeightSequence(3, RadialMeasure.sigma())
    vals3 = [n * n * omega(w3, n) for n in range(1, max_n + 1)]
    rows.append(CheckResult("weights", "d=3 sigma: n^2 w_n in [1/3, 2)", min(vals3), 1.0 / 3.0,
                            min(vals3) >= 1.0 / 3.0 - 1e-15 and max(vals3) < 2.0, {"max": max(vals3)}))
    for label, mu in (("sigma", RadialMeasure.sigma()), ("lebesgue", RadialMeasure.lebesgue()),
                      ("power:beta=0.5", RadialMeasure.power(0.5))):
        ws = WeightSequence(2, mu)
        seq = [omega(ws, n) for n in range(max_n + 1)]
        mono = all(b <= a for a, b in zip(seq, seq[1:])) and min(seq) > 0
        rows.append(CheckResult("weights", f"{label}: w_n positive, non-increasing", min(seq), 0.0, mono))
    return rows


SUITES = {
    "argument": suite_argument,
    "h-integral": suite_h_integral,
    "log-dirichlet": suite_log_dirichlet,
    "slice-besov": suite_slice_besov,
    "faa-di-bruno": suite_faa_di_bruno,
    "r-identities": suite_r_identities,
    "log1m": suite_log1m,
    "weights": suite_weights,
}

# the historical suite names accepted by the command line
ALIASES = {
    "lemma-6.1": "argument",
    "lemma-6.2": "h-integral",
    "lemma-6.3": "log-dirichlet",
    "theorem-6.4": "slice-besov",
}

IDENTITY_SUITES = ("faa-di-bruno", "r-identities", "log1m")


def run_suite(name: str, seed: int = 0, cfg: SampleConfig | None = None, tol: float | None = None,
              mc_points: int | None = None) -> list[CheckResult]:
    """Run one suite (or ``"all"``) with the given seed and sample configuration."""
    name = ALIASES.get(name, name)
    if name == "all":
        rows = []
        for key in SUITES:
            rows.extend(run_suite(key, seed, cfg, tol, mc_points))
        return rows
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    if name in ("argument", "slice-besov"):
        return SUITES[name](seed, cfg)
    if name == "h-integral":
        kw = {} if mc_points is None else {"mc_points": mc_points}
        return SUITES[name](seed, tol=tol or 1e-10, **kw)
    if name == "log-dirichlet":
        return SUITES[name](seed, tol=tol or 1e-8)
    if name == "weights":
        return SUITES[name]()
    return SUITES[name](seed)
