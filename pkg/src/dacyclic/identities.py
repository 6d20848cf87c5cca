"""Series checks of derivative identities built on the radial derivative.

Each ``verify_*`` function evaluates both sides of an identity as truncated
series and returns the largest coefficient discrepancy, scaled by
``1 + max |coefficient|`` of the reference side.  For an exact identity the
result is pure roundoff.

The Faa di Bruno expansion used here is, for ``m >= 1``::

    R^m log(1+F) = sum_{eta in A_m} m!/eta! * (-1)^(|eta|-1) (|eta|-1)! / (1+F)^|eta|
                   * prod_j (1/j!)^eta_j * T_eta(F)

    T_eta(F) = prod_i (R^i F)^eta_i

where ``A_m`` is the set of ``m``-tuples of non-negative integers with
``sum_i i * eta_i = m`` (one tuple per integer partition of ``m``).
"""
from __future__ import annotations

import math
from typing import Iterator

import numpy as np

from .series import TruncatedSeries, exp_series, log_series, radial_derivative, reciprocal

__all__ = [
    "PartitionTuple",
    "enumerate_A_m",
    "faa_weight",
    "T_eta",
    "rm_log1p_faa",
    "radial_power",
    "verify_faa_di_bruno",
    "verify_R_exp_identity",
    "verify_R_log_identity",
    "log1m_rhs",
    "verify_log1m_expansion",
    "discrepancy",
    "random_series",
]


class PartitionTuple(tuple):
    """``eta = (eta_1, ..., eta_m)`` with ``sum_i i * eta_i = m``."""

    def __new__(cls, eta):
        obj = super().__new__(cls, (int(e) for e in eta))
        if len(obj) < 1:
            raise ValueError("a partition tuple needs m >= 1")
        if any(e < 0 for e in obj):
            raise ValueError("entries must be non-negative")
        if sum((i + 1) * e for i, e in enumerate(obj)) != len(obj):
            raise ValueError(f"{tuple(obj)} does not satisfy sum i*eta_i = m")
        return obj

    @property
    def m(self) -> int:
        return len(self)

    @property
    def size(self) -> int:
        """``|eta| = sum_i eta_i``."""
        return sum(self)

    @property
    def factorial(self) -> int:
        """``eta! = prod_i eta_i!``."""
        return math.prod(math.factorial(e) for e in self)


def _partitions(m: int, largest: int) -> Iterator[list[int]]:
    if m == 0:
        yield []
        return
    for part in range(min(m, largest), 0, -1):
        for rest in _partitions(m - part, part):
            yield [part] + rest


def enumerate_A_m(m: int) -> list[PartitionTuple]:
    """All of ``A_m`` in lexicographic order of the tuples."""
    if m < 1:
        raise ValueError("m must be >= 1")
    out = []
    for parts in _partitions(m, m):
        eta = [0] * m
        for p in parts:
            eta[p - 1] += 1
        out.append(PartitionTuple(eta))
    return sorted(out)


def faa_weight(eta: PartitionTuple) -> float:
    """``m!/eta! * prod_j (1/j!)^eta_j`` (the set-partition count of shape ``eta``)."""
    denom = eta.factorial * math.prod(math.factorial(j + 1) ** e for j, e in enumerate(eta))
    return math.factorial(eta.m) / denom


def radial_power(F: TruncatedSeries, k: int) -> TruncatedSeries:
    """``R^k F``."""
    for _ in range(k):
        F = radial_derivative(F)
    return F


def T_eta(F: TruncatedSeries, eta) -> TruncatedSeries:
    eta = PartitionTuple(eta)
    out = TruncatedSeries.constant(1.0, F.dimension, F.cap)
    RF = F
    for i, e in enumerate(eta, start=1):
        RF = radial_derivative(RF)
        if e:
            out = out * RF**e
    return out


def rm_log1p_faa(F: TruncatedSeries, m: int) -> TruncatedSeries:
    """Right-hand side of the Faa di Bruno expansion of ``R^m log(1+F)``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    one_plus = F + 1.0
    if one_plus.constant_term == 0:
        raise ZeroDivisionError("F(0) = -1")
    inv = reciprocal(one_plus)
    total = TruncatedSeries.zero(F.dimension, F.cap)
    for eta in enumerate_A_m(m):
        k = eta.size
        coef = faa_weight(eta) * (-1) ** (k - 1) * math.factorial(k - 1)
        total = total + T_eta(F, eta) * inv**k * coef
    return total


def discrepancy(lhs: TruncatedSeries, rhs: TruncatedSeries) -> float:
    """``max |lhs - rhs| / (1 + max |rhs|)`` over the coefficients."""
    return lhs.max_abs_diff(rhs) / (1.0 + rhs.max_abs())


def _check_log_branch(c: complex, what: str):
    if c.imag == 0 and c.real <= 0:
        raise ValueError(f"{what} = {c!r} lies on (-inf, 0]")


def verify_faa_di_bruno(F: TruncatedSeries, m: int) -> float:
    """Compare :func:`rm_log1p_faa` with ``R^m`` applied to ``log(1+F)``."""
    _check_log_branch(1.0 + F.constant_term, "1 + F(0)")
    direct = radial_power(log_series(F + 1.0), m)
    return discrepancy(rm_log1p_faa(F, m), direct)


def verify_R_exp_identity(phi: TruncatedSeries, psi: TruncatedSeries, n: int) -> float:
    """``R(psi^(n+2) e^(-phi/psi)) = psi^n e^(-phi/psi) ((n+2)(R psi) psi - ((R phi) psi - (R psi) phi))``."""
    if psi.constant_term == 0:
        raise ValueError("psi(0) must be nonzero")
    if n < 0:
        raise ValueError("n must be >= 0")
    e = exp_series(-(phi * reciprocal(psi)))
    lhs = radial_derivative(psi ** (n + 2) * e)
    Rphi, Rpsi = radial_derivative(phi), radial_derivative(psi)
    rhs = psi**n * e * ((n + 2) * Rpsi * psi - (Rphi * psi - Rpsi * phi))
    return discrepancy(lhs, rhs)


def verify_R_log_identity(phi: TruncatedSeries, n: int) -> float:
    """``R(phi^(n+1) log phi) = ((n+1) log phi + 1) phi^n R phi``."""
    _check_log_branch(phi.constant_term, "phi(0)")
    if n < 0:
        raise ValueError("n must be >= 0")
    L = log_series(phi)
    lhs = radial_derivative(phi ** (n + 1) * L)
    rhs = ((n + 1) * L + 1.0) * phi**n * radial_derivative(phi)
    return discrepancy(lhs, rhs)


def log1m_rhs(phi: TruncatedSeries, start: int = 1) -> TruncatedSeries:
    """``-phi (1 - sum_{n >= start} phi^n / (n(n+1)))`` through the cap.

    With ``phi(0) = 0`` the powers ``phi^n`` vanish below degree ``n``, so
    the sum stops at ``n = cap``.
    """
    acc = TruncatedSeries.zero(phi.dimension, phi.cap)
    power = TruncatedSeries.constant(1.0, phi.dimension, phi.cap)
    for n in range(1, phi.cap + 1):
        power = power * phi
        if n >= start:
            acc = acc + power * (1.0 / (n * (n + 1)))
    return -(phi * (1.0 - acc))


def verify_log1m_expansion(phi: TruncatedSeries, start: int = 1) -> float:
    """Compare ``(1 - phi) log(1 - phi)`` with :func:`log1m_rhs`.

    The identity holds with the sum starting at ``n = 1``.  Starting it at
    ``n = 2`` drops the ``phi^2 / 2`` term; ``start`` is exposed so that
    variant can be measured.
    """
    if phi.constant_term != 0:
        raise ValueError("phi(0) must be 0")
    one_minus = 1.0 - phi
    lhs = one_minus * log_series(one_minus)
    return discrepancy(lhs, log1m_rhs(phi, start))


def random_series(rng: np.random.Generator, d: int, cap: int, degree: int | None = None,
                  constant: complex | None = None, scale: float = 1.0) -> TruncatedSeries:
    """Random complex polynomial with Gaussian coefficients up to ``degree``.

    ``constant`` pins ``f(0)``.  Used by the verification suites and tests.
    """
    degree = cap if degree is None else min(degree, cap)
    terms = {}
    for n in range(degree + 1):
        for alpha in _compositions(n, d):
            terms[alpha] = scale * complex(rng.standard_normal(), rng.standard_normal()) / (1 + n)
    if constant is not None:
        terms[(0,) * d] = constant
    return TruncatedSeries.from_terms(d, cap, terms)


def _compositions(n: int, d: int):
    if d == 1:
        yield (n,)
        return
    for a in range(n, -1, -1):
        for rest in _compositions(n - a, d - 1):
            yield (a,) + rest
