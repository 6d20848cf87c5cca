"""Multivariate power series truncated at a total-degree cap.

A :class:`TruncatedSeries` holds the Taylor coefficients of an analytic
function on the unit ball of ``C^d`` for every multi-index ``alpha`` with
``|alpha| <= cap``.  Coefficients above the cap are unknown, not zero, so
every binary operation returns a series whose cap is the smaller of the two
operands' caps.

Storage is sparse and graded: one block per total degree ``n`` holding the
exponent rows of that degree (sorted lexicographically) and their complex
coefficients.  Products are formed block by block, which keeps the work
proportional to the number of index pairs that actually land below the cap.

The transcendental operations (``log_series``, ``exp_series``,
``reciprocal``) are solved degree by degree from the radial derivative::

    R L = (R f) / f          L_n = (R f * 1/f)_n / n
    R E = E * (R f)          E_n = sum_k (R f)_k E_{n-k} / n

so they are exact through the cap up to floating point roundoff.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "MultiIndex",
    "TruncatedSeries",
    "HomogeneousPart",
    "multiply",
    "reciprocal",
    "log_series",
    "exp_series",
    "radial_derivative",
    "substitute",
    "evaluate",
    "homogeneous_parts",
    "principal_log",
]


class MultiIndex(tuple):
    """Exponent tuple ``(alpha_1, ..., alpha_d)`` of non-negative integers."""

    def __new__(cls, exponents: Iterable[int]):
        values = tuple(int(a) for a in exponents)
        if not values:
            raise ValueError("a multi-index needs at least one coordinate")
        if any(a < 0 for a in values):
            raise ValueError(f"negative exponent in {values}")
        return super().__new__(cls, values)

    @property
    def dimension(self) -> int:
        return len(self)

    @property
    def degree(self) -> int:
        """Total degree ``|alpha|``."""
        return sum(self)

    @property
    def factorial(self) -> int:
        """``alpha! = alpha_1! ... alpha_d!`` as an exact integer."""
        out = 1
        for a in self:
            out *= math.factorial(a)
        return out

    @property
    def log_factorial(self) -> float:
        return sum(math.lgamma(a + 1) for a in self)

    def __repr__(self) -> str:
        return f"MultiIndex({tuple(self)})"


def principal_log(c: complex) -> complex:
    """Principal logarithm with imaginary part in ``(-pi, pi]``."""
    c = complex(c)
    if c == 0:
        raise ValueError("logarithm of zero")
    out = cmath.log(c)
    if out.imag <= -math.pi:
        out = complex(out.real, math.pi)
    return out


# ---------------------------------------------------------------------------
# block helpers
# ---------------------------------------------------------------------------

_EMPTY_C = np.zeros(0, dtype=complex)


def _empty_block(d: int):
    return np.zeros((0, d), dtype=np.int64), _EMPTY_C


def _keys(exps: np.ndarray, degree: int):
    """Lexicographic integer keys for exponent rows of one total degree."""
    d = exps.shape[1]
    base = degree + 1
    if d * math.log2(base) < 62:
        weights = base ** np.arange(d - 1, -1, -1, dtype=np.int64)
        return exps @ weights
    return None


def _combine(exps: np.ndarray, coeffs: np.ndarray, degree: int):
    """Sum duplicate exponent rows, sort them, drop exact zeros."""
    if coeffs.size == 0:
        return _empty_block(exps.shape[1])
    keys = _keys(exps, degree)
    if keys is None:
        uniq, first, inv = np.unique(exps, axis=0, return_index=True, return_inverse=True)
        inv = inv.reshape(-1)
    else:
        _, first, inv = np.unique(keys, return_index=True, return_inverse=True)
    n = first.size
    re = np.bincount(inv, weights=coeffs.real, minlength=n)
    im = np.bincount(inv, weights=coeffs.imag, minlength=n)
    out = re + 1j * im
    keep = out != 0
    return np.ascontiguousarray(exps[first][keep]), out[keep]


def _block_product(a, b):
    ea, ca = a
    eb, cb = b
    d = ea.shape[1]
    e = (ea[:, None, :] + eb[None, :, :]).reshape(-1, d)
    c = (ca[:, None] * cb[None, :]).reshape(-1)
    return e, c


def _sum_blocks(pieces, degree: int, d: int):
    pieces = [p for p in pieces if p[1].size]
    if not pieces:
        return _empty_block(d)
    if len(pieces) == 1:
        e, c = pieces[0]
    else:
        e = np.concatenate([p[0] for p in pieces])
        c = np.concatenate([p[1] for p in pieces])
    return _combine(e, c, degree)


def _scale_block(block, s: complex):
    e, c = block
    if s == 0:
        return _empty_block(e.shape[1])
    return e, c * s


class TruncatedSeries:
    """Complex power series in ``d`` variables known through total degree ``cap``.

    Instances are immutable.  Build them with :meth:`from_terms`,
    :meth:`constant`, :meth:`variable` or :meth:`univariate`, and combine
    them with ``+``, ``-``, ``*`` (series or scalar) and ``**`` (integer
    powers; negative powers go through :func:`reciprocal`).
    """

    __slots__ = ("_d", "_cap", "_blocks")

    def __init__(self, dimension: int, cap: int, blocks):
        if dimension < 1:
            raise ValueError("dimension must be >= 1")
        if cap < 0:
            raise ValueError("degree cap must be >= 0")
        if len(blocks) != cap + 1:
            raise ValueError("need exactly one block per degree 0..cap")
        self._d = int(dimension)
        self._cap = int(cap)
        self._blocks = tuple(blocks)

    # -- construction -------------------------------------------------------

    @classmethod
    def from_terms(cls, dimension: int, cap: int | None, terms) -> "TruncatedSeries":
        """Series from ``{exponents: coeff}`` or an iterable of pairs.

        Duplicate exponent tuples are summed.  Terms above ``cap`` are
        dropped; ``cap=None`` uses the largest total degree present.
        """
        items = terms.items() if isinstance(terms, Mapping) else terms
        by_degree: dict[int, list] = {}
        max_deg = 0
        for exps, coeff in items:
            alpha = MultiIndex(exps)
            if len(alpha) != dimension:
                raise ValueError(f"exponent {tuple(alpha)} does not have length {dimension}")
            n = alpha.degree
            max_deg = max(max_deg, n)
            by_degree.setdefault(n, []).append((alpha, complex(coeff)))
        if cap is None:
            cap = max_deg
        blocks = []
        for n in range(cap + 1):
            rows = by_degree.get(n)
            if not rows:
                blocks.append(_empty_block(dimension))
                continue
            e = np.array([r[0] for r in rows], dtype=np.int64).reshape(-1, dimension)
            c = np.array([r[1] for r in rows], dtype=complex)
            blocks.append(_combine(e, c, n))
        return cls(dimension, cap, blocks)

    @classmethod
    def constant(cls, value: complex, dimension: int = 1, cap: int = 0) -> "TruncatedSeries":
        return cls.from_terms(dimension, cap, [((0,) * dimension, value)])

    @classmethod
    def zero(cls, dimension: int = 1, cap: int = 0) -> "TruncatedSeries":
        return cls(dimension, cap, [_empty_block(dimension) for _ in range(cap + 1)])

    @classmethod
    def variable(cls, j: int, dimension: int, cap: int, scale: complex = 1.0) -> "TruncatedSeries":
        """The coordinate function ``scale * z_j`` (``j`` is zero-based)."""
        if not 0 <= j < dimension:
            raise ValueError(f"variable index {j} out of range for d={dimension}")
        e = [0] * dimension
        e[j] = 1
        return cls.from_terms(dimension, cap, [(tuple(e), scale)])

    @classmethod
    def univariate(cls, coeffs: Sequence[complex], cap: int | None = None) -> "TruncatedSeries":
        """One-variable series ``sum_n coeffs[n] z^n``."""
        if cap is None:
            cap = len(coeffs) - 1
        return cls.from_terms(1, cap, [((n,), c) for n, c in enumerate(coeffs) if c != 0 and n <= cap])

    # -- accessors ----------------------------------------------------------

    @property
    def dimension(self) -> int:
        return self._d

    @property
    def cap(self) -> int:
        return self._cap

    @property
    def blocks(self):
        """Per-degree ``(exponents, coefficients)`` arrays; treat as read-only."""
        return self._blocks

    @property
    def constant_term(self) -> complex:
        c = self._blocks[0][1]
        return complex(c[0]) if c.size else 0j

    @property
    def nnz(self) -> int:
        return sum(b[1].size for b in self._blocks)

    @property
    def degree(self) -> int:
        """Largest total degree carrying a nonzero coefficient (-1 for zero)."""
        for n in range(self._cap, -1, -1):
            if self._blocks[n][1].size:
                return n
        return -1

    def coefficients(self) -> dict:
        """``{MultiIndex: complex}`` in graded lexicographic order."""
        out = {}
        for e, c in self._blocks:
            for row, v in zip(e, c):
                out[MultiIndex(row)] = complex(v)
        return out

    def items(self):
        return self.coefficients().items()

    def __getitem__(self, alpha) -> complex:
        alpha = MultiIndex(alpha)
        if len(alpha) != self._d:
            raise ValueError("multi-index dimension mismatch")
        n = alpha.degree
        if n > self._cap:
            raise IndexError(f"degree {n} is above the cap {self._cap}")
        e, c = self._blocks[n]
        if not c.size:
            return 0j
        hit = np.nonzero((e == np.asarray(alpha)).all(axis=1))[0]
        return complex(c[hit[0]]) if hit.size else 0j

    def univariate_coefficients(self) -> np.ndarray:
        """Dense coefficient vector of a one-variable series."""
        if self._d != 1:
            raise ValueError("univariate_coefficients needs dimension 1")
        out = np.zeros(self._cap + 1, dtype=complex)
        for e, c in self._blocks:
            out[e[:, 0]] = c
        return out

    def truncate(self, cap: int) -> "TruncatedSeries":
        if cap > self._cap:
            raise ValueError(f"cannot raise cap from {self._cap} to {cap}")
        return TruncatedSeries(self._d, cap, self._blocks[: cap + 1])

    def with_constant(self, value: complex) -> "TruncatedSeries":
        d = self._d
        block0 = _combine(np.zeros((1, d), dtype=np.int64), np.array([complex(value)]), 0)
        return TruncatedSeries(d, self._cap, (block0,) + self._blocks[1:])

    def max_abs_diff(self, other: "TruncatedSeries") -> float:
        """Largest coefficient difference on degrees up to the common cap."""
        diff = (self - other)
        return max((float(np.abs(c).max()) for _, c in diff._blocks if c.size), default=0.0)

    def max_abs(self) -> float:
        return max((float(np.abs(c).max()) for _, c in self._blocks if c.size), default=0.0)

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "TruncatedSeries"):
        if self._d != other._d:
            raise ValueError(f"dimension mismatch: {self._d} vs {other._d}")

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return TruncatedSeries.constant(complex(other), self._d, self._cap)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        cap = min(self._cap, other._cap)
        blocks = [
            _sum_blocks([self._blocks[n], other._blocks[n]], n, self._d) for n in range(cap + 1)
        ]
        return TruncatedSeries(self._d, cap, blocks)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self._d, self._cap, [(e, -c) for e, c in self._blocks])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            s = complex(other)
            return TruncatedSeries(self._d, self._cap, [_scale_block(b, s) for b in self._blocks])
        if isinstance(other, TruncatedSeries):
            return multiply(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self * (1 / complex(other))
        if isinstance(other, TruncatedSeries):
            return multiply(self, reciprocal(other))
        return NotImplemented

    def __rtruediv__(self, other):
        return reciprocal(self) * other

    def __pow__(self, k: int):
        k = int(k)
        if k < 0:
            return reciprocal(self) ** (-k)
        result = TruncatedSeries.constant(1.0, self._d, self._cap)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if self._d != other._d:
            return False
        cap = min(self._cap, other._cap)
        for n in range(cap + 1):
            (ea, ca), (eb, cb) = self._blocks[n], other._blocks[n]
            if ca.size != cb.size or not (np.array_equal(ea, eb) and np.array_equal(ca, cb)):
                return False
        return True

    __hash__ = None

    def __call__(self, z):
        return evaluate(self, z)

    def __repr__(self) -> str:
        terms = []
        for alpha, c in list(self.coefficients().items())[:8]:
            terms.append(f"{c:.6g}*z^{tuple(alpha)}")
        more = " + ..." if self.nnz > 8 else ""
        body = " + ".join(terms) if terms else "0"
        return f"TruncatedSeries(d={self._d}, cap={self._cap}: {body}{more})"


@dataclass(frozen=True)
class HomogeneousPart:
    degree: int
    series: TruncatedSeries

    def __post_init__(self):
        for n, (_, c) in enumerate(self.series.blocks):
            if c.size and n != self.degree:
                raise ValueError(f"homogeneous part of degree {self.degree} has terms of degree {n}")


# ---------------------------------------------------------------------------
# ring operations and transforms
# ---------------------------------------------------------------------------

def multiply(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product restricted to ``|alpha| <= min(cap_f, cap_g)``."""
    f._check(g)
    d = f.dimension
    cap = min(f.cap, g.cap)
    fb, gb = f.blocks, g.blocks
    f_deg = [i for i in range(cap + 1) if fb[i][1].size]
    g_deg = [j for j in range(cap + 1) if gb[j][1].size]
    pieces: list[list] = [[] for _ in range(cap + 1)]
    for i in f_deg:
        for j in g_deg:
            if i + j > cap:
                break
            pieces[i + j].append(_block_product(fb[i], gb[j]))
    blocks = [_sum_blocks(pieces[n], n, d) for n in range(cap + 1)]
    return TruncatedSeries(d, cap, blocks)


def radial_derivative(f: TruncatedSeries) -> TruncatedSeries:
    """``R f = sum_j z_j df/dz_j``: multiplies the degree-n part by n."""
    blocks = [_scale_block(b, n) for n, b in enumerate(f.blocks)]
    return TruncatedSeries(f.dimension, f.cap, blocks)


def _graded_solve(seed: complex, kernel: TruncatedSeries, cap: int, divide_by_degree: bool, sign: complex):
    """Solve ``out_n = sign * sum_{k>=1} kernel_k out_{n-k} [/ n]`` degree by degree."""
    d = kernel.dimension
    kb = kernel.blocks
    k_deg = [k for k in range(1, cap + 1) if kb[k][1].size]
    out = [_combine(np.zeros((1, d), dtype=np.int64), np.array([seed]), 0)]
    for n in range(1, cap + 1):
        pieces = []
        for k in k_deg:
            if k > n:
                break
            prev = out[n - k]
            if prev[1].size:
                pieces.append(_block_product(kb[k], prev))
        block = _sum_blocks(pieces, n, d)
        scale = sign / n if divide_by_degree else sign
        out.append(_scale_block(block, scale))
    return TruncatedSeries(d, cap, out)


def reciprocal(f: TruncatedSeries) -> TruncatedSeries:
    """``1/f`` through the cap of ``f``; needs ``f(0) != 0``."""
    f0 = f.constant_term
    if f0 == 0:
        raise ZeroDivisionError("reciprocal of a series with zero constant term")
    g0 = 1 / f0
    return _graded_solve(g0, f, f.cap, divide_by_degree=False, sign=-g0)


def log_series(f: TruncatedSeries) -> TruncatedSeries:
    """Logarithm of ``f`` with the principal value at the origin.

    Only the constant term depends on the branch; degrees ``>= 1`` come from
    ``R log f = Rf / f`` and are branch independent.
    """
    f0 = f.constant_term
    if f0 == 0:
        raise ValueError("log of a series with zero constant term")
    h = multiply(radial_derivative(f), reciprocal(f))
    blocks = [_scale_block(b, 1 / n) for n, b in enumerate(h.blocks) if n > 0]
    head = _combine(np.zeros((1, f.dimension), dtype=np.int64), np.array([principal_log(f0)]), 0)
    return TruncatedSeries(f.dimension, f.cap, [head] + blocks)


def exp_series(f: TruncatedSeries) -> TruncatedSeries:
    """``exp(f)`` through the cap of ``f``."""
    return _graded_solve(cmath.exp(f.constant_term), radial_derivative(f), f.cap,
                         divide_by_degree=True, sign=1.0)


def substitute(f: TruncatedSeries, w: TruncatedSeries) -> TruncatedSeries:
    """Composition ``f(w(z))`` of a one-variable ``f`` with ``w(0) = 0``.

    Horner's rule over the series ring.  The result cap is the cap of ``w``,
    lowered when ``f`` is not known far enough to fix every coefficient.
    """
    if f.dimension != 1:
        raise ValueError("outer series must be univariate")
    if w.constant_term != 0:
        raise ValueError("inner series must vanish at the origin")
    order = next((n for n, b in enumerate(w.blocks) if b[1].size), None)
    cap = w.cap if order is None else min(w.cap, (f.cap + 1) * order - 1)
    w = w.truncate(cap)
    a = f.univariate_coefficients()
    top = min(f.cap, cap if order is None else cap // order)
    out = TruncatedSeries.constant(a[top], w.dimension, cap)
    for k in range(top - 1, -1, -1):
        out = out * w + a[k]
    return out


def homogeneous_parts(f: TruncatedSeries) -> list[HomogeneousPart]:
    """Split ``f`` into its nonzero homogeneous pieces (degree ascending)."""
    d, cap = f.dimension, f.cap
    parts = []
    for n, block in enumerate(f.blocks):
        if not block[1].size:
            continue
        blocks = [_empty_block(d) for _ in range(cap + 1)]
        blocks[n] = block
        parts.append(HomogeneousPart(n, TruncatedSeries(d, cap, blocks)))
    return parts


def monomial_values(exps: np.ndarray, z: np.ndarray) -> np.ndarray:
    """``z^alpha`` for points ``z`` of shape (P, d) and exponent rows (m, d)."""
    z = np.asarray(z, dtype=complex)
    out = np.ones((z.shape[0], exps.shape[0]), dtype=complex)
    for j in range(exps.shape[1]):
        col = exps[:, j]
        if col.any():
            out *= z[:, j : j + 1] ** col[None, :]
    return out


def evaluate(f: TruncatedSeries, z):
    """Evaluate the truncation at one point (shape (d,)) or many (shape (P, d)).

    Homogeneous blocks are summed in increasing degree.  For ``d == 1`` a
    bare scalar or 1-D array of points is accepted as well.
    """
    z = np.asarray(z, dtype=complex)
    scalar = False
    if f.dimension == 1 and z.ndim <= 1:
        scalar = z.ndim == 0
        z = z.reshape(-1, 1)
    elif z.ndim == 1:
        scalar = True
        z = z.reshape(1, -1)
    if z.shape[1] != f.dimension:
        raise ValueError(f"points have dimension {z.shape[1]}, series has {f.dimension}")
    total = np.zeros(z.shape[0], dtype=complex)
    for e, c in f.blocks:
        if c.size:
            total += monomial_values(e, z) @ c
    return complex(total[0]) if scalar else total


def slice_coefficients(f: TruncatedSeries, directions) -> np.ndarray:
    """Coefficients of ``lambda -> f(lambda * zeta)`` for each direction.

    Returns an array of shape ``(len(directions), cap + 1)``.
    """
    zeta = np.atleast_2d(np.asarray(directions, dtype=complex))
    if zeta.shape[1] != f.dimension:
        raise ValueError("direction dimension mismatch")
    out = np.zeros((zeta.shape[0], f.cap + 1), dtype=complex)
    for n, (e, c) in enumerate(f.blocks):
        if c.size:
            out[:, n] = monomial_values(e, zeta) @ c
    return out


def ray_values(f: TruncatedSeries, directions, radii) -> np.ndarray:
    """``f(r * zeta)`` on the grid directions x radii, shape ``(S, R)``."""
    coeffs = slice_coefficients(f, directions)
    r = np.asarray(radii, dtype=float)
    out = np.zeros((coeffs.shape[0], r.size), dtype=complex)
    for n in range(coeffs.shape[1] - 1, -1, -1):
        out = out * r[None, :] + coeffs[:, n : n + 1]
    return out
