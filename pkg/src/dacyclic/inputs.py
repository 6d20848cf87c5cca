"""Reading and writing polynomials in the JSON exchange format.

A document looks like::

    {"dimension": 2,
     "terms": [{"exponents": [0, 0], "coeff": [1.0, 0.0]},
               {"exponents": [1, 0], "coeff": [-1.0, 0.0]}]}

Duplicate exponent tuples are summed.  ``coeff`` may also be a bare real
number.  An optional ``"form": "reciprocal"`` marks the document as the
reciprocal ``1/p`` of the listed polynomial ``p``; the polynomial itself is
still what is checked for stability.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from .series import TruncatedSeries, reciprocal

__all__ = ["InputError", "PolynomialInput", "parse_polynomial", "load_polynomial", "polynomial_to_json"]

FORMS = ("polynomial", "reciprocal")


class InputError(ValueError):
    """Malformed polynomial document."""


@dataclass(frozen=True)
class PolynomialInput:
    polynomial: TruncatedSeries
    form: str = "polynomial"

    @property
    def dimension(self) -> int:
        return self.polynomial.dimension

    def function(self, cap: int) -> TruncatedSeries:
        """The described function (``p`` or ``1/p``) through degree ``cap``."""
        p = _recap(self.polynomial, cap)
        if self.form == "reciprocal":
            return reciprocal(p)
        return p


def _recap(p: TruncatedSeries, cap: int) -> TruncatedSeries:
    if cap <= p.cap:
        return p.truncate(cap)
    return TruncatedSeries.from_terms(p.dimension, cap, p.coefficients().items())


def _coeff(raw) -> complex:
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return complex(raw)
    if isinstance(raw, (list, tuple)) and len(raw) == 2 and all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw):
        return complex(raw[0], raw[1])
    raise InputError(f"coefficient {raw!r} is not [re, im] or a number")


def parse_polynomial(doc) -> PolynomialInput:
    """Validate a decoded JSON document."""
    if not isinstance(doc, dict):
        raise InputError("top level must be an object")
    d = doc.get("dimension")
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise InputError("'dimension' must be a positive integer")
    terms = doc.get("terms")
    if not isinstance(terms, list):
        raise InputError("'terms' must be a list")
    form = doc.get("form", "polynomial")
    if form not in FORMS:
        raise InputError(f"'form' must be one of {FORMS}")
    pairs = []
    for i, t in enumerate(terms):
        if not isinstance(t, dict) or "exponents" not in t or "coeff" not in t:
            raise InputError(f"term {i} needs 'exponents' and 'coeff'")
        e = t["exponents"]
        if not isinstance(e, list) or not all(isinstance(a, int) and not isinstance(a, bool) and a >= 0
                                              for a in e):
            raise InputError(f"term {i}: exponents must be non-negative integers")
        if len(e) != d:
            raise InputError(f"term {i}: exponent list has length {len(e)}, dimension is {d}")
        pairs.append((tuple(e), _coeff(t["coeff"])))
    return PolynomialInput(TruncatedSeries.from_terms(d, None, pairs), form)


def load_polynomial(path: str) -> PolynomialInput:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    return parse_polynomial(doc)


def polynomial_to_json(p: TruncatedSeries, form: str = "polynomial") -> dict:
    doc = {
        "dimension": p.dimension,
        "terms": [{"exponents": list(map(int, a)), "coeff": [c.real, c.imag]} for a, c in p.items()],
    }
    if form != "polynomial":
        doc["form"] = form
    return doc
