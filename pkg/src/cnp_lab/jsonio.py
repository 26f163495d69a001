"""JSON encoding of numbers.

Reals are written as decimal strings with 17 significant digits (enough to
round-trip any double) and complex numbers as ``{"re": ..., "im": ...}``
pairs of such strings, so reports never depend on float formatting of the
JSON library or the locale.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import SchemaError


def enc_real(x) -> str:
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return repr(x)
    return format(x, ".17g")


def enc_complex(z) -> dict:
    z = complex(z)
    return {"re": enc_real(z.real), "im": enc_real(z.imag)}


def enc_point(p) -> list:
    return [enc_complex(c) for c in np.ravel(p)]


def enc_points(pts) -> list:
    return [enc_point(p) for p in np.asarray(pts, dtype=complex)]


def dec_real(v) -> float:
    if isinstance(v, bool):
        raise SchemaError(f"expected a number, got {v!r}")
    if isinstance(v, (int, float, str)):
        try:
            return float(v)
        except ValueError:
            raise SchemaError(f"not a real number: {v!r}") from None
    raise SchemaError(f"expected a number, got {v!r}")


def dec_complex(v) -> complex:
    """Accept a number, a Python-style complex string (``"0.3+0.1j"``) or a re/im pair."""
    if isinstance(v, dict):
        if set(v) != {"re", "im"}:
            raise SchemaError(f"complex number needs exactly 're' and 'im', got {sorted(v)}")
        return complex(dec_real(v["re"]), dec_real(v["im"]))
    if isinstance(v, bool):
        raise SchemaError(f"expected a number, got {v!r}")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, str):
        try:
            v = v.replace(" ", "")
            return complex(v[:-1] + "j" if v.endswith("i") else v)
        except ValueError:
            raise SchemaError(f"not a complex number: {v!r}") from None
    raise SchemaError(f"expected a number, got {v!r}")


def dec_point(v) -> list:
    if not isinstance(v, list):
        return [dec_complex(v)]
    return [dec_complex(c) for c in v]


def dec_points(v) -> np.ndarray:
    if not isinstance(v, list) or not v:
        raise SchemaError("expected a non-empty list of points")
    pts = [dec_point(p) for p in v]
    if len({len(p) for p in pts}) != 1:
        raise SchemaError("points have inconsistent dimensions")
    return np.array(pts, dtype=complex)
