"""Truncated one-variable power series with real coefficients.

Diagonal kernels ``K(z, w) = k(z w̄)`` are determined by the series ``k(t)``;
the coefficients of ``1 - 1/k`` give an oracle for the CNP test that does not
go through any eigenvalue computation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import NotNormalized, ZeroConstantTerm

DEFAULT_ORDER = 32
DIAGONAL_TOL = 1e-12


@dataclass(frozen=True)
class PowerSeries:
    """Coefficients ``c_0 .. c_N`` of a series truncated at degree ``N``."""

    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("a power series needs at least the constant term")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @classmethod
    def from_array(cls, arr: Sequence[float]) -> "PowerSeries":
        return cls(tuple(arr))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> float:
        return self.coeffs[n]

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs)

    def truncate(self, order: int) -> "PowerSeries":
        return PowerSeries(self.coeffs[: order + 1])

    def __call__(self, t):
        """Evaluate the truncated polynomial (Horner)."""
        acc = np.zeros_like(np.asarray(t, dtype=complex)) if np.ndim(t) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def tail_bound(self, t: float) -> float:
        """``|t|^(N+1) max|c| / (1 - |t|)``: the discarded tail when coefficients stay bounded."""
        r = abs(t)
        if r >= 1:
            return float("inf")
        return r ** (self.order + 1) * max(abs(c) for c in self.coeffs) / (1 - r)

    def __add__(self, other):
        return series_add(self, _coerce(other, self.order))

    __radd__ = __add__

    def __sub__(self, other):
        return series_add(self, -_coerce(other, self.order))

    def __rsub__(self, other):
        return series_add(_coerce(other, self.order), -self)

    def __neg__(self):
        return PowerSeries(tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if np.isscalar(other):
            return PowerSeries(tuple(other * c for c in self.coeffs))
        return series_mul(self, other)

    __rmul__ = __mul__


def _coerce(x, order):
    if isinstance(x, PowerSeries):
        return x
    return constant(float(x), order)


def constant(c: float, order: int = DEFAULT_ORDER) -> PowerSeries:
    return PowerSeries((c,) + (0.0,) * order)


def monomial(n: int, order: int = DEFAULT_ORDER, c: float = 1.0) -> PowerSeries:
    coeffs = [0.0] * (order + 1)
    if n <= order:
        coeffs[n] = c
    return PowerSeries(coeffs)


def geometric(order: int = DEFAULT_ORDER) -> PowerSeries:
    """``1/(1 - t)``: the diagonal symbol of the Szegő kernel."""
    return PowerSeries((1.0,) * (order + 1))


def series_add(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    n = min(a.order, b.order)
    return PowerSeries(tuple(a.coeffs[i] + b.coeffs[i] for i in range(n + 1)))


def series_mul(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Cauchy product truncated at the smaller of the two orders."""
    n = min(a.order, b.order)
    prod = np.convolve(a.as_array()[: n + 1], b.as_array()[: n + 1])[: n + 1]
    return PowerSeries(prod)


def series_reciprocal(a: PowerSeries) -> PowerSeries:
    """``1/a`` via ``r_i = -(sum_{j=1..i} c_j r_{i-j}) / c_0``."""
    c = a.coeffs
    if abs(c[0]) <= 1e-14:
        raise ZeroConstantTerm(f"constant term {c[0]!r} is (numerically) zero")
    r = [1.0 / c[0]]
    for i in range(1, a.order + 1):
        s = 0.0
        for j in range(1, i + 1):
            s += c[j] * r[i - j]
        r.append(-s / c[0])
    return PowerSeries(r)


def binomial_series(p: float, order: int = DEFAULT_ORDER) -> PowerSeries:
    """Coefficients of ``(1 - t)^p``: ``(-1)^n C(p, n)`` with generalized binomials."""
    if order < 0:
        raise ValueError("order must be non-negative")
    coeffs = [1.0]
    term = 1.0
    for n in range(1, order + 1):
        # C(p, n) = C(p, n-1) (p - n + 1) / n, and the sign flips every step
        term = -term * (p - n + 1) / n
        coeffs.append(term)
    return PowerSeries(coeffs)


@dataclass(frozen=True)
class DiagonalVerdict:
    """Coefficient test on ``d = 1 - 1/k``.

    ``index``/``value`` locate the first coefficient below ``-tol``; both are
    ``None`` when every coefficient passes.
    """

    is_cnp: bool
    index: Optional[int]
    value: Optional[float]
    coefficients: PowerSeries
    tolerance: float

    @property
    def verdict(self) -> str:
        return "Cnp" if self.is_cnp else "NotCnp"


def diagonal_cnp_test(k: PowerSeries, tol: float = DIAGONAL_TOL) -> DiagonalVerdict:
    """Sign test on the coefficients of ``1 - 1/k`` for a normalized diagonal symbol."""
    if abs(k[0] - 1.0) > 1e-12:
        raise NotNormalized(f"diagonal symbol has k(0) = {k[0]!r}, expected 1")
    if not all(np.isfinite(k.coeffs)):
        raise ValueError("non-finite series coefficient")
    d = 1.0 - series_reciprocal(k)
    for n, dn in enumerate(d.coeffs):
        if dn < -tol:
            return DiagonalVerdict(False, n, dn, d, tol)
    return DiagonalVerdict(True, None, None, d, tol)
