"""Reproducing kernels as expression graphs.

Every node evaluates in closed form with numpy broadcasting: ``K.evaluate(X, Y)``
takes point arrays of shapes ``(..., d)`` that broadcast against each other.
``K.matrix(xs, ys)`` and :func:`gram` build the finite matrices all positivity
tests work on.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from . import series as ps
from .errors import (
    BadParameter,
    DimensionMismatch,
    NotRadial,
    SchemaError,
    VanishingAtBasePoint,
)
from .functions import (
    Constant,
    Coordinate,
    Domain,
    Mobius,
    Power,
    Product,
    RowMap,
    ScalarMap,
    UnimodularScale,
    as_points,
    ball,
    parse_expr,
    polydisc,
)
from .jsonio import dec_point, enc_point

VANISHING_FLOOR = 1e-13
NORMALIZATION_TOL = 1e-12


class Kernel:
    """Base class; subclasses provide ``domain``, ``base_point`` and ``evaluate``."""

    domain: Domain

    @property
    def dim(self) -> int:
        return self.domain.dim

    @property
    def base_point(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=complex)

    @property
    def normalized(self) -> bool:
        """Structural flag: ``K(x, base_point) = 1`` for every ``x``."""
        return False

    def evaluate(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:  # pragma: no cover
        raise NotImplementedError

    def points(self, pts, check_domain: bool = True) -> np.ndarray:
        pts = as_points(pts, self.dim)
        if check_domain:
            self.domain.check(pts)
        return pts

    def matrix(self, xs, ys=None) -> np.ndarray:
        """``[K(x_i, y_j)]``; ``ys`` defaults to ``xs``."""
        x = self.points(xs)
        y = x if ys is None else self.points(ys)
        return self.evaluate(x[:, None, :], y[None, :, :])

    def pairwise(self, xs, ys) -> np.ndarray:
        """``[K(x_i, y_i)]`` for paired samples."""
        x = self.points(xs)
        y = self.points(ys)
        return self.evaluate(x, y)

    def __call__(self, x, y) -> complex:
        return eval_kernel(self, x, y)

    def to_spec(self):  # pragma: no cover
        raise NotImplementedError


def _point_dim(x, dim):
    return as_points([x] if np.ndim(x) else [[x]], dim)


def eval_kernel(K: Kernel, x, y) -> complex:
    """``K(x, y)`` at a single pair of points."""
    return complex(K.matrix(_point_dim(x, K.dim), _point_dim(y, K.dim))[0, 0])


def gram(K: Kernel, pts) -> np.ndarray:
    """Gram matrix ``[K(x_i, x_j)]`` (duplicates allowed)."""
    return K.matrix(pts)


# --------------------------------------------------------------------------
# constructors


def _default_domain(f, domain):
    if domain is not None:
        return domain
    return polydisc(max(f.arity, 1))


@dataclass(frozen=True)
class SzegoOneVar(Kernel):
    """``K_u(x, y) = 1/(1 - u(x) conj(u(y)))`` for a scalar map ``u`` into the disc."""

    u: ScalarMap = Coordinate(0)
    domain: Optional[Domain] = None

    def __post_init__(self):
        object.__setattr__(self, "domain", _default_domain(self.u, self.domain))

    @property
    def normalized(self):
        return abs(self.u(self.base_point[None, :])[0]) < NORMALIZATION_TOL

    def evaluate(self, xs, ys):
        return 1.0 / (1.0 - self.u.evaluate(xs) * np.conj(self.u.evaluate(ys)))

    def to_spec(self):
        if self.u == Coordinate(0) and self.dim == 1:
            return "szego"
        return {"szego": {"u": str(self.u), "dim": self.dim}}


@dataclass(frozen=True)
class FromRowMap(Kernel):
    """``1/(1 - u(x) u(y)^*)`` for a row map into the open unit ball."""

    u: RowMap = None
    domain: Optional[Domain] = None

    def __post_init__(self):
        object.__setattr__(self, "domain", _default_domain(self.u, self.domain))

    @property
    def normalized(self):
        return np.linalg.norm(self.u(self.base_point[None, :])[0]) < NORMALIZATION_TOL

    def evaluate(self, xs, ys):
        return 1.0 / (1.0 - np.sum(self.u(xs) * np.conj(self.u(ys)), axis=-1))

    def to_spec(self):
        return {"row_kernel": {"entries": [str(e) for e in self.u.entries],
                               "dim": self.dim,
                               "ball": any(k == "ball" for k, _ in self.domain.blocks)}}


@dataclass(frozen=True)
class Tensor(Kernel):
    """``(K1 ⊗ K2)((x1, x2), (y1, y2)) = K1(x1, y1) K2(x2, y2)``."""

    k1: Kernel
    k2: Kernel

    @property
    def domain(self):
        return self.k1.domain * self.k2.domain

    @property
    def base_point(self):
        return np.concatenate([self.k1.base_point, self.k2.base_point])

    @property
    def normalized(self):
        return self.k1.normalized and self.k2.normalized

    def evaluate(self, xs, ys):
        d = self.k1.dim
        return (self.k1.evaluate(xs[..., :d], ys[..., :d])
                * self.k2.evaluate(xs[..., d:], ys[..., d:]))

    def to_spec(self):
        return {"tensor": [self.k1.to_spec(), self.k2.to_spec()]}


@dataclass(frozen=True)
class SchurProduct(Kernel):
    """Pointwise product of two kernels on the same domain."""

    k1: Kernel
    k2: Kernel

    def __post_init__(self):
        if self.k1.domain != self.k2.domain:
            raise DimensionMismatch("Schur product needs kernels on the same domain")

    @property
    def domain(self):
        return self.k1.domain

    @property
    def base_point(self):
        return self.k1.base_point

    @property
    def normalized(self):
        return (self.k1.normalized and self.k2.normalized
                and np.allclose(self.k1.base_point, self.k2.base_point))

    def evaluate(self, xs, ys):
        return self.k1.evaluate(xs, ys) * self.k2.evaluate(xs, ys)

    def to_spec(self):
        return {"schur": [self.k1.to_spec(), self.k2.to_spec()]}


@dataclass(frozen=True)
class WeightedBergman(Kernel):
    """``1/(1 - z w̄)^p`` on the disc; ``p = 2`` is the Bergman kernel."""

    p: float = 2.0
    domain: Domain = field(default_factory=lambda: polydisc(1))

    def __post_init__(self):
        if not self.p > 1:
            raise BadParameter(f"weighted Bergman exponent must exceed 1, got {self.p}")

    @property
    def normalized(self):
        return True

    def evaluate(self, xs, ys):
        return (1.0 - xs[..., 0] * np.conj(ys[..., 0])) ** (-self.p)

    def to_spec(self):
        return "bergman" if self.p == 2 else {"weighted_bergman": self.p}


@dataclass(frozen=True)
class Dbr(Kernel):
    """de Branges-Rovnyak transform ``(1 - φ(x) conj(φ(y))) K(x, y)``."""

    base: Kernel
    phi: ScalarMap

    def __post_init__(self):
        if self.phi.arity > self.base.dim:
            raise DimensionMismatch(f"multiplier {self.phi} reads beyond dimension {self.base.dim}")

    @property
    def domain(self):
        return self.base.domain

    @property
    def base_point(self):
        return self.base.base_point

    @property
    def normalized(self):
        return self.base.normalized and abs(self.phi(self.base_point[None, :])[0]) < NORMALIZATION_TOL

    def evaluate(self, xs, ys):
        return (1.0 - self.phi.evaluate(xs) * np.conj(self.phi.evaluate(ys))) * self.base.evaluate(xs, ys)

    def to_spec(self):
        return {"dbr": {"base": self.base.to_spec(), "phi": str(self.phi)}}


@dataclass(frozen=True)
class Conjugate(Kernel):
    """``f(x) K(x, y) conj(f(y))`` for a non-vanishing ``f``."""

    f: ScalarMap
    base: Kernel

    @property
    def domain(self):
        return self.base.domain

    @property
    def base_point(self):
        return self.base.base_point

    def evaluate(self, xs, ys):
        return self.f.evaluate(xs) * self.base.evaluate(xs, ys) * np.conj(self.f.evaluate(ys))

    def to_spec(self):
        return {"conjugate": {"f": str(self.f), "base": self.base.to_spec()}}


@dataclass(frozen=True)
class Normalized(Kernel):
    """``K(x, y) K(w, w) / (K(x, w) K(w, y))``: normalized at the point ``w``."""

    base: Kernel
    w: Tuple[complex, ...] = None

    def __post_init__(self):
        w = self.base.base_point if self.w is None else self.w
        w = tuple(complex(c) for c in np.ravel(w))
        if len(w) != self.base.dim:
            raise DimensionMismatch(f"base point has dimension {len(w)}, kernel {self.base.dim}")
        object.__setattr__(self, "w", w)
        self.base.domain.check(np.array([w]))
        kww = self.base.evaluate(np.array(w), np.array(w))
        if abs(kww) < VANISHING_FLOOR:
            raise VanishingAtBasePoint("kernel vanishes at (w, w)")

    @property
    def domain(self):
        return self.base.domain

    @property
    def base_point(self):
        return np.array(self.w, dtype=complex)

    @property
    def normalized(self):
        return True

    def evaluate(self, xs, ys):
        kxw = self.base.evaluate(xs, np.broadcast_to(self.base_point, xs.shape))
        kwy = self.base.evaluate(np.broadcast_to(self.base_point, ys.shape), ys)
        if np.any(np.abs(kxw) < VANISHING_FLOOR) or np.any(np.abs(kwy) < VANISHING_FLOOR):
            raise VanishingAtBasePoint("kernel vanishes against the base point on the sample")
        kww = self.base.evaluate(self.base_point, self.base_point)
        return self.base.evaluate(xs, ys) * kww / (kxw * kwy)

    def to_spec(self):
        return {"normalized": {"base": self.base.to_spec(), "at": enc_point(self.base_point)}}


# --------------------------------------------------------------------------
# convenience builders


def szego(n: int = 1) -> Kernel:
    """Szegő kernel of the disc (``n = 1``) or of the polydisc ``D^n``."""
    k = SzegoOneVar(Coordinate(0))
    for _ in range(n - 1):
        k = Tensor(k, SzegoOneVar(Coordinate(0)))
    return k


def cnp_kernel(u: ScalarMap, domain: Optional[Domain] = None) -> SzegoOneVar:
    return SzegoOneVar(u, domain)


def drury_arveson(n: int) -> FromRowMap:
    return FromRowMap(RowMap(tuple(Coordinate(i) for i in range(n))), ball(n))


def bergman() -> WeightedBergman:
    return WeightedBergman(2.0)


def tensor(*ks: Kernel) -> Kernel:
    out = ks[0]
    for k in ks[1:]:
        out = Tensor(out, k)
    return out


def dbr_transform(K: Kernel, phi: ScalarMap) -> Dbr:
    return Dbr(K, phi)


def normalize_kernel(K: Kernel, w=None) -> Normalized:
    return Normalized(K, None if w is None else tuple(np.ravel(np.asarray(w, dtype=complex))))


def mobius_normalize_multiplier(K: Kernel, phi: ScalarMap, w=None):
    """Move ``φ(w)`` to 0 without changing the dBR space up to congruence.

    Returns ``(φ̃, f)`` with ``φ̃ = b_μ ∘ φ``, ``μ = φ(w)`` and
    ``f = sqrt(1 - |μ|²) / (1 - conj(μ) φ)``, so that
    ``K^φ̃(x, y) = f(x) K^φ(x, y) conj(f(y))``.
    """
    w = K.base_point if w is None else np.ravel(np.asarray(w, dtype=complex))
    mu = complex(phi(w[None, :])[0])
    if abs(mu) >= 1:
        raise BadParameter(f"|φ(w)| = {abs(mu)} is not < 1")
    if mu == 0:
        return phi, Constant(1.0)
    return Mobius(mu, phi), Constant(np.sqrt(1 - abs(mu) ** 2)) / (1 - np.conj(mu) * phi)


# --------------------------------------------------------------------------
# diagonal symbols


def _monomial(phi: ScalarMap):
    """``(c, k)`` when ``φ(z) = c z^k`` structurally, else ``None``."""
    if phi == Coordinate(0):
        return 1.0, 1
    if isinstance(phi, Power) and phi.arg == Coordinate(0):
        return 1.0, phi.n
    if isinstance(phi, UnimodularScale):
        inner = _monomial(phi.arg)
        return None if inner is None else (phi.lam * inner[0], inner[1])
    if isinstance(phi, Product):
        c, k = 1.0, 0
        for f in phi.factors:
            if isinstance(f, Constant):
                c *= f.value
                continue
            m = _monomial(f)
            if m is None:
                return None
            c *= m[0]
            k += m[1]
        return c, k
    if isinstance(phi, Constant):
        return phi.value, 0
    return None


def radial_series(K: Kernel, order: int = ps.DEFAULT_ORDER) -> ps.PowerSeries:
    """Series ``k(t)`` with ``K(z, w) = k(z w̄)`` for diagonal kernels on the disc.

    Raises :class:`NotRadial` for kernels whose structure does not make them
    functions of ``z w̄`` alone.
    """
    if K.dim != 1:
        raise NotRadial("diagonal symbols are defined for kernels on the disc only")
    if isinstance(K, SzegoOneVar):
        m = _monomial(K.u)
        if m is None or abs(abs(m[0]) - 1) > 1e-15 or m[1] != 1:
            raise NotRadial(f"K_u with u = {K.u} is not the Szegő kernel")
        return ps.geometric(order)
    if isinstance(K, WeightedBergman):
        return ps.binomial_series(-K.p, order)
    if isinstance(K, SchurProduct):
        return radial_series(K.k1, order) * radial_series(K.k2, order)
    if isinstance(K, Dbr):
        m = _monomial(K.phi)
        if m is None:
            raise NotRadial(f"multiplier {K.phi} is not a monomial")
        c, k = m
        return (1.0 - ps.monomial(k, order, abs(c) ** 2)) * radial_series(K.base, order)
    if isinstance(K, Normalized) and np.all(K.base_point == 0):
        s = radial_series(K.base, order)
        return s * (1.0 / s[0])
    raise NotRadial(f"{type(K).__name__} has no diagonal symbol")


# --------------------------------------------------------------------------
# JSON description


def parse_kernel(spec, path: str = "kernel") -> Kernel:
    """Build a kernel from its JSON description (see README for the grammar)."""
    if isinstance(spec, str):
        if spec == "szego":
            return szego(1)
        if spec == "bergman":
            return bergman()
        raise SchemaError(f"unknown kernel name {spec!r}", field=path)
    if not isinstance(spec, dict) or len(spec) != 1:
        raise SchemaError("kernel description must be a name or a one-key object", field=path)
    (key, val), = spec.items()
    sub = f"{path}.{key}"
    try:
        if key == "polydisc_szego":
            return szego(int(val))
        if key == "drury_arveson":
            return drury_arveson(int(val))
        if key == "weighted_bergman":
            return WeightedBergman(float(val))
        if key == "szego":
            if isinstance(val, str):
                u = parse_expr(val)
                return SzegoOneVar(u)
            u = parse_expr(val["u"])
            dim = int(val.get("dim", max(u.arity, 1)))
            return SzegoOneVar(u, polydisc(dim))
        if key == "row_kernel":
            entries = tuple(parse_expr(e) for e in val["entries"])
            dim = int(val.get("dim", max((e.arity for e in entries), default=1)))
            dom = ball(dim) if val.get("ball", False) else polydisc(dim)
            return FromRowMap(RowMap(entries), dom)
        if key in ("tensor", "schur"):
            if not isinstance(val, list) or len(val) < 2:
                raise SchemaError(f"{key} needs a list of at least two kernels", field=sub)
            ks = [parse_kernel(k, f"{sub}[{i}]") for i, k in enumerate(val)]
            if key == "tensor":
                return tensor(*ks)
            out = ks[0]
            for k in ks[1:]:
                out = SchurProduct(out, k)
            return out
        if key == "dbr":
            return Dbr(parse_kernel(val["base"], f"{sub}.base"), parse_expr(val["phi"]))
        if key == "conjugate":
            return Conjugate(parse_expr(val["f"]), parse_kernel(val["base"], f"{sub}.base"))
        if key == "normalized":
            base = parse_kernel(val["base"], f"{sub}.base")
            at = val.get("at")
            return normalize_kernel(base, None if at is None else dec_point(at))
    except SchemaError as exc:
        if exc.field is None:
            raise SchemaError(str(exc), field=sub) from None
        raise
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed kernel description: {exc}", field=sub) from None
    except (BadParameter, DimensionMismatch, VanishingAtBasePoint, ValueError) as exc:
        raise SchemaError(str(exc), field=sub) from None
    raise SchemaError(f"unknown kernel constructor {key!r}", field=path)
