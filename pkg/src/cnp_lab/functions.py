"""Closed-form holomorphic maps on the disc, polydisc and ball.

A :class:`ScalarMap` is an immutable expression graph evaluated with numpy
broadcasting: calling it on an array of points of shape ``(..., d)`` returns
an array of shape ``(...)``.  :class:`RowMap` bundles finitely many scalar
maps into a row (a truncated ``B(E, C)``-valued map, with an optional
geometric bound on what the truncation threw away), and :class:`MatrixMap`
is a matrix of one-variable maps on the disc.

Expressions print in, and parse from, a small text grammar::

    mobius(0.5, coord(0))        b_0.5(z_1)
    scale(1j, coord(1))          i z_2
    coord(0) * coord(1)          z_1 z_2
    (0.5*z) / (1 - 0.5*z)        z is an alias for coord(0)
"""
from __future__ import annotations

import ast
import dataclasses
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import (
    BadParameter,
    CnpLabError,
    DimensionMismatch,
    DivisionNearZero,
    DomainViolation,
    SchemaError,
)

DIVISION_FLOOR = 1e-13
RADIUS_CAP = 0.95


# --------------------------------------------------------------------------
# domains and points


@dataclass(frozen=True)
class Domain:
    """Product of discs and balls; ``blocks`` is a tuple of ``(kind, dim)``."""

    blocks: Tuple[Tuple[str, int], ...]

    def __post_init__(self):
        for kind, dim in self.blocks:
            if kind not in ("disc", "ball") or dim < 1 or (kind == "disc" and dim != 1):
                raise BadParameter(f"bad domain block {(kind, dim)!r}")

    @property
    def dim(self) -> int:
        return sum(d for _, d in self.blocks)

    def __mul__(self, other: "Domain") -> "Domain":
        return Domain(self.blocks + other.blocks)

    @property
    def tag(self) -> str:
        if all(k == "disc" for k, _ in self.blocks):
            return "disc" if self.dim == 1 else f"polydisc{self.dim}"
        if len(self.blocks) == 1:
            return f"ball{self.dim}"
        return "x".join("disc" if k == "disc" else f"ball{d}" for k, d in self.blocks)

    def block_radii(self, pts: np.ndarray) -> np.ndarray:
        """Per-block radius (modulus, or Euclidean norm for balls): shape ``(..., blocks)``."""
        out = []
        start = 0
        for _, d in self.blocks:
            out.append(np.sqrt(np.sum(np.abs(pts[..., start:start + d]) ** 2, axis=-1)))
            start += d
        return np.stack(out, axis=-1)

    def contains(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=complex)
        return np.all(self.block_radii(pts) < 1.0, axis=-1)

    def check(self, pts) -> np.ndarray:
        pts = as_points(pts, self.dim)
        if not np.all(self.contains(pts)):
            bad = pts[~self.contains(pts)][0]
            raise DomainViolation(f"point {tuple(bad)} lies outside the {self.tag}")
        return pts


def polydisc(n: int) -> Domain:
    return Domain((("disc", 1),) * n)


def ball(n: int) -> Domain:
    return Domain((("ball", n),)) if n > 1 else polydisc(1)


def as_points(pts, dim: Optional[int] = None) -> np.ndarray:
    """Coerce a point or a list of points into a complex array ``(n, d)``.

    Scalars are read as one-dimensional points, so ``[0, 0.5]`` is two points
    of the disc when ``dim == 1``.
    """
    arr = np.asarray(pts, dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(-1, 1) if dim in (None, 1) else arr.reshape(1, -1)
    if dim is not None and arr.shape[-1] != dim:
        raise DimensionMismatch(f"points have dimension {arr.shape[-1]}, expected {dim}")
    return arr


# --------------------------------------------------------------------------
# scalar maps


def _fmt(c: complex) -> str:
    c = complex(c)
    if c.imag == 0.0:
        return repr(float(c.real))
    if c.real == 0.0:
        return f"{float(c.imag)!r}j"
    return repr(c)


def _wrap(x) -> "ScalarMap":
    if isinstance(x, ScalarMap):
        return x
    if isinstance(x, (int, float, complex, np.number)):
        return Constant(complex(x))
    raise TypeError(f"cannot use {type(x).__name__} as a scalar map")


class ScalarMap:
    """Base class of scalar expression nodes."""

    def __call__(self, pts) -> np.ndarray:
        return self.evaluate(np.asarray(pts, dtype=complex))

    def evaluate(self, pts: np.ndarray) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError

    @property
    def arity(self) -> int:
        """Smallest point dimension the expression can be evaluated on."""
        return max((c.arity for c in self.children()), default=0)

    def children(self):
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if isinstance(v, ScalarMap):
                yield v
            elif isinstance(v, tuple):
                yield from (x for x in v if isinstance(x, ScalarMap))

    def shifted(self, k: int) -> "ScalarMap":
        """The same map reading coordinate ``i + k`` wherever it read ``i``."""
        changes = {}
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if isinstance(v, ScalarMap):
                changes[f.name] = v.shifted(k)
            elif isinstance(v, tuple) and any(isinstance(x, ScalarMap) for x in v):
                changes[f.name] = tuple(x.shifted(k) if isinstance(x, ScalarMap) else x for x in v)
        return dataclasses.replace(self, **changes) if changes else self

    # arithmetic sugar
    def __add__(self, other):
        return Sum((self, _wrap(other)))

    def __radd__(self, other):
        return Sum((_wrap(other), self))

    def __sub__(self, other):
        return Sum((self, Product((Constant(-1.0), _wrap(other)))))

    def __rsub__(self, other):
        return Sum((_wrap(other), Product((Constant(-1.0), self))))

    def __neg__(self):
        return Product((Constant(-1.0), self))

    def __mul__(self, other):
        return Product((self, _wrap(other)))

    def __rmul__(self, other):
        return Product((_wrap(other), self))

    def __truediv__(self, other):
        return Quotient(self, _wrap(other))

    def __rtruediv__(self, other):
        return Quotient(_wrap(other), self)

    def __pow__(self, n):
        return Power(self, int(n))


@dataclass(frozen=True, eq=True)
class Coordinate(ScalarMap):
    index: int

    def evaluate(self, pts):
        if pts.shape[-1] <= self.index:
            raise DimensionMismatch(f"coord({self.index}) needs dimension > {self.index}")
        return pts[..., self.index]

    @property
    def arity(self):
        return self.index + 1

    def shifted(self, k):
        return Coordinate(self.index + k)

    def __str__(self):
        return f"coord({self.index})"


@dataclass(frozen=True, eq=True)
class Constant(ScalarMap):
    value: complex

    def evaluate(self, pts):
        return np.full(pts.shape[:-1], complex(self.value))

    def __str__(self):
        return _fmt(self.value)


@dataclass(frozen=True, eq=True)
class Mobius(ScalarMap):
    """Disc automorphism ``b_mu(w) = (w - mu)/(1 - conj(mu) w)`` applied to ``arg``."""

    mu: complex
    arg: ScalarMap = Coordinate(0)

    def __post_init__(self):
        if not abs(self.mu) < 1:
            raise BadParameter(f"Möbius parameter must lie in the disc, got {self.mu!r}")

    def evaluate(self, pts):
        w = self.arg.evaluate(pts)
        den = 1 - np.conj(self.mu) * w
        if np.any(np.abs(den) < DIVISION_FLOOR):
            raise DivisionNearZero("Möbius denominator vanishes")
        return (w - self.mu) / den

    def __str__(self):
        return f"mobius({_fmt(self.mu)}, {self.arg})"


@dataclass(frozen=True, eq=True)
class UnimodularScale(ScalarMap):
    lam: complex
    arg: ScalarMap = Coordinate(0)

    def __post_init__(self):
        if abs(abs(self.lam) - 1) > 1e-12:
            raise BadParameter(f"scale factor must be unimodular, got {self.lam!r}")

    def evaluate(self, pts):
        return self.lam * self.arg.evaluate(pts)

    def __str__(self):
        return f"scale({_fmt(self.lam)}, {self.arg})"


@dataclass(frozen=True, eq=True)
class Sum(ScalarMap):
    terms: Tuple[ScalarMap, ...]

    def evaluate(self, pts):
        out = self.terms[0].evaluate(pts)
        for t in self.terms[1:]:
            out = out + t.evaluate(pts)
        return out

    def __str__(self):
        return "add(" + ", ".join(str(t) for t in self.terms) + ")"


@dataclass(frozen=True, eq=True)
class Product(ScalarMap):
    factors: Tuple[ScalarMap, ...]

    def evaluate(self, pts):
        out = self.factors[0].evaluate(pts)
        for f in self.factors[1:]:
            out = out * f.evaluate(pts)
        return out

    def __str__(self):
        return "mul(" + ", ".join(str(f) for f in self.factors) + ")"


@dataclass(frozen=True, eq=True)
class Quotient(ScalarMap):
    num: ScalarMap
    den: ScalarMap

    def evaluate(self, pts):
        d = self.den.evaluate(pts)
        if np.any(np.abs(d) < DIVISION_FLOOR):
            raise DivisionNearZero(f"denominator {self.den} vanishes on the sample")
        return self.num.evaluate(pts) / d

    def __str__(self):
        return f"div({self.num}, {self.den})"


@dataclass(frozen=True, eq=True)
class Power(ScalarMap):
    arg: ScalarMap
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise BadParameter("negative powers are written as quotients")

    def evaluate(self, pts):
        return self.arg.evaluate(pts) ** self.n

    def __str__(self):
        return f"pow({self.arg}, {self.n})"


@dataclass(frozen=True, eq=True)
class Polynomial(ScalarMap):
    """``sum_k coeffs[k] * arg^k``."""

    coeffs: Tuple[complex, ...]
    arg: ScalarMap = Coordinate(0)

    def evaluate(self, pts):
        w = self.arg.evaluate(pts)
        out = np.zeros(w.shape, dtype=complex)
        for c in reversed(self.coeffs):
            out = out * w + c
        return out

    def __str__(self):
        return "poly([" + ", ".join(_fmt(c) for c in self.coeffs) + f"], {self.arg})"


@dataclass(frozen=True, eq=True)
class ComposeOneVar(ScalarMap):
    """``outer(inner(x))`` where ``outer`` is a map of one variable."""

    outer: ScalarMap
    inner: ScalarMap

    def __post_init__(self):
        if self.outer.arity > 1:
            raise DimensionMismatch("outer map of a composition must be one-variable")

    def evaluate(self, pts):
        w = self.inner.evaluate(pts)
        return self.outer.evaluate(w[..., None])

    @property
    def arity(self):
        return self.inner.arity

    def shifted(self, k):
        return ComposeOneVar(self.outer, self.inner.shifted(k))

    def __str__(self):
        return f"compose({self.outer}, {self.inner})"


def coord(i: int = 0) -> Coordinate:
    return Coordinate(i)


def identity() -> Coordinate:
    return Coordinate(0)


def mobius_compose(mu: complex, f: ScalarMap) -> ScalarMap:
    """``b_mu ∘ f``."""
    if not abs(mu) < 1:
        raise BadParameter(f"|mu| must be < 1, got {abs(mu)}")
    return Mobius(complex(mu), f)


def compose(outer: ScalarMap, inner: ScalarMap) -> ScalarMap:
    return ComposeOneVar(outer, inner)


def eval_scalar(f: ScalarMap, x, domain: Optional[Domain] = None) -> complex:
    """Evaluate ``f`` at the single point ``x``."""
    dim = domain.dim if domain is not None else max(f.arity, 1)
    pts = as_points([x] if np.ndim(x) else [[x]], dim)
    if domain is not None:
        domain.check(pts)
    return complex(f(pts)[0])


# --------------------------------------------------------------------------
# row- and matrix-valued maps


@dataclass(frozen=True)
class GeometricTail:
    """Entries beyond the truncation satisfy ``|f_i(x)| <= lead * ratio^i``."""

    ratio: float
    lead: float

    def __post_init__(self):
        if not 0 <= self.ratio < 1:
            raise BadParameter(f"tail ratio must lie in [0, 1), got {self.ratio}")

    def mass(self, width: int) -> float:
        """Bound on the discarded squared ℓ² norm ``sum_{i >= width} |f_i|²``."""
        return self.lead ** 2 * self.ratio ** (2 * width) / (1 - self.ratio ** 2)


@dataclass(frozen=True)
class RowMap:
    """A row ``x -> (f_0(x), ..., f_{m-1}(x))``, possibly a truncated ℓ² row."""

    entries: Tuple[ScalarMap, ...]
    tail: Optional[GeometricTail] = None

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(_wrap(e) for e in self.entries))

    @property
    def width(self) -> int:
        return len(self.entries)

    @property
    def arity(self) -> int:
        return max((e.arity for e in self.entries), default=0)

    @property
    def tail_mass(self) -> float:
        return 0.0 if self.tail is None else self.tail.mass(self.width)

    def __call__(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=complex)
        if not self.entries:
            return np.zeros(pts.shape[:-1] + (0,), dtype=complex)
        return np.stack([e.evaluate(pts) for e in self.entries], axis=-1)

    def shifted(self, k: int) -> "RowMap":
        return RowMap(tuple(e.shifted(k) for e in self.entries), self.tail)

    def gram(self, xs, ys) -> np.ndarray:
        """Matrix ``[row(x_i) row(y_j)^*]``."""
        return self(xs) @ self(ys).conj().T

    def __str__(self):
        return "row(" + ", ".join(str(e) for e in self.entries) + ")"


def eval_row(f: RowMap, x, domain: Optional[Domain] = None) -> np.ndarray:
    dim = domain.dim if domain is not None else max(f.arity, 1)
    pts = as_points([x] if np.ndim(x) else [[x]], dim)
    if domain is not None:
        domain.check(pts)
    return f(pts)[0]


def row_gram_term(f: RowMap, x, y, domain: Optional[Domain] = None):
    """``f(x) f(y)^*`` and the bound on what the truncation omitted.

    By Cauchy-Schwarz the omitted part of the inner product is at most the
    declared tail mass.
    """
    value = complex(np.sum(eval_row(f, x, domain) * np.conj(eval_row(f, y, domain))))
    return value, f.tail_mass


@dataclass(frozen=True)
class MatrixMap:
    """A ``rows x cols`` matrix of one-variable maps on the disc; absent entries are zero."""

    shape: Tuple[int, int]
    entries: Tuple[Tuple[Tuple[int, int], ScalarMap], ...] = ()

    def __post_init__(self):
        ent = self.entries.items() if isinstance(self.entries, dict) else self.entries
        clean = []
        for (i, j), f in ent:
            f = _wrap(f)
            if not (0 <= i < self.shape[0] and 0 <= j < self.shape[1]):
                raise DimensionMismatch(f"entry {(i, j)} outside shape {self.shape}")
            if f.arity > 1:
                raise DimensionMismatch("matrix map entries must be one-variable")
            clean.append(((int(i), int(j)), f))
        object.__setattr__(self, "entries", tuple(sorted(clean, key=lambda e: e[0])))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "MatrixMap":
        ent = {}
        for i, row in enumerate(rows):
            for j, f in enumerate(row):
                if f is not None and not (isinstance(f, (int, float, complex)) and f == 0):
                    ent[(i, j)] = f
        return cls((len(rows), len(rows[0]) if rows else 0), ent)

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape + self.shape, dtype=complex)
        pts = z[..., None]
        for (i, j), f in self.entries:
            out[..., i, j] = f.evaluate(pts)
        return out

    def hstack(self, other: "MatrixMap") -> "MatrixMap":
        if self.shape[0] != other.shape[0]:
            raise DimensionMismatch(f"cannot stack {self.shape} next to {other.shape}")
        shift = self.shape[1]
        ent = list(self.entries) + [((i, j + shift), f) for (i, j), f in other.entries]
        return MatrixMap((self.shape[0], shift + other.shape[1]), tuple(ent))

    def sup_norm(self, radius: float = 0.99, n_radii: int = 12, n_angles: int = 48) -> float:
        """Largest operator norm over a polar grid of the closed disc of ``radius``."""
        z = disc_grid(radius, n_radii, n_angles)
        vals = self(z)
        if 0 in self.shape:
            return 0.0
        return float(np.max(np.linalg.norm(vals, ord=2, axis=(-2, -1))))


def disc_grid(radius: float, n_radii: int = 12, n_angles: int = 48) -> np.ndarray:
    """Polar grid of the disc of given radius (origin included, outer circle included)."""
    rs = np.linspace(0.0, radius, n_radii)
    th = 2 * np.pi * np.arange(n_angles) / n_angles
    z = (rs[:, None] * np.exp(1j * th)[None, :]).ravel()
    return np.concatenate([[0.0], z[n_angles:]])


# --------------------------------------------------------------------------
# text grammar

_FUNCS = {"coord", "const", "mobius", "scale", "pow", "poly", "compose", "add", "mul", "div",
          "sub", "sqrt"}


def parse_expr(text: str) -> ScalarMap:
    """Parse the expression grammar into a :class:`ScalarMap`.

    Names: ``z`` (= ``coord(0)``), ``z1`` .. ``z9`` (1-based coordinates) and
    ``i``/``j`` for the imaginary unit.  Functions: ``coord(k)``, ``const(c)``,
    ``mobius(mu, f)``, ``scale(lam, f)``, ``pow(f, n)``, ``poly([c0, ...], f)``,
    ``compose(outer, inner)``, ``add``/``mul`` (variadic), ``sub``, ``div`` and
    ``sqrt`` of a constant.  Infix ``+ - * / **`` work too.
    """
    if not isinstance(text, str):
        raise SchemaError(f"expression must be a string, got {type(text).__name__}")
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise SchemaError(f"cannot parse expression {text!r}: {exc.msg}") from None
    return _wrap(_build(tree.body, text))


def _const_value(node, text):
    v = _build(node, text)
    if isinstance(v, Constant):
        return v.value
    if isinstance(v, (int, float, complex)):
        return complex(v)
    raise SchemaError(f"expected a numeric constant in {text!r}, got {v}")


def _build(node, text):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)):
        return Constant(complex(node.value))
    if isinstance(node, ast.Name):
        name = node.id
        if name == "z":
            return Coordinate(0)
        if name in ("i", "j"):
            return Constant(1j)
        if len(name) == 2 and name[0] == "z" and name[1].isdigit() and name[1] != "0":
            return Coordinate(int(name[1]) - 1)
        raise SchemaError(f"unknown name {name!r} in {text!r}")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _build(node.operand, text)
        if isinstance(node.op, ast.UAdd):
            return v
        return Constant(-v.value) if isinstance(v, Constant) else -v
    if isinstance(node, ast.BinOp):
        a = _build(node.left, text)
        b = _build(node.right, text)
        both = isinstance(a, Constant) and isinstance(b, Constant)
        op = type(node.op)
        if op is ast.Add:
            return Constant(a.value + b.value) if both else a + b
        if op is ast.Sub:
            return Constant(a.value - b.value) if both else a - b
        if op is ast.Mult:
            return Constant(a.value * b.value) if both else a * b
        if op is ast.Div:
            return Constant(a.value / b.value) if both else a / b
        if op is ast.Pow:
            if not isinstance(b, Constant) or b.value.imag or b.value.real != int(b.value.real):
                raise SchemaError(f"exponent must be an integer constant in {text!r}")
            return Constant(a.value ** int(b.value.real)) if both else Power(a, int(b.value.real))
        raise SchemaError(f"unsupported operator in {text!r}")
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
        fn = node.func.id
        if fn not in _FUNCS or node.keywords:
            raise SchemaError(f"unknown function {fn!r} in {text!r}")
        args = node.args
        try:
            if fn == "coord":
                (k,) = args
                k = _const_value(k, text)
                return Coordinate(int(k.real))
            if fn == "const":
                (c,) = args
                return Constant(_const_value(c, text))
            if fn == "sqrt":
                (c,) = args
                c = _const_value(c, text)
                if c.imag == 0 and c.real >= 0:
                    return Constant(math.sqrt(c.real))
                return Constant(complex(np.sqrt(c)))
            if fn == "mobius":
                mu, f = args
                return Mobius(_const_value(mu, text), _wrap(_build(f, text)))
            if fn == "scale":
                lam, f = args
                return UnimodularScale(_const_value(lam, text), _wrap(_build(f, text)))
            if fn == "pow":
                f, n = args
                n = _const_value(n, text)
                return Power(_wrap(_build(f, text)), int(n.real))
            if fn == "poly":
                cs, f = args
                if not isinstance(cs, (ast.List, ast.Tuple)):
                    raise SchemaError(f"poly expects a coefficient list in {text!r}")
                return Polynomial(tuple(_const_value(c, text) for c in cs.elts),
                                  _wrap(_build(f, text)))
            if fn == "compose":
                outer, inner = args
                return ComposeOneVar(_wrap(_build(outer, text)), _wrap(_build(inner, text)))
            if fn in ("add", "mul"):
                if not args:
                    raise SchemaError(f"{fn}() needs arguments in {text!r}")
                parts = tuple(_wrap(_build(a, text)) for a in args)
                if len(parts) == 1:
                    return parts[0]
                return Sum(parts) if fn == "add" else Product(parts)
            if fn == "sub":
                a, b = args
                return _wrap(_build(a, text)) - _wrap(_build(b, text))
            if fn == "div":
                a, b = args
                return Quotient(_wrap(_build(a, text)), _wrap(_build(b, text)))
        except SchemaError:
            raise
        except CnpLabError as exc:
            raise SchemaError(f"{exc} in {text!r}") from None
        except ValueError:
            raise SchemaError(f"wrong arguments to {fn}() in {text!r}") from None
    raise SchemaError(f"unsupported syntax in {text!r}")
