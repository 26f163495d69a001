"""Decompositions ``1 - 1/K = g g^* - f f^*``, composition witnesses and classifiers.

For a normalized CNP-type kernel written as ``1 - 1/K = g g^* - f f^*``, the
dBR kernel ``(1 - φ φ^*) K`` (with ``φ(w) = 0``) is again CNP exactly when a
contractive ``Ψ = [ψ1 ψ2]`` on the disc satisfies

    f(x) = g(x) ψ1(φ(x)),    φ(x) = g(x) ψ2(φ(x)).

Nothing here proves existence of ``Ψ``; the builders produce explicit rows and
explicit ``Ψ`` for the families where they are known in closed form, and the
verifiers measure the defects of these identities on samples.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .errors import BadParameter, ConstraintViolation, DimensionMismatch
from .functions import (
    Constant,
    Coordinate,
    GeometricTail,
    MatrixMap,
    Mobius,
    Polynomial,
    Power,
    RowMap,
    ScalarMap,
    UnimodularScale,
    disc_grid,
)
from .jsonio import enc_complex, enc_points, enc_real
from .kernels import Dbr, Kernel, SchurProduct, SzegoOneVar, Tensor, WeightedBergman
from . import series as ps

EXACT_RESIDUAL = 1e-13
IDENTITY_DEFECT = 1e-12
SUP_NORM_SLACK = 1e-9
FIT_TOL = 1e-10


# --------------------------------------------------------------------------
# decompositions


@dataclass(frozen=True)
class DecompositionPair:
    """Rows ``g``, ``f`` with ``|1 - 1/K - (g g^* - f f^*)| <= residual_bound``.

    The bound covers both floating-point error and everything the rows omit,
    for points whose coordinates stay within ``radius``.
    """

    g: RowMap
    f: RowMap
    kernel: Kernel
    residual_bound: float
    radius: float = 0.95
    notes: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.g.width == 0:
            raise BadParameter("g must be a non-zero row")

    def lhs(self, xs, ys) -> np.ndarray:
        """``1 - 1/K(x_i, y_i)`` for paired points."""
        return 1.0 - 1.0 / self.kernel.pairwise(xs, ys)

    def rhs(self, xs, ys) -> np.ndarray:
        xs, ys = self.kernel.points(xs), self.kernel.points(ys)
        return (np.sum(self.g(xs) * np.conj(self.g(ys)), axis=-1)
                - np.sum(self.f(xs) * np.conj(self.f(ys)), axis=-1))

    def residuals(self, xs, ys) -> np.ndarray:
        return np.abs(self.lhs(xs, ys) - self.rhs(xs, ys))

    def max_residual(self, xs, ys) -> float:
        return float(np.max(self.residuals(xs, ys)))

    def holds(self, xs, ys) -> bool:
        return self.max_residual(xs, ys) <= self.residual_bound


def _radius(radius: float) -> float:
    if not 0 < radius <= 0.95:
        raise BadParameter(f"radius must lie in (0, 0.95], got {radius}")
    return float(radius)


def decompose_cnp(u: ScalarMap) -> DecompositionPair:
    """``1 - 1/K_u = u u^*`` with ``f = 0``."""
    return DecompositionPair(RowMap((u,)), RowMap(()), SzegoOneVar(u), EXACT_RESIDUAL)


def decompose_tensor2(u: ScalarMap, v: ScalarMap) -> DecompositionPair:
    """``1 - 1/(K_u ⊗ K_v) = u u^* + v v^* - (uv)(uv)^*``; ``v`` reads the second factor."""
    ku, kv = SzegoOneVar(u), SzegoOneVar(v)
    v2 = v.shifted(ku.dim)
    return DecompositionPair(RowMap((u, v2)), RowMap((u * v2,)), Tensor(ku, kv), EXACT_RESIDUAL)


def decompose_tensor3(t: ScalarMap, u: ScalarMap, v: ScalarMap) -> DecompositionPair:
    """Three-factor analogue: ``g = (t, u, v, tuv)``, ``f = (tu, uv, tv)``."""
    kt, ku, kv = SzegoOneVar(t), SzegoOneVar(u), SzegoOneVar(v)
    u2 = u.shifted(kt.dim)
    v3 = v.shifted(kt.dim + ku.dim)
    g = RowMap((t, u2, v3, t * u2 * v3))
    f = RowMap((t * u2, u2 * v3, t * v3))
    return DecompositionPair(g, f, Tensor(Tensor(kt, ku), kv), EXACT_RESIDUAL)


def decompose_schur(u: ScalarMap) -> DecompositionPair:
    """``1 - 1/K_u² = 2 u u^* - u²(u²)^*``."""
    ku = SzegoOneVar(u)
    return DecompositionPair(RowMap((math.sqrt(2) * u,)), RowMap((u ** 2,)),
                             SchurProduct(ku, ku), EXACT_RESIDUAL)


def weighted_bergman_coefficients(p: float, order: int) -> np.ndarray:
    """Coefficients of ``1 - (1 - t)^p`` up to ``t^order``."""
    return -ps.binomial_series(p, order).as_array() * np.r_[0.0, np.ones(order)]


def weighted_bergman_tail(p: float, width: int, radius: float) -> float:
    """Bound on ``sum_{n > width} |d_n| r^(2n)`` for the coefficients ``d_n`` of ``1 - (1-t)^p``.

    ``|d_{n+1} / d_n| = |n - p| / (n + 1) < 1`` once ``n > p``, so past that
    point the coefficients are dominated by the first omitted one.
    """
    t = radius ** 2
    if float(p).is_integer() and width >= p:
        return 0.0
    start = max(width + 1, int(math.floor(p)) + 1)
    d = np.abs(weighted_bergman_coefficients(p, start))
    head = float(np.sum(d[width + 1:start] * t ** np.arange(width + 1, start)))
    return head + float(d[start] * t ** start / (1 - t))


def decompose_weighted_bergman(p: float, width: int = 32, radius: float = 0.7) -> DecompositionPair:
    """Split ``1 - (1 - t)^p`` by coefficient sign into ``g`` (positive) and ``f`` (negative).

    Degrees ``1..width`` are kept.  The sign of each coefficient is read off
    the coefficient itself: for non-integer ``p`` the pattern is not strictly
    alternating (e.g. ``p = 3.5`` has ``d_5 < 0``).
    """
    if not p >= 2:
        raise BadParameter(f"weighted Bergman decomposition needs p >= 2, got {p}")
    r = _radius(radius)
    d = weighted_bergman_coefficients(p, width)
    z = Coordinate(0)
    g, f = [], []
    for n in range(1, width + 1):
        if d[n] > 0:
            g.append(math.sqrt(d[n]) * Power(z, n))
        elif d[n] < 0:
            f.append(math.sqrt(-d[n]) * Power(z, n))
    notes = ("in_theorem_range" if p >= 3 else "below_theorem_range",)
    bound = EXACT_RESIDUAL + weighted_bergman_tail(p, width, r)
    return DecompositionPair(RowMap(tuple(g)), RowMap(tuple(f)), WeightedBergman(float(p)),
                             bound, r, notes)


def weighted_bergman_obstruction(p: float) -> float:
    """``sqrt((p - 1)/2)``: the modulus a product of two contractions would need to reach."""
    return math.sqrt((p - 1) / 2)


def _check_a(a: float) -> float:
    if not (np.isreal(a) and 0 < float(np.real(a)) < 1):
        raise ConstraintViolation(f"a must be real with 0 < a < 1, got {a!r}")
    return float(np.real(a))


def example33_1_kernel(u: ScalarMap, a: float) -> Kernel:
    """``(1 - a² u u^*) K_u(x, y)²``."""
    a = _check_a(a)
    ku = SzegoOneVar(u)
    return Dbr(SchurProduct(ku, ku), a * u)


def example33_1_coefficients(a: float, order: int) -> np.ndarray:
    """Series of ``1 - (1 - t)²/(1 - a² t)``: the oracle for the rows below."""
    a = _check_a(a)
    num = ps.PowerSeries((1.0, -2.0, 1.0) + (0.0,) * max(order - 2, 0)).truncate(order)
    den = ps.PowerSeries((1.0, -a * a) + (0.0,) * max(order - 1, 0)).truncate(order)
    return (1.0 - num * ps.series_reciprocal(den)).as_array()


def decompose_example33_1(u: ScalarMap, a: float, width: int = 64, radius: float = 0.7,
                          u_sup: Optional[float] = None) -> DecompositionPair:
    """``g = sqrt(2 - a²) u``, ``f = (1 - a²)(u², a u³, a² u⁴, ...)``.

    The row is checked against the series oracle before it is returned; a
    disagreement is recorded in ``notes`` instead of being patched.  ``u_sup``
    bounds ``|u|`` on the sample region and defaults to ``radius``, which is
    Schwarz's bound for a self-map of the disc fixing 0.
    """
    a = _check_a(a)
    r = _radius(radius)
    s = r if u_sup is None else float(u_sup)
    c = 1.0 - a * a
    g = RowMap((math.sqrt(2 - a * a) * u,))
    f = RowMap(tuple(c * a ** n * u ** (n + 2) for n in range(width)),
               GeometricTail(a * s, c * s * s))
    # oracle check of the printed row: coefficient of t^(n+2) should be -(1-a²)² a^(2n)
    oracle = example33_1_coefficients(a, min(width + 1, 30))
    row = np.array([2 - a * a] + [-(c * a ** n) ** 2 for n in range(len(oracle) - 2)])
    mismatch = float(np.max(np.abs(oracle[1:] - row)))
    notes = ("row matches series oracle" if mismatch <= 1e-12
             else f"row differs from series oracle by {mismatch:.3e}",)
    bound = EXACT_RESIDUAL + g.tail_mass + f.tail_mass
    return DecompositionPair(g, f, example33_1_kernel(u, a), bound, r, notes)


def check_example33_2(a, b, c) -> Tuple[float, complex, complex]:
    """Validate ``0 < a < 1``, ``c != 0``, ``|b| + |c| < 1``, ``|b/(ac)| < 1``."""
    a = _check_a(a)
    b, c = complex(b), complex(c)
    if c == 0:
        raise ConstraintViolation("c must be non-zero")
    if not abs(b) + abs(c) < 1:
        raise ConstraintViolation(f"|b| + |c| = {abs(b) + abs(c)} is not < 1")
    if not abs(b / (a * c)) < 1:
        raise ConstraintViolation(f"|b/(ac)| = {abs(b / (a * c))} is not < 1")
    return a, b, c


def example33_2_theta(a, b, c) -> ScalarMap:
    """``θ(z) = sqrt(1 - a²)(b + a c z) z``."""
    a, b, c = check_example33_2(a, b, c)
    s = math.sqrt(1 - a * a)
    return Polynomial((0.0, s * b, s * a * c))


def example33_2_kernel(a, b, c) -> Kernel:
    return Dbr(SzegoOneVar(Coordinate(0)), example33_2_theta(a, b, c))


def decompose_example33_2(a, b, c, width: int = 64, radius: float = 0.7) -> DecompositionPair:
    """``g = z(1, θ, θ², ...)``, ``f = (θ, θ², ...)`` for ``K = (1 - θθ^*)/(1 - z w̄)``."""
    a, b, c = check_example33_2(a, b, c)
    r = _radius(radius)
    theta = example33_2_theta(a, b, c)
    s = math.sqrt(1 - a * a) * (abs(b) + a * abs(c) * r) * r
    z = Coordinate(0)
    g = RowMap(tuple(z * theta ** k for k in range(width)), GeometricTail(s, r))
    f = RowMap(tuple(theta ** (k + 1) for k in range(width)), GeometricTail(s, s))
    bound = EXACT_RESIDUAL + g.tail_mass + f.tail_mass
    return DecompositionPair(g, f, example33_2_kernel(a, b, c), bound, r)


# --------------------------------------------------------------------------
# composition witnesses


@dataclass(frozen=True)
class CompositionWitness:
    """``Ψ = [ψ1 ψ2]`` with ``ψ1: E -> F`` and ``ψ2: C -> F`` on the disc."""

    psi1: MatrixMap
    psi2: MatrixMap

    def __post_init__(self):
        if self.psi1.shape[0] != self.psi2.shape[0] or self.psi2.shape[1] != 1:
            raise DimensionMismatch(f"cannot combine ψ1 {self.psi1.shape} with ψ2 {self.psi2.shape}")

    @property
    def combined(self) -> MatrixMap:
        return self.psi1.hstack(self.psi2)

    def sup_norm(self, radius: float = 0.99) -> float:
        return self.combined.sup_norm(radius)


def example25_multiplier(a: float, b: float, u: ScalarMap = Coordinate(0)) -> ScalarMap:
    """``φ = a u / (1 - b u)``."""
    return (a * u) / (1 - b * u)


def example25_witness(a: float, b: float) -> CompositionWitness:
    """``ψ2(z) = a + b z`` and an empty ``ψ1`` (``f = 0``)."""
    return CompositionWitness(MatrixMap((1, 0)), MatrixMap((1, 1), {(0, 0): Polynomial((a, b))}))


def example33_1_witness(a: float, width: int = 64) -> CompositionWitness:
    """``ψ1(z) = (1-a²)/sqrt(2-a²) (z, a z², a² z³, ...)``, ``ψ2 = 1/sqrt(2-a²)``."""
    a = _check_a(a)
    k = (1 - a * a) / math.sqrt(2 - a * a)
    z = Coordinate(0)
    psi1 = MatrixMap((1, width), {(0, n): k * a ** n * z ** (n + 1) for n in range(width)})
    psi2 = MatrixMap((1, 1), {(0, 0): Constant(1 / math.sqrt(2 - a * a))})
    return CompositionWitness(psi1, psi2)


def example33_2_witness(a, b, c, width: int = 64) -> CompositionWitness:
    """Diagonal ``ψ1`` with entries ``sqrt(1-a²)(b + c z)`` and ``ψ2 = (a, 0, ...)^T``."""
    a, b, c = check_example33_2(a, b, c)
    d = Polynomial((math.sqrt(1 - a * a) * b, math.sqrt(1 - a * a) * c))
    psi1 = MatrixMap((width, width), {(k, k): d for k in range(width)})
    psi2 = MatrixMap((width, 1), {(0, 0): Constant(a)})
    return CompositionWitness(psi1, psi2)


def schur_witness(lam: complex = 1.0) -> CompositionWitness:
    """For ``g = sqrt(2) u``, ``f = u²`` and ``φ = λ u``: ``ψ1(z) = conj(λ) z/sqrt(2)``, ``ψ2 = λ/sqrt(2)``."""
    lam = complex(lam)
    if abs(abs(lam) - 1) > 1e-12:
        raise BadParameter(f"λ must be unimodular, got {lam!r}")
    psi1 = MatrixMap((1, 1), {(0, 0): Polynomial((0.0, np.conj(lam) / math.sqrt(2)))})
    psi2 = MatrixMap((1, 1), {(0, 0): Constant(lam / math.sqrt(2))})
    return CompositionWitness(psi1, psi2)


@dataclass(frozen=True)
class CharacterizationReport:
    passed: bool
    defect_f: float
    defect_phi: float
    budget: float
    sup_norm: float
    phi_at_base: float

    def line(self) -> str:
        return (f"{'PASS' if self.passed else 'FAIL'} defect_f={self.defect_f:.3e} "
                f"defect_phi={self.defect_phi:.3e} budget={self.budget:.3e} "
                f"sup|Ψ|={self.sup_norm:.12f}")

    def to_dict(self) -> dict:
        return {
            "verdict": "PASS" if self.passed else "FAIL",
            "defect_f": enc_real(self.defect_f),
            "defect_phi": enc_real(self.defect_phi),
            "budget": enc_real(self.budget),
            "sup_norm": enc_real(self.sup_norm),
            "phi_at_base": enc_real(self.phi_at_base),
        }


def verify_characterization(dp: DecompositionPair, phi: ScalarMap, w: CompositionWitness,
                            pts) -> CharacterizationReport:
    """Defects of ``f = g ψ1(φ)`` and ``φ = g ψ2(φ)`` on ``pts``.

    The budget is the exact-arithmetic allowance plus ``sqrt`` of the tail
    mass of ``g``: the omitted entries of ``g`` meet rows of ``Ψ``, whose
    norms are at most ``sup|Ψ| <= 1``.
    """
    if w.psi1.shape != (dp.g.width, dp.f.width) or w.psi2.shape[0] != dp.g.width:
        raise DimensionMismatch(
            f"rows have widths g={dp.g.width}, f={dp.f.width}; ψ1 is {w.psi1.shape}")
    pts = dp.kernel.points(pts)
    gx = dp.g(pts)
    ph = phi(pts)
    p1 = w.psi1(ph)
    p2 = w.psi2(ph)
    gp1 = np.einsum("nk,nkj->nj", gx, p1)
    d_f = float(np.max(np.linalg.norm(dp.f(pts) - gp1, axis=-1), initial=0.0))
    d_phi = float(np.max(np.abs(ph - np.einsum("nk,nk->n", gx, p2[..., 0])), initial=0.0))
    budget = IDENTITY_DEFECT + math.sqrt(dp.g.tail_mass)
    sup = w.sup_norm()
    at_base = float(abs(phi(dp.kernel.base_point[None, :])[0]))
    ok = (d_f <= budget and d_phi <= budget and sup <= 1 + SUP_NORM_SLACK
          and at_base <= IDENTITY_DEFECT)
    return CharacterizationReport(ok, d_f, d_phi, budget, sup, at_base)


# --------------------------------------------------------------------------
# the one-variable identity φ(z) = z ψ(φ(z))


def symmetric_disc_sample(radius: float = 0.9) -> np.ndarray:
    """Real pairs ``±0.5, ±0.3, ±0.7`` followed by a polar grid closed under ``z -> -z``."""
    real = np.array([0.5, -0.5, 0.3, -0.3, 0.7, -0.7], dtype=complex)
    grid = disc_grid(radius, 6, 16)
    return np.concatenate([real, grid[1:]])


@dataclass(frozen=True)
class ChuReport:
    passed: bool
    defect: float
    worst_point: complex
    collision: Optional[Tuple[complex, complex]] = None

    def line(self) -> str:
        out = f"{'PASS' if self.passed else 'FAIL'} defect={self.defect:.3e} budget={IDENTITY_DEFECT:.0e}"
        if self.collision is not None:
            out += f" collision z={self.collision[0]:.6g}, {self.collision[1]:.6g}"
        return out

    def to_dict(self) -> dict:
        d = {"verdict": "PASS" if self.passed else "FAIL", "defect": enc_real(self.defect),
             "budget": enc_real(IDENTITY_DEFECT), "worst_point": enc_complex(self.worst_point)}
        if self.collision is not None:
            d["collision"] = [enc_complex(z) for z in self.collision]
        return d


def _find_collision(phi_vals, z, tol=1e-12):
    for i in range(len(z)):
        hit = np.flatnonzero((np.abs(phi_vals - phi_vals[i]) <= tol) & (np.abs(z - z[i]) > 1e-6))
        if len(hit):
            return complex(z[i]), complex(z[hit[0]])
    return None


def verify_chu_identity(phi: ScalarMap, psi: ScalarMap, pts=None) -> ChuReport:
    """Max defect of ``φ(z) = z ψ(φ(z))``; a failure also reports two points with equal ``φ``.

    An identity of this form forces ``φ`` to be injective, so a collision is
    the structural reason behind a failure when one is found.
    """
    z = symmetric_disc_sample() if pts is None else np.ravel(np.asarray(pts, dtype=complex))
    if abs(phi(np.zeros((1, 1)))[0]) > IDENTITY_DEFECT:
        raise BadParameter("φ(0) must be 0")
    ph = phi(z[:, None])
    rhs = z * psi(ph[:, None])
    err = np.abs(ph - rhs)
    k = int(np.argmax(err))
    ok = float(err[k]) <= IDENTITY_DEFECT
    return ChuReport(ok, float(err[k]), complex(z[k]), None if ok else _find_collision(ph, z))


# --------------------------------------------------------------------------
# classifiers


@dataclass(frozen=True)
class MoebiusInCoordinate:
    index: int
    lam: complex
    mu: complex
    fit_error: float

    verdict = "MoebiusInCoordinate"

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "index": self.index, "lambda": enc_complex(self.lam),
                "mu": enc_complex(self.mu), "fit_error": enc_real(self.fit_error)}


@dataclass(frozen=True)
class BlaschkeFactor:
    lam: complex
    mu: complex
    fit_error: float

    verdict = "BlaschkeFactor"

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "lambda": enc_complex(self.lam),
                "mu": enc_complex(self.mu), "fit_error": enc_real(self.fit_error)}


@dataclass(frozen=True)
class NotOfTheForm:
    reason: str
    points: np.ndarray = field(default_factory=lambda: np.zeros((0, 1), dtype=complex))
    values: tuple = ()

    verdict = "NotOfTheForm"

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "reason": self.reason,
                "points": enc_points(self.points), "values": [enc_complex(v) for v in self.values]}


def fit_blaschke(h, probe: float = 0.5):
    """Closed-form ``(λ, μ)`` with ``h = λ b_μ``, from ``h(0)`` and ``h(probe)``.

    ``h(0) = -λμ`` gives ``|μ| = |h(0)|``; with ``ρ = h(r)/h(0)`` the
    equation ``h(r) = λ (r - μ)/(1 - μ̄ r)`` becomes linear in ``μ``:
    ``μ (1 - ρ) = r (1 - ρ |h(0)|²)``.  Returns ``None`` when no fit exists.
    """
    h0 = complex(h(0.0))
    hr = complex(h(probe))
    if abs(h0) >= 1:
        return None
    if abs(h0) < 1e-14:
        return hr / probe, 0.0
    rho = hr / h0
    if abs(1 - rho) < 1e-14:
        return None
    mu = probe * (1 - rho * abs(h0) ** 2) / (1 - rho)
    if abs(mu) >= 1 or abs(mu) < 1e-300:
        return None
    return -h0 / mu, mu


def _blaschke_values(lam, mu, z):
    return lam * (z - mu) / (1 - np.conj(mu) * z)


def _fit_and_verify(h, verify_z):
    fit = fit_blaschke(h)
    if fit is None:
        return None, "no Blaschke factor through the probe values", None
    lam, mu = fit
    if abs(abs(lam) - 1) > FIT_TOL:
        return None, f"fitted |λ| = {abs(lam):.12g} is not 1", None
    got = h(verify_z)
    err = np.abs(got - _blaschke_values(lam, mu, verify_z))
    k = int(np.argmax(err))
    if err[k] > FIT_TOL:
        return None, f"fit λ b_μ misses by {err[k]:.3e}", k
    lam = lam / abs(lam)
    return (lam, mu, float(err[k])), "", None


VERIFY_GRID = disc_grid(0.9, 7, 24)
DEPENDENCE_GRID = disc_grid(0.7, 4, 8)


def classify_disc_blaschke(phi: ScalarMap) -> object:
    """``BlaschkeFactor(λ, μ)`` when ``φ = λ b_μ`` to 1e-10 on a grid, else ``NotOfTheForm``."""
    def h(z):
        return phi(np.asarray(z, dtype=complex)[..., None])

    res, why, k = _fit_and_verify(h, VERIFY_GRID)
    if res is None:
        pts = VERIFY_GRID[[k]][:, None] if k is not None else np.array([[0.0], [0.5]], dtype=complex)
        return NotOfTheForm(why, pts, tuple(complex(v) for v in h(pts[:, 0])))
    return BlaschkeFactor(*res)


def classify_bidisc(phi: ScalarMap) -> object:
    """``MoebiusInCoordinate(i, λ, μ)`` when ``φ(z) = λ b_μ(z_i)``, else ``NotOfTheForm``.

    First the other coordinate must not matter (to 1e-10 over a grid), then
    ``λ, μ`` are fitted from two values and checked on a separate grid.
    """
    if phi.arity > 2:
        raise DimensionMismatch("classify_bidisc needs a map on the bidisc")
    g = DEPENDENCE_GRID
    z1, z2 = np.meshgrid(g, g, indexing="ij")
    vals = phi(np.stack([z1, z2], axis=-1))
    evidence = []
    for i in (0, 1):
        # coordinate i active: values must be constant along the other axis
        spread = vals - (vals[:, :1] if i == 0 else vals[:1, :])
        a = np.unravel_index(int(np.argmax(np.abs(spread))), spread.shape)
        if abs(spread[a]) > FIT_TOL:
            b = (a[0], 0) if i == 0 else (0, a[1])
            evidence.append((a, b))
            continue

        def h(z, i=i):
            z = np.asarray(z, dtype=complex)
            pts = np.zeros(z.shape + (2,), dtype=complex)
            pts[..., i] = z
            return phi(pts)

        res, why, k = _fit_and_verify(h, VERIFY_GRID)
        if res is not None:
            return MoebiusInCoordinate(i, *res)
        pts = np.zeros((1, 2), dtype=complex)
        pts[0, i] = VERIFY_GRID[k] if k is not None else 0.5
        return NotOfTheForm(f"depends on z{i + 1} only, but {why}", pts, tuple(complex(v) for v in phi(pts)))
    a, b = evidence[0]
    pts = np.array([[z1[a], z2[a]], [z1[b], z2[b]]])
    return NotOfTheForm("depends on both coordinates", pts, tuple(complex(v) for v in phi(pts)))


def blaschke_map(lam: complex, mu: complex, arg: ScalarMap = Coordinate(0)) -> ScalarMap:
    """``λ b_μ(arg)`` as an expression."""
    inner = arg if mu == 0 else Mobius(complex(mu), arg)
    return inner if lam == 1 else UnimodularScale(complex(lam), inner)

