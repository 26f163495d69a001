"""Pick matrices, multiplier contractivity and the finite-sample CNP test.

A normalized, non-vanishing kernel ``K`` is CNP exactly when ``1 - 1/K`` is
itself a kernel.  On finitely many points only the necessary direction can be
checked, so the sample test has three outcomes: a concrete point set where
``1 - 1/K`` fails to be positive (:class:`NotCnp`), no failure on the samples
tried (:class:`ConsistentWithCnp`), or a structural certificate
``K = 1/(1 - u u^*)`` (:class:`CnpByConstruction`).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, NotNormalized, VanishingKernelValue
from .functions import RowMap, ScalarMap, as_points
from .jsonio import dec_points, enc_points, enc_real
from .kernels import VANISHING_FLOOR, Dbr, FromRowMap, Kernel, SzegoOneVar
from .numerics import DEFAULT_PSD_TOL, PsdReport, min_eigenvalue_2x2, psd_test
from .sampling import SamplerConfig, random_points, real_grid, sample_points

DEFAULT_GRID_LEVELS = (0.3, 0.5, 0.7)
DEFAULT_RANDOM_BUDGET = 10_000
MAX_FULL_GRID = 400


# --------------------------------------------------------------------------
# Pick problems


@dataclass(frozen=True)
class PickProblem:
    kernel: Kernel
    nodes: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        nodes = self.kernel.points(self.nodes)
        targets = np.asarray(self.targets, dtype=complex).ravel()
        if len(nodes) != len(targets):
            raise DimensionMismatch(f"{len(nodes)} nodes but {len(targets)} targets")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "targets", targets)


def pick_matrix(p: PickProblem) -> np.ndarray:
    """``[(1 - w_i conj(w_j)) K(x_i, x_j)]``."""
    w = p.targets
    return (1 - np.outer(w, np.conj(w))) * p.kernel.matrix(p.nodes)


@dataclass(frozen=True)
class PickReport:
    matrix: np.ndarray
    psd: PsdReport
    cnp_certified: bool

    @property
    def feasible(self) -> bool:
        return self.psd.is_psd

    @property
    def label(self) -> str:
        if not self.psd.is_psd:
            return "infeasible"
        if self.cnp_certified:
            return "sufficient (CNP kernel)"
        return "necessary condition holds"

    def to_dict(self) -> dict:
        return {
            "verdict": "Feasible" if self.feasible else "Infeasible",
            "label": self.label,
            "min_eigenvalue": enc_real(self.psd.min_eigenvalue),
            "eigenvalues": [enc_real(v) for v in self.psd.eigenvalues],
            "tolerance": enc_real(self.psd.tolerance),
        }


def pick_feasibility_report(p: PickProblem, tol: float = DEFAULT_PSD_TOL) -> PickReport:
    """Pick-matrix positivity; sufficient as well when ``K`` carries a CNP certificate."""
    m = pick_matrix(p)
    return PickReport(m, psd_test(m, tol), certify_cnp(p.kernel) is not None)


def multiplier_contractive(K: Kernel, phi: ScalarMap, pts, tol: float = DEFAULT_PSD_TOL) -> PsdReport:
    """PSD check of ``[(1 - φ(x_i) conj(φ(x_j))) K(x_i, x_j)]``.

    ``Psd`` on every sample is evidence for (not proof of) ``‖M_φ‖ <= 1``.
    """
    return psd_test(Dbr(K, phi).matrix(pts), tol)


# --------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class NotCnp:
    witness_points: np.ndarray
    min_eigenvalue: float
    tolerance: float
    set_index: int = 0
    samples_tested: int = 1
    source: str = "sample"

    verdict = "NotCnp"

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness_points": enc_points(self.witness_points),
            "min_eigenvalue": enc_real(self.min_eigenvalue),
            "tolerance": enc_real(self.tolerance),
            "set_index": self.set_index,
            "samples_tested": self.samples_tested,
            "source": self.source,
        }


@dataclass(frozen=True)
class ConsistentWithCnp:
    """No failure on the samples; not a proof that the kernel is CNP."""

    samples_tested: int
    worst_min_eigenvalue: float
    tolerance: float
    set_min_eigenvalues: tuple = ()

    verdict = "ConsistentWithCnp"

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "samples_tested": self.samples_tested,
            "worst_min_eigenvalue": enc_real(self.worst_min_eigenvalue),
            "tolerance": enc_real(self.tolerance),
            "set_min_eigenvalues": [enc_real(v) for v in self.set_min_eigenvalues],
        }


@dataclass(frozen=True)
class CnpByConstruction:
    certificate: RowMap

    verdict = "CnpByConstruction"

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "certificate": str(self.certificate)}


def certify_cnp(K: Kernel) -> Optional[CnpByConstruction]:
    """Certificate ``u`` with ``K = 1/(1 - u u^*)`` and ``u(w) = 0``, when ``K`` is built that way."""
    if isinstance(K, SzegoOneVar) and K.normalized:
        return CnpByConstruction(RowMap((K.u,)))
    if isinstance(K, FromRowMap) and K.normalized:
        return CnpByConstruction(K.u)
    return None


# --------------------------------------------------------------------------
# the sample test


def dedupe(pts: np.ndarray) -> np.ndarray:
    """Drop repeated points, keeping first occurrences in order."""
    _, idx = np.unique(pts, axis=0, return_index=True)
    return pts[np.sort(idx)]


def _check_values(vals: np.ndarray) -> None:
    if np.any(np.abs(vals) < VANISHING_FLOOR) or not np.all(np.isfinite(vals)):
        raise VanishingKernelValue("kernel vanishes (or blows up) on the sample")


def one_minus_inverse(K: Kernel, xs, ys=None) -> np.ndarray:
    """Matrix ``[1 - 1/K(x_i, y_j)]``."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        vals = K.matrix(xs, ys)
    _check_values(vals)
    return 1.0 - 1.0 / vals


def _require_normalized(K: Kernel) -> None:
    if not K.normalized:
        raise NotNormalized(
            f"{type(K).__name__} is not flagged as normalized; wrap it with normalize_kernel first")


def cnp_sample_test(K: Kernel, samples: Sequence, tol: float = DEFAULT_PSD_TOL):
    """Run the ``1 - 1/K ⪰ 0`` test on every point set; first failure wins."""
    _require_normalized(K)
    mins = []
    for i, pts in enumerate(samples):
        pts = dedupe(K.points(pts))
        rep = psd_test(one_minus_inverse(K, pts), tol)
        mins.append(rep.min_eigenvalue)
        if not rep.is_psd:
            return NotCnp(pts, rep.min_eigenvalue, tol, i, i + 1, "sample")
    return ConsistentWithCnp(len(mins), min(mins), tol, tuple(mins))


def antipodal_pairs(K: Kernel, levels=DEFAULT_GRID_LEVELS) -> List[np.ndarray]:
    """Pairs ``{x, -x}`` over the real grid, one per unordered pair."""
    grid = real_grid(K.domain, levels)
    out = []
    for x in grid:
        nz = np.flatnonzero(x != 0)
        if len(nz) and x[nz[0]].real > 0:
            out.append(np.array([x, -x + 0.0]))
    return out


def default_samples(K: Kernel, seed: int = 0, sets: int = 20, size: int = 8,
                    radius: float = 0.7, grid_levels=DEFAULT_GRID_LEVELS) -> List[np.ndarray]:
    """Seeded random sets followed by every antipodal grid pair."""
    cfg = SamplerConfig(K.domain, radius, sets, size, seed)
    return sample_points(cfg) + antipodal_pairs(K, grid_levels)


# --------------------------------------------------------------------------
# witness search


@dataclass(frozen=True)
class Witness:
    points: np.ndarray
    report: PsdReport
    phase: str
    index: int

    @property
    def min_eigenvalue(self) -> float:
        return self.report.min_eigenvalue

    def as_verdict(self) -> NotCnp:
        return NotCnp(self.points, self.min_eigenvalue, self.report.tolerance, self.index,
                      self.index + 1, self.phase)


def _pair_min_eig(m_xx, m_yy, m_xy):
    lam = min_eigenvalue_2x2(m_xx.real, m_yy.real, m_xy)
    lam_max = 0.5 * (m_xx.real + m_yy.real) + np.sqrt(0.25 * (m_xx.real - m_yy.real) ** 2 + np.abs(m_xy) ** 2)
    return lam, np.maximum(np.abs(lam), np.abs(lam_max))


def _confirm(K, pts, tol, phase, index):
    rep = psd_test(one_minus_inverse(K, pts), tol)
    if rep.is_psd:
        return None
    return Witness(pts, rep, phase, index)


def witness_search(K: Kernel, levels=DEFAULT_GRID_LEVELS, tol: float = DEFAULT_PSD_TOL,
                   seed: int = 0, random_budget: int = DEFAULT_RANDOM_BUDGET,
                   max_size: int = 6, radius: float = 0.7) -> Optional[Witness]:
    """Look for a point set on which ``1 - 1/K`` is not PSD.

    Search order: antipodal pairs ``{x, -x}`` on the real grid ``{0, ±l}^d``,
    then every other pair of grid points (small grids only), then seeded
    random complex sets of sizes 2..``max_size``.  Returns the first failure
    in that order, or ``None``; ``None`` proves nothing.
    """
    _require_normalized(K)
    # antipodal pairs
    pairs = antipodal_pairs(K, levels)
    if pairs:
        xs = np.array([p[0] for p in pairs])
        m_xx = one_minus_inverse_pairwise(K, xs, xs)
        m_yy = one_minus_inverse_pairwise(K, -xs, -xs)
        m_xy = one_minus_inverse_pairwise(K, xs, -xs)
        lam, norm = _pair_min_eig(m_xx, m_yy, m_xy)
        for i in np.flatnonzero(lam < -tol * np.maximum(1.0, norm)):
            w = _confirm(K, pairs[i], tol, "antipodal-grid", int(i))
            if w is not None:
                return w
    # all grid pairs
    grid = real_grid(K.domain, levels)
    if 1 < len(grid) <= MAX_FULL_GRID:
        m = one_minus_inverse(K, grid)
        d = np.diag(m)
        lam, norm = _pair_min_eig(d[:, None], d[None, :], m)
        bad = (lam < -tol * np.maximum(1.0, norm)) & np.triu(np.ones_like(lam, dtype=bool), 1)
        for i, j in zip(*np.nonzero(bad)):
            w = _confirm(K, grid[[i, j]], tol, "grid-pair", int(i * len(grid) + j))
            if w is not None:
                return w
    # seeded random sets
    if random_budget > 0:
        rng = np.random.default_rng(int(seed))
        n_sizes = max_size - 1
        sizes = 2 + np.arange(random_budget) % n_sizes
        first_bad = None
        for s in range(2, max_size + 1):
            idx = np.flatnonzero(sizes == s)
            if not len(idx):
                continue
            pts = random_points(rng, K.domain, radius, (len(idx), s))
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                vals = K.evaluate(pts[:, :, None, :], pts[:, None, :, :])
            _check_values(vals)
            m = 1.0 - 1.0 / vals
            m = 0.5 * (m + np.conj(np.swapaxes(m, -1, -2)))
            eig = np.linalg.eigvalsh(m)
            norm = np.max(np.abs(eig), axis=-1)
            fails = np.flatnonzero(eig[:, 0] < -tol * np.maximum(1.0, norm))
            for f in fails:
                k = int(idx[f])
                if first_bad is None or k < first_bad[0]:
                    first_bad = (k, pts[f])
                break
        if first_bad is not None:
            k, pts = first_bad
            return _confirm(K, pts, tol, "random", k)
    return None


def one_minus_inverse_pairwise(K: Kernel, xs, ys) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        vals = K.pairwise(xs, ys)
    _check_values(vals)
    return 1.0 - 1.0 / vals


def reverify_witness(K: Kernel, serialized: dict, tol: float = DEFAULT_PSD_TOL) -> PsdReport:
    """Recompute the ``1 - 1/K`` test from a serialized :class:`NotCnp`."""
    pts = dec_points(serialized["witness_points"])
    return psd_test(one_minus_inverse(K, pts), tol)
