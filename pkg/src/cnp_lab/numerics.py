"""Hermitian matrix checks, eigenvalues and positive-semidefiniteness verdicts.

Every finite positivity statement in cnp_lab (Gram matrices, Pick matrices,
``1 - 1/K`` matrices) is eventually decided by :func:`psd_test`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NonHermitianInput

DEFAULT_PSD_TOL = 1e-9
ASYMMETRY_LIMIT = 1e-8
JACOBI_OFF_TOL = 1e-14


def as_hermitian(a) -> np.ndarray:
    """Return ``(A + A*)/2`` as a complex array after validating ``A``.

    Raises
    ------
    NonHermitianInput
        If ``A`` is not square, is empty, or has an entry of ``A - A*``
        larger than 1e-8 in modulus.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise NonHermitianInput(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonHermitianInput("matrix has non-finite entries")
    asym = np.max(np.abs(a - a.conj().T))
    if asym > ASYMMETRY_LIMIT:
        raise NonHermitianInput(f"matrix is not Hermitian: max |A - A*| = {asym:.3e}")
    return 0.5 * (a + a.conj().T)


def _jacobi_symmetric(s: np.ndarray, max_sweeps: int = 100):
    """Cyclic Jacobi rotations on a real symmetric matrix (in place)."""
    n = s.shape[0]
    v = np.eye(n)
    scale = max(np.linalg.norm(s), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.sqrt(max(np.sum(s * s) - np.sum(np.diag(s) ** 2), 0.0))
        if off < JACOBI_OFF_TOL * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = s[p, q]
                if abs(apq) < 1e-300:
                    continue
                theta = (s[q, q] - s[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                sn = t * c
                col_p = s[:, p].copy()
                col_q = s[:, q].copy()
                s[:, p] = c * col_p - sn * col_q
                s[:, q] = sn * col_p + c * col_q
                row_p = s[p, :].copy()
                row_q = s[q, :].copy()
                s[p, :] = c * row_p - sn * row_q
                s[q, :] = sn * row_p + c * row_q
                s[p, q] = s[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - sn * vq
                v[:, q] = sn * vp + c * vq
    return np.diag(s).copy(), v


def jacobi_eigh(a):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    The complex matrix ``A = X + iY`` is embedded as the real symmetric
    ``[[X, -Y], [Y, X]]``; every eigenvalue of ``A`` appears twice in the
    embedding, and ``[x; y]`` eigenvectors map back to ``x + iy``.

    Returns ascending eigenvalues and unit eigenvectors as columns.
    """
    h = as_hermitian(a)
    n = h.shape[0]
    emb = np.block([[h.real, -h.imag], [h.imag, h.real]])
    vals, vecs = _jacobi_symmetric(emb)
    order = np.argsort(vals, kind="stable")
    vals = vals[order][::2]
    picked = vecs[:, order][:, ::2]
    cvecs = picked[:n] + 1j * picked[n:]
    cvecs /= np.linalg.norm(cvecs, axis=0, keepdims=True)
    return vals, cvecs


def hermitian_eigenvalues(a, method: str = "lapack") -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix.

    ``method`` is ``"lapack"`` (numpy's ``eigvalsh``) or ``"jacobi"``.
    """
    h = as_hermitian(a)
    if method == "lapack":
        return np.linalg.eigvalsh(h)
    if method == "jacobi":
        return jacobi_eigh(h)[0]
    raise ValueError(f"unknown eigenvalue method {method!r}")


@dataclass(frozen=True)
class PsdReport:
    """Outcome of a positive-semidefiniteness check.

    ``tolerance`` is the relative tolerance; the absolute threshold actually
    applied is ``tolerance * max(1, spectral_norm)``.
    """

    min_eigenvalue: float
    tolerance: float
    spectral_norm: float
    eigenvalues: tuple
    witness: Optional[np.ndarray] = None

    @property
    def threshold(self) -> float:
        return self.tolerance * max(1.0, self.spectral_norm)

    @property
    def is_psd(self) -> bool:
        return self.min_eigenvalue >= -self.threshold

    @property
    def verdict(self) -> str:
        return "Psd" if self.is_psd else "NotPsd"


def psd_test(a, tol: float = DEFAULT_PSD_TOL, method: str = "lapack") -> PsdReport:
    """Decide whether a Hermitian matrix is positive semidefinite.

    Examples
    --------
    >>> psd_test([[1, 2], [2, 1]]).min_eigenvalue
    -1.0
    """
    h = as_hermitian(a)
    if method == "lapack":
        vals, vecs = np.linalg.eigh(h)
    elif method == "jacobi":
        vals, vecs = jacobi_eigh(h)
    else:
        raise ValueError(f"unknown eigenvalue method {method!r}")
    lam_min = float(vals[0])
    norm = float(max(abs(vals[0]), abs(vals[-1])))
    witness = None
    if lam_min < -tol * max(1.0, norm):
        witness = vecs[:, 0] / np.linalg.norm(vecs[:, 0])
    return PsdReport(lam_min, tol, norm, tuple(float(v) for v in vals), witness)


def min_eigenvalue_2x2(a, b, c):
    """Smallest eigenvalue of ``[[a, c], [conj(c), b]]`` for real a, b (vectorized)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return 0.5 * (a + b) - np.sqrt(0.25 * (a - b) ** 2 + np.abs(c) ** 2)
