"""Hermitian checks, eigenvalues and PSD verdicts."""
import numpy as np
import pytest

from cnp_lab.errors import NonHermitianInput
from cnp_lab.numerics import (
    as_hermitian,
    hermitian_eigenvalues,
    jacobi_eigh,
    min_eigenvalue_2x2,
    psd_test,
)


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a + a.conj().T


class TestAsHermitian:
    def test_symmetrizes_small_noise(self):
        a = np.array([[1.0, 2.0], [2.0 + 1e-10, 1.0]])
        h = as_hermitian(a)
        assert np.allclose(h, h.conj().T, atol=0)

    def test_rejects_asymmetric(self):
        with pytest.raises(NonHermitianInput):
            as_hermitian([[1.0, 2.0], [0.0, 1.0]])

    def test_rejects_non_square_and_empty(self):
        with pytest.raises(NonHermitianInput):
            as_hermitian(np.ones((2, 3)))
        with pytest.raises(NonHermitianInput):
            as_hermitian(np.zeros((0, 0)))

    def test_rejects_nan(self):
        with pytest.raises(NonHermitianInput):
            as_hermitian([[np.nan]])


class TestEigenvalues:
    def test_jacobi_matches_lapack(self):
        rng = np.random.default_rng(3)
        for n in (1, 2, 5, 9):
            a = random_hermitian(rng, n)
            np.testing.assert_allclose(hermitian_eigenvalues(a, "jacobi"),
                                       np.linalg.eigvalsh(a), atol=1e-10)

    def test_jacobi_vectors_diagonalize(self):
        a = random_hermitian(np.random.default_rng(8), 6)
        vals, vecs = jacobi_eigh(a)
        np.testing.assert_allclose(a @ vecs, vecs * vals, atol=1e-9)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            hermitian_eigenvalues(np.eye(2), "qr")

    def test_two_by_two_formula(self):
        rng = np.random.default_rng(1)
        a, b = rng.normal(size=50), rng.normal(size=50)
        c = rng.normal(size=50) + 1j * rng.normal(size=50)
        lam = min_eigenvalue_2x2(a, b, c)
        for k in range(50):
            m = np.array([[a[k], c[k]], [np.conj(c[k]), b[k]]])
            assert lam[k] == pytest.approx(np.linalg.eigvalsh(m)[0], abs=1e-12)


class TestPsdTest:
    def test_doctest_value(self):
        assert psd_test([[1, 2], [2, 1]]).min_eigenvalue == pytest.approx(-1.0)

    def test_identity_is_psd(self):
        rep = psd_test(np.eye(3))
        assert rep.is_psd and rep.verdict == "Psd" and rep.witness is None

    def test_witness_vector(self):
        rep = psd_test([[1.0, 2.0], [2.0, 1.0]])
        v = rep.witness
        assert rep.verdict == "NotPsd"
        assert np.linalg.norm(v) == pytest.approx(1.0)
        assert np.real(v.conj() @ np.array([[1, 2], [2, 1]]) @ v) == pytest.approx(-1.0)

    def test_tolerance_is_relative(self):
        # -1e-7 is inside 1e-9 * ||A|| when ||A|| = 1e3, outside when ||A|| = 1
        big = np.diag([1e3, -1e-7])
        small = np.diag([1.0, -1e-7])
        assert psd_test(big).is_psd
        assert not psd_test(small).is_psd

    def test_rank_one_gram_is_psd(self):
        v = np.random.default_rng(0).normal(size=7) + 0j
        assert psd_test(np.outer(v, v.conj())).is_psd

    def test_methods_agree(self):
        a = random_hermitian(np.random.default_rng(5), 5)
        assert psd_test(a, method="jacobi").min_eigenvalue == pytest.approx(
            psd_test(a).min_eigenvalue, abs=1e-10)
