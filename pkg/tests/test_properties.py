"""Property-based checks over seeded random kernels and samples."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cnp_lab.characterization import example33_1_kernel
from cnp_lab.cnp import cnp_sample_test, default_samples, reverify_witness, witness_search
from cnp_lab.functions import Mobius, RowMap, coord, polydisc
from cnp_lab.kernels import (
    Conjugate,
    Dbr,
    FromRowMap,
    WeightedBergman,
    bergman,
    gram,
    normalize_kernel,
    radial_series,
    szego,
)
from cnp_lab.numerics import psd_test
from cnp_lab.sampling import random_points
from cnp_lab.series import PowerSeries, binomial_series, series_reciprocal
from cnp_lab.series import diagonal_cnp_test

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def random_row_kernel(rng):
    """``1/(1 - u u^*)`` with ``u`` linear, ``u(0) = 0`` and sup-norm below one."""
    dim, width = rng.integers(1, 4), rng.integers(1, 5)
    c = rng.normal(size=(width, dim)) + 1j * rng.normal(size=(width, dim))
    c *= rng.uniform(0.1, 0.95) / np.sqrt(np.sum(np.abs(c).sum(axis=1) ** 2))
    entries = []
    for row in c:
        e = row[0] * coord(0)
        for i in range(1, dim):
            e = e + row[i] * coord(i)
        entries.append(e)
    return FromRowMap(RowMap(tuple(entries)), polydisc(int(dim)))


class TestByConstruction:
    @settings(max_examples=200, deadline=None, derandomize=True)
    @given(seeds)
    def test_row_kernels_never_fail(self, seed):
        rng = np.random.default_rng(seed)
        k = random_row_kernel(rng)
        pts = random_points(rng, k.domain, 0.9, (int(rng.integers(1, 9)),))
        assert cnp_sample_test(k, [pts]).verdict == "ConsistentWithCnp"

    @settings(max_examples=50, deadline=None, derandomize=True)
    @given(seeds, st.sampled_from(["szego", "bergman", "w3.5", "dbr"]))
    def test_gram_psd(self, seed, which):
        k = {"szego": szego(), "bergman": bergman(), "w3.5": WeightedBergman(3.5),
             "dbr": Dbr(bergman(), Mobius(0.3))}[which]
        rng = np.random.default_rng(seed)
        pts = random_points(rng, k.domain, 0.9, (int(rng.integers(1, 41)),))
        assert psd_test(gram(k, pts)).is_psd


class TestCongruence:
    @settings(max_examples=40, deadline=None, derandomize=True)
    @given(seeds, st.sampled_from(["szego", "bergman", "dbr_square"]))
    def test_conjugate_keeps_verdict(self, seed, which):
        base = {"szego": szego(), "bergman": bergman(),
                "dbr_square": normalize_kernel(Dbr(bergman(), coord(0) ** 2))}[which]
        f = 1 + 0.5 * Mobius(0.2)
        a, b = normalize_kernel(Conjugate(f, base)), normalize_kernel(base)
        samples = default_samples(b, seed % 1000, sets=5, size=6)
        for s in samples[:5]:
            np.testing.assert_allclose(a.matrix(s), b.matrix(s), atol=1e-12)
        assert cnp_sample_test(a, samples).verdict == cnp_sample_test(b, samples).verdict


class TestSeries:
    @settings(max_examples=100, deadline=None, derandomize=True)
    @given(st.lists(st.floats(-0.5, 0.5), min_size=1, max_size=20))
    def test_reciprocal_round_trip(self, tail):
        a = PowerSeries(np.array([1.0] + tail))
        back = series_reciprocal(series_reciprocal(a))
        np.testing.assert_allclose(back.coeffs, a.coeffs, atol=1e-12)

    @pytest.mark.parametrize("p", [1, 2, 3, 6, 10])
    def test_binomial_inverse_integer(self, p):
        # integer exponents have integer coefficients, so the product is exact
        prod = binomial_series(p, 32) * binomial_series(-p, 32)
        np.testing.assert_allclose(prod.coeffs, np.eye(1, 33)[0], atol=1e-10)

    @pytest.mark.parametrize("p", [1.5, 2.5, 7.5, 9.5])
    def test_binomial_inverse_fractional(self, p):
        # coefficients near 1e8 cancel, so the error scales with sum |a_i b_(n-i)|
        a, b = binomial_series(p, 32), binomial_series(-p, 32)
        scale = np.convolve(np.abs(a.coeffs), np.abs(b.coeffs))[:33]
        err = np.abs((a * b).coeffs - np.eye(1, 33)[0])
        assert np.all(err <= 1e-13 * np.maximum(scale, 1))


RADIAL = {
    "szego": szego(),
    "bergman": bergman(),
    "w2.5": WeightedBergman(2.5),
    "w3": WeightedBergman(3.0),
    "w4": WeightedBergman(4.0),
    "dbr_z": normalize_kernel(Dbr(bergman(), coord(0))),
    "dbr_z2": normalize_kernel(Dbr(bergman(), coord(0) ** 2)),
    "first_family": normalize_kernel(example33_1_kernel(coord(0), 0.5)),
}


@pytest.mark.parametrize("name", sorted(RADIAL))
def test_oracles_agree(name):
    k = RADIAL[name]
    diag = diagonal_cnp_test(radial_series(k))
    sample = cnp_sample_test(k, default_samples(k))
    w = witness_search(k, random_budget=500)
    assert (diag.verdict == "NotCnp") == (sample.verdict == "NotCnp") == (w is not None)
    if w is not None:
        rep = reverify_witness(k, w.as_verdict().to_dict())
        assert abs(rep.min_eigenvalue - w.min_eigenvalue) <= 1e-10
