"""Pick matrices, multiplier contractivity, the sample test and witness search."""
import numpy as np
import pytest

from cnp_lab.cnp import (
    CnpByConstruction,
    PickProblem,
    antipodal_pairs,
    certify_cnp,
    cnp_sample_test,
    default_samples,
    multiplier_contractive,
    one_minus_inverse,
    pick_feasibility_report,
    pick_matrix,
    reverify_witness,
    witness_search,
)
from cnp_lab.errors import DimensionMismatch, DomainViolation, NotNormalized, VanishingKernelValue
from cnp_lab.functions import Constant, Mobius, coord
from cnp_lab.kernels import Dbr, SzegoOneVar, WeightedBergman, bergman, normalize_kernel, szego
from cnp_lab.numerics import min_eigenvalue_2x2


def pts1(*zs):
    return np.array(zs, dtype=complex)[:, None]


class TestPick:
    def test_single_node(self):
        m = pick_matrix(PickProblem(szego(), pts1(0.0), [0.0]))
        np.testing.assert_allclose(m, [[1.0]])

    def test_schwarz_violation(self):
        p = PickProblem(szego(), pts1(0.0, 0.5), [0.0, 0.9])
        m = pick_matrix(p)
        np.testing.assert_allclose(m, [[1, 1], [1, 0.19 / 0.75]], atol=1e-15)
        rep = pick_feasibility_report(p)
        assert rep.label == "infeasible"
        lam = min_eigenvalue_2x2(1.0, 0.19 / 0.75, 1.0)
        assert rep.psd.min_eigenvalue == pytest.approx(lam, abs=1e-12)

    def test_feasible_and_sufficient(self):
        rep = pick_feasibility_report(PickProblem(szego(), pts1(0.0, 0.5), [0.0, 0.5]))
        assert rep.feasible
        assert rep.label == "sufficient (CNP kernel)"

    def test_feasible_without_certificate(self):
        rep = pick_feasibility_report(PickProblem(bergman(), pts1(0.0, 0.5), [0.0, 0.1]))
        assert rep.label == "necessary condition holds"

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            PickProblem(szego(), pts1(0.0, 0.5), [0.0])

    def test_node_outside(self):
        with pytest.raises(DomainViolation):
            PickProblem(szego(), pts1(1.5), [0.0])


class TestMultiplierContractive:
    def test_zero_multiplier(self):
        assert multiplier_contractive(bergman(), Constant(0), pts1(0.1, 0.5, -0.7j)).is_psd

    def test_square_on_bergman(self):
        pts = default_samples(bergman(), seed=2)[0]
        assert multiplier_contractive(bergman(), coord(0) ** 2, pts).is_psd

    def test_two_z_on_szego(self):
        rep = multiplier_contractive(szego(), 2 * coord(0), pts1(0.0, 0.9))
        assert not rep.is_psd


class TestSampleTest:
    def test_szego_consistent_and_certified(self):
        k = SzegoOneVar(Mobius(0.3, coord(0)))
        kn = normalize_kernel(k)
        v = cnp_sample_test(kn, default_samples(kn))
        assert v.verdict == "ConsistentWithCnp"
        assert len(v.set_min_eigenvalues) == v.samples_tested
        assert isinstance(certify_cnp(szego()), CnpByConstruction)
        assert certify_cnp(bergman()) is None

    def test_bergman_witness(self):
        v = cnp_sample_test(bergman(), [pts1(0.5, -0.5)])
        assert v.verdict == "NotCnp"
        assert v.min_eigenvalue == pytest.approx(-0.125, abs=1e-10)
        m = one_minus_inverse(bergman(), pts1(0.5, -0.5))
        r2, r4 = 0.25, 0.0625
        np.testing.assert_allclose(m, [[2 * r2 - r4, -2 * r2 - r4], [-2 * r2 - r4, 2 * r2 - r4]], atol=1e-15)

    def test_first_failing_set_is_reported(self):
        sets = [pts1(0.1), pts1(0.3, -0.3), pts1(0.5, -0.5)]
        v = cnp_sample_test(bergman(), sets)
        assert v.set_index == 1 and v.samples_tested == 2

    def test_requires_normalized(self):
        with pytest.raises(NotNormalized):
            cnp_sample_test(SzegoOneVar(Mobius(0.3)), [pts1(0.1)])

    def test_vanishing_value(self):
        # (1 - |2z|^2) K vanishes on |z| = 1/2 while staying normalized at 0
        k = Dbr(szego(), 2 * coord(0))
        with pytest.raises(VanishingKernelValue):
            cnp_sample_test(k, [pts1(0.0, 0.5)])

    def test_duplicates_removed(self):
        v = cnp_sample_test(szego(), [pts1(0.2, 0.2, 0.4)])
        assert v.verdict == "ConsistentWithCnp"

    def test_dbr_product_bidisc(self):
        k = normalize_kernel(Dbr(szego(2), coord(0) * coord(1)))
        v = cnp_sample_test(k, default_samples(k))
        assert v.verdict == "NotCnp"


class TestWitnessSearch:
    def test_szego_no_witness(self):
        assert witness_search(szego(), random_budget=1000) is None

    def test_terminal_kernel(self):
        w = witness_search(szego(2), levels=(0.5,))
        assert w.min_eigenvalue == pytest.approx(-0.125, abs=1e-10)
        np.testing.assert_allclose(w.points, [[0.5, 0.5], [-0.5, -0.5]])

    def test_weighted_bergman_real_pair(self):
        w = witness_search(WeightedBergman(3.0), random_budget=0)
        assert w is not None and w.phase == "antipodal-grid" and len(w.points) == 2

    def test_reverify_from_serialized(self):
        k = normalize_kernel(Dbr(szego(2), coord(0) * coord(1)))
        w = witness_search(k)
        again = reverify_witness(k, w.as_verdict().to_dict())
        assert again.min_eigenvalue == pytest.approx(w.min_eigenvalue, abs=1e-10)

    def test_random_phase_is_deterministic(self):
        # a kernel that is CNP on real points but fails on complex ones would need
        # the random phase; check determinism of that phase on a failing kernel
        k = WeightedBergman(2.5)
        a = witness_search(k, levels=(), seed=11)
        b = witness_search(k, levels=(), seed=11)
        assert a.phase == "random"
        np.testing.assert_array_equal(a.points, b.points)

    def test_antipodal_pairs_unique(self):
        pairs = antipodal_pairs(szego(2), (0.5,))
        assert len(pairs) == 4
