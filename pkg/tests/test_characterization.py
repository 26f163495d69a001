"""Decompositions of 1 - 1/K, composition witnesses and classifiers."""
import numpy as np
import pytest

from cnp_lab import characterization as ch
from cnp_lab.cnp import cnp_sample_test, default_samples, witness_search
from cnp_lab.errors import BadParameter, ConstraintViolation, DimensionMismatch
from cnp_lab.functions import MatrixMap, Mobius, Polynomial, UnimodularScale, coord, polydisc
from cnp_lab.kernels import Dbr, bergman, normalize_kernel, szego
from cnp_lab.sampling import random_points
from cnp_lab.series import diagonal_cnp_test
from cnp_lab.kernels import radial_series


def random_pairs(dp, n=500, radius=0.7, seed=0):
    rng = np.random.default_rng(seed)
    dom = dp.kernel.domain
    return random_points(rng, dom, radius, (n,)), random_points(rng, dom, radius, (n,))


class TestExactDecompositions:
    def test_tensor2_point(self):
        dp = ch.decompose_tensor2(coord(0), coord(0))
        x, y = np.array([[0.3, 0.4]]), np.array([[0.1, 0.2]])
        assert dp.lhs(x, y)[0] == pytest.approx(dp.rhs(x, y)[0], abs=1e-14)

    def test_tensor2_base_point(self):
        dp = ch.decompose_tensor2(coord(0), coord(0))
        z = np.zeros((1, 2))
        assert dp.lhs(z, z)[0] == 0 and dp.rhs(z, z)[0] == 0

    def test_tensor2_mobius(self):
        dp = ch.decompose_tensor2(Mobius(0.2), coord(0))
        assert dp.holds(*random_pairs(dp, 10))

    def test_tensor3_point(self):
        dp = ch.decompose_tensor3(coord(0), coord(0), coord(0))
        x = np.array([[0.5, 0, 0]])
        assert dp.lhs(x, x)[0] == pytest.approx(0.25)
        assert dp.rhs(x, x)[0] == pytest.approx(0.25)
        assert dp.holds(*random_pairs(dp, 10))

    def test_schur_point(self):
        dp = ch.decompose_schur(coord(0))
        x = np.array([[0.5]])
        assert dp.lhs(x, x)[0] == pytest.approx(0.4375)
        assert dp.rhs(x, x)[0] == pytest.approx(2 * 0.25 - 0.0625)
        assert ch.decompose_schur(Mobius(0.3)).holds(*random_pairs(dp, 50))

    def test_bergman_two_ways_agree(self):
        a = ch.decompose_weighted_bergman(2.0, 8)
        b = ch.decompose_schur(coord(0))
        xs, ys = random_pairs(b, 200)
        np.testing.assert_allclose(a.rhs(xs, ys), b.rhs(xs, ys), atol=1e-13)

    def test_empty_g_rejected(self):
        with pytest.raises(BadParameter):
            ch.DecompositionPair(ch.RowMap(()), ch.RowMap(()), szego(), 0.0)


class TestWeightedBergman:
    def test_p2_rows(self):
        dp = ch.decompose_weighted_bergman(2.0, 6)
        assert dp.g.width == 1 and dp.f.width == 1
        assert dp.residual_bound == ch.EXACT_RESIDUAL

    def test_p3_rows(self):
        dp = ch.decompose_weighted_bergman(3.0, 3)
        x = np.array([[0.5]])
        np.testing.assert_allclose(dp.g(x)[0], [np.sqrt(3) * 0.5, 0.125])
        np.testing.assert_allclose(dp.f(x)[0], [np.sqrt(3) * 0.25])

    def test_p4_width8_tail(self):
        dp = ch.decompose_weighted_bergman(4.0, 8, 0.7)
        assert dp.holds(*random_pairs(dp, 500, 0.7))

    def test_fractional_tail_bound_is_honest(self):
        dp = ch.decompose_weighted_bergman(3.5, 8, 0.7)
        xs, ys = random_pairs(dp, 500, 0.7)
        assert dp.max_residual(xs, ys) <= dp.residual_bound
        assert dp.residual_bound > ch.EXACT_RESIDUAL

    def test_sign_split_reads_actual_signs(self):
        d = ch.weighted_bergman_coefficients(3.5, 8)
        assert d[5] < 0  # not the alternating pattern
        dp = ch.decompose_weighted_bergman(3.5, 8)
        assert dp.g.width + dp.f.width == 8

    def test_below_two(self):
        with pytest.raises(BadParameter):
            ch.decompose_weighted_bergman(1.5)

    def test_theorem_range_flag(self):
        assert ch.decompose_weighted_bergman(2.5).notes == ("below_theorem_range",)
        assert ch.decompose_weighted_bergman(3).notes == ("in_theorem_range",)


class TestFirstFamily:
    def test_row_matches_oracle(self):
        for a in (0.3, 0.5, 0.9):
            assert ch.decompose_example33_1(coord(0), a).notes == ("row matches series oracle",)

    def test_oracle_closed_form(self):
        a = 0.5
        d = ch.example33_1_coefficients(a, 6)
        expect = [0, 2 - a * a] + [-(1 - a * a) ** 2 * a ** (2 * n) for n in range(5)]
        np.testing.assert_allclose(d, expect, atol=1e-15)

    def test_pair_value(self):
        a = 0.5
        dp = ch.decompose_example33_1(coord(0), a, 64, 0.6)
        x = np.array([[0.5]])
        t = 0.25
        closed = 1 - (1 - t) ** 2 / (1 - a * a * t)
        assert abs(dp.rhs(x, x)[0] - closed) <= dp.residual_bound

    def test_a09_tail(self):
        dp = ch.decompose_example33_1(coord(0), 0.9, 64, 0.6)
        assert dp.holds(*random_pairs(dp, 500, 0.6))

    def test_bad_a(self):
        with pytest.raises(ConstraintViolation):
            ch.decompose_example33_1(coord(0), 1.0)

    def test_witness_passes(self):
        for a in (0.3, 0.5, 0.9):
            dp = ch.decompose_example33_1(coord(0), a, 64, 0.6)
            pts = random_points(np.random.default_rng(1), polydisc(1), 0.6, (200,))
            rep = ch.verify_characterization(dp, coord(0), ch.example33_1_witness(a, 64), pts)
            assert rep.passed, rep.line()


class TestSecondFamily:
    def test_constraints(self):
        with pytest.raises(ConstraintViolation):
            ch.check_example33_2(0.6, 0.5, 0.5)
        with pytest.raises(ConstraintViolation):
            ch.check_example33_2(0.6, 0.35, 0.5)
        with pytest.raises(ConstraintViolation):
            ch.check_example33_2(0.6, 0.1, 0.0)
        ch.check_example33_2(0.6, 0.1, 0.5)

    def test_identity_and_witness(self):
        dp = ch.decompose_example33_2(0.6, 0.1, 0.5, 64, 0.6)
        x = np.array([[0.3]])
        assert abs(dp.lhs(x, x)[0] - dp.rhs(x, x)[0]) <= dp.residual_bound
        pts = random_points(np.random.default_rng(2), polydisc(1), 0.6, (200,))
        rep = ch.verify_characterization(dp, 0.6 * coord(0), ch.example33_2_witness(0.6, 0.1, 0.5), pts)
        assert rep.passed, rep.line()

    def test_wrong_multiplier_fails(self):
        dp = ch.decompose_example33_2(0.6, 0.1, 0.5, 64, 0.6)
        pts = random_points(np.random.default_rng(2), polydisc(1), 0.6, (50,))
        rep = ch.verify_characterization(dp, 0.5 * coord(0), ch.example33_2_witness(0.6, 0.1, 0.5), pts)
        assert not rep.passed


class TestCharacterizationChecks:
    def test_dimension_mismatch(self):
        dp = ch.decompose_schur(coord(0))
        w = ch.CompositionWitness(MatrixMap((2, 1)), MatrixMap((2, 1)))
        with pytest.raises(DimensionMismatch):
            ch.verify_characterization(dp, coord(0), w, np.array([[0.1]]))

    def test_schur_witness_and_consistency(self):
        dp = ch.decompose_schur(coord(0))
        pts = random_points(np.random.default_rng(3), polydisc(1), 0.7, (100,))
        rep = ch.verify_characterization(dp, 1j * coord(0), ch.schur_witness(1j), pts)
        assert rep.passed
        k = normalize_kernel(Dbr(dp.kernel, 1j * coord(0)))
        assert cnp_sample_test(k, default_samples(k)).verdict == "ConsistentWithCnp"

    def test_example25_pass_then_sample_test(self):
        phi = ch.example25_multiplier(0.5, 0.5)
        pts = random_points(np.random.default_rng(4), polydisc(1), 0.7, (100,))
        rep = ch.verify_characterization(ch.decompose_cnp(coord(0)), phi, ch.example25_witness(0.5, 0.5), pts)
        assert rep.passed and rep.defect_phi <= 1e-13
        k = Dbr(szego(), phi)
        assert cnp_sample_test(k, default_samples(k)).verdict == "ConsistentWithCnp"


class TestChu:
    def test_identity(self):
        assert ch.verify_chu_identity(coord(0), Polynomial((1.0,))).passed

    def test_dirichlet(self):
        rep = ch.verify_chu_identity(ch.example25_multiplier(0.5, 0.5), Polynomial((0.5, 0.5)))
        assert rep.passed and rep.defect <= 1e-12

    def test_square_fails_with_collision(self):
        rep = ch.verify_chu_identity(coord(0) ** 2, Polynomial((0.5, 0.5)))
        assert not rep.passed
        assert rep.collision == (0.5, -0.5)

    def test_nonzero_at_origin(self):
        with pytest.raises(BadParameter):
            ch.verify_chu_identity(0.1 + coord(0), Polynomial((1.0,)))


class TestClassifiers:
    def test_fit_closed_form(self):
        lam, mu = 1j, 0.3 - 0.2j
        h = lambda z: lam * (z - mu) / (1 - np.conj(mu) * z)
        got = ch.fit_blaschke(h)
        assert got[0] == pytest.approx(lam) and got[1] == pytest.approx(mu)

    def test_bidisc_coordinate(self):
        r = ch.classify_bidisc(coord(0))
        assert (r.verdict, r.index, r.lam, r.mu) == ("MoebiusInCoordinate", 0, 1, 0)

    def test_bidisc_rotated_second(self):
        r = ch.classify_bidisc(UnimodularScale(1j, Mobius(0.3, coord(1))))
        assert r.index == 1
        assert r.lam == pytest.approx(1j, abs=1e-10) and r.mu == pytest.approx(0.3, abs=1e-10)

    @pytest.mark.parametrize("phi", [coord(0) * coord(1), (coord(0) + coord(1)) * 0.5, coord(0) ** 2])
    def test_bidisc_negative_with_witness(self, phi):
        assert ch.classify_bidisc(phi).verdict == "NotOfTheForm"
        assert witness_search(normalize_kernel(Dbr(szego(2), phi)), random_budget=0) is not None

    def test_disc(self):
        assert ch.classify_disc_blaschke(coord(0)).verdict == "BlaschkeFactor"
        r = ch.classify_disc_blaschke(UnimodularScale(-1, Mobius(0.4)))
        assert r.lam == pytest.approx(-1) and r.mu == pytest.approx(0.4)

    def test_disc_square(self):
        assert ch.classify_disc_blaschke(coord(0) ** 2).verdict == "NotOfTheForm"
        v = diagonal_cnp_test(radial_series(Dbr(bergman(), coord(0) ** 2)))
        assert v.index == 2 and v.value == pytest.approx(-2)

    def test_blaschke_positive_implies_szego(self):
        phi = UnimodularScale(-1, Mobius(0.4))
        k = normalize_kernel(Dbr(bergman(), phi))
        x = random_points(np.random.default_rng(5), polydisc(1), 0.7, (10,))
        np.testing.assert_allclose(k.matrix(x), szego().matrix(x), atol=1e-12)

    def test_blaschke_map_builder(self):
        f = ch.blaschke_map(1j, 0.3)
        r = ch.classify_disc_blaschke(f)
        assert r.lam == pytest.approx(1j) and r.mu == pytest.approx(0.3)


def test_obstruction_value():
    assert ch.weighted_bergman_obstruction(3) == 1.0
    assert ch.weighted_bergman_obstruction(4) > 1
