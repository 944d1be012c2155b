import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cotsums import gseries
from cotsums.gseries import (
    ContinuedFraction,
    TruncatedGSeries,
    cf_expand,
    cf_from_quotients,
    convergence_classifier,
    empirical_F,
    f_eval,
    fourier_coeffs_f,
    g_fourier_eval,
    hk_growth_check,
    hk_table,
)


class TestFEval:
    def test_quarter_with_single_term(self):
        assert f_eval(0.25, TruncatedGSeries(1)) == 0.5

    def test_zero_by_integer_convention(self):
        assert f_eval(0.0, TruncatedGSeries(8)) == 0.0
        assert f_eval(0.5, TruncatedGSeries(8)) == pytest.approx(
            f_eval(0.5, TruncatedGSeries(12)), abs=1e-12
        )

    @given(st.integers(min_value=1, max_value=(1 << 20) - 1))
    def test_dyadic_antisymmetry_is_exact(self, k):
        t = TruncatedGSeries(12)
        x = k / float(1 << 20)
        assert f_eval(x, t) + f_eval(1.0 - x, t) == 0.0

    def test_truncation_validation(self):
        with pytest.raises(ValueError):
            TruncatedGSeries(0)
        with pytest.raises(ValueError):
            TruncatedGSeries(41)

    def test_offset_grid_matches_scalar_route(self):
        # forces the residue-binned path (2^14 terms on a 200-point grid)
        n, m1 = 200, 14
        c = 0.5 + (200 * 0.6180339887498949) % 1.0
        fast = gseries._f_offset_grid(n, c, m1)
        direct = np.array(
            [f_eval(((j + c) / n) % 1.0, TruncatedGSeries(m1)) for j in range(n)]
        )
        assert np.max(np.abs(fast - direct)) < 1e-9


class TestFourierEvaluator:
    @given(st.integers(min_value=1, max_value=(1 << 53) - 1))
    def test_antisymmetry_is_exact(self, j):
        # uniform-RNG granularity: x and 1-x are then exact mirror floats
        x = j / float(1 << 53)
        assert g_fourier_eval(x, 4096) + g_fourier_eval(1.0 - x, 4096) == 0.0

    def test_integer_argument(self):
        assert g_fourier_eval(0.0, 1 << 20) == 0.0
        assert g_fourier_eval(3.0, 128) == 0.0

    def test_bad_truncation(self):
        with pytest.raises(ValueError):
            g_fourier_eval(0.3, 0)

    def test_rotated_grid_agreement(self, l2_pair):
        fs, gs = l2_pair
        l2 = math.sqrt(float(np.mean((fs - gs) ** 2)))
        assert l2 < 0.01

    def test_iid_random_grid_agreement(self):
        # iid points estimate the full difference norm (heavy-tailed near the
        # jump), so the gate is looser than on the rotated grid; a wrong
        # Fourier constant would read ~1.7 here
        rng = np.random.default_rng(61803)
        alphas = rng.random(800)
        fs = gseries._f_points(alphas, 18)
        gs = np.array([g_fourier_eval(float(a), 1 << 18) for a in alphas])
        assert math.sqrt(float(np.mean((fs - gs) ** 2))) < 0.04

    def test_grid_helper_matches_scalar(self):
        n, c = 997, 0.371
        grid = gseries._fourier_offset_grid(n, c, 1 << 14)
        for j in (0, 101, 500, 996):
            want = g_fourier_eval(((j + c) / n) % 1.0, 1 << 14)
            assert grid[j] == pytest.approx(want, abs=1e-12)


class TestFourierCoeffs:
    def test_leading_coefficient(self):
        s = fourier_coeffs_f(TruncatedGSeries(6), 10)
        assert s[0] == 2.0 / math.pi
        assert s[5] == pytest.approx((2.0 / math.pi) * 4.0 / 6.0, abs=1e-15)

    def test_stable_in_truncation(self):
        a = fourier_coeffs_f(TruncatedGSeries(6), 64)
        b = fourier_coeffs_f(TruncatedGSeries(12), 64)
        assert np.array_equal(a, b)

    def test_parseval_against_grid_integral(self):
        s = fourier_coeffs_f(TruncatedGSeries(6), 1 << 18)
        mass = 0.5 * float(s @ s)
        grid = gseries._f_offset_grid(100_000, 0.5 + (100_000 * 0.6180339887498949) % 1.0, 6)
        grid_mass = float(np.mean(grid**2))
        assert abs(mass - grid_mass) / grid_mass < 1e-3


class TestContinuedFraction:
    def test_one_third_terminates(self):
        cf = cf_expand(1.0 / 3.0, 10)
        assert cf.partial_quotients == [3]
        assert cf.convergents == [(1, 3)]
        assert cf.terminated

    def test_three_eighths(self):
        assert cf_expand(0.375, 10).partial_quotients == [2, 1, 2]

    def test_golden_quotients(self):
        cf = cf_expand((math.sqrt(5.0) - 1.0) / 2.0, 20)
        assert cf.partial_quotients == [1] * 20
        assert not cf.terminated

    @given(st.floats(min_value=1e-4, max_value=1.0 - 1e-4))
    def test_determinant_alternates(self, alpha):
        cf = cf_expand(alpha, 12)
        dets = [
            p1 * q0 - p0 * q1
            for (p0, q0), (p1, q1) in zip(cf.convergents, cf.convergents[1:])
        ]
        assert all(abs(d) == 1 for d in dets)
        assert all(x == -y for x, y in zip(dets, dets[1:]))

    def test_domain_validation(self):
        with pytest.raises(ValueError):
            cf_expand(1.5, 5)
        with pytest.raises(ValueError):
            cf_expand(0.5, 0)

    def test_invariant_enforced_on_construction(self):
        with pytest.raises(ValueError):
            ContinuedFraction(0.4, [2, 2], [(1, 2), (2, 2)])

    def test_from_quotients_exact_big_integers(self):
        cf = cf_from_quotients([2, 4, 512, 1 << 4610])
        assert [q for _, q in cf.convergents][:3] == [2, 9, 4610]
        assert not cf.terminated
        with pytest.raises(ValueError):
            cf_from_quotients([])
        with pytest.raises(ValueError):
            cf_from_quotients([1, 0, 2])


class TestClassifier:
    def test_golden_converges(self):
        cf = cf_expand((math.sqrt(5.0) - 1.0) / 2.0, 20)
        assert convergence_classifier(cf).verdict == "converges"

    def test_sqrt2_converges(self):
        cf = cf_expand(math.sqrt(2.0) - 1.0, 14)
        assert convergence_classifier(cf).verdict == "converges"

    def test_rational_converges(self):
        assert convergence_classifier(cf_expand(0.375, 10)).verdict == "converges"

    def test_liouville_prefix_diverges(self):
        res = convergence_classifier(cf_from_quotients([2, 4, 512, 1 << 4610]))
        assert res.verdict == "diverges"
        assert res.alternating_sum == pytest.approx(-0.856257940939475, abs=1e-9)
        assert res.brjuno_sum == pytest.approx(2.730920860048518, abs=1e-9)

    def test_shallow_prefix_undecided(self):
        assert convergence_classifier(cf_from_quotients([2, 30])).verdict == "undecided"

    def test_needs_two_convergents(self):
        with pytest.raises(ValueError):
            convergence_classifier(cf_expand(1.0 / 3.0, 10))


class TestMomentTable:
    def test_trivial_row(self, hk14):
        assert hk14.hk[0] == 1.0
        assert hk14.d2k[0] == 1.0
        assert hk14.errors[0] == 0.0

    def test_h1(self, hk14):
        assert hk14.hk[1] == pytest.approx(0.1389, abs=2e-3)

    def test_h1_stable_in_truncation(self):
        vals = [
            hk_table(1, TruncatedGSeries(m1), 4001).hk[1] for m1 in (12, 14, 16)
        ]
        assert all(v == pytest.approx(0.1389, abs=2e-3) for v in vals)

    def test_pi_scaling_identity(self, hk14):
        for k in range(1, 7):
            rel = abs(hk14.hk[k] * math.pi ** (2 * k) - hk14.d2k[k]) / hk14.d2k[k]
            assert rel < 1e-12

    def test_even_moments_positive(self, hk14):
        assert all(hk14.d2k[k] > 0.0 for k in range(1, 7))

    def test_odd_moments_within_quadrature_error(self, hk14):
        for k in range(1, 7):
            assert abs(hk14.odd[k]) <= hk14.errors[k]

    def test_growth_sequence(self, hk14):
        roots = hk_growth_check(hk14)
        want = [0.1387, 0.3805, 0.7436, 1.1948, 1.6929, 2.2011]
        assert roots == pytest.approx(want, abs=2e-3)
        assert all(b > a for a, b in zip(roots, roots[1:]))
        ratios = [hk14.hk[k + 1] / hk14.hk[k] for k in range(1, 6)]
        assert all(b > a for a, b in zip(ratios, ratios[1:]))

    def test_validation(self):
        with pytest.raises(ValueError):
            hk_table(0, TruncatedGSeries(10), 2000)
        with pytest.raises(ValueError):
            hk_table(2, TruncatedGSeries(10), 999)
        with pytest.raises(ValueError):
            hk_growth_check(hk_table(1, TruncatedGSeries(10), 1001))


class TestEmpiricalF:
    def test_symmetry_and_median(self, emp_f14):
        n = emp_f14.count
        assert n == 100_000
        assert abs(emp_f14.median()) < 1e-3
        z = np.linspace(-1.5, 1.5, 61)
        sym = np.max(np.abs((1.0 - emp_f14.cdf(-z + 1e-12)) - emp_f14.cdf(z)))
        assert sym < 2.0 / math.sqrt(n)

    def test_max_jump_vanishes(self, emp_f14):
        assert emp_f14.max_jump() <= 4.0 / math.sqrt(emp_f14.count)
        small = empirical_F(TruncatedGSeries(10), 2000)
        assert small.max_jump() >= emp_f14.max_jump()

    def test_cdf_monotone(self, emp_f14):
        z = np.linspace(emp_f14.lo - 0.1, emp_f14.hi + 0.1, 500)
        vals = emp_f14.cdf(z)
        assert np.all(np.diff(vals) >= 0.0)
        assert vals[0] == 0.0 and vals[-1] == 1.0

    def test_deterministic(self):
        a = empirical_F(TruncatedGSeries(10), 2000)
        b = empirical_F(TruncatedGSeries(10), 2000)
        assert np.array_equal(a.values, b.values)

    def test_sample_floor(self):
        with pytest.raises(ValueError):
            empirical_F(TruncatedGSeries(10), 999)
