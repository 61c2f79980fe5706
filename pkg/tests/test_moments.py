import math

import numpy as np
import pytest

from bands import band_structure
from coeffs import PeriodicCoefficients
from density import integrate_rho
from errors import CoefficientError
from moments import (MomentReport, density_moment, empirical_moment, moment_table, periodic_moment,
                     periodic_moment_quadrature, theorem_moment)
from scaling import ScalingSpec
from spectrum import SpectrumResult, scaled_spectrum

LINEAR = ScalingSpec.power(1.0)


class TestPeriodicMoment:
    def test_zeroth(self, two_band):
        assert periodic_moment(two_band, 0) == 1.0

    def test_diagonal_average(self):
        assert periodic_moment(PeriodicCoefficients.of([5.0], [1.0]), 1) == pytest.approx(5.0)

    @pytest.mark.parametrize("M", range(11))
    def test_free_walks_give_central_binomials(self, arcsine, M):
        expected = math.comb(M, M // 2) if M % 2 == 0 else 0.0
        assert periodic_moment(arcsine, M) == pytest.approx(expected, abs=1e-12)

    def test_two_band_second_moment(self, two_band):
        assert periodic_moment(two_band, 2) == pytest.approx(5.0)

    def test_negative_order_rejected(self, arcsine):
        with pytest.raises(CoefficientError):
            periodic_moment(arcsine, -1)

    @pytest.mark.parametrize("a,b", [
        ([0.0], [1.0]),
        ([0.0, 0.0], [1.0, 2.0]),
        ([0.5, -1.0, 2.0], [1.0, 0.7, -1.3]),
        ([2.0], [1.0]),
        ([0.0, 0.0], [1.0, 1.0]),
    ])
    def test_window_matches_quadrature(self, a, b):
        coeffs = PeriodicCoefficients.of(a, b)
        bands = band_structure(coeffs)
        for M in range(11):
            exact = periodic_moment(coeffs, M)
            limit = 1e-7 * max(1.0, coeffs.scale ** M)
            assert periodic_moment_quadrature(bands, M) == pytest.approx(exact, abs=limit)


class TestQuadratureMoment:
    def test_arcsine_values(self, arcsine_bands):
        assert periodic_moment_quadrature(arcsine_bands, 2) == pytest.approx(2.0, abs=1e-8)
        assert periodic_moment_quadrature(arcsine_bands, 4) == pytest.approx(6.0, abs=1e-8)
        assert periodic_moment_quadrature(arcsine_bands, 3) == pytest.approx(0.0, abs=1e-10)


class TestTheoremMoment:
    def test_product(self, arcsine):
        assert theorem_moment(arcsine, LINEAR, 2) == pytest.approx(2.0 / 3.0)
        assert theorem_moment(PeriodicCoefficients.of([5.0], [1.0]), LINEAR, 1) == pytest.approx(2.5)

    def test_zeroth(self, two_band):
        assert theorem_moment(two_band, ScalingSpec.power(3.0), 0) == pytest.approx(1.0)


class TestEmpiricalMoment:
    def test_from_array(self):
        assert empirical_moment(np.array([-1.0, 1.0]), 2) == pytest.approx(1.0)
        assert empirical_moment(np.array([-1.0, 1.0]), 1) == pytest.approx(0.0)

    def test_from_spectrum(self):
        spec = SpectrumResult(values=np.array([1.0, 2.0, 3.0]), n=3, t=1)
        assert empirical_moment(spec, 1) == pytest.approx(2.0)

    def test_approaches_theory(self, arcsine):
        spec = scaled_spectrum(arcsine, LINEAR, 4000)
        assert empirical_moment(spec, 2) == pytest.approx(2.0 / 3.0, abs=0.02)

    def test_error_shrinks_with_n(self):
        coeffs = PeriodicCoefficients.of([0.0, 0.0], [1.0, 2.0])
        target = theorem_moment(coeffs, LINEAR, 2)
        errors = [abs(empirical_moment(scaled_spectrum(coeffs, LINEAR, n), 2) - target)
                  for n in (250, 1000, 4000)]
        assert errors[2] < errors[0]
        assert errors[2] < 0.02

    @pytest.mark.parametrize("a,b", [([0.0], [1.0]), ([3.0], [0.5])])
    def test_within_tolerance_up_to_sixth_order(self, a, b):
        coeffs = PeriodicCoefficients.of(a, b)
        spec = scaled_spectrum(coeffs, LINEAR, 4000)
        for M in range(7):
            error = abs(empirical_moment(spec, M) - theorem_moment(coeffs, LINEAR, M))
            assert error <= 0.02 * coeffs.scale ** M

    @pytest.mark.parametrize("a,b", [([0.0], [1.0]), ([3.0], [0.5]), ([0.0, 0.0], [1.0, 2.0])])
    def test_error_does_not_grow_with_n(self, a, b):
        coeffs = PeriodicCoefficients.of(a, b)
        spectra = [scaled_spectrum(coeffs, LINEAR, n) for n in (250, 1000, 4000)]
        for M in range(1, 7):
            target = theorem_moment(coeffs, LINEAR, M)
            errors = [abs(empirical_moment(spec, M) - target) for spec in spectra]
            floor = 1e-12 * coeffs.scale ** M
            assert errors[1] <= 1.2 * errors[0] + floor
            assert errors[2] <= 1.2 * errors[1] + floor


class TestDensityMoment:
    def test_examples(self, arcsine_bands):
        assert density_moment(arcsine_bands, LINEAR, 2) == pytest.approx(2.0 / 3.0, abs=1e-5)
        assert density_moment(arcsine_bands, ScalingSpec.power(2.0), 0) == pytest.approx(1.0, abs=1e-5)
        bands = band_structure(PeriodicCoefficients.of([3.0], [0.5]))
        assert density_moment(bands, LINEAR, 1) == pytest.approx(1.5, abs=1e-5)

    @pytest.mark.parametrize("gamma", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("a,b", [([0.0], [1.0]), ([0.0, 0.0], [1.0, 2.0]), ([2.0], [1.0])])
    def test_change_of_variables(self, a, b, gamma):
        coeffs = PeriodicCoefficients.of(a, b)
        bands = band_structure(coeffs)
        scaling = ScalingSpec.power(gamma)
        orders = list(range(9))
        measured = integrate_rho(bands, scaling, orders)
        radius = float(np.max(np.abs(bands.edges)))
        for M in orders:
            expected = theorem_moment(coeffs, scaling, M)
            assert measured[M] == pytest.approx(expected, rel=1e-4, abs=1e-4 * radius ** M)


class TestMomentTable:
    def test_without_spectrum(self, arcsine):
        reports = moment_table(arcsine, LINEAR, 4)
        assert [r.M for r in reports] == [0, 1, 2, 3, 4]
        assert all(isinstance(r, MomentReport) for r in reports)
        assert all(math.isnan(r.m_empirical) and math.isnan(r.abs_error) for r in reports)
        assert reports[4].m_theory == pytest.approx(6.0 / 5.0)

    def test_with_spectrum(self, arcsine):
        spec = scaled_spectrum(arcsine, LINEAR, 500)
        reports = moment_table(arcsine, LINEAR, 2, spectrum=spec)
        assert reports[0].m_empirical == pytest.approx(1.0)
        assert reports[2].abs_error == pytest.approx(abs(reports[2].m_empirical - 2.0 / 3.0))
        assert set(reports[1].to_dict()) == {"M", "K_M", "omega_factor", "m_theory", "m_empirical",
                                             "abs_error"}
