import math

import numpy as np
import pytest

from config import ScalingKind
from errors import ScalingError, UnsupportedForEmpiricalError
from quadrature import integrate_pieces, tanh_sinh
from scaling import (ScalingSpec, breakpoints, g_array, g_of, inverse_moment, omega_moment,
                     phi_of, phi_values)

TENT = [(0.25, 0.0), (0.5, 2.0), (0.75, 2.0), (1.0, 0.0)]
FLAT = [(0.01, 1.0 / 0.99), (1.0, 1.0 / 0.99)]
# trapezoid mass of the raw values is 1.4
SKEWED = [(0.1, 0.0), (0.3, 3.0 / 1.4), (0.6, 1.0 / 1.4), (1.0, 1.5 / 1.4)]


def test_power_density():
    scaling = ScalingSpec.power(0.5)
    # g(omega) = omega**(-1 + 2) / 0.5 = 2 omega
    assert g_of(scaling, 0.3) == pytest.approx(0.6)
    assert g_of(ScalingSpec.power(1.0), 0.7) == pytest.approx(1.0)


@pytest.mark.parametrize("omega", [0.0, -0.1, 1.5])
def test_g_of_rejects_outside_unit_interval(omega):
    with pytest.raises(ScalingError):
        g_of(ScalingSpec.power(1.0), omega)


def test_constant_has_no_density():
    with pytest.raises(ScalingError):
        g_of(ScalingSpec.constant(), 0.5)


@pytest.mark.parametrize("gamma", [0.0, -1.0, math.inf])
def test_power_rejects_bad_gamma(gamma):
    with pytest.raises(ScalingError):
        ScalingSpec.power(gamma)


def test_tabulated_is_linear_between_points():
    scaling = ScalingSpec.tabulated(TENT)
    assert scaling.kind == ScalingKind.TABULATED
    np.testing.assert_allclose(g_array(scaling, np.array([0.1, 0.375, 0.6, 1.0])), [0.0, 1.0, 2.0, 0.0])


@pytest.mark.parametrize("points", [
    [(0.5, 1.0)],
    [(0.0, 1.0), (1.0, 1.0)],
    [(0.5, 2.0), (0.25, 2.0)],
    [(0.5, 4.0), (1.0, -0.0001)],
    [(0.5, 1.0), (1.0, 1.0)],
])
def test_tabulated_rejects_bad_tables(points):
    with pytest.raises(ScalingError):
        ScalingSpec.tabulated(points)


def test_omega_moment():
    assert omega_moment(ScalingSpec.constant(), 5) == 1.0
    assert omega_moment(ScalingSpec.power(1.0), 2) == pytest.approx(1.0 / 3.0)
    assert omega_moment(ScalingSpec.power(2.0), 3) == pytest.approx(1.0 / 7.0)
    assert omega_moment(ScalingSpec.tabulated(TENT), 0) == pytest.approx(1.0)


def test_inverse_moment():
    assert inverse_moment(ScalingSpec.power(0.5)) == pytest.approx(2.0)
    assert math.isinf(inverse_moment(ScalingSpec.power(1.0)))
    assert math.isinf(inverse_moment(ScalingSpec.power(3.0)))
    assert inverse_moment(ScalingSpec.constant()) == 1.0


def power_moment_by_quadrature(gamma, M):
    scaling = ScalingSpec.power(gamma)
    # distance to 0 keeps the omega**(-1 + 1/gamma) singularity resolved
    return tanh_sinh(lambda x, d_lo, d_hi: g_array(scaling, d_lo) * d_lo ** M, 0.0, 1.0, rtol=1e-11).value


@pytest.mark.parametrize("gamma", [0.25, 0.5, 1.0, 2.0, 4.0])
def test_power_omega_moment_matches_quadrature(gamma):
    for M in range(11):
        expected = power_moment_by_quadrature(gamma, M)
        assert omega_moment(ScalingSpec.power(gamma), M) == pytest.approx(expected, rel=1e-8)


@pytest.mark.parametrize("scaling", [
    ScalingSpec.power(0.25), ScalingSpec.power(1.0), ScalingSpec.power(4.0),
    ScalingSpec.tabulated(TENT), ScalingSpec.tabulated(FLAT),
])
def test_g_has_unit_mass(scaling):
    points = [0.0] + [w for w in breakpoints(scaling) if w < 1.0] + [1.0]
    total = integrate_pieces(lambda x, d_lo, d_hi: g_array(scaling, x), points, rtol=1e-11)
    assert total == pytest.approx(1.0, rel=1e-8)


@pytest.mark.parametrize("table", [TENT, FLAT, SKEWED])
def test_table_moments_are_exact(table):
    scaling = ScalingSpec.tabulated(table)
    points = [w for w, _ in table]
    for M in range(11):
        expected = integrate_pieces(lambda x, d_lo, d_hi: g_array(scaling, x) * x ** M, points, rtol=1e-12)
        assert omega_moment(scaling, M) == pytest.approx(expected, rel=1e-10)
    expected = integrate_pieces(lambda x, d_lo, d_hi: g_array(scaling, x) / x, points, rtol=1e-12)
    assert inverse_moment(scaling) == pytest.approx(expected, rel=1e-10)


def test_flat_table_inverse_moment():
    # g = 1/0.99 on [0.01, 1]
    assert inverse_moment(ScalingSpec.tabulated(FLAT)) == pytest.approx(math.log(100.0) / 0.99, rel=1e-12)


def test_phi():
    np.testing.assert_allclose(phi_values(ScalingSpec.power(2.0), 3), [1.0, 4.0, 9.0])
    assert phi_of(ScalingSpec.power(2.0), 2) == pytest.approx(9.0)
    assert phi_of(ScalingSpec.constant(), 10) == 1.0
    with pytest.raises(UnsupportedForEmpiricalError):
        phi_of(ScalingSpec.tabulated(TENT), 3)


def test_breakpoints():
    assert breakpoints(ScalingSpec.tabulated(TENT)) == [0.25, 0.5, 0.75, 1.0]
    assert breakpoints(ScalingSpec.power(1.0)) == []


@pytest.mark.parametrize("scaling", [
    ScalingSpec.constant(), ScalingSpec.power(1.5), ScalingSpec.tabulated(TENT),
])
def test_dict_round_trip(scaling):
    assert ScalingSpec.from_dict(scaling.to_dict()) == scaling
