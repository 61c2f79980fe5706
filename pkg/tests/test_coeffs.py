import math

import numpy as np
import pytest

from coeffs import PeriodicCoefficients, TridiagonalMatrix, build_periodic_window, build_truncated
from errors import CoefficientError, UnsupportedForEmpiricalError
from scaling import ScalingSpec


def test_of_builds_tuples():
    coeffs = PeriodicCoefficients.of([0, 1], [2, 3])
    assert coeffs.t == 2
    assert coeffs.a == (0.0, 1.0)
    assert coeffs.b == (2.0, 3.0)


@pytest.mark.parametrize("a,b,field", [
    ([0.0], [0.0], "b[0]"),
    ([0.0, 1.0], [1.0, 0.0], "b[1]"),
    ([math.nan], [1.0], "a[0]"),
    ([0.0], [math.inf], "b[0]"),
])
def test_rejects_invalid_entries(a, b, field):
    with pytest.raises(CoefficientError) as info:
        PeriodicCoefficients.of(a, b)
    assert info.value.context["field"] == field


def test_rejects_length_mismatch():
    with pytest.raises(CoefficientError) as info:
        PeriodicCoefficients(2, (0.0,), (1.0, 1.0))
    assert info.value.context["field"] == "a"


def test_rejects_nonpositive_period():
    with pytest.raises(CoefficientError):
        PeriodicCoefficients(0, (), ())


def test_flipped_negates_b_only():
    coeffs = PeriodicCoefficients.of([1.0, 2.0], [3.0, -4.0])
    flipped = coeffs.flipped()
    assert flipped.a == coeffs.a
    assert flipped.b == (-3.0, 4.0)


def test_scale():
    assert PeriodicCoefficients.of([3.0], [0.5]).scale == pytest.approx(4.0)


def test_build_truncated_power_layout():
    coeffs = PeriodicCoefficients.of([1.0, 2.0], [3.0, 4.0])
    matrix = build_truncated(coeffs, ScalingSpec.power(1.0), 3)
    assert matrix.m == 6
    np.testing.assert_allclose(matrix.diag, [1, 2, 2, 4, 3, 6])
    np.testing.assert_allclose(matrix.offdiag, [3, 4, 6, 8, 9])


def test_build_truncated_constant_is_periodic():
    coeffs = PeriodicCoefficients.of([0.5], [1.0])
    matrix = build_truncated(coeffs, ScalingSpec.constant(), 4)
    np.testing.assert_allclose(matrix.diag, [0.5] * 4)
    np.testing.assert_allclose(matrix.offdiag, [1.0] * 3)


def test_build_truncated_rejects_tabulated():
    table = ScalingSpec.tabulated([(0.25, 0.0), (0.5, 2.0), (0.75, 2.0), (1.0, 0.0)])
    with pytest.raises(UnsupportedForEmpiricalError):
        build_truncated(PeriodicCoefficients.of([0.0], [1.0]), table, 5)


def test_build_truncated_rejects_zero_blocks():
    with pytest.raises(CoefficientError):
        build_truncated(PeriodicCoefficients.of([0.0], [1.0]), ScalingSpec.constant(), 0)


def test_periodic_window_repeats_period():
    coeffs = PeriodicCoefficients.of([1.0, 2.0, 3.0], [4.0, 5.0, 6.0])
    window = build_periodic_window(coeffs, 2)
    assert window.m == 2 * 2 + 1 + 3
    np.testing.assert_allclose(window.diag, [1, 2, 3, 1, 2, 3, 1, 2])
    np.testing.assert_allclose(window.offdiag, [4, 5, 6, 4, 5, 6, 4])


def test_tridiagonal_rejects_bad_shapes():
    with pytest.raises(CoefficientError):
        TridiagonalMatrix(np.zeros(3), np.zeros(3))


def test_matvec_matches_dense():
    rng = np.random.default_rng(7)
    matrix = TridiagonalMatrix(rng.uniform(-3, 3, 9), rng.uniform(-3, 3, 8))
    dense = matrix.to_dense()
    vector = rng.normal(size=9)
    block = rng.normal(size=(9, 4))
    np.testing.assert_allclose(matrix.matvec(vector), dense @ vector, atol=1e-12)
    np.testing.assert_allclose(matrix.matvec(block), dense @ block, atol=1e-12)


def test_leading_and_norm():
    matrix = TridiagonalMatrix(np.array([1.0, -4.0, 2.0]), np.array([0.5, -1.0]))
    assert matrix.norm_inf == pytest.approx(5.5)
    leading = matrix.leading(2)
    np.testing.assert_allclose(leading.to_dense(), [[1.0, 0.5], [0.5, -4.0]])
