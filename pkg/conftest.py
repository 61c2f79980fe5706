import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from bands import band_structure  # noqa: E402
from coeffs import PeriodicCoefficients  # noqa: E402


@pytest.fixture
def arcsine():
    """t = 1, a = 0, b = 1: bands [-2, 2]"""
    return PeriodicCoefficients.of([0.0], [1.0])


@pytest.fixture
def two_band():
    """t = 2, a = [0, 0], b = [1, 2]: bands [-3, -1] and [1, 3]"""
    return PeriodicCoefficients.of([0.0, 0.0], [1.0, 2.0])


@pytest.fixture
def arcsine_bands(arcsine):
    return band_structure(arcsine)


@pytest.fixture
def two_band_bands(two_band):
    return band_structure(two_band)
