"""Moment oracles.

K_M = integral of x^M rho0 is the diagonal average of L^M over one period;
the M-th moment of rho factors as m_M = K_M * integral of omega^M g(omega).
"""
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional

import numpy as np

from bands import BandStructure, integrate_band
from coeffs import PeriodicCoefficients, build_periodic_window
from density import integrate_rho
from errors import CoefficientError, JacobiDensityError
from scaling import ScalingSpec, omega_moment
from spectrum import SpectrumResult


@dataclass
class MomentReport:
    M: int
    K_M: float
    omega_factor: float
    m_theory: float
    m_empirical: float
    abs_error: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _check_order(M: int) -> None:
    if M < 0:
        raise CoefficientError(f"moment order must be nonnegative, got {M}", field="M")


def periodic_moment(coeffs: PeriodicCoefficients, M: int) -> float:
    """(1/t) sum over one period of (L^M e_j, e_j), exact on a finite window of L"""
    _check_order(M)
    if M == 0:
        return 1.0
    t = coeffs.t
    window = build_periodic_window(coeffs, M + 1 + t)
    centre = t * math.ceil((M + 1) / t)
    columns = np.arange(t)
    vectors = np.zeros((window.m, t))
    vectors[centre + columns, columns] = 1.0
    for _ in range(M):
        vectors = window.matvec(vectors)
    if np.any(vectors[0]) or np.any(vectors[-1]):
        raise JacobiDensityError("power vectors reached the window boundary", M=M)
    return float(np.mean(vectors[centre + columns, columns]))


def periodic_moment_quadrature(bands: BandStructure, M: int) -> float:
    """K_M as the integral of x^M rho0 over the bands"""
    _check_order(M)
    return float(sum(integrate_band(bands, j, lambda x: x ** M) for j in range(bands.t)))


def theorem_moment(coeffs: PeriodicCoefficients, scaling: ScalingSpec, M: int) -> float:
    return periodic_moment(coeffs, M) * omega_moment(scaling, M)


def empirical_moment(spec: SpectrumResult, M: int) -> float:
    _check_order(M)
    values = spec.values if isinstance(spec, SpectrumResult) else np.asarray(spec, dtype=float)
    return float(np.mean(values ** M))


def density_moment(bands: BandStructure, scaling: ScalingSpec, M: int) -> float:
    """Integral of z^M rho(z) over the scaled support"""
    _check_order(M)
    return float(integrate_rho(bands, scaling, [M])[0])


def moment_table(coeffs: PeriodicCoefficients, scaling: ScalingSpec, max_order: int,
                 spectrum: Optional[SpectrumResult] = None) -> List[MomentReport]:
    """Rows M = 0..max_order; empirical columns are NaN without a spectrum"""
    _check_order(max_order)
    reports = []
    for M in range(max_order + 1):
        K_M = periodic_moment(coeffs, M)
        factor = omega_moment(scaling, M)
        theory = K_M * factor
        empirical = empirical_moment(spectrum, M) if spectrum is not None else math.nan
        reports.append(MomentReport(M=M, K_M=K_M, omega_factor=factor, m_theory=theory,
                                    m_empirical=empirical, abs_error=abs(empirical - theory)))
    return reports
