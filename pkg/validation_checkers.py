import math
from typing import List, Sequence, Tuple

from bands import BandStructure
from coeffs import PeriodicCoefficients
from moments import MomentReport, periodic_moment, periodic_moment_quadrature


class ValidationChecker:
    """Pass/fail checks behind the validate subcommand"""

    @staticmethod
    def check_grid(zmin: float, zmax: float, points: int) -> Tuple[bool, List[str]]:
        errors = []
        if not (math.isfinite(zmin) and math.isfinite(zmax)):
            errors.append("grid bounds must be finite")
        elif zmin >= zmax:
            errors.append(f"zmin ({zmin}) must be below zmax ({zmax})")
        if points < 2:
            errors.append(f"a grid needs at least 2 points, got {points}")
        return len(errors) == 0, errors

    @staticmethod
    def check_ks(distance: float, threshold: float) -> Tuple[bool, List[str]]:
        """Kolmogorov-Smirnov distance against its threshold"""
        errors = []
        if not math.isfinite(distance):
            errors.append("KS distance is not finite")
        elif distance > threshold:
            errors.append(f"KS distance {distance:.4g} exceeds threshold {threshold:g}")
        return len(errors) == 0, errors

    @staticmethod
    def check_moments(reports: Sequence[MomentReport], tolerance: float,
                      scale: float) -> Tuple[bool, List[str]]:
        """|m_empirical - m_theory| <= tolerance * scale**M for every row"""
        errors = []
        for report in reports:
            limit = tolerance * scale ** report.M
            if not math.isfinite(report.abs_error):
                errors.append(f"M={report.M}: no empirical moment")
            elif report.abs_error > limit:
                errors.append(
                    f"M={report.M}: |{report.m_empirical:.6g} - {report.m_theory:.6g}| "
                    f"= {report.abs_error:.3g} exceeds {limit:.3g}")
        return len(errors) == 0, errors

    @staticmethod
    def check_oracle(coeffs: PeriodicCoefficients, bands: BandStructure, max_order: int,
                     tolerance: float) -> Tuple[bool, List[str]]:
        """Window powers of L against quadrature of x^M rho0"""
        errors = []
        for M in range(max_order + 1):
            exact = periodic_moment(coeffs, M)
            integrated = periodic_moment_quadrature(bands, M)
            limit = tolerance * max(1.0, coeffs.scale ** M)
            if abs(exact - integrated) > limit:
                errors.append(f"K_{M}: window {exact:.10g} vs quadrature {integrated:.10g}")
        return len(errors) == 0, errors
