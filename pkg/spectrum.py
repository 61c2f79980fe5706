import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.linalg
import scipy.stats

from bands import BandStructure
from coeffs import PeriodicCoefficients, TridiagonalMatrix, build_truncated
from config import DensityConfig, ScalingKind
from density import DensityCdf
from errors import UnsupportedForEmpiricalError
from scaling import ScalingSpec, phi_of

logger = logging.getLogger(__name__)


@dataclass
class SpectrumResult:
    """Sorted eigenvalues z_k of J(n)/phi(n)"""
    values: np.ndarray
    n: int
    t: int

    def __len__(self):
        return self.values.size


def gershgorin_bounds(m: TridiagonalMatrix) -> Tuple[float, float]:
    off = np.zeros(m.m)
    off[:-1] += np.abs(m.offdiag)
    off[1:] += np.abs(m.offdiag)
    return float(np.min(m.diag - off)), float(np.max(m.diag + off))


def sturm_count(m: TridiagonalMatrix, x) -> np.ndarray:
    """Number of eigenvalues below each shift, from the signs of the LDL^T pivots"""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    squares = m.offdiag ** 2
    pivmin = np.finfo(float).tiny * max(1.0, float(np.max(squares, initial=0.0)))
    pivot = m.diag[0] - x
    pivot = np.where(np.abs(pivot) < pivmin, -pivmin, pivot)
    count = (pivot < 0.0).astype(int)
    for k in range(1, m.m):
        pivot = (m.diag[k] - x) - squares[k - 1] / pivot
        pivot = np.where(np.abs(pivot) < pivmin, -pivmin, pivot)
        count += pivot < 0.0
    return count


def eigenvalues(m: TridiagonalMatrix, executor=None) -> np.ndarray:
    """All eigenvalues by Sturm-count bisection (LAPACK stebz), in fixed index chunks"""
    if m.m == 1:
        return m.diag.copy()
    tol = DensityConfig.EIGEN_REL_TOL * max(1.0, m.norm_inf)
    size = DensityConfig.EIGEN_CHUNK_SIZE
    chunks = [(start, min(start + size, m.m) - 1) for start in range(0, m.m, size)]

    def solve(index_range):
        return scipy.linalg.eigvalsh_tridiagonal(
            m.diag, m.offdiag, select="i", select_range=index_range,
            tol=tol, lapack_driver="stebz", check_finite=False)

    parts = map(solve, chunks) if executor is None else executor.map(solve, chunks)
    return np.sort(np.concatenate(list(parts)))


def scaled_spectrum(coeffs: PeriodicCoefficients, scaling: ScalingSpec, n: int,
                    executor=None) -> SpectrumResult:
    if scaling.kind == ScalingKind.TABULATED:
        raise UnsupportedForEmpiricalError(
            "truncated matrices need phi itself; a tabulated g does not determine it")
    matrix = build_truncated(coeffs, scaling, n)
    values = eigenvalues(matrix, executor=executor) / phi_of(scaling, n - 1)
    logger.debug(f"computed {values.size} eigenvalues for n={n}, t={coeffs.t}")
    return SpectrumResult(values=values, n=n, t=coeffs.t)


def ks_distance(spec: SpectrumResult, bands: BandStructure, scaling: ScalingSpec,
                cdf: Optional[DensityCdf] = None) -> float:
    """Kolmogorov-Smirnov distance between the eigenvalues and the limiting law"""
    if cdf is None:
        cdf = DensityCdf(bands, scaling)
    return float(scipy.stats.kstest(spec.values, cdf).statistic)


def histogram(spec: SpectrumResult, nbins: int, lo: float, hi: float) -> np.ndarray:
    """(bin centre, density) rows; the bars integrate to the fraction of eigenvalues in [lo, hi]"""
    if nbins < 1:
        raise ValueError(f"nbins must be positive, got {nbins}")
    if not lo < hi:
        raise ValueError(f"histogram range must satisfy lo < hi, got [{lo}, {hi}]")
    counts, edges = np.histogram(spec.values, bins=nbins, range=(lo, hi))
    centres = 0.5 * (edges[:-1] + edges[1:])
    total = max(spec.values.size, 1)
    return np.column_stack([centres, counts / (total * np.diff(edges))])
