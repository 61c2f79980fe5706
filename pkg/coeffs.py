import math
import sys
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

from errors import CoefficientError
from scaling import ScalingSpec, phi_values


@dataclass(frozen=True)
class PeriodicCoefficients:
    """Limit data a_i, b_i (i = 0..t-1) of the diagonal and off-diagonal"""
    t: int
    a: Tuple[float, ...]
    b: Tuple[float, ...]

    def __post_init__(self):
        if not isinstance(self.t, int) or self.t < 1:
            raise CoefficientError(f"period t must be a positive integer, got {self.t}", field="t")
        if len(self.a) != self.t:
            raise CoefficientError(f"expected {self.t} diagonal limits, got {len(self.a)}", field="a")
        if len(self.b) != self.t:
            raise CoefficientError(f"expected {self.t} off-diagonal limits, got {len(self.b)}", field="b")
        for i, value in enumerate(self.a):
            if not math.isfinite(value):
                raise CoefficientError(f"a[{i}] is not finite", field=f"a[{i}]")
        for i, value in enumerate(self.b):
            if not math.isfinite(value):
                raise CoefficientError(f"b[{i}] is not finite", field=f"b[{i}]")
            if value == 0.0:
                raise CoefficientError(f"b[{i}] must be nonzero", field=f"b[{i}]")

    @classmethod
    def of(cls, a: Iterable[float], b: Iterable[float]) -> "PeriodicCoefficients":
        a = tuple(float(x) for x in a)
        b = tuple(float(x) for x in b)
        return cls(t=len(a), a=a, b=b)

    def flipped(self) -> "PeriodicCoefficients":
        """Same data with every b_i negated"""
        return PeriodicCoefficients(self.t, self.a, tuple(-x for x in self.b))

    @property
    def scale(self) -> float:
        """max|a| + 2 max|b|, a bound on the spectral radius of L"""
        return max(abs(x) for x in self.a) + 2.0 * max(abs(x) for x in self.b)


@dataclass(frozen=True, eq=False)
class TridiagonalMatrix:
    """Symmetric tridiagonal matrix stored as its diagonal and first off-diagonal"""
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        diag = np.asarray(self.diag, dtype=float)
        offdiag = np.asarray(self.offdiag, dtype=float)
        if diag.ndim != 1 or diag.size < 1:
            raise CoefficientError("diagonal must be a nonempty vector")
        if offdiag.shape != (diag.size - 1,):
            raise CoefficientError(
                f"off-diagonal must have length {diag.size - 1}, got {offdiag.size}")
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", offdiag)

    @property
    def m(self) -> int:
        return self.diag.size

    @property
    def norm_inf(self) -> float:
        row = np.abs(self.diag).copy()
        row[:-1] += np.abs(self.offdiag)
        row[1:] += np.abs(self.offdiag)
        return float(row.max())

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def leading(self, k: int) -> "TridiagonalMatrix":
        """Leading principal k x k submatrix"""
        return TridiagonalMatrix(self.diag[:k], self.offdiag[:k - 1])

    def matvec(self, v: np.ndarray) -> np.ndarray:
        """Product with a vector or with the columns of a 2-D array"""
        out = self.diag.reshape((-1,) + (1,) * (v.ndim - 1)) * v
        off = self.offdiag.reshape((-1,) + (1,) * (v.ndim - 1))
        out[:-1] += off * v[1:]
        out[1:] += off * v[:-1]
        return out


def build_truncated(coeffs: PeriodicCoefficients, scaling: ScalingSpec, n: int) -> TridiagonalMatrix:
    """J(n): diag[kt+i] = a_i phi(k), offdiag[kt+i] = b_i phi(k)"""
    if n < 1:
        raise CoefficientError(f"block count n must be >= 1, got {n}", field="n")
    if n > sys.maxsize // coeffs.t:
        raise CoefficientError(f"matrix dimension {n} * {coeffs.t} overflows the index range", field="n")
    block_scale = np.repeat(phi_values(scaling, n), coeffs.t)
    diag = np.tile(np.asarray(coeffs.a), n) * block_scale
    offdiag = (np.tile(np.asarray(coeffs.b), n) * block_scale)[:-1]
    return TridiagonalMatrix(diag, offdiag)


def build_periodic_window(coeffs: PeriodicCoefficients, halfwidth: int) -> TridiagonalMatrix:
    """Finite (2*halfwidth + 1 + t)-dimensional window of the periodic matrix L"""
    if halfwidth < 1:
        raise CoefficientError(f"halfwidth must be >= 1, got {halfwidth}", field="halfwidth")
    size = 2 * halfwidth + 1 + coeffs.t
    index = np.arange(size)
    diag = np.asarray(coeffs.a)[index % coeffs.t]
    offdiag = np.asarray(coeffs.b)[index[:-1] % coeffs.t]
    return TridiagonalMatrix(diag, offdiag)
