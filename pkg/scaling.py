"""Scaling function phi, represented through the density g(omega) on (0, 1].

phi(n) enters the truncated matrices only through phi(k); the limiting
density only needs g(omega) = du/domega of the profile
omega(u) = lim phi(nu)/phi(n).  Three families are supported:

* CONSTANT  phi == 1, g is a unit point mass at omega = 1
* POWER     phi(k) = (k + 1)**gamma, g(omega) = omega**(-1 + 1/gamma) / gamma
* TABULATED g given pointwise, linear in between, zero outside the table
"""
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np

from config import ScalingKind
from errors import ScalingError, UnsupportedForEmpiricalError

TABLE_NORM_TOL = 1e-6


@dataclass(frozen=True)
class ScalingSpec:
    kind: ScalingKind
    gamma: Optional[float] = None
    table: Tuple[Tuple[float, float], ...] = ()

    def __post_init__(self):
        if self.kind == ScalingKind.POWER:
            if self.gamma is None or not math.isfinite(self.gamma) or self.gamma <= 0:
                raise ScalingError(f"gamma must be a positive finite number, got {self.gamma}",
                                   field="gamma")
        elif self.kind == ScalingKind.TABULATED:
            _check_table(self.table)
        elif self.gamma is not None or self.table:
            raise ScalingError("constant scaling carries no parameters")

    @classmethod
    def constant(cls) -> "ScalingSpec":
        return cls(ScalingKind.CONSTANT)

    @classmethod
    def power(cls, gamma: float) -> "ScalingSpec":
        return cls(ScalingKind.POWER, gamma=float(gamma))

    @classmethod
    def tabulated(cls, points: Iterable[Iterable[float]]) -> "ScalingSpec":
        table = tuple((float(w), float(g)) for w, g in points)
        return cls(ScalingKind.TABULATED, table=table)

    @property
    def omegas(self) -> np.ndarray:
        return np.array([w for w, _ in self.table], dtype=float)

    @property
    def g_table(self) -> np.ndarray:
        return np.array([g for _, g in self.table], dtype=float)

    def to_dict(self) -> Dict[str, Any]:
        if self.kind == ScalingKind.POWER:
            return {"kind": self.kind.value, "gamma": self.gamma}
        if self.kind == ScalingKind.TABULATED:
            return {"kind": self.kind.value, "points": [[w, g] for w, g in self.table]}
        return {"kind": self.kind.value}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ScalingSpec":
        kind = ScalingKind(data.get("kind"))
        if kind == ScalingKind.POWER:
            return cls.power(data["gamma"])
        if kind == ScalingKind.TABULATED:
            return cls.tabulated(data["points"])
        return cls.constant()


def _check_table(table: Tuple[Tuple[float, float], ...]) -> None:
    if len(table) < 2:
        raise ScalingError("a tabulated g needs at least two points", field="points")
    omegas = np.array([w for w, _ in table], dtype=float)
    values = np.array([g for _, g in table], dtype=float)
    if not (np.all(np.isfinite(omegas)) and np.all(np.isfinite(values))):
        raise ScalingError("table entries must be finite", field="points")
    if omegas[0] <= 0.0 or omegas[-1] > 1.0:
        raise ScalingError("table omegas must lie in (0, 1]", field="points")
    if np.any(np.diff(omegas) <= 0.0):
        raise ScalingError("table omegas must be strictly ascending", field="points")
    if np.any(values < 0.0):
        raise ScalingError("g values must be nonnegative", field="points")
    total = float(np.trapz(values, omegas))
    if abs(total - 1.0) > TABLE_NORM_TOL:
        raise ScalingError(f"tabulated g integrates to {total:.9g}, expected 1", field="points")


def g_of(scaling: ScalingSpec, omega: float) -> float:
    """Density g(omega) at a single point of (0, 1]"""
    if not (0.0 < omega <= 1.0):
        raise ScalingError(f"omega must lie in (0, 1], got {omega}", field="omega")
    if scaling.kind == ScalingKind.CONSTANT:
        raise ScalingError("constant scaling is a point mass at omega = 1 and has no density g")
    return float(g_array(scaling, np.array([omega]))[0])


def g_array(scaling: ScalingSpec, omega: np.ndarray) -> np.ndarray:
    """Vectorized g; callers guarantee omega > 0"""
    omega = np.asarray(omega, dtype=float)
    if scaling.kind == ScalingKind.POWER:
        gamma = scaling.gamma
        return omega ** (-1.0 + 1.0 / gamma) / gamma
    if scaling.kind == ScalingKind.TABULATED:
        return np.interp(omega, scaling.omegas, scaling.g_table, left=0.0, right=0.0)
    raise ScalingError("constant scaling has no density g")


def phi_of(scaling: ScalingSpec, k: int) -> float:
    """phi(k) used to build truncated matrices, with the (k + 1) shift for POWER"""
    if scaling.kind == ScalingKind.CONSTANT:
        return 1.0
    if scaling.kind == ScalingKind.POWER:
        return float((k + 1) ** scaling.gamma)
    raise UnsupportedForEmpiricalError("phi cannot be reconstructed from a tabulated g")


def phi_values(scaling: ScalingSpec, n: int) -> np.ndarray:
    """phi(0), ..., phi(n - 1)"""
    if scaling.kind == ScalingKind.CONSTANT:
        return np.ones(n)
    if scaling.kind == ScalingKind.POWER:
        return np.arange(1, n + 1, dtype=float) ** scaling.gamma
    raise UnsupportedForEmpiricalError("phi cannot be reconstructed from a tabulated g")


def _table_segments(scaling: ScalingSpec) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Segment ends and the line g = alpha + beta*omega on each table segment"""
    omegas, values = scaling.omegas, scaling.g_table
    lo, hi = omegas[:-1], omegas[1:]
    beta = np.diff(values) / np.diff(omegas)
    alpha = values[:-1] - beta * lo
    return lo, hi, alpha, beta


def omega_moment(scaling: ScalingSpec, M: int) -> float:
    """Integral of omega**M g(omega) over (0, 1]"""
    if M < 0:
        raise ScalingError(f"moment order must be nonnegative, got {M}", field="M")
    if scaling.kind == ScalingKind.CONSTANT:
        return 1.0
    if scaling.kind == ScalingKind.POWER:
        return 1.0 / (M * scaling.gamma + 1.0)
    lo, hi, alpha, beta = _table_segments(scaling)
    pieces = (alpha * (hi ** (M + 1) - lo ** (M + 1)) / (M + 1)
              + beta * (hi ** (M + 2) - lo ** (M + 2)) / (M + 2))
    return float(np.sum(pieces))


def inverse_moment(scaling: ScalingSpec) -> float:
    """Integral of g(omega)/omega over (0, 1]; +inf when it diverges"""
    if scaling.kind == ScalingKind.CONSTANT:
        return 1.0
    if scaling.kind == ScalingKind.POWER:
        if scaling.gamma >= 1.0:
            return math.inf
        return 1.0 / (1.0 - scaling.gamma)
    lo, hi, alpha, beta = _table_segments(scaling)
    return float(np.sum(alpha * np.log(hi / lo) + beta * (hi - lo)))


def breakpoints(scaling: ScalingSpec) -> List[float]:
    """Omegas where g is not smooth"""
    if scaling.kind == ScalingKind.TABULATED:
        return [w for w, _ in scaling.table]
    return []
