"""Limiting eigenvalue density rho(z) of J(n)/phi(n).

    rho(z) = integral over (0, 1] of g(omega) rho0(z/omega) / omega domega

Only omegas with z/omega inside a band contribute.  The integral is evaluated
in x = z/omega, where it becomes a sum of band integrals of
g(z/x) rho0(x) / |x| over the parts of each band with |x| >= |z| and the sign
of z; band edges are then exact integration endpoints and the edge
singularities of rho0 are handled by the band module.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from bands import BandStructure, integrate_band, periodic_cdf, rho0
from config import DensityConfig, ScalingKind
from errors import CoefficientError, QuadratureError
from quadrature import integrate_pieces, split_geometric, tanh_sinh
from scaling import ScalingSpec, breakpoints, g_array, inverse_moment

logger = logging.getLogger(__name__)


@dataclass
class OmegaSupport:
    """omega-intervals where z/omega lies in a band, with their band and edge flags"""
    intervals: List[Tuple[float, float]] = field(default_factory=list)
    edge_flags: List[Tuple[bool, bool]] = field(default_factory=list)
    bands: List[int] = field(default_factory=list)

    def __len__(self):
        return len(self.intervals)


@dataclass
class DensityCurve:
    z: np.ndarray
    rho: np.ndarray
    singular: np.ndarray

    def __len__(self):
        return self.z.size


def _x_pieces(z: float, bands: BandStructure) -> List[Tuple[int, float, float]]:
    """(band index, lo, hi) of the band parts with |x| >= |z| and sign(x) == sign(z)"""
    pieces = []
    for j, (mu, nu) in enumerate(bands.bands):
        if z > 0.0:
            lo, hi = max(mu, z), nu
        else:
            lo, hi = mu, min(nu, z)
        if lo < hi:
            pieces.append((j, lo, hi))
    return pieces


def omega_support(z: float, bands: BandStructure) -> OmegaSupport:
    if z == 0.0:
        raise ValueError("omega_support is undefined at z = 0; use rho_at_zero")
    support = OmegaSupport()
    pieces = _x_pieces(z, bands)
    if z > 0.0:
        pieces = pieces[::-1]
    for j, lo, hi in pieces:
        mu, nu = bands.bands[j]
        if z > 0.0:
            support.intervals.append((z / hi, z / lo))
            support.edge_flags.append((True, lo == mu))
        else:
            support.intervals.append((z / lo, z / hi))
            support.edge_flags.append((True, hi == nu))
        support.bands.append(j)
    return support


def theorem_case_limits(z: float, bands: BandStructure) -> List[Tuple[float, float]]:
    """omega-intervals enumerated branch by branch from the case table of the limit theorem.

    Case 1 (0 in some band k) and case 2 (0 in the gap after band k) share the
    branches away from the band or gap holding 0; both are listed explicitly.
    """
    if z == 0.0:
        raise ValueError("the case table does not cover z = 0")
    mu = [m for m, _ in bands.bands]
    nu = [n for _, n in bands.bands]
    t = bands.t
    limits: List[Tuple[float, float]] = []

    def positive_tail(start):
        return [(z / nu[j], z / mu[j]) for j in range(start, t)]

    def negative_head(stop):
        return [(z / mu[j], z / nu[j]) for j in range(stop)]

    if z > 0.0:
        for i in range(t):
            if mu[i] <= z <= nu[i]:
                # band i with mu_i >= 0, or z in [0, nu_k] of the band holding 0
                limits = [(z / nu[i], 1.0)] + positive_tail(i + 1)
                break
            upper = mu[i + 1] if i + 1 < t else math.inf
            if i == 0 and 0.0 < z < mu[0]:
                # gap before the first band, holding 0
                limits = positive_tail(0)
                break
            if nu[i] < z < upper:
                # gap (nu_i, mu_{i+1}); with nu_i < 0 this is the case-2 interval (0, mu_{k+1})
                limits = positive_tail(i + 1)
                break
    else:
        for i in range(t - 1, -1, -1):
            if mu[i] <= z <= nu[i]:
                # band i with nu_i <= 0, or z in [mu_k, 0] of the band holding 0
                limits = [(z / mu[i], 1.0)] + negative_head(i)
                break
            lower = nu[i - 1] if i > 0 else -math.inf
            if i == t - 1 and nu[t - 1] < z < 0.0:
                # gap after the last band, holding 0
                limits = negative_head(t)
                break
            if lower < z < mu[i]:
                # gap (nu_{i-1}, mu_i); with mu_i > 0 this is the case-2 interval (nu_k, 0)
                limits = negative_head(i)
                break
    return sorted((lo, hi) for lo, hi in limits if lo < hi)


def scaled_support(bands: BandStructure, scaling: ScalingSpec) -> Tuple[float, float]:
    """Smallest interval holding the support of rho"""
    lo, hi = float(bands.edges[0]), float(bands.edges[-1])
    if scaling.kind == ScalingKind.CONSTANT:
        return lo, hi
    return min(0.0, lo), max(0.0, hi)


def rho_at_zero(bands: BandStructure, scaling: ScalingSpec) -> float:
    if not bands.contains(0.0):
        return 0.0
    if scaling.kind == ScalingKind.CONSTANT:
        return rho0(bands, 0.0)
    factor = inverse_moment(scaling)
    if math.isinf(factor):
        return math.inf
    return rho0(bands, 0.0) * factor


def _split_points(z: float, lo: float, hi: float, mu: float, nu: float,
                  scaling: ScalingSpec) -> List[float]:
    points = [lo, hi]
    ratio = DensityConfig.GEOMETRIC_SPLIT_RATIO
    if z > 0.0 and lo > mu and hi / lo > ratio:
        points = split_geometric(lo, hi)
    elif z < 0.0 and hi < nu and lo / hi > ratio:
        points = [-p for p in reversed(split_geometric(-hi, -lo))]
    inner = [z / w for w in breakpoints(scaling) if lo < z / w < hi]
    return sorted(set(points + inner))


def rho(z: float, bands: BandStructure, scaling: ScalingSpec,
        rtol: float = DensityConfig.QUAD_RTOL) -> float:
    """rho(z); +inf where it diverges"""
    z = float(z)
    if scaling.kind == ScalingKind.CONSTANT:
        return rho0(bands, z)
    if z == 0.0:
        return rho_at_zero(bands, scaling)
    lo, hi = scaled_support(bands, scaling)
    if z < lo or z > hi:
        return 0.0
    if z == hi:
        z = hi - DensityConfig.SUPPORT_EDGE_OFFSET * bands.span
    elif z == lo:
        z = lo + DensityConfig.SUPPORT_EDGE_OFFSET * bands.span

    def weight(x):
        return g_array(scaling, z / x) / np.abs(x)

    total = 0.0
    try:
        for j, piece_lo, piece_hi in _x_pieces(z, bands):
            mu, nu = bands.bands[j]
            points = _split_points(z, piece_lo, piece_hi, mu, nu, scaling)
            for a, b in zip(points[:-1], points[1:]):
                total += integrate_band(bands, j, weight, lo=a, hi=b, rtol=rtol)
    except QuadratureError as exc:
        exc.context.setdefault("z", z)
        raise
    return float(total)


def rho_curve(bands: BandStructure, scaling: ScalingSpec, zmin: float, zmax: float,
              npoints: int, executor=None) -> DensityCurve:
    """rho on a uniform grid; the executor, if given, only changes who does the work"""
    if not zmin < zmax:
        raise ValueError(f"zmin must be below zmax, got [{zmin}, {zmax}]")
    if npoints < 2:
        raise ValueError(f"a density grid needs at least 2 points, got {npoints}")
    z = np.linspace(zmin, zmax, npoints)

    def evaluate(point):
        return rho(point, bands, scaling)

    if executor is None:
        values = [evaluate(point) for point in z]
    else:
        values = list(executor.map(evaluate, z))
    values = np.array(values, dtype=float)
    return DensityCurve(z=z, rho=values, singular=np.isinf(values))


def _support_breaks(bands: BandStructure, scaling: ScalingSpec) -> List[float]:
    lo, hi = scaled_support(bands, scaling)
    points = {lo, hi}
    points.update(float(e) for e in bands.edges if lo <= e <= hi)
    if lo < 0.0 < hi:
        points.add(0.0)
    return sorted(points)


def integrate_rho(bands: BandStructure, scaling: ScalingSpec, orders: Sequence[int],
                  rtol: float = DensityConfig.QUAD_OUTER_RTOL) -> np.ndarray:
    """Integrals of z**M rho(z) dz for every M in orders"""
    powers = np.asarray(orders, dtype=float)[:, None]
    if scaling.kind == ScalingKind.CONSTANT:
        total = np.zeros(powers.shape[0])
        for j in range(bands.t):
            total = total + integrate_band(bands, j, lambda x: x ** powers)
        return np.asarray(total, dtype=float)

    def integrand(z, d_lo, d_hi):
        values = np.array([rho(point, bands, scaling, rtol=DensityConfig.QUAD_INNER_RTOL)
                           for point in z])
        return z[None, :] ** powers * values

    total = integrate_pieces(integrand, _support_breaks(bands, scaling), rtol=rtol)
    return np.asarray(total, dtype=float).reshape(-1)


def rho_cdf(bands: BandStructure, scaling: ScalingSpec, z: float) -> float:
    """Cumulative distribution of rho: integral of g(omega) F0(z/omega) over (0, 1]"""
    z = float(z)
    if scaling.kind == ScalingKind.CONSTANT:
        return float(periodic_cdf(bands, z))
    lo, hi = scaled_support(bands, scaling)
    if z <= lo:
        return 0.0
    if z >= hi:
        return 1.0
    if z == 0.0:
        return float(periodic_cdf(bands, 0.0))
    points = {0.0, 1.0}
    points.update(z / e for e in bands.edges if e != 0.0 and 0.0 < z / e < 1.0)
    points.update(w for w in breakpoints(scaling) if 0.0 < w < 1.0)

    def integrand(omega, d_lo, d_hi):
        return g_array(scaling, omega) * periodic_cdf(bands, z / omega)

    value = integrate_pieces(integrand, sorted(points), rtol=DensityConfig.QUAD_INNER_RTOL)
    return float(min(max(value, 0.0), 1.0))


class DensityCdf:
    """rho_cdf cached on a refined grid and interpolated linearly"""

    def __init__(self, bands: BandStructure, scaling: ScalingSpec,
                 points: int = DensityConfig.CDF_GRID_POINTS, executor=None):
        self.bands = bands
        self.scaling = scaling
        self.grid: Optional[np.ndarray] = None
        self.values: Optional[np.ndarray] = None
        if scaling.kind == ScalingKind.CONSTANT:
            return
        lo, hi = scaled_support(bands, scaling)
        grid = np.unique(np.concatenate([np.linspace(lo, hi, points), _support_breaks(bands, scaling)]))

        def evaluate(point):
            return rho_cdf(bands, scaling, point)

        values = [evaluate(p) for p in grid] if executor is None else list(executor.map(evaluate, grid))
        self.grid = grid
        self.values = np.clip(np.maximum.accumulate(np.array(values)), 0.0, 1.0)
        logger.debug(f"cached CDF on {grid.size} points over [{lo:g}, {hi:g}]")

    def __call__(self, z) -> np.ndarray:
        if self.grid is None:
            return periodic_cdf(self.bands, z)
        return np.interp(z, self.grid, self.values, left=0.0, right=1.0)


# t = 1 closed forms, in the variables a = a_0, b = 2 b_0 (band [a - b, a + b])

def _check_corollary(a: float, b: float) -> None:
    if a < 0.0:
        raise CoefficientError(f"a must be nonnegative, got {a}", field="a")
    if b <= 0.0:
        raise CoefficientError(f"b must be positive, got {b}", field="b")


def _radius(a: float, b: float) -> float:
    _check_corollary(a, b)
    if a == b:
        raise CoefficientError("a == b makes r = sqrt|a^2 - b^2| vanish", field="b")
    return math.sqrt(abs(a * a - b * b))


def rho_closed_form_linear(a: float, b: float, z: float) -> float:
    """rho(z) for t = 1 and phi(n) = n"""
    r = _radius(a, b)
    r2 = abs(a * a - b * b)
    if a < b:
        if z < a - b or z > a + b:
            return 0.0
        if z == 0.0:
            return math.inf
        argument = max(abs(r2 / (z * b) + a / b), 1.0)
        return math.acosh(argument) / (math.pi * r)
    if z < 0.0 or z > a + b:
        return 0.0
    if z <= a - b:
        return 1.0 / r
    argument = min(max(-r2 / (z * b) + a / b, -1.0), 1.0)
    return math.acos(argument) / (math.pi * r)


def _corollary_integral(a: float, b: float, g, z: float, breaks: Sequence[float] = ()) -> float:
    """(1/pi) integral of g(omega) / sqrt(b^2 omega^2 - (z - a omega)^2) from z/(a + b sign z) to 1.

    b^2 omega^2 - (z - a omega)^2 = ((a + b) omega - z) (z - (a - b) omega); the
    factors vanishing at either limit are rebuilt from the endpoint distances.
    """
    lo = z / (a + b) if z > 0.0 else z / (a - b)
    if lo >= 1.0:
        return 0.0
    gap_at_one = z - (a - b)
    points = sorted({lo, 1.0} | {w for w in breaks if lo < w < 1.0})
    total = 0.0
    for p, q in zip(points[:-1], points[1:]):

        def integrand(omega, d_lo, d_hi, p=p, q=q):
            from_lo = (p - lo) + d_lo
            if z > 0.0:
                rising = (a + b) * from_lo
                other = gap_at_one + (a - b) * ((1.0 - q) + d_hi)
            else:
                rising = (b - a) * from_lo
                other = (a + b) * omega - z
            return g(omega) / np.sqrt(rising * other)

        total += tanh_sinh(integrand, p, q, rtol=DensityConfig.QUAD_INNER_RTOL).value
    return total / math.pi


def _g_at_zero(scaling: ScalingSpec) -> float:
    if scaling.kind == ScalingKind.POWER:
        if scaling.gamma < 1.0:
            return 0.0
        return 1.0 if scaling.gamma == 1.0 else math.inf
    return 0.0


def rho_corollary(a: float, b: float, scaling: ScalingSpec, z: float) -> float:
    """rho(z) for t = 1 and any density g, from the one-dimensional integral representation"""
    _check_corollary(a, b)
    if scaling.kind == ScalingKind.CONSTANT:
        raise CoefficientError("the integral representation needs a scaling with a density g")

    def g(omega):
        return g_array(scaling, omega)

    breaks = breakpoints(scaling)

    if a <= b:
        if z < a - b or z > a + b:
            return 0.0
        if z == 0.0:
            if a == b:
                return math.inf
            return inverse_moment(scaling) / (math.pi * math.sqrt(b * b - a * a))
        return _corollary_integral(a, b, g, z, breaks)

    if z < 0.0 or z > a + b:
        return 0.0
    if z >= a - b:
        return _corollary_integral(a, b, g, z, breaks)
    if z == 0.0:
        return _g_at_zero(scaling) / math.sqrt(a * a - b * b)
    ratio = z / (a - b)
    return _corollary_integral(a, b, lambda omega: g(omega * ratio), a - b,
                               [w / ratio for w in breaks])


def h_power(a: float, b: float, gamma: float, z: float) -> float:
    """h(z) = (1/(pi gamma)) integral over [z/(a + b), 1] of omega^(-1 + 1/gamma) / sqrt(b^2 omega^2 - (z - a omega)^2)"""
    _check_corollary(a, b)
    if gamma <= 0.0:
        raise CoefficientError(f"gamma must be positive, got {gamma}", field="gamma")
    if z <= 0.0 or z > a + b:
        return 0.0
    return _corollary_integral(a, b, lambda omega: omega ** (-1.0 + 1.0 / gamma) / gamma, z)


def contracted_zero_density(a: float, b: float, y: float) -> float:
    """Zero density of the associated polynomial family: r rho(r y) for phi(n) = n"""
    r = _radius(a, b)
    return r * rho_closed_form_linear(a, b, r * y)


def polynomial_family(a: float, b: float) -> str:
    """Orthogonal polynomial family with the same matrix asymptotics as J/r for phi(n) = n"""
    _radius(a, b)
    return "meixner" if a > b else "meixner-pollaczek"
