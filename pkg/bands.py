"""Band structure of the periodic limit matrix L.

S(x) = p_t(x) + q_{t-1}(x) is built symbolically from the three-term
recurrence; the spectrum of L is {x : |S(x)| <= 2}, a union of t bands whose
edges solve S(x) = +-2.  Inside the bands

    rho0(x) = |S'(x)| / (t pi sqrt(4 - S(x)^2)).

Near an edge e, 4 - S^2 cancels catastrophically when S is evaluated
directly, so every in-band evaluation goes through the Taylor expansion of S
at the nearer edge: with A(d) = S(e + d) - S(e) (no constant term) and
s = S(e) = +-2, 4 - S^2 = -A (A + 2s).
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import polynomial as poly

from coeffs import PeriodicCoefficients
from config import DensityConfig
from errors import BandStructureError
from quadrature import tanh_sinh

logger = logging.getLogger(__name__)

EPS = np.finfo(float).eps


def discriminant(coeffs: PeriodicCoefficients) -> Polynomial:
    """S = p_t + q_{t-1} from the recurrence y_{k+1} = ((x - a_k) y_k - b_{k-1} y_{k-1}) / b_k"""
    a, b, t = coeffs.a, coeffs.b, coeffs.t
    x = Polynomial([0.0, 1.0])
    p = [Polynomial([1.0]), (x - a[0]) / b[0]]
    q = [Polynomial([0.0]), Polynomial([-b[t - 1] / b[0]])]
    for k in range(1, t):
        p.append(((x - a[k]) * p[k] - b[k - 1] * p[k - 1]) / b[k])
        q.append(((x - a[k]) * q[k] - b[k - 1] * q[k - 1]) / b[k])
    S = p[t] + q[t - 1]
    return Polynomial(S.coef[:t + 1])


def discriminant_at(coeffs: PeriodicCoefficients, x) -> np.ndarray:
    """S(x) by running the recurrence numerically at each point"""
    a, b, t = coeffs.a, coeffs.b, coeffs.t
    x = np.asarray(x, dtype=float)
    p_prev, p = np.ones_like(x), (x - a[0]) / b[0]
    q_prev, q = np.zeros_like(x), np.full_like(x, -b[t - 1] / b[0])
    for k in range(1, t):
        p_prev, p = p, ((x - a[k]) * p - b[k - 1] * p_prev) / b[k]
        q_prev, q = q, ((x - a[k]) * q - b[k - 1] * q_prev) / b[k]
    return p + q_prev


def _evaluation_scale(S: Polynomial, x: float) -> float:
    """sum |c_k| |x|^k, the magnitude of the terms summed when evaluating S(x)"""
    return float(Polynomial(np.abs(S.coef))(abs(x)))


def _taylor_shift(S: Polynomial, e: float) -> Polynomial:
    """Coefficients of d -> S(e + d)"""
    return Polynomial([S.deriv(k)(e) / math.factorial(k) for k in range(S.degree() + 1)])


@dataclass(frozen=True, eq=False)
class BandStructure:
    edges: np.ndarray
    S: Polynomial
    t: int
    touching_points: Tuple[float, ...] = ()

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=float)
        object.__setattr__(self, "edges", edges)
        signs = np.where(self.S(edges) > 0.0, 2.0, -2.0)
        increments = []
        slopes = []
        for edge in edges:
            shifted = _taylor_shift(self.S, edge)
            increment = Polynomial(np.concatenate([[0.0], shifted.coef[1:]]))
            increments.append(increment)
            slopes.append(increment.deriv())
        object.__setattr__(self, "_signs", signs)
        object.__setattr__(self, "_increments", increments)
        object.__setattr__(self, "_slopes", slopes)

    @property
    def bands(self) -> List[Tuple[float, float]]:
        return [(float(self.edges[2 * i]), float(self.edges[2 * i + 1])) for i in range(self.t)]

    @property
    def span(self) -> float:
        return float(self.edges[-1] - self.edges[0])

    def edge_value(self, index: int) -> float:
        """S at an edge, exactly +-2"""
        return float(self._signs[index])

    def contains(self, x: float) -> bool:
        return any(mu <= x <= nu for mu, nu in self.bands)

    def _rho0_from_edge(self, index: int, d: np.ndarray) -> np.ndarray:
        s = self._signs[index]
        increment = self._increments[index](d)
        slope = self._slopes[index](d)
        gap = -increment * (increment + 2.0 * s)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.abs(slope) / (self.t * math.pi * np.sqrt(gap))

    def rho0_in_band(self, i: int, d_mu, d_nu) -> np.ndarray:
        """rho0 inside band i (0-based) at points given by their distances to mu_i and nu_i"""
        d_mu, d_nu = np.broadcast_arrays(np.asarray(d_mu, dtype=float), np.asarray(d_nu, dtype=float))
        out = np.empty(d_mu.shape)
        lower = d_mu <= d_nu
        out[lower] = self._rho0_from_edge(2 * i, d_mu[lower])
        out[~lower] = self._rho0_from_edge(2 * i + 1, -d_nu[~lower])
        return out


def _polish(S: Polynomial, dS: Polynomial, x: float, target: float, iterations: int = 80) -> float:
    best_x, best_residual = x, abs(S(x) - target)
    for _ in range(iterations):
        residual = S(x) - target
        slope = dS(x)
        if residual == 0.0 or slope == 0.0:
            break
        step = residual / slope
        x = x - step
        value = abs(S(x) - target)
        if value < best_residual:
            best_x, best_residual = x, value
        if abs(step) <= 4.0 * EPS * max(1.0, abs(x)):
            break
    return float(best_x)


def _critical_point(dS: Polynomial, d2S: Polynomial, start: float, window: float) -> float:
    x = start
    for _ in range(50):
        curvature = d2S(x)
        if curvature == 0.0:
            break
        step = dS(x) / curvature
        x -= step
        if abs(step) <= 4.0 * EPS * max(1.0, abs(x)):
            break
    return float(x) if abs(x - start) <= window else start


def band_edges(S: Polynomial, t: int) -> BandStructure:
    """The 2t real solutions of S(x)^2 = 4, sorted, as t bands [mu_i, nu_i]"""
    if S.degree() != t:
        raise BandStructureError(f"discriminant has degree {S.degree()}, expected {t}")
    if t > DensityConfig.MAX_PERIOD:
        logger.warning(f"period {t} exceeds {DensityConfig.MAX_PERIOD}; edge accuracy may degrade")
    squared = S * S - 4.0
    monic = squared.coef / squared.coef[-1]
    raw = np.linalg.eigvals(poly.polycompanion(monic))

    radius = max(1.0, float(np.max(np.abs(raw))))
    real = np.sort(raw.real[np.abs(raw.imag) <= DensityConfig.ROOT_IMAG_TOL * radius])
    if real.size < 2 * t:
        raise BandStructureError(
            f"found {real.size} real band edges, expected {2 * t}",
            roots=[complex(r).__repr__() for r in raw])

    dS = S.deriv()
    edges = np.array([_polish(S, dS, x, 2.0 if S(x) > 0.0 else -2.0) for x in real])
    edges.sort()
    span = float(edges[-1] - edges[0])

    touching = []
    d2S = dS.deriv()
    for i in range(t - 1):
        nu, mu_next = edges[2 * i + 1], edges[2 * i + 2]
        gap = mu_next - nu
        if gap > DensityConfig.TOUCH_SNAP_WINDOW * span:
            continue
        mid = 0.5 * (nu + mu_next)
        window = DensityConfig.TOUCH_SNAP_WINDOW * span
        point = _critical_point(dS, d2S, mid, window) if t > 1 else mid
        excess = abs(S(point)) - 2.0
        limit = DensityConfig.TOUCH_TOL * max(1.0, _evaluation_scale(S, point))
        if gap <= DensityConfig.TOUCH_TOL * span or excess <= limit:
            logger.debug(f"bands {i + 1} and {i + 2} touch at {point!r}")
            edges[2 * i + 1] = edges[2 * i + 2] = point
            touching.append(float(point))

    for edge in edges:
        residual = abs(abs(S(edge)) - 2.0)
        if residual > DensityConfig.EDGE_RESIDUAL_TOL * max(1.0, _evaluation_scale(S, edge)):
            raise BandStructureError(f"band edge {edge!r} misses |S| = 2 by {residual:.3g}")
    return BandStructure(edges=edges, S=S, t=t, touching_points=tuple(touching))


def band_structure(coeffs: PeriodicCoefficients) -> BandStructure:
    return band_edges(discriminant(coeffs), coeffs.t)


def rho0(bands: BandStructure, x: float) -> float:
    """Periodic density; +inf at simple band edges, finite limit at touching points"""
    for i, (mu, nu) in enumerate(bands.bands):
        if not (mu <= x <= nu) or mu == nu:
            continue
        if x == nu and x in bands.touching_points:
            offset = DensityConfig.TOUCH_OFFSET * bands.span
            next_mu, next_nu = bands.bands[i + 1]
            return float(bands.rho0_in_band(i + 1, offset, next_nu - next_mu - offset))
        if x == mu and x in bands.touching_points:
            offset = DensityConfig.TOUCH_OFFSET * bands.span
            return float(bands.rho0_in_band(i, offset, nu - mu - offset))
        if x == mu or x == nu:
            return math.inf
        return float(bands.rho0_in_band(i, x - mu, nu - x))
    return 0.0


def integrate_band(bands: BandStructure, i: int,
                   weight: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                   lo: Optional[float] = None, hi: Optional[float] = None,
                   rtol: float = DensityConfig.QUAD_INNER_RTOL):
    """Integral of weight(x) rho0(x) over [lo, hi] inside band i (0-based)"""
    mu, nu = bands.bands[i]
    lo = mu if lo is None else max(lo, mu)
    hi = nu if hi is None else min(hi, nu)
    if hi <= lo:
        return 0.0

    def integrand(x, d_lo, d_hi):
        density = bands.rho0_in_band(i, (lo - mu) + d_lo, (nu - hi) + d_hi)
        return density if weight is None else weight(x) * density

    return tanh_sinh(integrand, lo, hi, rtol=rtol).value


def rho0_band_integral(bands: BandStructure, i: int) -> float:
    """Mass of band i (1-based); 1/t for every band"""
    if not 1 <= i <= bands.t:
        raise BandStructureError(f"band index must lie in 1..{bands.t}, got {i}")
    return float(integrate_band(bands, i - 1))


def periodic_cdf(bands: BandStructure, x) -> np.ndarray:
    """Cumulative distribution of rho0 in closed form"""
    shape = np.shape(x)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    position = np.searchsorted(bands.edges, x, side="right")
    inside = position % 2 == 1
    band = (position - 1) // 2
    cdf = np.where(inside, band, position // 2).astype(float) / bands.t
    if np.any(inside):
        angle = np.arccos(np.clip(bands.S(x[inside]) / 2.0, -1.0, 1.0))
        start = np.arccos(bands._signs[2 * band[inside]] / 2.0)
        cdf[inside] += np.abs(angle - start) / (bands.t * math.pi)
    return cdf.reshape(shape)
