"""Double-exponential (tanh-sinh) quadrature.

The integrand is called as ``f(x, d_lo, d_hi)`` with numpy arrays: the nodes
and their distances to the lower and upper endpoint.  The distances are exact
even where ``x`` itself has collapsed onto an endpoint in floating point, so an
integrand with an inverse-square-root endpoint singularity can evaluate the
vanishing factor from the distance instead of from a cancelling difference.

The integrand may return an array whose last axis runs over the nodes; every
component is then integrated and required to converge.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Union

import numpy as np

from config import DensityConfig
from errors import QuadratureError

logger = logging.getLogger(__name__)

HALF_PI = 0.5 * math.pi

Integrand = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


@dataclass
class QuadratureResult:
    value: Union[float, np.ndarray]
    error: float
    nodes: int
    level: int


def _abscissae(t: np.ndarray):
    """Complement 1 - tanh(pi/2 sinh t) and weight for parameters t >= 0"""
    s = HALF_PI * np.sinh(t)
    cosh_s = np.cosh(s)
    complement = np.exp(-s) / cosh_s
    weight = HALF_PI * np.cosh(t) / cosh_s ** 2
    return complement, weight


def _weighted_sums(f: Integrand, lo: float, hi: float, half: float, t: np.ndarray):
    complement, weight = _abscissae(t)
    near = half * complement
    far = 2.0 * half - near
    x = np.concatenate([lo + near, hi - near])
    d_lo = np.concatenate([near, far])
    d_hi = np.concatenate([far, near])
    values = np.asarray(f(x, d_lo, d_hi), dtype=float)
    if not np.all(np.isfinite(values)):
        raise QuadratureError("integrand returned non-finite values", lo=lo, hi=hi)
    k = t.size
    w = np.concatenate([weight, weight])
    if t.size and t[0] == 0.0:
        # the centre node appears in both halves
        w[0] = 0.0
    total = np.sum(values * w, axis=-1)
    total_abs = np.sum(np.abs(values) * w, axis=-1)
    return total, total_abs, 2 * k


def tanh_sinh(f: Integrand, lo: float, hi: float, *,
              rtol: float = DensityConfig.QUAD_RTOL,
              atol: float = DensityConfig.QUAD_ATOL,
              max_nodes: int = DensityConfig.QUAD_MAX_NODES,
              t_max: float = DensityConfig.QUAD_T_MAX) -> QuadratureResult:
    """Integrate f over [lo, hi], halving the step until successive levels agree"""
    if lo == hi:
        return QuadratureResult(0.0, 0.0, 0, 0)
    if lo > hi:
        flipped = tanh_sinh(lambda x, a, b: f(x, b, a), hi, lo,
                            rtol=rtol, atol=atol, max_nodes=max_nodes, t_max=t_max)
        flipped.value = -flipped.value
        return flipped

    half = 0.5 * (hi - lo)
    h = 1.0
    total, total_abs, nodes = _weighted_sums(f, lo, hi, half, np.arange(0.0, t_max + 0.5 * h, h))
    nodes -= 1
    previous = h * half * total
    level = 0
    while True:
        level += 1
        h *= 0.5
        if nodes * 2 > max_nodes:
            raise QuadratureError(
                f"tanh-sinh did not reach rtol={rtol:g} within {max_nodes} nodes",
                lo=lo, hi=hi, error=float(np.max(error)) if level > 1 else None)
        t_new = h * np.arange(1, int(t_max / h) + 1, 2)
        extra, extra_abs, count = _weighted_sums(f, lo, hi, half, t_new)
        total = total + extra
        total_abs = total_abs + extra_abs
        nodes += count
        current = h * half * total
        scale = h * half * total_abs
        error = np.abs(current - previous)
        if level >= 2 and np.all(error <= rtol * scale + atol):
            value = float(current) if np.ndim(current) == 0 else current
            return QuadratureResult(value, float(np.max(error)), nodes, level)
        previous = current


def integrate_pieces(f: Integrand, points: List[float], **options) -> Union[float, np.ndarray]:
    """Sum of tanh_sinh over consecutive breakpoints"""
    total = 0.0
    for lo, hi in zip(points[:-1], points[1:]):
        if hi > lo:
            total = total + tanh_sinh(f, lo, hi, **options).value
    return total


def split_geometric(lo: float, hi: float,
                    ratio: float = DensityConfig.GEOMETRIC_SPLIT_RATIO) -> List[float]:
    """Breakpoints lo, lo*ratio, lo*ratio**2, ..., hi for 0 < lo < hi"""
    points = [lo]
    if lo > 0.0:
        while points[-1] * ratio < hi / ratio:
            points.append(points[-1] * ratio)
    points.append(hi)
    return points
