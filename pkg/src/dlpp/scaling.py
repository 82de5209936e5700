"""Scaled (KPZ) coordinates: the scaling map, zigzags, and scaled weight.

The n-indexed scaling map sends an unscaled planar point (v1, v2) to

    ( (v1 - v2) / (2 n^{2/3}) ,  v2 / n ),

so the unscaled route (0,0) -> (n,n) becomes the unit vertical route
(0,0) -> (0,1). A path's energy E over the lifetime [s1, s2] with scaled
horizontal endpoints x, y is converted to its weight by

    Wgt = 2^{-1/2} n^{-1/3} ( E - 2 n (s2 - s1) - 2 n^{2/3} (y - x) ).

Weight is exactly additive when a path is split at one of its points.
"""

from dataclasses import dataclass

import numpy as np

GRID_ATOL = 1e-9


class ScalingError(ValueError):
    pass


@dataclass(frozen=True)
class ScaledPoint:
    x: float
    s: float
    n: int


def scale_point(n, v1, v2) -> ScaledPoint:
    if n < 1:
        raise ScalingError(f"scaling index must be >= 1, got {n}")
    return ScaledPoint(0.5 * float(n) ** (-2.0 / 3.0) * (v1 - v2), v2 / n, n)


def unscale_point(n, x, s):
    """Exact inverse of scale_point: returns the unscaled pair (v1, v2)."""
    if n < 1:
        raise ScalingError(f"scaling index must be >= 1, got {n}")
    return (n * s + 2.0 * float(n) ** (2.0 / 3.0) * x, n * s)


def check_compatible_triple(n, s1, s2, x=0.0, y=0.0):
    """(ok, reason): grid membership of n*s1, n*s2 and the horizontal bound.

    reason is None when ok, otherwise one of 'order', 'grid', 'horizontal'.
    """
    if s2 < s1:
        return False, "order"
    for s in (s1, s2):
        ns = n * s
        if abs(ns - round(ns)) > GRID_ATOL:
            return False, "grid"
    if y - x < -0.5 * float(n) ** (1.0 / 3.0) * (s2 - s1) - GRID_ATOL:
        return False, "horizontal"
    return True, None


def weight_from_energy(n, energy, s1, s2, x, y):
    """Scaled weight of energy accrued over [s1,s2] between horizontal x and y."""
    ok, reason = check_compatible_triple(n, s1, s2, x, y)
    if not ok:
        raise ScalingError(f"incompatible endpoint data: {reason}")
    centred = energy - 2.0 * n * (s2 - s1) - 2.0 * float(n) ** (2.0 / 3.0) * (y - x)
    return 2.0 ** (-0.5) * float(n) ** (-1.0 / 3.0) * centred


def energy_from_weight(n, weight, s1, s2, x, y):
    """Inverse of weight_from_energy (used for round-trip checks)."""
    ok, reason = check_compatible_triple(n, s1, s2, x, y)
    if not ok:
        raise ScalingError(f"incompatible endpoint data: {reason}")
    return (
        weight * 2.0**0.5 * float(n) ** (1.0 / 3.0)
        + 2.0 * n * (s2 - s1)
        + 2.0 * float(n) ** (2.0 / 3.0) * (y - x)
    )


@dataclass
class Zigzag:
    """Scaled image of a lattice path.

    ``departures[i]`` is phi(s) at s = s1 + i/n: the rightmost scaled
    coordinate the path occupies on that level. The path enters level
    s + 1/n at phi(s) - (1/2) n^{-2/3}.
    """

    n: int
    start: ScaledPoint
    end: ScaledPoint
    departures: np.ndarray
    weight: float

    @property
    def s1(self):
        return self.start.s

    @property
    def s2(self):
        return self.end.s

    def levels(self):
        return self.start.s + np.arange(self.departures.size) / self.n

    def enters(self):
        """Scaled entry coordinate at each level."""
        e = np.empty_like(self.departures)
        e[0] = self.start.x
        e[1:] = self.departures[:-1] - 0.5 * float(self.n) ** (-2.0 / 3.0)
        return e

    def horizontal_lengths(self):
        """Interval lengths omega_i; for the (0,0)->(0,1) route they sum to n^{1/3}/2."""
        return self.departures - self.enters()


def zigzag_from_mesh_path(path, weight=None):
    """Scaled image of an east-north mesh path (grid units -> scaled units)."""
    n, m = path.grid_n, path.grid_m
    lev = np.arange(path.src[1], path.dst[1] + 1)
    xs = 0.5 * float(n) ** (-2.0 / 3.0) * (path.departures / m - lev)
    start = scale_point(n, path.src[0] / m, path.src[1])
    end = scale_point(n, path.dst[0] / m, path.dst[1])
    if weight is None:
        weight = weight_from_energy(n, path.energy, start.s, end.s, start.x, end.x)
    return Zigzag(n, start, end, xs, weight)
