"""Maximum-energy paths: exact DP solvers, oracles, and auxiliary LPP models.

Two lattice geometries are solved exactly:

* upright paths on the vertex lattice [0,n]^2, collecting vertex values,
* east-north paths on the m-mesh, collecting horizontal edge increments.

Canonical geodesics are uppermost-leftmost: the north step is preferred at
every DP tie. Real-valued fields have almost surely no ties, but floating
point equality needs the deterministic rule.
"""

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .noise import FieldSnapshot
from .scaling import weight_from_energy

BRUTE_FORCE_PATH_CAP = 10**7


class LppError(ValueError):
    pass


@dataclass
class LatticePath:
    """A monotone path stored as per-level departure coordinates.

    For kind 'upright' the coordinates are vertex x-positions; for
    'east-north' they are m-grid units (x = u/m). ``departures[k]`` is the
    rightmost coordinate occupied on level src[1] + k; it is non-decreasing
    and ends at dst's coordinate.
    """

    kind: str
    src: tuple
    dst: tuple
    departures: np.ndarray
    energy: float
    grid_n: int
    grid_m: int | None = None

    def levels(self):
        return np.arange(self.src[1], self.dst[1] + 1)

    def enters(self):
        e = np.empty_like(self.departures)
        e[0] = self.src[0]
        e[1:] = self.departures[:-1]
        return e


@dataclass(frozen=True)
class PointSet2D:
    points: np.ndarray = field(repr=False)
    bbox: tuple = None

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=np.float64))
        if pts.size == 0:
            pts = pts.reshape(0, 2)
        if pts.shape[1] != 2:
            raise LppError("points must be (k, 2)")
        object.__setattr__(self, "points", pts)
        if self.bbox is None and len(pts):
            object.__setattr__(
                self, "bbox", (pts[:, 0].min(), pts[:, 1].min(), pts[:, 0].max(), pts[:, 1].max())
            )


def _require_kind(snap: FieldSnapshot, mesh: bool):
    if mesh and snap.kind != "brownian-mesh":
        raise LppError(f"mesh operation on {snap.kind!r} snapshot")
    if not mesh and snap.kind == "brownian-mesh":
        raise LppError("lattice operation on mesh snapshot")


def max_energy_upright(snap: FieldSnapshot, src, dst):
    """Max vertex-sum over upright paths src -> dst, plus the canonical geodesic."""
    _require_kind(snap, mesh=False)
    sx, sy = src
    dx, dy = dst
    n = snap.n
    if not (0 <= sx <= n and 0 <= sy <= n and 0 <= dx <= n and 0 <= dy <= n):
        raise LppError(f"endpoints outside lattice of size {n}: {src} -> {dst}")
    if dx < sx or dy < sy:
        raise LppError(f"dst must dominate src coordinatewise: {src} -> {dst}")
    w = snap.values[sy : dy + 1, sx : dx + 1]
    w = np.ascontiguousarray(w, dtype=np.int64 if snap.kind == "bernoulli" else np.float64)
    G = kernels.upright_dp(w)
    z = kernels.upright_backtrack(G, w) + sx
    energy = G[-1, -1]
    energy = int(energy) if snap.kind == "bernoulli" else float(energy)
    return energy, LatticePath("upright", (sx, sy), (dx, dy), z, energy, n)


def _snap_right(x, m):
    """First m-grid index at or to the right of coordinate x."""
    return int(math.ceil(x * m - 1e-9))


def max_energy_mesh(snap: FieldSnapshot, src, dst, grid_units=False):
    """Max edge-increment sum over east-north mesh paths.

    Endpoints are (x, level) with x a real horizontal coordinate snapped
    rightward onto the m-grid, or raw grid units when grid_units is set.
    """
    _require_kind(snap, mesh=True)
    n, m = snap.n, snap.m
    (x0, i0), (x1, i1) = src, dst
    if grid_units:
        u0, u1 = int(x0), int(x1)
    else:
        u0, u1 = _snap_right(x0, m), _snap_right(x1, m)
    if not (0 <= i0 <= n and 0 <= i1 <= n):
        raise LppError(f"levels outside [0, {n}]: {src} -> {dst}")
    if i1 < i0 or u1 < u0:
        raise LppError(f"incompatible endpoints after snapping: ({u0},{i0}) -> ({u1},{i1})")
    if not (0 <= u0 <= n * m and 0 <= u1 <= n * m):
        raise LppError(f"horizontal coordinates outside the mesh: ({u0}) -> ({u1})")
    w = np.ascontiguousarray(snap.values[i0 : i1 + 1, u0:u1], dtype=np.float64)
    G = kernels.mesh_dp(w)
    z = kernels.mesh_backtrack(G, w) + u0
    energy = float(G[-1, -1])
    return energy, LatticePath("east-north", (u0, i0), (u1, i1), z, energy, n, m)


def path_energy(snap: FieldSnapshot, path: LatticePath):
    """Re-sum the field along a path (compensated summation)."""
    enters = path.enters()
    deps = path.departures
    parts = []
    for k, lev in enumerate(path.levels()):
        row = snap.values[lev]
        if path.kind == "upright":
            parts.append(math.fsum(row[enters[k] : deps[k] + 1]))
        else:
            parts.append(math.fsum(row[enters[k] : deps[k]]))
    total = math.fsum(parts)
    return int(total) if snap.kind == "bernoulli" else total


def brute_force_energy(snap: FieldSnapshot, src, dst):
    """Exhaustive maximum over all admissible paths (testing oracle)."""
    if snap.kind == "brownian-mesh":
        m = snap.m
        u0, u1 = _snap_right(src[0], m), _snap_right(dst[0], m)
        i0, i1 = src[1], dst[1]
        de, dn = u1 - u0, i1 - i0
        if de < 0 or dn < 0:
            raise LppError("incompatible endpoints")
        if math.comb(de + dn, dn) > BRUTE_FORCE_PATH_CAP:
            raise LppError("instance too large for brute force")
        best = -math.inf
        for north_positions in itertools.combinations(range(de + dn), dn):
            u, i, acc = u0, i0, []
            norths = set(north_positions)
            for step in range(de + dn):
                if step in norths:
                    i += 1
                else:
                    acc.append(snap.values[i, u])
                    u += 1
            best = max(best, math.fsum(acc))
        return best
    sx, sy = src
    dx, dy = dst
    de, dn = dx - sx, dy - sy
    if de < 0 or dn < 0:
        raise LppError("incompatible endpoints")
    if math.comb(de + dn, dn) > BRUTE_FORCE_PATH_CAP:
        raise LppError("instance too large for brute force")
    best = -math.inf
    for north_positions in itertools.combinations(range(de + dn), dn):
        x, y = sx, sy
        acc = [snap.values[y, x]]
        norths = set(north_positions)
        for step in range(de + dn):
            if step in norths:
                y += 1
            else:
                x += 1
            acc.append(snap.values[y, x])
        total = math.fsum(acc)
        best = max(best, total)
    if snap.kind == "bernoulli":
        return int(best)
    return float(best)


# -- routed weight profile ----------------------------------------------------

_INV_SQRT2 = 2.0**-0.5


def mesh_energy_tables(snap: FieldSnapshot):
    """Forward and backward DP tables over the whole (0,0) -> (n,n) mesh.

    fwd[i, u] is the max energy from grid point (0, 0) to (u, i);
    bwd[i, u] the max energy from (u, i) to (n*m, n).
    """
    _require_kind(snap, mesh=True)
    w = np.ascontiguousarray(snap.values, dtype=np.float64)
    fwd = kernels.mesh_dp(w)
    rev = np.ascontiguousarray(w[::-1, ::-1])
    bwd = kernels.mesh_dp(rev)[::-1, ::-1]
    return fwd, bwd


def routed_profile_grid(snap: FieldSnapshot, ia, us, tables=None):
    """Routed weight profile at integer level ia, evaluated at grid points us.

    Z(u) is the best weight of a (0,0)->(0,1) zigzag that departs level ia/n
    at grid coordinate u: the forward weight to (u, ia) plus the backward
    weight from (u, ia+1), minus the microscopic constant 2^{-1/2} n^{-1/3}
    carried by that split, so the profile is the exact supremum over routed
    zigzags. It touches, and never exceeds, the maximum route weight.
    """
    _require_kind(snap, mesh=True)
    n, m = snap.n, snap.m
    if not 0 <= ia <= n - 1:
        raise LppError(f"level index {ia} outside [0, {n - 1}]")
    fwd, bwd = mesh_energy_tables(snap) if tables is None else tables
    us = np.asarray(us, dtype=np.int64)
    if us.min() < 0 or us.max() > n * m:
        raise LppError("grid coordinate outside the mesh")
    n23 = float(n) ** (2.0 / 3.0)
    x_snap = 0.5 * (us / m - ia) / n23
    c = _INV_SQRT2 * float(n) ** (-1.0 / 3.0)
    wgt_lo = c * (fwd[ia, us] - 2.0 * ia - 2.0 * n23 * x_snap)
    x_minus = x_snap - 0.5 / n23
    wgt_hi = c * (bwd[ia + 1, us] - 2.0 * (n - ia - 1) + 2.0 * n23 * x_minus)
    return wgt_lo + wgt_hi - c


def routed_profile(snap: FieldSnapshot, a, x_grid, tables=None):
    """Z_n(x, a) for scaled positions x, snapped rightward onto the m-grid."""
    _require_kind(snap, mesh=True)
    n, m = snap.n, snap.m
    ia = int(round(a * n))
    if abs(a * n - ia) > 1e-9:
        raise LppError(f"level {a} is not on the 1/n grid")
    if not 1 <= ia <= n - 1:
        raise LppError(f"level {a} must lie strictly inside (0, 1)")
    xs = np.atleast_1d(np.asarray(x_grid, dtype=np.float64))
    n23 = float(n) ** (2.0 / 3.0)
    us = np.ceil((ia + 2.0 * n23 * xs) * m - 1e-9).astype(np.int64)
    if us.min() < 0 or us.max() > n * m:
        raise LppError("x outside the representable mesh range")
    z = routed_profile_grid(snap, ia, us, tables=tables)
    return z if np.ndim(x_grid) else float(z[0])


# -- auxiliary LPP models -----------------------------------------------------


def three_way_up_energy(open_bits):
    """Max number of open vertices on a three-way-up path (0,0) -> (0,K).

    ``open_bits`` has K+1 rows (levels 0..K) and an odd number of columns,
    the centre column being horizontal position 0; steps move one level up
    and at most one column sideways.
    """
    bits = np.asarray(open_bits)
    if bits.ndim != 2 or bits.shape[0] < 2 or bits.shape[1] % 2 == 0:
        raise LppError("open_bits must be (K+1) x odd-width with K >= 1")
    nlev, width = bits.shape
    K = nlev - 1
    centre = width // 2
    if centre < K // 2:
        raise LppError("width does not cover the reachable cone")
    NEG = -(10**9)
    cur = np.full(width, NEG, dtype=np.int64)
    cur[centre] = int(bits[0, centre])
    for k in range(1, nlev):
        left = np.concatenate([cur[1:], [NEG]])
        right = np.concatenate([[NEG], cur[:-1]])
        cur = np.maximum(np.maximum(left, cur), right)
        cur = np.where(cur <= NEG // 2, NEG, cur + bits[k])
    return int(max(cur[centre], 0))


def three_way_up_brute(open_bits):
    """Enumeration oracle over all 3^K step sequences."""
    bits = np.asarray(open_bits)
    nlev, width = bits.shape
    K = nlev - 1
    centre = width // 2
    best = 0
    for moves in itertools.product((-1, 0, 1), repeat=K):
        u, acc, ok = centre, int(bits[0, centre]), True
        for k, mv in enumerate(moves, start=1):
            u += mv
            if not 0 <= u < width:
                ok = False
                break
            acc += int(bits[k, u])
        if ok and u == centre:
            best = max(best, acc)
    return best


def poisson_lpp_energy(points, src, dst):
    """Longest chain of points collectable on a 45-degree directed path."""
    pts = points.points if isinstance(points, PointSet2D) else PointSet2D(points).points
    (sx, sy), (dx, dy) = src, dst
    if dy <= sy:
        raise LppError("dst must lie strictly above src")
    if abs(dx - sx) > dy - sy:
        raise LppError("dst not reachable from src inside the cone")
    ok = (np.abs(pts[:, 0] - sx) <= pts[:, 1] - sy) & (np.abs(dx - pts[:, 0]) <= dy - pts[:, 1])
    pts = pts[ok]
    order = np.lexsort((pts[:, 0], pts[:, 1]))
    pts = pts[order]
    k = len(pts)
    if k == 0:
        return 0
    length = np.ones(k, dtype=np.int64)
    for i in range(k):
        dyi = pts[i, 1] - pts[:i, 1]
        reach = np.abs(pts[i, 0] - pts[:i, 0]) <= dyi
        if reach.any():
            length[i] = 1 + length[:i][reach].max()
    return int(length.max())


def poisson_lpp_brute(points, src, dst):
    """Subset/ordering oracle for small clouds."""
    pts = points.points if isinstance(points, PointSet2D) else PointSet2D(points).points
    best = 0
    idx = np.lexsort((pts[:, 0], pts[:, 1]))
    pts = pts[idx]
    k = len(pts)
    for r in range(k, 0, -1):
        if best >= r:
            break
        for combo in itertools.combinations(range(k), r):
            chain = [src] + [tuple(pts[i]) for i in combo] + [dst]
            if all(
                abs(b[0] - a[0]) <= b[1] - a[1] for a, b in zip(chain[:-1], chain[1:])
            ):
                best = r
                break
    return best


def coarsen_mesh(snap: FieldSnapshot, factor=2):
    """Merge groups of ``factor`` consecutive fine edges into one coarse edge."""
    _require_kind(snap, mesh=True)
    if factor < 1 or snap.m % factor:
        raise LppError(f"mesh density {snap.m} not divisible by factor {factor}")
    ne = snap.values.shape[1]
    coarse = snap.values.reshape(snap.n + 1, ne // factor, factor).sum(axis=2)
    return FieldSnapshot(snap.kind, snap.n, snap.m // factor, snap.t, coarse)


def seppalainen_rate(x):
    """Upper-tail rate function 2x*acosh(x/2) - 2*sqrt(x^2-4) of Poissonian LPP."""
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr < 2.0):
        raise LppError("rate function defined for x >= 2")
    out = 2.0 * arr * np.arccosh(arr / 2.0) - 2.0 * np.sqrt(arr * arr - 4.0)
    return float(out) if np.ndim(x) == 0 else out


def mesh_weight(path: LatticePath):
    """Scaled weight of an east-north path from its stored energy."""
    n, m = path.grid_n, path.grid_m
    s1, s2 = path.src[1] / n, path.dst[1] / n
    n23 = float(n) ** (2.0 / 3.0)
    x = 0.5 * (path.src[0] / m - path.src[1]) / n23
    y = 0.5 * (path.dst[0] / m - path.dst[1]) / n23
    return weight_from_energy(n, path.energy, s1, s2, x, y)
