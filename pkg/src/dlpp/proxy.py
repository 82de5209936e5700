"""Time-zero proxy of the time-t polymer.

The proxy interpolates marked points of the time-t geodesic by time-zero
point-to-point polymers. Marked levels start from the near-uniform grid
J = { floor(n 2^{-m} k)/n } and are adjusted so that the endpoints of
roughly half of the scale-l excursions between the time-zero and time-t
geodesics survive into the proxy: excursions are examined bottom to top and
one is discarded exactly when the previously examined one was retained and
sits within vertical distance 2^{-m}. J-levels straddling a retained
endpoint are removed and the endpoint level inserted (idempotently; levels
live on the exact 1/n grid as integers).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .lpp import LatticePath, LppError, max_energy_mesh, mesh_weight, path_energy
from .overlap import excursion_decompose, geometry_stats
from .scaling import weight_from_energy


class ProxyError(ValueError):
    pass


@dataclass
class ProxyParams:
    """Construction parameters; the interpolation scale m comes from
    2^{-m} = 2^{-ell} * tau0^eta, rounded and clamped to at least ell + 1."""

    ell: int
    eta: float
    tau0: float
    xi: float
    alpha: float = 1.0
    chi: float = 0.5
    m_dyadic: int | None = None

    def __post_init__(self):
        if self.ell < 0:
            raise ProxyError(f"dyadic scale must be >= 0, got {self.ell}")
        if not 0.0 < self.xi < 0.5:
            raise ProxyError(f"xi must lie in (0, 1/2), got {self.xi}")
        if not 0.0 < self.tau0 < 1.0:
            raise ProxyError(f"tau0 must lie in (0,1), got {self.tau0}")
        if self.eta <= 0.0:
            raise ProxyError(f"eta must be positive, got {self.eta}")
        if self.m_dyadic is None:
            raw = self.ell + self.eta * math.log2(1.0 / self.tau0)
            self.m_dyadic = max(self.ell + 1, int(round(raw)))
        if self.m_dyadic < self.ell:
            raise ProxyError(f"need m >= ell, got m={self.m_dyadic} < ell={self.ell}")


@dataclass
class ProxyResult:
    proxy: LatticePath
    interpolation_points: list  # (grid u, level index)
    retained: list
    discarded_count: int
    csize: int
    weight: float  # time-zero weight of the proxy (sum of piece weights)
    piece_weights: list = field(repr=False)
    rho0: LatticePath = None
    rhot: LatticePath = None
    params: ProxyParams = None


def build_proxy(snap0, snapt, params: ProxyParams) -> ProxyResult:
    if snap0.kind != "brownian-mesh" or snapt.kind != "brownian-mesh":
        raise ProxyError("proxy construction runs on mesh snapshots")
    if (snap0.n, snap0.m) != (snapt.n, snapt.m):
        raise ProxyError("snapshots must share the lattice")
    if snap0.t != 0.0:
        raise ProxyError("first snapshot must be taken at time zero")
    n, m = snap0.n, snap0.m
    md = params.m_dyadic
    if 2**md > n:
        raise ProxyError(f"interpolation scale too fine: 2^{md} > n={n}")
    tmax = params.tau0 * float(n) ** (-1.0 / 3.0)
    if snapt.t > tmax + 1e-12:
        raise ProxyError(f"time {snapt.t} exceeds the subcritical bound {tmax}")

    _, rho0 = max_energy_mesh(snap0, (0, 0), (n * m, n), grid_units=True)
    _, rhot = max_energy_mesh(snapt, (0, 0), (n * m, n), grid_units=True)

    excs = excursion_decompose(rho0, rhot)
    eps = 1e-12
    csel = [
        e
        for e in excs
        if e.scale == params.ell and e.b >= params.xi - eps and e.f <= 1.0 - params.xi + eps
    ]

    retained = []
    discarded = 0
    prev_retained_rec = None
    for e in csel:
        drop = (
            prev_retained_rec is not None
            and (e.b_idx - prev_retained_rec.f_idx) * 2**md <= n
        )
        e.retained = not drop
        if drop:
            discarded += 1
            prev_retained_rec = None
        else:
            retained.append(e)
            prev_retained_rec = e

    # interpolation levels (integer level indices on the 1/n grid)
    J = np.array([(n * k) // 2**md for k in range(2**md + 1)], dtype=np.int64)
    removed = np.zeros(J.size, dtype=bool)
    endpoint_levels = []
    for e in retained:
        for p in (e.b_idx, e.f_idx):
            endpoint_levels.append(p)
            for a in range(J.size - 1):
                if J[a] <= p <= J[a + 1]:
                    removed[a] = removed[a + 1] = True
    levels = set(J[~removed].tolist()) | set(endpoint_levels) | {0, n}
    levels = sorted(levels)

    coord = {0: 0, n: n * m}  # interpolating points start and end at the route endpoints
    for e in retained:
        coord[e.b_idx] = int(e.x_div)
        coord[e.f_idx] = int(e.x_conv)
    us = [coord.get(l, int(rhot.departures[l])) for l in levels]

    departures = np.empty(n + 1, dtype=np.int64)
    piece_weights = []
    for (l0, u0), (l1, u1) in zip(zip(levels, us), zip(levels[1:], us[1:])):
        if u1 < u0:
            raise ProxyError("interpolation points lost monotonicity")
        _, piece = max_energy_mesh(snap0, (u0, l0), (u1, l1), grid_units=True)
        # a later piece overwrites the junction level: the union departs it
        # wherever the upper piece does
        departures[l0 : l1 + 1] = piece.departures
        piece_weights.append(mesh_weight(piece))

    proxy = LatticePath("east-north", (0, 0), (n * m, n), departures, 0.0, n, m)
    proxy.energy = path_energy(snap0, proxy)
    weight = math.fsum(piece_weights)

    return ProxyResult(
        proxy=proxy,
        interpolation_points=list(zip(us, levels)),
        retained=retained,
        discarded_count=discarded,
        csize=len(csel),
        weight=weight,
        piece_weights=piece_weights,
        rho0=rho0,
        rhot=rhot,
        params=params,
    )


def proxy_report(result: ProxyResult, snap0, snapt):
    """Weight and geometry mimicry of the proxy against the time-t polymer."""
    n, m = snap0.n, snap0.m
    if result.rho0 is None or result.rhot is None:
        raise ProxyError("result does not carry its geodesics")
    wgt_t_rhot = mesh_weight(result.rhot)
    e0_rhot = path_energy(snap0, result.rhot)
    wgt_0_rhot = weight_from_energy(n, e0_rhot, 0.0, 1.0, 0.0, 0.0)
    weight_gap = abs(result.weight - wgt_t_rhot)
    baseline_gap = abs(wgt_0_rhot - wgt_t_rhot)
    retention = 1.0 if result.csize == 0 else len(result.retained) / result.csize
    stats = geometry_stats(result.proxy, result.rhot)
    max_dist = stats["max_dist"] * 0.5 * float(n) ** (-2.0 / 3.0) / m
    return {
        "weight_gap": weight_gap,
        "baseline_gap": baseline_gap,
        "retention_fraction": retention,
        "max_dist_to_rho_t": max_dist,
        "wgt0_proxy": result.weight,
        "wgt_t_rhot": wgt_t_rhot,
        "wgt0_rhot": wgt_0_rhot,
    }
