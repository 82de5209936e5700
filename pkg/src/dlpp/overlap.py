"""Overlap measures, excursion decomposition, and path-geometry statistics.

Overlap follows three conventions, all carried by OverlapReport:

* discrete lattice paths: the number of shared vertices,
* mesh paths: 1/m times the number of shared horizontal edges,
* scaled: 1/n times the raw value, so identical (0,0)->(0,1) routes have
  scaled overlap 1 (mesh) or 2 + 1/n (vertex counting).

Excursions are detected on per-level departure sequences: a maximal run of
levels where the two paths' departures differ, bracketed by the divergence
point below and the reconvergence point above. The lifetime [b, f] has b at
the first differing level and f one level past the last, so the differing
levels are exactly [b, f).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .lpp import LatticePath


class OverlapError(ValueError):
    pass


@dataclass
class OverlapReport:
    kind: str
    raw_overlap: float
    scaled_overlap: float
    per_level: np.ndarray = field(repr=False)


@dataclass
class ExcursionRecord:
    """One connected component of the symmetric difference of two paths."""

    b: float
    f: float
    b_idx: int
    f_idx: int
    leg0: np.ndarray
    leg1: np.ndarray
    x_div: float
    x_conv: float
    n: int
    m: int | None
    units: str  # 'grid' or 'scaled'
    is_excursion: bool = True
    normal: bool | None = None
    slender: bool | None = None
    weak: bool | None = None
    thin: bool | None = None
    wide: bool | None = None
    retained: bool | None = None

    @property
    def dur(self):
        return self.f - self.b

    @property
    def scale(self):
        return dyadic_scale(self.dur)


def dyadic_scale(dur):
    """The scale l with dur in (2^{-l-1}, 2^{-l}]."""
    if dur <= 0:
        raise OverlapError(f"duration must be positive, got {dur}")
    ell = int(math.floor(-math.log2(dur)))
    while dur > 2.0**-ell:
        ell -= 1
    while dur <= 2.0 ** -(ell + 1):
        ell += 1
    return ell


def _check_pair(p1: LatticePath, p2: LatticePath):
    if p1.kind != p2.kind:
        raise OverlapError(f"kind mismatch: {p1.kind} vs {p2.kind}")
    if p1.src != p2.src or p1.dst != p2.dst:
        raise OverlapError("paths must share their route")
    if p1.kind == "east-north" and p1.grid_m != p2.grid_m:
        raise OverlapError("mesh paths must share their grid")


def overlap_measure(p1: LatticePath, p2: LatticePath) -> OverlapReport:
    """Shared vertices (lattice) or shared-edge length (mesh) of two paths."""
    _check_pair(p1, p2)
    z1, z2 = p1.departures, p2.departures
    e1, e2 = p1.enters(), p2.enters()
    lo = np.maximum(e1, e2)
    hi = np.minimum(z1, z2)
    if p1.kind == "upright":
        per_level = np.maximum(0, hi - lo + 1)
        raw = float(per_level.sum())
        scaled = raw / p1.grid_n
    else:
        per_level = np.maximum(0, hi - lo) / p1.grid_m
        raw = float(per_level.sum())
        scaled = raw / p1.grid_n
    return OverlapReport(p1.kind, raw, scaled, per_level)


def _departure_arrays(p1, p2):
    """(deps1, deps2, enters1, enters2, differ-mask, meta) for either input type."""
    if isinstance(p1, LatticePath):
        _check_pair(p1, p2)
        z1, z2 = p1.departures, p2.departures
        differ = z1 != z2
        meta = (p1.grid_n, p1.grid_m, "grid", p1.src[1])
    else:  # Zigzag pair
        if p1.n != p2.n:
            raise OverlapError("zigzags must share the scaling index")
        z1, z2 = p1.departures, p2.departures
        differ = ~np.isclose(z1, z2, rtol=0.0, atol=1e-12)
        meta = (p1.n, None, "scaled", int(round(p1.s1 * p1.n)))
    return z1, z2, differ, meta


def excursion_decompose(p1, p2):
    """Ordered excursions between two paths sharing a route.

    Returns a list of ExcursionRecord; the complement of the lifetimes is
    exactly the set of levels where the departure sequences agree.
    """
    z1, z2, differ, (n, m, units, lev0) = _departure_arrays(p1, p2)
    if z1.size != z2.size:
        raise OverlapError("paths must cover the same levels")
    records = []
    k = z1.size
    i = 0
    while i < k:
        if not differ[i]:
            i += 1
            continue
        j = i
        while j < k and differ[j]:
            j += 1
        if j == k:
            raise OverlapError("paths do not reconverge; routes differ")
        # differing levels i..j-1; lifetime indices [i, j]
        b_idx, f_idx = i, j
        x_div = min(z1[i], z2[i])
        x_conv = max(z1[j - 1], z2[j - 1])
        if units == "scaled":
            # reconvergence sits one level up, shifted by the slope
            x_conv = x_conv - 0.5 * float(n) ** (-2.0 / 3.0)
        records.append(
            ExcursionRecord(
                b=(lev0 + b_idx) / n,
                f=(lev0 + f_idx) / n,
                b_idx=lev0 + b_idx,
                f_idx=lev0 + f_idx,
                leg0=z1[i : j + 1].copy(),
                leg1=z2[i : j + 1].copy(),
                x_div=x_div,
                x_conv=x_conv,
                n=n,
                m=m,
                units=units,
            )
        )
        i = j
    return records


def _sep_to_scaled(rec: ExcursionRecord, deltas):
    if rec.units == "scaled":
        return deltas
    factor = 0.5 * float(rec.n) ** (-2.0 / 3.0)
    if rec.m is not None:
        return deltas * factor / rec.m
    return deltas * factor


def classify_excursion(rec: ExcursionRecord, alpha, chi, tau0, beta1=None, width_bound=None):
    """Set normal / slender / weak flags, plus thin / wide when asked.

    normal: at least a 1-chi proportion of levels in [b, f] separate the
    legs by dur^{2/3} tau0^alpha (scaled units); weak halves the threshold;
    slender is an excursion that is not normal. thin requires separation
    below beta1/4 * n^{-2/3} at every level of [b, f); wide compares the
    horizontal extent of the excursion against width_bound.
    """
    if alpha <= 0 or not 0 < chi < 1 or not 0 < tau0 < 1:
        raise OverlapError("need alpha > 0, chi in (0,1), tau0 in (0,1)")
    sep = _sep_to_scaled(rec, np.abs(rec.leg0.astype(np.float64) - rec.leg1))
    thr = rec.dur ** (2.0 / 3.0) * tau0**alpha
    rec.normal = bool(np.mean(sep >= thr) >= 1.0 - chi)
    rec.weak = bool(np.mean(sep >= 0.5 * thr) >= 1.0 - chi)
    rec.slender = rec.is_excursion and not rec.normal
    if beta1 is not None:
        rec.thin = bool(np.all(sep[:-1] < 0.25 * beta1 * float(rec.n) ** (-2.0 / 3.0)))
    if width_bound is not None:
        rec.wide = bool(excursion_width(rec) > width_bound)
    return {
        "is_excursion": rec.is_excursion,
        "normal": rec.normal,
        "slender": rec.slender,
        "weak": rec.weak,
        "thin": rec.thin,
        "wide": rec.wide,
        "retained": rec.retained,
    }


def excursion_width(rec: ExcursionRecord):
    """Width of the narrowest vertical strip containing the excursion (scaled)."""
    n = rec.n
    levels = np.arange(rec.b_idx, rec.f_idx + 1)
    if rec.units == "scaled":
        d0, d1 = rec.leg0, rec.leg1
        slope = 0.5 * float(n) ** (-2.0 / 3.0)
        e0 = np.concatenate([[d0[0]], d0[:-1] - slope])
        e1 = np.concatenate([[d1[0]], d1[:-1] - slope])
    else:
        scalefn = lambda u, lev: 0.5 * float(n) ** (-2.0 / 3.0) * (u / (rec.m or 1) - lev)
        d0 = scalefn(rec.leg0.astype(np.float64), levels)
        d1 = scalefn(rec.leg1.astype(np.float64), levels)
        e0 = np.concatenate([[d0[0]], scalefn(rec.leg0[:-1].astype(np.float64), levels[1:])])
        e1 = np.concatenate([[d1[0]], scalefn(rec.leg1[:-1].astype(np.float64), levels[1:])])
    return float(max(d0.max(), d1.max()) - min(e0.min(), e1.min()))


def geometry_stats(p1, p2=None):
    """Fluctuation statistics in the native units of the inputs.

    Fluc(h): largest distance from a point of p1 at level h to the straight
    line interpolating p1's endpoints. MaxDist (when p2 is given): largest
    same-level distance between a point of p1 and a point of p2.
    """
    deps, ents, levels, src, dst = _coords(p1)
    span = dst[1] - src[1]
    if span > 0:
        frac = (levels - src[1]) / span
    else:
        frac = np.zeros_like(levels, dtype=np.float64)
    line = src[0] + frac * (dst[0] - src[0])
    fluc = np.maximum(np.abs(deps - line), np.abs(ents - line))
    out = {
        "fluc": fluc,
        "max_fluc": float(fluc.max()),
        "width": float(deps.max() - ents.min()),
        "max_dist": None,
    }
    if p2 is not None:
        deps2, ents2, levels2, _, _ = _coords(p2)
        if levels2.size != levels.size:
            raise OverlapError("paths must cover the same levels")
        out["max_dist"] = float(np.maximum(deps - ents2, deps2 - ents).max())
    return out


def _coords(p):
    if isinstance(p, LatticePath):
        return (
            p.departures.astype(np.float64),
            p.enters().astype(np.float64),
            p.levels().astype(np.float64),
            p.src,
            p.dst,
        )
    return (
        p.departures,
        p.enters(),
        p.levels(),
        (p.start.x, p.start.s),
        (p.end.x, p.end.s),
    )


def regularity(zz, kappa, R):
    """Whether every on-path point pair at vertical gap <= 6*kappa stays within
    R * kappa^{2/3} (log 1/kappa)^{1/3} horizontally."""
    if not 0.0 < kappa < math.exp(-1):
        raise OverlapError(f"kappa must lie in (0, 1/e), got {kappa}")
    if R <= 0:
        raise OverlapError(f"R must be positive, got {R}")
    deps, ents = zz.departures, zz.enters()
    n = zz.n
    window = int(math.floor(6.0 * kappa * n + 1e-9))
    bound = R * kappa ** (2.0 / 3.0) * math.log(1.0 / kappa) ** (1.0 / 3.0)
    k = deps.size
    window = min(window, k - 1)
    for i in range(k):
        j = min(k, i + window + 1)
        if deps[i:j].max() - ents[i:j].min() > bound:
            return False
    return True


def steadiness(zz, beta1):
    """Fraction of levels whose horizontal interval is at least beta1 * n^{-2/3}."""
    if abs(zz.start.x) > 1e-9 or abs(zz.start.s) > 1e-9 or abs(zz.end.x) > 1e-9 or abs(zz.end.s - 1.0) > 1e-9:
        raise OverlapError("steadiness is defined on the (0,0)->(0,1) route")
    omega = zz.horizontal_lengths()
    return float(np.mean(omega >= beta1 * float(zz.n) ** (-2.0 / 3.0) - 1e-15))


@dataclass
class DurationSummary:
    by_scale: dict
    long_total: float
    short_total: float
    threshold: float | None


def duration_by_scale(excursions, n=None, beta=None) -> DurationSummary:
    """Total excursion duration per dyadic scale, plus a long/short split."""
    by_scale = {}
    for rec in excursions:
        by_scale[rec.scale] = by_scale.get(rec.scale, 0.0) + rec.dur
    threshold = None
    long_total = short_total = 0.0
    if n is not None and beta is not None:
        threshold = float(n) ** (beta - 1.0)
        for rec in excursions:
            if rec.dur >= threshold:
                long_total += rec.dur
            else:
                short_total += rec.dur
    return DurationSummary(by_scale, long_total, short_total, threshold)
