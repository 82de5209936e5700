"""Monte Carlo estimation and the identity/inequality/trend check battery.

Every check is reproducible bit-for-bit from (config, seed): sample j always
draws from stream_id j (or a documented offset), work is split into
fixed-size batches whose boundaries do not depend on the thread count, and
results are merged by sample index, not arrival order. Couplings follow the
statements being tested: common random numbers across times for
monotonicity, refinement and stability checks; independent streams for the
two sides of the variance identity.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .lpp import (
    LatticePath,
    coarsen_mesh,
    max_energy_mesh,
    max_energy_upright,
    mesh_energy_tables,
    mesh_weight,
    path_energy,
)
from .noise import make_env
from .overlap import excursion_decompose, geometry_stats, overlap_measure
from .rng import substream
from .scaling import weight_from_energy

BATCH = 64  # fixed batch size: thread count never changes batch boundaries


class HarnessError(ValueError):
    pass


@dataclass
class Estimate:
    mean: float
    sem: float
    n_samples: int
    seed_root: int

    @classmethod
    def from_samples(cls, arr, seed_root):
        arr = np.asarray(arr, dtype=np.float64)
        ns = arr.size
        sem = float(arr.std(ddof=1) / math.sqrt(ns)) if ns > 1 else float("inf")
        return cls(float(arr.mean()), sem, ns, seed_root)


@dataclass
class CheckReport:
    name: str
    lhs: float | None
    rhs: float | None
    verdict: str  # 'pass' | 'fail' | 'inconclusive' | 'measurement'
    tolerance: str
    details: dict = field(default_factory=dict)


def _parallel(fn, samples, threads, width):
    """fn(sample_index) -> sequence of `width` floats, gathered in index order."""
    out = np.empty((samples, width), dtype=np.float64)

    def run_batch(lo):
        hi = min(lo + BATCH, samples)
        for i in range(lo, hi):
            out[i] = fn(i)

    starts = range(0, samples, BATCH)
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            list(ex.map(run_batch, starts))
    else:
        for lo in starts:
            run_batch(lo)
    return out


def route_geodesic(snap):
    """Canonical geodesic over the standard (0,0)->(n,n) route."""
    if snap.kind == "brownian-mesh":
        return max_energy_mesh(snap, (0, 0), (snap.n * snap.m, snap.n), grid_units=True)
    return max_energy_upright(snap, (0, 0), (snap.n, snap.n))


def max_route_overlap(kind, n):
    """Raw overlap of the route geodesic with itself."""
    return float(n) if kind == "brownian-mesh" else float(2 * n + 1)


def _variance_sem(arr):
    """Asymptotic standard error of the sample variance."""
    arr = np.asarray(arr, dtype=np.float64)
    ns = arr.size
    s2 = arr.var(ddof=1)
    m4 = np.mean((arr - arr.mean()) ** 4)
    inner = m4 - s2 * s2 * (ns - 3) / (ns - 1)
    return float(math.sqrt(max(inner, 0.0) / ns))


# -- dynamical variance formula ------------------------------------------------


def check_dynamical_variance(kind, n, m=None, t_grid=None, T_max=20.0, samples=10**4, seed=0, threads=1):
    """Var(M) against the integral of e^{-t} E[overlap(t)] over [0, T_max].

    The right side uses one forward-evolved environment per sample and a
    per-sample trapezoid quadrature; the left side uses an independent block
    of streams. The tail beyond T_max is certified by max_overlap * e^{-T_max}.
    """
    if kind not in ("gaussian", "brownian-mesh"):
        raise HarnessError("dynamical variance formula holds for the Gaussian kinds")
    t_grid = np.asarray(sorted(t_grid), dtype=np.float64)
    if t_grid.size and (t_grid[0] < 0 or t_grid[-1] > T_max):
        raise HarnessError("t_grid must lie inside [0, T_max]")
    tail = max_route_overlap(kind, n) * math.exp(-T_max)

    if t_grid.size < 2:
        return CheckReport(
            "dynamical-variance", None, None, "inconclusive",
            "degenerate quadrature grid", {"t_grid": t_grid.tolist()},
        )

    damp = np.exp(-t_grid)

    def rhs_sample(i):
        env = make_env(kind, n, m=m, seed=seed, stream_id=i)
        snap0 = env.snapshot(0.0)
        _, g0 = route_geodesic(snap0)
        vals = np.empty(t_grid.size)
        for k, t in enumerate(t_grid):
            if t == 0.0:
                vals[k] = max_route_overlap(kind, n)
                continue
            _, gt = route_geodesic(env.snapshot(t))
            vals[k] = overlap_measure(g0, gt).raw_overlap
        return vals

    def lhs_sample(i):
        env = make_env(kind, n, m=m, seed=seed, stream_id=samples + i)
        e, _ = route_geodesic(env.snapshot(0.0))
        return (e,)

    curves = _parallel(rhs_sample, samples, threads, t_grid.size)
    quad = np.trapezoid(damp * curves, t_grid, axis=1)
    energies = _parallel(lhs_sample, samples, threads, 1)[:, 0]

    rhs = Estimate.from_samples(quad, seed)
    var = float(np.var(energies, ddof=1))
    var_sem = _variance_sem(energies)
    combined = math.sqrt(var_sem**2 + rhs.sem**2)
    gap = abs(var - rhs.mean)
    verdict = "pass" if gap <= 3.0 * combined + tail else "fail"

    # quadrature resolution proxy: the mean curve integrated on the full grid
    # versus on every other grid point
    mean_curve = damp * curves.mean(axis=0)
    quad_err = abs(
        float(np.trapezoid(mean_curve, t_grid)) - float(np.trapezoid(mean_curve[::2], t_grid[::2]))
    )
    return CheckReport(
        "dynamical-variance",
        var,
        rhs.mean,
        verdict,
        "|lhs-rhs| <= 3*combined_sem + tail",
        {
            "kind": kind,
            "n": n,
            "m": m,
            "lhs_sem": var_sem,
            "rhs_sem": rhs.sem,
            "tail_bound": tail,
            "relative_gap": gap / var if var else float("inf"),
            "quad_coarse_delta": quad_err,
            "samples": samples,
            "t_grid": t_grid.tolist(),
        },
    )


# -- mean overlap monotonicity --------------------------------------------------


def check_mean_overlap_monotone(kind, n, t_grid, samples, seed, p=0.5, m=None, threads=1):
    """E[overlap(t)] along a common-random-number forward evolution."""
    t_grid = np.asarray(t_grid, dtype=np.float64)
    if (np.diff(t_grid) <= 0).any():
        raise HarnessError("t_grid must be strictly increasing")

    def one(i):
        env = make_env(kind, n, m=m, p=p if kind == "bernoulli" else None, seed=seed, stream_id=i)
        snap0 = env.snapshot(0.0)
        _, g0 = route_geodesic(snap0)
        vals = np.empty(t_grid.size)
        for k, t in enumerate(t_grid):
            if t == 0.0:
                vals[k] = max_route_overlap(kind, n)
                continue
            _, gt = route_geodesic(env.snapshot(t))
            vals[k] = overlap_measure(g0, gt).raw_overlap
        return vals

    vals = _parallel(one, samples, threads, t_grid.size)
    means = vals.mean(axis=0)
    sems = vals.std(axis=0, ddof=1) / math.sqrt(samples)
    diffs = np.diff(means)
    pooled = np.sqrt(sems[1:] ** 2 + sems[:-1] ** 2)
    worst = float((diffs - 3.0 * pooled).max())
    verdict = "pass" if np.all(diffs <= 3.0 * pooled) else "fail"
    return CheckReport(
        "overlap-monotone",
        None,
        None,
        verdict,
        "no consecutive increase beyond 3 pooled standard errors",
        {
            "kind": kind,
            "n": n,
            "t_grid": t_grid.tolist(),
            "means": means.tolist(),
            "sems": sems.tolist(),
            "worst_margin": worst,
            "samples": samples,
        },
    )


# -- weight stability ------------------------------------------------------------


def check_weight_stability(mode, n, m, src=None, dst=None, t_list=(0.1,), samples=10**3, seed=0,
                            threads=1, s1=None, s2=None, x_lo=0.0, x_hi=0.5, nx=4):
    """Fixed mode: E|M^t - M^0|^2 <= 2|x-y|t for an unscaled mesh route.
    Grid mode: measurement of sup over an endpoint grid of h^{-1/3}|Delta^{0,t}|."""
    t_list = sorted(t_list)
    if mode == "fixed":
        (x0, i0), (x1, i1) = src, dst

        def one(i):
            env = make_env("brownian-mesh", n, m=m, seed=seed, stream_id=i)
            e0, _ = max_energy_mesh(env.snapshot(0.0), src, dst)
            out = np.empty(len(t_list))
            for k, t in enumerate(t_list):
                et, _ = max_energy_mesh(env.snapshot(t), src, dst)
                out[k] = (et - e0) ** 2
            return out

        vals = _parallel(one, samples, threads, len(t_list))
        means = vals.mean(axis=0)
        sems = vals.std(axis=0, ddof=1) / math.sqrt(samples)
        bounds = np.array([2.0 * abs(x1 - x0) * t for t in t_list])
        ok = means <= bounds + 3.0 * sems
        return CheckReport(
            "weight-stability-fixed",
            None,
            None,
            "pass" if ok.all() else "fail",
            "E|dM|^2 <= 2|x-y|t + 3 sem at every t",
            {
                "n": n, "m": m, "src": list(src), "dst": list(dst),
                "t_list": list(t_list), "means": means.tolist(),
                "sems": sems.tolist(), "bounds": bounds.tolist(),
                "samples": samples,
            },
        )

    if mode != "grid":
        raise HarnessError(f"unknown stability mode {mode!r}")
    # scaled endpoint grid in the rectangle I x [s1, s2], lower/upper thirds
    if s1 is None or s2 is None:
        raise HarnessError("grid mode needs scaled levels s1 < s2 on the 1/n grid")
    l1, l2 = int(round(s1 * n)), int(round(s2 * n))
    if not (0 <= l1 < l2 <= n):
        raise HarnessError("invalid level pair")
    span = l2 - l1
    h1s = [l for l in range(l1, l1 + span // 3 + 1)]
    h2s = [l for l in range(l2 - span // 3, l2 + 1)]
    xs = np.linspace(x_lo, x_hi, nx)
    n23 = float(n) ** (2.0 / 3.0)
    t = t_list[-1]

    def grid_sup(snap_pair):
        snap0, snapt = snap_pair
        best = 0.0
        for h1 in h1s:
            for x in xs:
                u0 = int(math.ceil((h1 + 2.0 * n23 * x) * m - 1e-9))
                if not 0 <= u0 <= n * m:
                    continue
                for h2 in h2s:
                    h12 = (h2 - h1) / n
                    for y in xs:
                        u1 = int(math.ceil((h2 + 2.0 * n23 * y) * m - 1e-9))
                        if u1 < u0 or not 0 <= u1 <= n * m:
                            continue
                        e0, _ = max_energy_mesh(snap0, (u0, h1), (u1, h2), grid_units=True)
                        et, _ = max_energy_mesh(snapt, (u0, h1), (u1, h2), grid_units=True)
                        # centring cancels in the difference of weights
                        d = abs(et - e0) * 2.0**-0.5 * float(n) ** (-1.0 / 3.0)
                        best = max(best, d * h12 ** (-1.0 / 3.0))
        return best

    def one(i):
        env = make_env("brownian-mesh", n, m=m, seed=seed, stream_id=i)
        snap0 = env.snapshot(0.0)
        snapt = env.snapshot(t)
        return (grid_sup((snap0, snapt)),)

    sups = _parallel(one, samples, threads, 1)[:, 0]
    est = Estimate.from_samples(sups, seed)
    return CheckReport(
        "weight-stability-grid",
        None,
        None,
        "measurement",
        "distribution report only",
        {
            "n": n, "m": m, "t": t, "mean_sup": est.mean, "sem": est.sem,
            "q50": float(np.quantile(sups, 0.5)),
            "q90": float(np.quantile(sups, 0.9)),
            "max": float(sups.max()),
            "samples": samples,
        },
    )


def crude_stability_sup(n, m, t, samples, seed, threads=1):
    """Exact per-sample sup over all zigzags of |Wgt^t - Wgt^0|, vs 4 sqrt(n)."""
    from . import kernels

    c = 2.0**-0.5 * float(n) ** (-1.0 / 3.0)

    def one(i):
        env = make_env("brownian-mesh", n, m=m, seed=seed, stream_id=i)
        snap0 = env.snapshot(0.0)
        snapt = env.snapshot(t)
        diff = np.ascontiguousarray(snapt.values - snap0.values)
        up = kernels.mesh_dp(diff)[-1, -1]
        dn = kernels.mesh_dp(np.ascontiguousarray(-diff))[-1, -1]
        return (c * max(up, dn),)

    sups = _parallel(one, samples, threads, 1)[:, 0]
    bound = 4.0 * math.sqrt(n)
    return CheckReport(
        "crude-stability",
        float(sups.max()),
        bound,
        "pass" if sups.max() <= bound else "fail",
        "sup_zigzags |Wgt^t - Wgt^0| <= 4 sqrt(n)",
        {"n": n, "m": m, "t": t, "violations": int((sups > bound).sum()), "samples": samples},
    )


# -- transition sweep and exponents ----------------------------------------------


def transition_sweep(kind, n_list, tau_grid, samples, seed, p=0.5, m=None, threads=1):
    """Mean scaled overlap at t = tau * n^{-1/3} for each n and tau."""
    tau_grid = np.asarray(sorted(tau_grid), dtype=np.float64)
    if (tau_grid <= 0).any():
        raise HarnessError("tau values must be positive")
    curves = {}
    for n in n_list:
        ts = tau_grid * float(n) ** (-1.0 / 3.0)

        def one(i, n=n, ts=ts):
            env = make_env(kind, n, m=m, p=p if kind == "bernoulli" else None, seed=seed, stream_id=i)
            snap0 = env.snapshot(0.0)
            _, g0 = route_geodesic(snap0)
            vals = np.empty(ts.size)
            for k, t in enumerate(ts):
                _, gt = route_geodesic(env.snapshot(t))
                vals[k] = overlap_measure(g0, gt).scaled_overlap
            return vals

        vals = _parallel(one, samples, threads, tau_grid.size)
        means = vals.mean(axis=0)
        sems = vals.std(axis=0, ddof=1) / math.sqrt(samples)
        curves[n] = (tau_grid, means, sems)
    return curves


def fit_loglog(xs, ys):
    """OLS slope of log(ys) on log(xs)."""
    lx, ly = np.log(np.asarray(xs, dtype=np.float64)), np.log(np.asarray(ys, dtype=np.float64))
    slope, _ = np.polyfit(lx, ly, 1)
    return float(slope)


def exponent_fit(kind, n_list, samples, seed, p=0.5, threads=1, n_boot=1000, fit_count=4):
    """Transversal-fluctuation and weight-sd exponents with bootstrap CIs.

    The fits use the largest `fit_count` lattice sizes to reduce
    finite-size bias; bootstrap resamples the per-n sample arrays.
    """
    n_list = sorted(n_list)
    if len(n_list) < 4 or n_list[-1] < 10 * n_list[0]:
        raise HarnessError("need >= 4 sizes spanning at least one decade")
    flucs, energies = {}, {}
    for n in n_list:

        def one(i, n=n):
            env = make_env(kind, n, p=p if kind == "bernoulli" else None, seed=seed, stream_id=i)
            e, g = route_geodesic(env.snapshot(0.0))
            return (geometry_stats(g)["max_fluc"], e)

        vals = _parallel(one, samples, threads, 2)
        flucs[n], energies[n] = vals[:, 0], vals[:, 1]

    fit_ns = n_list[-fit_count:]
    chi_t = fit_loglog(fit_ns, [flucs[n].mean() for n in fit_ns])
    chi_w = fit_loglog(fit_ns, [energies[n].std(ddof=1) for n in fit_ns])

    boot_t = np.empty(n_boot)
    boot_w = np.empty(n_boot)
    gens = {n: substream(seed, n, "harness.bootstrap") for n in fit_ns}
    for b in range(n_boot):
        mt, mw = [], []
        for n in fit_ns:
            idx = gens[n].integers(0, samples, samples)
            mt.append(flucs[n][idx].mean())
            mw.append(energies[n][idx].std(ddof=1))
        boot_t[b] = fit_loglog(fit_ns, mt)
        boot_w[b] = fit_loglog(fit_ns, mw)

    return {
        "chi_transversal": (chi_t, float(np.quantile(boot_t, 0.025)), float(np.quantile(boot_t, 0.975))),
        "chi_weight": (chi_w, float(np.quantile(boot_w, 0.025)), float(np.quantile(boot_w, 0.975))),
        "mean_fluc": {n: float(flucs[n].mean()) for n in n_list},
        "sd_energy": {n: float(energies[n].std(ddof=1)) for n in n_list},
        "fit_ns": fit_ns,
    }


# -- twin peaks and deficit -------------------------------------------------------


def twin_peaks_and_deficit(n, m, a, sigma_list, samples, seed, window=(1.0, 2.0),
                           annulus=None, beta1=0.1, beta=0.5, threads=1):
    """P(near-maximiser at distance in `window` rivalling the peak within
    sigma * sqrt(distance)), plus the empirical law of the level deficit."""
    from .lpp import routed_profile_grid

    ia = int(round(a * n))
    if abs(a * n - ia) > 1e-9 or not 1 <= ia <= n - 1:
        raise HarnessError(f"level {a} must be interior and on the 1/n grid")
    sigma_list = list(sigma_list)
    w_lo, w_hi = window
    step = 0.5 * float(n) ** (-2.0 / 3.0) / m
    if step > (w_hi - w_lo) / 50.0:
        raise HarnessError("profile grid too coarse for the twin-peaks window")
    if annulus is None:
        annulus = (
            beta1 / 8.0 * float(n) ** (-2.0 / 3.0),
            float(n) ** (-2.0 / 3.0 + 2.0 * beta / 3.0) * math.log(n) ** (1.0 / 3.0),
        )
    us = np.arange(n * m + 1)
    xs = 0.5 * (us / m - ia) * float(n) ** (-2.0 / 3.0)
    width = len(sigma_list) + 1

    def one(i):
        env = make_env("brownian-mesh", n, m=m, seed=seed, stream_id=i)
        snap = env.snapshot(0.0)
        z = routed_profile_grid(snap, ia, us)
        kmax = int(np.argmax(z))
        zmax = z[kmax]
        dist = np.abs(xs - xs[kmax])
        in_window = (dist >= w_lo) & (dist <= w_hi)
        out = np.empty(width)
        for j, sig in enumerate(sigma_list):
            rival = z + sig * np.sqrt(dist) >= zmax
            out[j] = 1.0 if np.any(rival & in_window) else 0.0
        ann = (dist >= annulus[0]) & (dist <= annulus[1])
        out[-1] = zmax - z[ann].max() if ann.any() else np.nan
        return out

    vals = _parallel(one, samples, threads, width)
    probs = vals[:, :-1].mean(axis=0)
    sems = vals[:, :-1].std(axis=0, ddof=1) / math.sqrt(samples)
    deficits = vals[:, -1]
    deficits = deficits[~np.isnan(deficits)]
    return {
        "sigma": sigma_list,
        "prob": probs.tolist(),
        "sem": sems.tolist(),
        "deficit_quantiles": {
            q: float(np.quantile(deficits, q)) for q in (0.1, 0.25, 0.5, 0.75, 0.9)
        } if deficits.size else {},
        "deficit_samples": deficits,
        "window": [w_lo, w_hi],
        "annulus": [float(annulus[0]), float(annulus[1])],
        "samples": samples,
    }


# -- refinement / coupling checks -------------------------------------------------


def _oscillation(fine_values, group):
    """Max over levels and coarse cells of the prefix-sum oscillation."""
    nlev, ne = fine_values.shape
    cells = fine_values.reshape(nlev, ne // group, group)
    prefix = np.cumsum(cells, axis=2)
    hi = np.maximum(prefix.max(axis=2), 0.0)
    lo = np.minimum(prefix.min(axis=2), 0.0)
    return float((hi - lo).max())


def refinement_check(n, m_list, samples, seed, threads=1):
    """Coupled coarsenings: M[m] <= M[2m] and M[max] - M[m] <= 2n Osc(m), exactly."""
    m_list = sorted(m_list)
    for a, b in zip(m_list, m_list[1:]):
        if b != 2 * a:
            raise HarnessError(f"m_list must be a dyadic chain, got {m_list}")
    m_fine = m_list[-1]

    def one(i):
        env = make_env("brownian-mesh", n, m=m_fine, seed=seed, stream_id=i)
        snap = env.snapshot(0.0)
        snaps = {m_fine: snap}
        for mm in reversed(m_list[:-1]):
            snap = coarsen_mesh(snap, 2)
            snaps[mm] = snap
        energies = []
        oscs = []
        for mm in m_list:
            e, _ = max_energy_mesh(snaps[mm], (0, 0), (n * mm, n), grid_units=True)
            energies.append(e)
            oscs.append(_oscillation(snaps[m_fine].values, m_fine // mm))
        mono = all(e1 <= e2 + 1e-12 for e1, e2 in zip(energies, energies[1:]))
        oscok = all(
            energies[-1] - e <= 2.0 * n * osc + 1e-12 for e, osc in zip(energies, oscs)
        )
        return (1.0 if mono else 0.0, 1.0 if oscok else 0.0)

    vals = _parallel(one, samples, threads, 2)
    mono_ok = int(vals[:, 0].sum())
    osc_ok = int(vals[:, 1].sum())
    verdict = "pass" if mono_ok == samples and osc_ok == samples else "fail"
    return CheckReport(
        "refinement",
        None,
        None,
        verdict,
        "exact per-instance inequalities",
        {
            "n": n, "m_list": list(m_list), "samples": samples,
            "monotone_ok": mono_ok, "oscillation_ok": osc_ok,
        },
    )


# -- excursion additivity ----------------------------------------------------------


def _leg_energy(snap, rec, departures):
    """Field sum along one excursion leg, from divergence to reconvergence."""
    b, f = rec.b_idx, rec.f_idx
    vals = snap.values
    parts = []
    # level b: from the divergence point to this leg's departure
    parts.append(math.fsum(vals[b, int(rec.x_div) : int(departures[b])]))
    for lev in range(b + 1, f):
        parts.append(math.fsum(vals[lev, int(departures[lev - 1]) : int(departures[lev])]))
    # level f: from this leg's entry to the reconvergence point
    parts.append(math.fsum(vals[f, int(departures[f - 1]) : int(rec.x_conv)]))
    return math.fsum(parts)


def excursion_additivity_check(n, m, t, samples, seed, threads=1, tol=1e-9):
    """Exact leg-sum identity and the routed-profile inequality per instance."""
    from .lpp import routed_profile_grid

    c = 2.0**-0.5 * float(n) ** (-1.0 / 3.0)

    def one(i):
        env = make_env("brownian-mesh", n, m=m, seed=seed, stream_id=i)
        snap0 = env.snapshot(0.0)
        snapt = env.snapshot(t)
        _, rho0 = route_geodesic(snap0)
        _, rhot = route_geodesic(snapt)
        excs = excursion_decompose(rho0, rhot)
        lhs = c * (path_energy(snap0, rho0) - path_energy(snap0, rhot))
        legsum = c * math.fsum(
            _leg_energy(snap0, rec, rho0.departures) - _leg_energy(snap0, rec, rhot.departures)
            for rec in excs
        )
        tables = mesh_energy_tables(snap0)
        zsum = 0.0
        for rec in excs:
            y = rec.b_idx
            z_pair = routed_profile_grid(
                snap0, y, np.array([rho0.departures[y], rhot.departures[y]]), tables=tables
            )
            zsum += z_pair[0] - z_pair[1]
        return (abs(lhs - legsum), lhs - zsum, float(len(excs)))

    vals = _parallel(one, samples, threads, 3)
    identity_ok = int((vals[:, 0] <= tol).sum())
    inequality_ok = int((vals[:, 1] >= -tol).sum())
    verdict = "pass" if identity_ok == samples and inequality_ok == samples else "fail"
    return CheckReport(
        "excursion-additivity",
        None,
        None,
        verdict,
        f"identity to {tol}; inequality never violated",
        {
            "n": n, "m": m, "t": t, "samples": samples,
            "identity_ok": identity_ok, "inequality_ok": inequality_ok,
            "max_identity_gap": float(vals[:, 0].max()),
            "min_inequality_slack": float(vals[:, 1].min()),
            "mean_excursions": float(vals[:, 2].mean()),
        },
    )


# -- cross-module spectral consistency ----------------------------------------------


def mc_two_time_covariance(n, t, samples, seed, p=0.5, threads=1):
    """Monte Carlo Cov(M^0, M^t) for Bernoulli LPP on the (n+1)^2 lattice."""

    def one(i):
        env = make_env("bernoulli", n, p=p, seed=seed, stream_id=i)
        e0, _ = route_geodesic(env.snapshot(0.0))
        et, _ = route_geodesic(env.snapshot(t))
        return (e0, et)

    vals = _parallel(one, samples, threads, 2)
    m0, mt = vals[:, 0].mean(), vals[:, 1].mean()
    prods = (vals[:, 0] - m0) * (vals[:, 1] - mt)
    ns = samples
    cov = float(prods.sum() / (ns - 1))
    sem = float(prods.std(ddof=1) / math.sqrt(ns))
    return Estimate(cov, sem, ns, seed)


# -- plain simulation ---------------------------------------------------------------


def simulate(kind, n, t_grid, samples, seed, p=0.5, m=None, threads=1):
    """Mean geodesic energy and mean overlap with time zero at each time."""
    t_grid = np.asarray(t_grid, dtype=np.float64)

    def one(i):
        env = make_env(kind, n, m=m, p=p if kind == "bernoulli" else None, seed=seed, stream_id=i)
        snap0 = env.snapshot(0.0)
        _, g0 = route_geodesic(snap0)
        out = np.empty(2 * t_grid.size)
        for k, t in enumerate(t_grid):
            e, gt = route_geodesic(env.snapshot(t)) if t > 0 else (g0.energy, g0)
            out[2 * k] = e
            out[2 * k + 1] = overlap_measure(g0, gt).scaled_overlap
        return out

    vals = _parallel(one, samples, threads, 2 * t_grid.size)
    rows = []
    for k, t in enumerate(t_grid):
        rows.append(
            {
                "t": float(t),
                "energy": Estimate.from_samples(vals[:, 2 * k], seed),
                "overlap": Estimate.from_samples(vals[:, 2 * k + 1], seed),
            }
        )
    return rows
