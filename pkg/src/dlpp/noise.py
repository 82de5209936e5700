"""Dynamical noise environments.

Four environment kinds, all stationary Markov processes queried at
non-decreasing dynamic times:

* ``bernoulli``: i.i.d. Bernoulli(p) bits on the vertices of the (n+1)x(n+1)
  lattice, each resampled at the rings of a unit-rate Poisson clock. Between
  two query times separated by dt, a cell keeps its value with probability
  exp(-dt) and is otherwise redrawn fresh, which has the same law as playing
  out any number of clock rings.
* ``uniform``: U[0,1) vertex values under the same Poisson-clock resampling.
* ``gaussian``: standard Gaussian vertex values under stationary
  Ornstein-Uhlenbeck dynamics, X(t) = exp(-dt) X(0) + sqrt(1-exp(-2dt)) Z.
* ``brownian-mesh``: Gaussian increments of variance 1/m attached to the
  horizontal edges of the m-lattice over n levels (the discrete approximant
  of a Brownian environment), each edge evolving by the same OU transition
  with stationary deviation 1/sqrt(m).

Multi-time queries apply the exact Markov transition between consecutive
query times; no event-level clock simulation is performed, since only the
finite-dimensional marginals enter any downstream quantity.
"""

from dataclasses import dataclass, field

import numpy as np

from .rng import scale_stream_id, substream

KINDS = ("bernoulli", "uniform", "gaussian", "brownian-mesh")


class NoiseError(ValueError):
    """Invalid environment parameters or an out-of-order time query."""


@dataclass(frozen=True)
class FieldSnapshot:
    """Immutable capture of an environment's field at one dynamic time.

    ``values`` has shape (n+1, n+1) for the lattice kinds, indexed
    [level, x], and shape (n+1, n*m) for the mesh kind, indexed
    [level, edge] with edge u covering [u/m, (u+1)/m].
    """

    kind: str
    n: int
    m: int | None
    t: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values.setflags(write=False)


class DynEnv:
    """A seeded, forward-evolvable noise environment.

    Single-owner: evolve one env from one thread. Distinct (seed, stream_id)
    pairs are independent and may run concurrently. Snapshots at equal times
    under equal seeds are bit-identical across runs.
    """

    def __init__(self, kind, n, m=None, p=None, seed=0, stream_id=0):
        if kind not in KINDS:
            raise NoiseError(f"unknown noise kind {kind!r}")
        if n < 1:
            raise NoiseError(f"lattice size must be >= 1, got n={n}")
        if kind == "brownian-mesh":
            if m is None or m < 1:
                raise NoiseError(f"mesh kind needs density m >= 1, got m={m}")
        elif m is not None:
            raise NoiseError(f"kind {kind!r} does not take a mesh density")
        if kind == "bernoulli":
            if p is None or not 0.0 < p < 1.0:
                raise NoiseError(f"bernoulli kind needs p in (0,1), got p={p}")
        elif p is not None:
            raise NoiseError(f"kind {kind!r} does not take a bit probability")

        self.kind = kind
        self.n = int(n)
        self.m = int(m) if m is not None else None
        self.p = float(p) if p is not None else None
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self.clock = 0.0
        self._transition = 0
        self.state = self._draw_initial()

    # -- internals ---------------------------------------------------------

    def _gen(self):
        g = substream(self.seed, self.stream_id, f"noise.{self.kind}", self._transition)
        self._transition += 1
        return g

    def _shape(self):
        if self.kind == "brownian-mesh":
            return (self.n + 1, self.n * self.m)
        return (self.n + 1, self.n + 1)

    def _draw_initial(self):
        g = self._gen()
        shape = self._shape()
        if self.kind == "bernoulli":
            return (g.random(shape) < self.p).astype(np.int64)
        if self.kind == "uniform":
            return g.random(shape)
        if self.kind == "gaussian":
            return g.standard_normal(shape)
        return g.standard_normal(shape) / np.sqrt(self.m)

    def _advance(self, dt):
        g = self._gen()
        shape = self._shape()
        if self.kind in ("bernoulli", "uniform"):
            # Both arrays are always drawn so the stream layout is fixed.
            refresh = g.random(shape) >= np.exp(-dt)
            fresh_u = g.random(shape)
            if self.kind == "bernoulli":
                fresh = (fresh_u < self.p).astype(np.int64)
            else:
                fresh = fresh_u
            self.state = np.where(refresh, fresh, self.state)
        else:
            sigma = 1.0 if self.kind == "gaussian" else 1.0 / np.sqrt(self.m)
            decay = np.exp(-dt)
            self.state = decay * self.state + sigma * np.sqrt(1.0 - decay**2) * g.standard_normal(shape)

    # -- public ------------------------------------------------------------

    def snapshot(self, t):
        """Advance the environment to time t >= clock and capture the field."""
        if t < self.clock:
            raise NoiseError(f"time regression: clock at {self.clock}, asked for {t}")
        if t > self.clock:
            self._advance(t - self.clock)
            self.clock = float(t)
        return FieldSnapshot(self.kind, self.n, self.m, self.clock, self.state.copy())


def make_env(kind, n, m=None, p=None, seed=0, stream_id=0) -> DynEnv:
    """Construct an environment at clock 0 with its stationary initial field."""
    return DynEnv(kind, n, m=m, p=p, seed=seed, stream_id=stream_id)


# -- Ornstein-Uhlenbeck flow on two-sided Brownian motion --------------------

_COARSE_VAR_TOL = 1e-6
_MAX_COEFFS = 10**8


def _tent_value(x, j):
    """Value at x of the scale-j tent anchored on the dyadic interval containing x."""
    length = 2.0 ** (-j)
    k = np.floor(x / length)
    a = k * length
    return 2.0 ** (j / 2.0) * np.minimum(x - a, a + length - x)


def sample_dyadic_ou(xs, ts, j_max, seed, samples=1):
    """OU-evolved two-sided Brownian motion via its dyadic tent expansion.

    Returns an array of shape (samples, len(xs), len(ts)) holding
    W(x, t) = sum_I zeta_I(t) f_I(x), where the zeta_I are independent
    standard OU processes and f_I the tent functions of dyadic intervals
    with scale j in [-j_outer, j_max]. The omitted coarse scales contribute
    less than 1e-6 variance at the largest |x| requested; j_outer is derived
    from that bound, not fixed.
    """
    xs = np.asarray(xs, dtype=np.float64)
    ts = np.asarray(ts, dtype=np.float64)
    if j_max < 0:
        raise NoiseError(f"j_max must be >= 0, got {j_max}")
    if ts.size and (np.diff(ts) < 0).any():
        raise NoiseError("query times must be non-decreasing")

    xmax = float(np.max(np.abs(xs))) if xs.size else 0.0
    if xmax == 0.0:
        j_outer = 0
    else:
        # Coarse scales j <= -j_outer-1 contribute sum 2^j x^2 = x^2 2^{-j_outer}.
        j_outer = max(0, int(np.ceil(2.0 * np.log2(xmax) + np.log2(1.0 / _COARSE_VAR_TOL))))
    if xs.size * (j_max + j_outer + 1) > _MAX_COEFFS:
        raise NoiseError("requested range/j_max needs too many dyadic coefficients")

    out = np.zeros((samples, xs.size, ts.size))
    decays = None
    if ts.size:
        dts = np.diff(np.concatenate([[0.0], ts]))
        decays = np.exp(-dts)
    for j in range(-j_outer, j_max + 1):
        length = 2.0 ** (-j)
        ks = np.floor(xs / length).astype(np.int64)
        tents = _tent_value(xs, j)
        for k in np.unique(ks):
            sel = ks == k
            if not np.any(tents[sel] != 0.0):
                continue
            sid = scale_stream_id(j, int(k))
            zeta = substream(seed, sid, "noise.dyadic", 0).standard_normal(samples)
            for ti in range(ts.size):
                d = decays[ti]
                if d != 1.0:
                    fresh = substream(seed, sid, "noise.dyadic", ti + 1).standard_normal(samples)
                    zeta = d * zeta + np.sqrt(1.0 - d * d) * fresh
                out[:, sel, ti] += np.outer(zeta, tents[sel])
    return out
