"""Exact Fourier-Walsh analysis of functions on tiny Boolean lattices.

Functions f: {0,1}^cells -> R are stored as flat arrays of length 2^N with
bit i of the configuration index giving cell i's value. The character basis
is chi_S(omega) = prod_{i in S} (2 omega_i - 1) at bit probability 1/2;
subsets S are bitmasks. The fast transform is the per-bit butterfly; a naive
O(4^N) transform is kept as a testing oracle.
"""

from dataclasses import dataclass, field

import numpy as np

from .lpp import max_energy_upright
from .noise import FieldSnapshot

MAX_CELLS = 20


class SpectralError(ValueError):
    pass


@dataclass
class SpectralTable:
    n_bits: int
    alpha: np.ndarray = field(repr=False)
    variance: float = 0.0
    p: float = 0.5

    @property
    def mean(self):
        return float(self.alpha[0])


@dataclass
class SpectralSampleLaw:
    n_bits: int
    probabilities: np.ndarray = field(repr=False)  # indexed by mask, entry 0 is 0

    def mean_size(self):
        sizes = popcount(np.arange(self.probabilities.size))
        return float(np.dot(self.probabilities, sizes))


def popcount(masks):
    masks = np.asarray(masks, dtype=np.uint64)
    out = np.zeros(masks.shape, dtype=np.int64)
    work = masks.copy()
    while work.any():
        out += (work & 1).astype(np.int64)
        work >>= 1
    return out


def _check_size(f):
    f = np.asarray(f, dtype=np.float64)
    size = f.size
    n_bits = size.bit_length() - 1
    if 2**n_bits != size:
        raise SpectralError(f"table length {size} is not a power of two")
    if n_bits > MAX_CELLS:
        raise SpectralError(f"lattice too large: {n_bits} cells > {MAX_CELLS}")
    return f, n_bits


def fourier_walsh(f) -> SpectralTable:
    """alpha(S) = 2^{-N} sum_omega f(omega) chi_S(omega), via the butterfly."""
    f, n_bits = _check_size(f)
    a = f.copy()
    for bit in range(n_bits):
        a = a.reshape(-1, 2, 2**bit)
        lo = a[:, 0, :].copy()
        hi = a[:, 1, :]
        a[:, 0, :] = lo + hi
        a[:, 1, :] = hi - lo
        a = a.reshape(-1)
    alpha = a / 2**n_bits
    variance = float(np.dot(alpha[1:], alpha[1:]))
    return SpectralTable(n_bits, alpha, variance)


def fourier_walsh_naive(f) -> SpectralTable:
    """O(4^N) direct inner products (testing oracle)."""
    f, n_bits = _check_size(f)
    if n_bits > 13:
        raise SpectralError("naive transform capped at 13 cells")
    size = f.size
    omegas = np.arange(size, dtype=np.uint64)
    alpha = np.empty(size)
    for S in range(size):
        chi = 1.0 - 2.0 * (popcount(omegas & np.uint64(S)) % 2)
        alpha[S] = np.dot(f, chi) / size
    variance = float(np.dot(alpha[1:], alpha[1:]))
    return SpectralTable(n_bits, alpha, variance)


def reconstruct(table: SpectralTable) -> np.ndarray:
    """Invert the transform: f(omega) = sum_S alpha(S) chi_S(omega)."""
    a = table.alpha.copy()
    for bit in range(table.n_bits):
        a = a.reshape(-1, 2, 2**bit)
        lo = a[:, 0, :].copy()
        hi = a[:, 1, :]
        a[:, 0, :] = lo - hi
        a[:, 1, :] = lo + hi
        a = a.reshape(-1)
    return a


def two_time_covariance(table: SpectralTable, t) -> float:
    """Cov(f at time 0, f at time t) = sum_{S nonempty} alpha(S)^2 e^{-t|S|}."""
    if t < 0:
        raise SpectralError(f"time must be nonnegative, got {t}")
    sizes = popcount(np.arange(table.alpha.size))
    weights = np.exp(-t * sizes)
    sq = table.alpha**2
    return float(np.dot(sq[1:], weights[1:]))


def spectral_sample_law(table: SpectralTable) -> SpectralSampleLaw:
    if table.variance <= 0:
        raise SpectralError("zero-variance function has no spectral sample")
    probs = table.alpha**2 / table.variance
    probs[0] = 0.0
    return SpectralSampleLaw(table.n_bits, probs)


@dataclass
class InfluenceReport:
    per_cell: np.ndarray
    total: float
    mean_spectral_size: float | None


def influence_sum(f) -> InfluenceReport:
    """E(f - f[v])^2 for each cell v, their sum, and E_Q|S| = sum/(4 Var)."""
    f, n_bits = _check_size(f)
    per_cell = np.empty(n_bits)
    for v in range(n_bits):
        flipped = f.reshape(-1, 2, 2**v)[:, ::-1, :].reshape(-1)
        per_cell[v] = np.mean((f - flipped) ** 2)
    total = float(per_cell.sum())
    var = float(np.var(f))
    mean_size = total / (4.0 * var) if var > 0 else None
    return InfluenceReport(per_cell, total, mean_size)


def dynamics_kernel_matrix(n_bits, t):
    """Exact two-time transition matrix K[omega, omega'] of the bit-resampling
    dynamics at bit probability 1/2 (testing oracle; capped for memory)."""
    if n_bits > 13:
        raise SpectralError("dense kernel capped at 13 cells")
    keep = np.exp(-t)
    single = np.array([[keep + (1 - keep) / 2, (1 - keep) / 2], [(1 - keep) / 2, keep + (1 - keep) / 2]])
    K = np.array([[1.0]])
    for _ in range(n_bits):
        K = np.kron(single, K)
    return K


def _apply_kernel(f, n_bits, t):
    """g(omega) = E[f(omega_t) | omega_0 = omega], by per-bit contraction."""
    keep = np.exp(-t)
    single = np.array([[keep + (1 - keep) / 2, (1 - keep) / 2], [(1 - keep) / 2, keep + (1 - keep) / 2]])
    g = f.copy()
    for bit in range(n_bits):
        g = g.reshape(-1, 2, 2**bit)
        lo = g[:, 0, :].copy()
        hi = g[:, 1, :].copy()
        g[:, 0, :] = single[0, 0] * lo + single[0, 1] * hi
        g[:, 1, :] = single[1, 0] * lo + single[1, 1] * hi
        g = g.reshape(-1)
    return g


def stability_bound_check(f, t):
    """lhs = E(f^0 - f^t)^2 by exact enumeration of the dynamics; rhs from the
    spectrum as 2 Var (1 - E_Q e^{-t|S|}). The two must agree."""
    f, n_bits = _check_size(f)
    if t < 0:
        raise SpectralError(f"time must be nonnegative, got {t}")
    g = _apply_kernel(f, n_bits, t)
    lhs = float(2.0 * (np.mean(f * f) - np.mean(f * g)))
    table = fourier_walsh(f)
    if table.variance <= 0:
        raise SpectralError("zero-variance function")
    law = spectral_sample_law(table)
    sizes = popcount(np.arange(f.size))
    expq = float(np.dot(law.probabilities, np.exp(-t * sizes)))
    rhs = 2.0 * table.variance * (1.0 - expq)
    return {"lhs": lhs, "rhs": rhs}


def energy_table(n, src=None, dst=None):
    """Bernoulli LPP maximum energy M as a function table on {0,1}^{(n+1)^2}.

    Cell index runs row-major over the (n+1)x(n+1) vertex lattice; bit i of
    the configuration index is the value at vertex (i % (n+1), i // (n+1)).
    """
    cells = (n + 1) ** 2
    if cells > MAX_CELLS:
        raise SpectralError(f"lattice too large: {cells} cells > {MAX_CELLS}")
    src = src or (0, 0)
    dst = dst or (n, n)
    size = 2**cells
    f = np.empty(size)
    bits = np.arange(cells)
    for omega in range(size):
        values = ((omega >> bits) & 1).reshape(n + 1, n + 1).astype(np.int64)
        snap = FieldSnapshot("bernoulli", n, None, 0.0, values)
        f[omega], _ = max_energy_upright(snap, src, dst)
    return f
