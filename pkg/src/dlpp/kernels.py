"""Dynamic-programming kernels for the two LPP lattices.

Conventions shared by both backends:

* ``w`` is a dense weight table with rows indexed by level (vertical
  coordinate, bottom row first) and columns by horizontal coordinate.
* upright lattice: ``w[i, j]`` is the vertex value at ``(j, i)``; paths step
  east ``(j+1, i)`` or north ``(j, i+1)`` and collect vertex values,
  endpoints included.
* east-north mesh: ``w[i, u]`` is the increment on the horizontal edge from
  grid point ``u`` to ``u+1`` at level ``i``; north steps are free.
* Backtracking returns the per-level departure coordinate of the canonical
  (uppermost-leftmost) geodesic: on a tie between predecessors the west one
  is preferred, which makes the forward path take north steps as early as
  possible.

The numba and numpy implementations are interchangeable up to float rounding
(the numpy row recurrence uses prefix sums); integer fields agree exactly.
"""

import numpy as np

from .backend import HAS_NUMBA


def _upright_dp_py(w):
    nlev, nx = w.shape
    G = np.empty((nlev, nx), dtype=w.dtype)
    for i in range(nlev):
        for j in range(nx):
            best = 0 * w[0, 0]
            if i > 0 and j > 0:
                best = max(G[i - 1, j], G[i, j - 1])
            elif i > 0:
                best = G[i - 1, j]
            elif j > 0:
                best = G[i, j - 1]
            G[i, j] = w[i, j] + best
    return G


def _upright_backtrack_py(G, w):
    nlev, nx = G.shape
    z = np.empty(nlev, dtype=np.int64)
    i, j = nlev - 1, nx - 1
    z[i] = j
    while i > 0 or j > 0:
        if j > 0 and (i == 0 or G[i, j - 1] >= G[i - 1, j]):
            j -= 1
        else:
            i -= 1
            z[i] = j
    return z


def _mesh_dp_py(w):
    nlev, ne = w.shape
    G = np.zeros((nlev, ne + 1), dtype=np.float64)
    for u in range(1, ne + 1):
        G[0, u] = G[0, u - 1] + w[0, u - 1]
    for i in range(1, nlev):
        G[i, 0] = G[i - 1, 0]
        for u in range(1, ne + 1):
            east = G[i, u - 1] + w[i, u - 1]
            north = G[i - 1, u]
            G[i, u] = east if east > north else north
    return G


def _mesh_backtrack_py(G, w):
    nlev, nu = G.shape
    z = np.empty(nlev, dtype=np.int64)
    i, u = nlev - 1, nu - 1
    z[i] = u
    while i > 0 or u > 0:
        if u > 0 and (i == 0 or G[i, u - 1] + w[i, u - 1] >= G[i - 1, u]):
            u -= 1
        else:
            i -= 1
            z[i] = u
    return z


def _upright_dp_np(w):
    """Row recurrence via prefix sums: G[i,j] = P[j] + cummax(G[i-1,k] - P[k-1])."""
    nlev = w.shape[0]
    G = np.empty(w.shape, dtype=np.int64 if w.dtype.kind in "iub" else np.float64)
    G[0] = np.cumsum(w[0])
    for i in range(1, nlev):
        P = np.cumsum(w[i])
        G[i] = P + np.maximum.accumulate(G[i - 1] - (P - w[i]))
    return G


def _mesh_dp_np(w):
    nlev, ne = w.shape
    G = np.empty((nlev, ne + 1), dtype=np.float64)
    Q = np.zeros(ne + 1, dtype=np.float64)
    np.cumsum(w[0], out=Q[1:])
    G[0] = Q
    for i in range(1, nlev):
        np.cumsum(w[i], out=Q[1:])
        G[i] = Q + np.maximum.accumulate(G[i - 1] - Q)
    return G


if HAS_NUMBA:
    from numba import njit

    upright_dp = njit(cache=True, nogil=True)(_upright_dp_py)
    upright_backtrack = njit(cache=True, nogil=True)(_upright_backtrack_py)
    mesh_dp = njit(cache=True, nogil=True)(_mesh_dp_py)
    mesh_backtrack = njit(cache=True, nogil=True)(_mesh_backtrack_py)
else:
    upright_dp = _upright_dp_np
    upright_backtrack = _upright_backtrack_py
    mesh_dp = _mesh_dp_np
    mesh_backtrack = _mesh_backtrack_py
