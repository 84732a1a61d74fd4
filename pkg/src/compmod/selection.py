"""Greedy exclusion of codewords that sit in minimum-rank pairs.

For diagonal codewords the rank of ``X_i - X_j`` is simply the number of
subcarriers on which the two codewords differ, so the rank matrix is a
pairwise Hamming distance over complex entries.
"""

from __future__ import annotations

import numpy as np

from .codebook import Codebook

__all__ = ["rank_matrix", "cull", "min_rank_pair_stats", "DIFF_TOL"]

DIFF_TOL = 1e-9


def rank_matrix(cb_or_symbols, tol: float = DIFF_TOL, block: int = 256) -> np.ndarray:
    """``Z[i, j] = rank(diag(x_i) - diag(x_j))``, as an ``(L, L)`` int8 array."""
    x = getattr(cb_or_symbols, "symbols", cb_or_symbols)
    x = np.asarray(x, dtype=complex)
    L, N = x.shape
    if N > np.iinfo(np.int8).max:
        raise ValueError("too many subcarriers for an int8 rank matrix")
    # snap each subcarrier's symbols onto a tol grid and compare integer codes
    grid = np.round(np.stack([x.real, x.imag], axis=-1) / tol)
    codes = np.empty((L, N), dtype=np.int64)
    for n in range(N):
        codes[:, n] = np.unique(grid[:, n], axis=0, return_inverse=True)[1].ravel()
    Z = np.zeros((L, L), dtype=np.int8)
    for start in range(0, L, block):
        rows = codes[start:start + block]
        for n in range(N):
            Z[start:start + block] += rows[:, None, n] != codes[None, :, n]
    return Z


def min_rank_pair_stats(Z: np.ndarray) -> tuple[int, int]:
    """Minimum nonzero rank and the number of unordered pairs attaining it."""
    iu = np.triu_indices(Z.shape[0], k=1)
    v = Z[iu]
    v = v[v > 0]
    if v.size == 0:
        return 0, 0
    z_min = int(v.min())
    return z_min, int(np.count_nonzero(v == z_min))


def _cull_indices(Z: np.ndarray, target: int) -> np.ndarray:
    """Indices (ascending) of the codewords that survive culling to ``target``.

    ``hist[i, z]`` tracks how many surviving codewords sit at rank ``z`` from
    codeword ``i``; deleting a codeword only touches one column per row, so
    each iteration is O(L) instead of rescanning the whole matrix.
    """
    L = Z.shape[0]
    n_levels = int(Z.max()) + 1
    hist = np.stack([(Z == z).sum(axis=1) for z in range(n_levels)], axis=1).astype(np.int64)
    # ordered pairs of survivors at each rank
    totals = hist[:, 1:].sum(axis=0)
    alive = np.ones(L, dtype=bool)
    n_alive = L
    while n_alive > target:
        nz = np.flatnonzero(totals)
        if nz.size == 0:
            raise RuntimeError("no codeword pairs left to cull")
        z_min = int(nz[0]) + 1
        r = np.where(alive, hist[:, z_min], -1)
        k = int(np.argmax(r))
        totals -= 2 * hist[k, 1:]
        alive[k] = False
        n_alive -= 1
        idx = np.flatnonzero(alive)
        hist[idx, Z[k, idx]] -= 1
    return np.flatnonzero(alive)


def cull(cb: Codebook, R_bits: int, Z: np.ndarray | None = None) -> Codebook:
    """Cull ``cb`` down to ``2**R_bits`` codewords.

    Each pass finds the smallest nonzero rank ``z_min`` among surviving
    pairs, counts for every codeword how many partners sit at ``z_min`` and
    removes the codeword with the largest count (lowest index on ties).
    Survivors keep their symbols and are relabelled ``0 .. 2**R_bits - 1`` in
    the order of their original labels.
    """
    if int(R_bits) != R_bits or R_bits < 1:
        raise ValueError(f"target bits must be a positive integer, got {R_bits}")
    if R_bits >= cb.f:
        raise ValueError(f"target bits {R_bits} must be below the codebook's {cb.f} bits")
    if Z is None:
        Z = rank_matrix(cb)
    keep = _cull_indices(Z, 1 << int(R_bits))
    return Codebook(
        cb.scheme,
        dict(cb.params, cull_bits=int(R_bits)),
        cb.symbols[keep].copy(),
        cb.levels[keep].copy(),
        cb.orders[keep].copy(),
        cb.pattern_rank[keep].copy(),
        quanta=cb.quanta,
        E_T=cb.E_T,
        f=int(R_bits),
        source_labels=cb.source_labels[keep].copy(),
        culled=True,
    )
