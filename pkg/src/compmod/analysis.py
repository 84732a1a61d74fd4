"""Pairwise error probabilities and the union bound on average BER.

All codewords are diagonal matrices, so ``A = (X_i - X_j)^H (X_i - X_j)`` is
diagonal with entries ``delta_n^2 = |x_{i,n} - x_{j,n}|^2`` and every
Rayleigh-averaged determinant collapses to a product over subcarriers,
evaluated here as a sum of ``log1p`` terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from .codebook import Codebook

__all__ = [
    "PairwiseStats",
    "pairwise_stats",
    "pep_approx",
    "pep_exact",
    "PairSpectrum",
    "pair_spectrum",
    "union_bound_ber",
    "union_bound_ber_direct",
    "bound_crossing_snr",
    "snr_db_to_n0",
    "rayleigh_bpsk_ber",
]


@dataclass(frozen=True)
class PairwiseStats:
    """Squared per-subcarrier distances and bit distance of one codeword pair."""

    delta_sq: np.ndarray
    bit_distance: int


def pairwise_stats(cb: Codebook, i: int, j: int) -> PairwiseStats:
    d = cb.symbols[i] - cb.symbols[j]
    return PairwiseStats(np.abs(d) ** 2, int(bin(int(i) ^ int(j)).count("1")))


def snr_db_to_n0(snr_db, E_T: float, N: int):
    """Noise variance for a per-subcarrier SNR of ``(E_T/N)/N0``."""
    return E_T / (N * 10.0 ** (np.asarray(snr_db, dtype=float) / 10.0))


def rayleigh_bpsk_ber(snr_linear):
    """``0.5 * (1 - sqrt(g/(1+g)))``, BPSK over flat Rayleigh fading."""
    g = np.asarray(snr_linear, dtype=float)
    return 0.5 * (1.0 - np.sqrt(g / (1.0 + g)))


def _delta(stats_or_delta) -> np.ndarray:
    d = getattr(stats_or_delta, "delta_sq", stats_or_delta)
    d = np.asarray(d, dtype=float)
    if np.any(d < 0):
        raise ValueError("squared distances must be non-negative")
    return d


def _check_n0(N0: float) -> float:
    N0 = float(N0)
    if not N0 > 0:
        raise ValueError(f"noise variance must be positive, got {N0}")
    return N0


def pep_approx(stats_or_delta, N0: float):
    """Rayleigh-averaged PEP with the two-exponential Gaussian-tail approximation.

    ``1/12 * prod(1 + d/(4 N0))^-1 + 1/4 * prod(1 + d/(3 N0))^-1``, taken
    over the last axis of ``delta_sq`` (so whole arrays of pairs can be
    passed at once).
    """
    d = _delta(stats_or_delta)
    N0 = _check_n0(N0)
    t1 = np.exp(-np.log1p(d / (4.0 * N0)).sum(axis=-1))
    t2 = np.exp(-np.log1p(d / (3.0 * N0)).sum(axis=-1))
    return t1 / 12.0 + t2 / 4.0


@lru_cache(maxsize=None)
def _gauss_legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    # map [-1, 1] onto [0, pi/2]
    theta = (x + 1.0) * (np.pi / 4.0)
    return np.sin(theta) ** 2, w * (np.pi / 4.0)


def _craig(d: np.ndarray, N0: float, n: int) -> np.ndarray:
    s2, w = _gauss_legendre(n)
    a = d[:, None, :] / (4.0 * N0 * s2[None, :, None])
    f = np.exp(-np.log1p(a).sum(axis=-1))
    return (f @ w) / np.pi


def pep_exact(stats_or_delta, N0: float, rtol: float = 1e-8):
    """Exact Rayleigh-averaged PEP through Craig's form of the Gaussian tail.

    ``(1/pi) * int_0^{pi/2} prod_n (1 + d_n / (4 N0 sin^2 t))^-1 dt``

    Gauss-Legendre rules are doubled until two successive estimates agree to
    ``rtol``; rows that still disagree at 4096 nodes go to adaptive
    quadrature, and a ``RuntimeError`` is raised if that fails too.
    """
    d = _delta(stats_or_delta)
    N0 = _check_n0(N0)
    shape = d.shape[:-1]
    flat = d.reshape(-1, d.shape[-1])
    uniq, inv = np.unique(flat, axis=0, return_inverse=True)
    n = 32
    prev = _craig(uniq, N0, n)
    done = np.zeros(len(uniq), dtype=bool)
    out = prev.copy()
    while n < 4096 and not done.all():
        n *= 2
        todo = ~done
        cur = _craig(uniq[todo], N0, n)
        ok = np.abs(cur - prev[todo]) <= rtol * np.abs(cur)
        idx = np.flatnonzero(todo)
        out[idx] = cur
        prev[idx] = cur
        done[idx[ok]] = True
    for k in np.flatnonzero(~done):
        row = uniq[k]

        def integrand(t, row=row):
            return math.exp(-np.log1p(row / (4.0 * N0 * math.sin(t) ** 2)).sum()) if t > 0 else 0.0

        val, err = integrate.quad(integrand, 0.0, math.pi / 2, epsabs=0.0, epsrel=rtol, limit=500)
        if not err <= 10 * rtol * abs(val):
            raise RuntimeError(f"PEP quadrature did not converge for delta_sq={row}")
        out[k] = val / math.pi
    return out[inv.reshape(-1)].reshape(shape)


@dataclass(frozen=True)
class PairSpectrum:
    """Distinct sorted ``delta_sq`` profiles with their summed bit distances.

    The union-bound double sum only depends on a pair through the multiset
    of its squared distances and its bit distance, so grouping ordered
    pairs by profile lets the bound be re-evaluated at any ``N0`` cheaply.
    """

    delta_sq: np.ndarray
    weight: np.ndarray
    f: int
    L: int


def _sorted_pair_block(cb: Codebook, rows: slice):
    x = cb.symbols
    xi = x[rows]
    d = np.abs(xi[:, None, :] - x[None, :, :]) ** 2
    d.sort(axis=-1)
    i = np.arange(x.shape[0])[rows]
    bd = np.bitwise_count(np.bitwise_xor(i[:, None], np.arange(x.shape[0])[None, :]))
    mask = i[:, None] != np.arange(x.shape[0])[None, :]
    return d[mask], bd[mask].astype(np.int64)


def pair_spectrum(cb: Codebook, block: int = 128, decimals: int = 11) -> PairSpectrum:
    """Group all ordered pairs ``i != j`` of ``cb`` by rounded ``delta_sq`` profile."""
    scale = 10.0 ** decimals / max(cb.E_T, 1.0)
    acc_keys, acc_w = [], []
    for start in range(0, cb.L, block):
        d, bd = _sorted_pair_block(cb, slice(start, start + block))
        q = np.ascontiguousarray(np.rint(d * scale).astype(np.int64))
        keys, inv = np.unique(_as_void(q), return_inverse=True)
        acc_keys.append(keys)
        acc_w.append(np.bincount(inv.reshape(-1), weights=bd, minlength=len(keys)))
    keys, inv = np.unique(np.concatenate(acc_keys), return_inverse=True)
    w = np.bincount(inv.reshape(-1), weights=np.concatenate(acc_w), minlength=len(keys))
    q = np.frombuffer(keys.tobytes(), dtype=np.int64).reshape(len(keys), cb.N)
    return PairSpectrum(q / scale, w, cb.f, cb.L)


def _as_void(rows: np.ndarray) -> np.ndarray:
    # one opaque scalar per row so np.unique sorts rows as a 1-D array
    return rows.view(np.dtype((np.void, rows.dtype.itemsize * rows.shape[1]))).reshape(-1)


_SPECTRA: dict[int, tuple[Codebook, PairSpectrum]] = {}


def _spectrum_for(cb: Codebook) -> PairSpectrum:
    hit = _SPECTRA.get(id(cb))
    if hit is not None and hit[0] is cb:
        return hit[1]
    if cb.L > 1 << 13:
        raise MemoryError(f"pair scan over {cb.L}^2 codeword pairs exceeds the analysis budget")
    spec = pair_spectrum(cb)
    _SPECTRA[id(cb)] = (cb, spec)
    return spec


def union_bound_ber(cb: Codebook, N0: float, exact: bool = False) -> float:
    """Union bound ``1/(f 2^f) * sum_{i != j} PEP(i -> j) D(i -> j)``."""
    spec = _spectrum_for(cb)
    pep = pep_exact(spec.delta_sq, N0) if exact else pep_approx(spec.delta_sq, N0)
    return math.fsum(spec.weight * pep) / (spec.f * spec.L)


def union_bound_ber_direct(cb: Codebook, N0: float, exact: bool = False) -> float:
    """Same bound as :func:`union_bound_ber`, summed pair by pair (slow; for checks)."""
    pep_fn = pep_exact if exact else pep_approx
    terms = []
    for start in range(0, cb.L, 64):
        d, bd = _sorted_pair_block(cb, slice(start, start + 64))
        terms.append(pep_fn(d, N0) * bd)
    return math.fsum(np.concatenate(terms)) / (cb.f * cb.L)


def bound_crossing_snr(cb: Codebook, target_ber: float, exact: bool = False,
                       lo: float = -10.0, hi: float = 60.0, tol: float = 0.01) -> float:
    """SNR (dB) at which the union bound equals ``target_ber``, by bisection."""
    if not 0.0 < target_ber < 0.5:
        raise ValueError(f"target BER must lie in (0, 0.5), got {target_ber}")

    def gap(snr):
        return math.log(union_bound_ber(cb, snr_db_to_n0(snr, cb.E_T, cb.N), exact)) - math.log(target_ber)

    g_lo, g_hi = gap(lo), gap(hi)
    if not (g_lo > 0 > g_hi):
        raise ValueError(f"target BER {target_ber} is not bracketed in [{lo}, {hi}] dB")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if gap(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
