"""Block codebooks for OFDM-WCM, OFDM-CM, OFDM-IM and plain OFDM.

Every codebook is stored fully enumerated: row ``b`` of ``Codebook.symbols``
is the codeword sent for the ``f``-bit label whose integer value is ``b``.
Labels are ``f1`` pattern bits (the composition or active-set rank, most
significant first) followed by ``f2`` symbol bits, allocated to subcarriers
in ascending index order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Optional

import numpy as np

from .combinatorics import count_strict, count_weak, enumerate_strict, enumerate_weak, unrank_strict, unrank_weak

__all__ = [
    "PskConstellation",
    "Codeword",
    "Codebook",
    "psk",
    "gray",
    "gray_inverse",
    "modulation_name",
    "build_wcm",
    "build_cm",
    "build_ofdm_im",
    "build_ofdm",
    "spectral_efficiency",
    "MAX_BLOCK_BITS",
    "MAX_SYMBOL_BITS",
    "energy_fraction",
    "table_rows",
]

WCM = "wcm"
CM = "cm"
OFDM_IM = "ofdm_im"
OFDM = "ofdm"

MAX_BLOCK_BITS = 24
MAX_SYMBOL_BITS = 16


def gray(k):
    return k ^ (k >> 1)


def gray_inverse(g):
    """Binary index whose reflected Gray code is ``g`` (works on int arrays)."""
    k = g
    shift = g >> 1
    while np.any(shift):
        k = k ^ shift
        shift = shift >> 1
    return k


def _is_power_of_two(M: int) -> bool:
    return int(M) == M and M >= 1 and (int(M) & (int(M) - 1)) == 0


@dataclass(frozen=True)
class PskConstellation:
    """Unit-energy ``M``-PSK with Gray labels; ``points[k] = exp(2j*pi*k/M)``."""

    order: int
    points: np.ndarray
    labels: np.ndarray

    @property
    def bits(self) -> int:
        return int(self.order).bit_length() - 1

    def modulate(self, values) -> np.ndarray:
        """Map integer labels (``0 .. M-1``) to constellation points."""
        values = np.asarray(values, dtype=np.int64)
        if np.any((values < 0) | (values >= self.order)):
            raise ValueError(f"labels must lie in [0, {self.order})")
        return self.points[gray_inverse(values)]


def psk(M: int) -> PskConstellation:
    if not _is_power_of_two(M) or M < 2:
        raise ValueError(f"PSK order must be a power of two >= 2, got {M}")
    if M > 1 << MAX_SYMBOL_BITS:
        raise ValueError(f"PSK order {M} exceeds the limit 2^{MAX_SYMBOL_BITS}")
    k = np.arange(M)
    points = np.exp(2j * np.pi * k / M)
    # exact values on the axes keep symbol differences free of 1e-16 residue
    points.real[np.isclose(points.real, 0.0, atol=1e-15)] = 0.0
    points.imag[np.isclose(points.imag, 0.0, atol=1e-15)] = 0.0
    return PskConstellation(int(M), points, gray(k))


def modulation_name(order: int) -> str:
    if order <= 1:
        return "0"
    return {2: "BPSK", 4: "QPSK"}.get(int(order), f"{int(order)}-PSK")


@dataclass(frozen=True)
class Codeword:
    symbols: np.ndarray
    energies: np.ndarray
    label: str
    composition_rank: int


@dataclass
class Codebook:
    """A fully enumerated block codebook.

    Attributes
    ----------
    scheme : str
        One of ``"wcm"``, ``"cm"``, ``"ofdm_im"``, ``"ofdm"``.
    params : dict
        Construction parameters (``I``, ``N``, ``lam``, ``M``, ``K``).
    symbols : ndarray, shape (L, N)
        Complex codewords, row index == label value.
    levels : ndarray, shape (L, N)
        Subcarrier energies in units of ``E_T / quanta``.
    orders : ndarray, shape (L, N)
        PSK order used on each subcarrier, 0 when the subcarrier is off.
    pattern_rank : ndarray, shape (L,)
        Rank of the composition (or active set) behind each codeword.
    f1, f2 : int or None
        Pattern and symbol bits; ``None`` once the codebook has been culled.
    f : int
        Bits per block; ``L == 2**f``.
    source_labels : ndarray, shape (L,)
        Label of each codeword in the codebook it was culled from.
    """

    scheme: str
    params: dict
    symbols: np.ndarray
    levels: np.ndarray
    orders: np.ndarray
    pattern_rank: np.ndarray
    quanta: int
    E_T: float
    f: int
    f1: Optional[int] = None
    f2: Optional[int] = None
    source_labels: np.ndarray = field(default=None)
    culled: bool = False

    def __post_init__(self):
        if self.source_labels is None:
            self.source_labels = np.arange(self.L)
        if self.L != 1 << self.f:
            raise ValueError(f"codebook holds {self.L} codewords, expected 2^{self.f}")
        for arr in (self.symbols, self.levels, self.orders, self.pattern_rank, self.source_labels):
            arr.setflags(write=False)

    @property
    def L(self) -> int:
        return self.symbols.shape[0]

    @property
    def N(self) -> int:
        return self.symbols.shape[1]

    @property
    def labels(self) -> np.ndarray:
        return np.arange(self.L)

    @property
    def energies(self) -> np.ndarray:
        return self.levels * (self.E_T / self.quanta)

    @property
    def spectral_efficiency(self) -> Fraction:
        return spectral_efficiency(self)

    def label_bits(self, label: int) -> str:
        return format(int(label), f"0{self.f}b") if self.f else ""

    def codeword(self, label: int) -> Codeword:
        label = int(label)
        if not 0 <= label < self.L:
            raise IndexError(f"label {label} out of range [0, {self.L})")
        return Codeword(
            self.symbols[label].copy(),
            self.energies[label].copy(),
            self.label_bits(label),
            int(self.pattern_rank[label]),
        )

    def __len__(self) -> int:
        return self.L

    def __repr__(self) -> str:
        p = ", ".join(f"{k}={v}" for k, v in self.params.items())
        extra = " culled" if self.culled else ""
        return f"<Codebook {self.scheme}({p}) L={self.L} f={self.f}{extra}>"


def _default_energy(N: int, E_T: Optional[float]) -> float:
    E_T = float(N if E_T is None else E_T)
    if not E_T > 0:
        raise ValueError(f"total block energy must be positive, got {E_T}")
    return E_T


def _check_bits(f: int) -> None:
    if f > MAX_BLOCK_BITS:
        raise ValueError(f"{f} bits per block exceeds the enumeration limit of {MAX_BLOCK_BITS}")


def _fill_symbols(level_rows, bit_rows, quanta, E_T, f2):
    """Expand patterns into codewords.

    ``level_rows[r]`` are the energy levels of pattern ``r`` and
    ``bit_rows[r][i]`` the symbol bits carried by subcarrier ``i``.
    Returns (symbols, levels, orders, pattern_rank) with ``2**f2`` rows per
    pattern.
    """
    n_pat, N = level_rows.shape
    S = 1 << f2
    s = np.arange(S, dtype=np.int64)
    symbols = np.zeros((n_pat, S, N), dtype=complex)
    orders = np.zeros((n_pat, N), dtype=np.int64)
    for r in range(n_pat):
        shift = f2
        for i in range(N):
            b = int(bit_rows[r, i])
            if level_rows[r, i] == 0:
                continue
            shift -= b
            amp = np.sqrt(level_rows[r, i] * E_T / quanta)
            if b == 0:
                symbols[r, :, i] = amp
                orders[r, i] = 1
                continue
            vals = (s >> shift) & ((1 << b) - 1)
            symbols[r, :, i] = amp * psk(1 << b).modulate(vals)
            orders[r, i] = 1 << b
        assert shift == 0
    L = n_pat * S
    return (
        symbols.reshape(L, N),
        np.repeat(level_rows, S, axis=0),
        np.repeat(orders, S, axis=0),
        np.repeat(np.arange(n_pat), S),
    )


def _floor_log2(n: int) -> int:
    return int(n).bit_length() - 1


def build_wcm(I: int, N: int, lam: int = 1, E_T: Optional[float] = None) -> Codebook:
    """OFDM-WCM codebook.

    The first ``floor(log2 C(I+N-1, N-1))`` bits select a weak composition
    ``mu`` by lexicographic rank; subcarrier ``i`` then carries a
    ``2**(lam*mu_i)``-PSK symbol at energy ``mu_i*E_T/I``, or nothing when
    ``mu_i == 0``, so every pattern carries ``f2 = lam*I`` symbol bits.
    """
    if int(I) != I or I < 1:
        raise ValueError(f"I must be a positive integer, got {I}")
    if int(lam) != lam or lam < 1:
        raise ValueError(f"lambda must be a positive integer, got {lam}")
    n_comp = count_weak(I, N)
    if n_comp < 2:
        raise ValueError(f"WCM({I},{N}) has a single composition; need at least two")
    if lam * I > MAX_SYMBOL_BITS:
        raise ValueError(
            f"constellation order 2^{lam * I} exceeds the limit 2^{MAX_SYMBOL_BITS}"
        )
    E_T = _default_energy(N, E_T)
    f1 = _floor_log2(n_comp)
    f2 = lam * I
    _check_bits(f1 + f2)
    mus = np.array([unrank_weak(I, N, r).parts for r in range(1 << f1)], dtype=np.int64)
    symbols, levels, orders, prank = _fill_symbols(mus, lam * mus, I, E_T, f2)
    return Codebook(WCM, dict(I=I, N=N, lam=lam), symbols, levels, orders, prank,
                    quanta=I, E_T=E_T, f=f1 + f2, f1=f1, f2=f2)


def build_cm(I: int, N: int, M: int = 2, E_T: Optional[float] = None) -> Codebook:
    """OFDM-CM codebook: strict compositions set energies, ``M``-PSK on every subcarrier."""
    if int(N) != N or N < 1:
        raise ValueError(f"N must be a positive integer, got {N}")
    if int(I) != I or I < N:
        raise ValueError(f"I must be >= N for composition modulation (got I={I}, N={N})")
    if not _is_power_of_two(M) or M < 2:
        raise ValueError(f"M must be a power of two >= 2, got {M}")
    E_T = _default_energy(N, E_T)
    f1 = _floor_log2(count_strict(I, N))
    m = _floor_log2(M)
    f2 = N * m
    _check_bits(f1 + f2)
    nus = np.array([unrank_strict(I, N, r).parts for r in range(1 << f1)], dtype=np.int64)
    symbols, levels, orders, prank = _fill_symbols(nus, np.full_like(nus, m), I, E_T, f2)
    return Codebook(CM, dict(I=I, N=N, M=M), symbols, levels, orders, prank,
                    quanta=I, E_T=E_T, f=f1 + f2, f1=f1, f2=f2)


def build_ofdm_im(N: int, K: int, M: int = 2, E_T: Optional[float] = None) -> Codebook:
    """OFDM-IM codebook: ``K`` of ``N`` subcarriers active, ``M``-PSK at ``E_T/K`` each.

    Active sets are the lexicographically first ``2**f1`` ``K``-subsets.
    """
    if int(N) != N or N < 1:
        raise ValueError(f"N must be a positive integer, got {N}")
    if int(K) != K or not 1 <= K <= N:
        raise ValueError(f"K must satisfy 1 <= K <= N (got K={K}, N={N})")
    if not _is_power_of_two(M) or M < 2:
        raise ValueError(f"M must be a power of two >= 2, got {M}")
    E_T = _default_energy(N, E_T)
    f1 = _floor_log2(comb(N, K))
    m = _floor_log2(M)
    f2 = K * m
    _check_bits(f1 + f2)
    active = np.zeros((1 << f1, N), dtype=np.int64)
    for r, subset in zip(range(1 << f1), combinations(range(N), K)):
        active[r, list(subset)] = 1
    symbols, levels, orders, prank = _fill_symbols(active, active * m, K, E_T, f2)
    return Codebook(OFDM_IM, dict(N=N, K=K, M=M), symbols, levels, orders, prank,
                    quanta=K, E_T=E_T, f=f1 + f2, f1=f1, f2=f2)


def build_ofdm(N: int, M: int = 4, E_T: Optional[float] = None) -> Codebook:
    """Conventional OFDM block: ``M``-PSK at ``E_T/N`` on all ``N`` subcarriers."""
    if int(N) != N or N < 1:
        raise ValueError(f"N must be a positive integer, got {N}")
    if not _is_power_of_two(M) or M < 2:
        raise ValueError(f"M must be a power of two >= 2, got {M}")
    E_T = _default_energy(N, E_T)
    m = _floor_log2(M)
    f2 = N * m
    _check_bits(f2)
    ones = np.ones((1, N), dtype=np.int64)
    symbols, levels, orders, prank = _fill_symbols(ones, ones * m, N, E_T, f2)
    return Codebook(OFDM, dict(N=N, M=M), symbols, levels, orders, prank,
                    quanta=N, E_T=E_T, f=f2, f1=0, f2=f2)


def spectral_efficiency(cb: Codebook) -> Fraction:
    """Bits per subcarrier, ``f / N``, as an exact fraction."""
    return Fraction(cb.f, cb.N)


def energy_fraction(k: int, quanta: int) -> str:
    """``k/quanta`` of the block energy written as in a lookup table, e.g. ``2E_T/3``."""
    fr = Fraction(int(k), int(quanta))
    if fr == 0:
        return "0"
    num = "E_T" if fr.numerator == 1 else f"{fr.numerator}E_T"
    return num if fr.denominator == 1 else f"{num}/{fr.denominator}"


def _all_patterns(cb: Codebook) -> list[tuple[int, ...]]:
    p = cb.params
    if cb.scheme == WCM:
        return [c.parts for c in enumerate_weak(p["I"], p["N"])]
    if cb.scheme == CM:
        return [c.parts for c in enumerate_strict(p["I"], p["N"])]
    if cb.scheme == OFDM_IM:
        out = []
        for subset in combinations(range(p["N"]), p["K"]):
            row = [0] * p["N"]
            for i in subset:
                row[i] = 1
            out.append(tuple(row))
        return out
    return [(1,) * p["N"]]


def _pattern_text(cb: Codebook, levels) -> str:
    if cb.scheme in (WCM, CM):
        return f"{cb.quanta}=" + "+".join(str(int(v)) for v in levels)
    return "active=(" + ",".join(str(int(v)) for v in levels) + ")"


def _orders_for(cb: Codebook, levels) -> list[int]:
    p = cb.params
    if cb.scheme == WCM:
        return [1 << (p["lam"] * int(v)) if v else 0 for v in levels]
    return [p["M"] if v else 0 for v in levels]


def table_rows(cb: Codebook, per_codeword: bool = False) -> list[dict]:
    """Rows of the lookup-table dump.

    By default one row per energy pattern, including the patterns left
    unused because only ``2**f1`` of them fit in ``f1`` bits (their
    ``bits`` entry is ``"unused"``). Culled codebooks, or
    ``per_codeword=True``, give one row per codeword with its full label.
    """
    rows = []
    if per_codeword or cb.culled:
        for label in range(cb.L):
            lv = cb.levels[label]
            rows.append(dict(
                pattern=_pattern_text(cb, lv),
                energies=[energy_fraction(v, cb.quanta) for v in lv],
                modulations=[modulation_name(o) for o in cb.orders[label]],
                bits=cb.label_bits(label),
            ))
        return rows
    n_used = 1 << cb.f1
    for r, lv in enumerate(_all_patterns(cb)):
        rows.append(dict(
            pattern=_pattern_text(cb, lv),
            energies=[energy_fraction(v, cb.quanta) for v in lv],
            modulations=[modulation_name(o) for o in _orders_for(cb, lv)],
            bits=format(r, f"0{cb.f1}b") if r < n_used and cb.f1 else ("" if r < n_used else "unused"),
        ))
    return rows
