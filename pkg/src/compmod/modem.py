"""Block encoder and exhaustive maximum-likelihood detector."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .codebook import Codebook, Codeword

__all__ = ["bits_to_int", "int_to_bits", "encode", "decode_ml", "detect_ml_batch", "bit_errors"]


def bits_to_int(bits: Sequence[int]) -> int:
    """MSB-first bit sequence to integer."""
    value = 0
    for b in bits:
        b = int(b)
        if b not in (0, 1):
            raise ValueError(f"bits must be 0 or 1, got {b}")
        value = (value << 1) | b
    return value


def int_to_bits(value: int, width: int) -> np.ndarray:
    if not 0 <= value < 1 << width:
        raise ValueError(f"{value} does not fit in {width} bits")
    return np.array([(value >> (width - 1 - k)) & 1 for k in range(width)], dtype=np.uint8)


def encode(cb: Codebook, bits: Sequence[int]) -> Codeword:
    """Map ``f`` information bits (MSB first) to their codeword."""
    bits = list(bits)
    if len(bits) != cb.f:
        raise ValueError(f"expected {cb.f} bits, got {len(bits)}")
    return cb.codeword(bits_to_int(bits))


def decode_ml(cb: Codebook, y, h) -> tuple[int, np.ndarray, float]:
    """Exhaustive ML detection of one block.

    Returns ``(index, bits, metric)`` where ``index`` minimises
    ``sum_n |y_n - x_n h_n|**2`` over all codewords (lowest index on exact
    ties) and ``metric`` is that minimum.
    """
    y = np.asarray(y, dtype=complex).reshape(-1)
    h = np.asarray(h, dtype=complex).reshape(-1)
    if y.shape != (cb.N,) or h.shape != (cb.N,):
        raise ValueError(f"y and h must have length {cb.N}, got {y.shape} and {h.shape}")
    d = y[None, :] - cb.symbols * h[None, :]
    metric = np.einsum("ln,ln->l", d.real, d.real) + np.einsum("ln,ln->l", d.imag, d.imag)
    idx = int(np.argmin(metric))
    return idx, int_to_bits(idx, cb.f), float(metric[idx])


def detect_ml_batch(cb: Codebook, Y: np.ndarray, H: np.ndarray) -> np.ndarray:
    """ML indices for a batch of blocks, ``Y`` and ``H`` of shape ``(T, N)``.

    Drops the codeword-independent ``|y|**2`` term and evaluates
    ``sum |x_n|^2 |h_n|^2 - 2 Re(conj(y_n) h_n x_n)`` with two matrix
    products.
    """
    Y = np.asarray(Y, dtype=complex)
    H = np.asarray(H, dtype=complex)
    if Y.ndim != 2 or Y.shape[1] != cb.N or H.shape != Y.shape:
        raise ValueError(f"Y and H must both have shape (T, {cb.N})")
    x = cb.symbols
    energy = (H.real ** 2 + H.imag ** 2) @ (x.real ** 2 + x.imag ** 2).T
    u = np.conj(Y) * H
    corr = u.real @ x.real.T - u.imag @ x.imag.T
    return np.argmin(energy - 2.0 * corr, axis=1)


def bit_errors(sent, detected) -> np.ndarray:
    """Hamming distance between integer labels."""
    return np.bitwise_count(np.bitwise_xor(np.asarray(sent, np.uint64), np.asarray(detected, np.uint64)))
