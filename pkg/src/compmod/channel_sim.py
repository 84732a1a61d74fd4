"""Rayleigh block-fading channel and the Monte Carlo BER engine.

Each trial is one block: ``f`` uniform bits, ``y = x * h + n`` with i.i.d.
``CN(0, 1)`` subcarrier gains and ``CN(0, N0)`` noise, exhaustive ML
detection with perfect channel knowledge.

Random numbers come from PCG64 streams seeded by ``(seed, snr_index,
chunk_index)`` through :class:`numpy.random.SeedSequence`. Trials are
processed in fixed-size chunks and accumulated in chunk order, so the
result does not depend on how many workers computed the chunks.
Gaussian variates use NumPy's ziggurat sampler, which is exact.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .analysis import snr_db_to_n0, union_bound_ber
from .codebook import Codebook
from .modem import bit_errors, detect_ml_batch
from .schemes import SchemeSpec

__all__ = [
    "ChannelBlock",
    "SimConfig",
    "BerPoint",
    "BerCurve",
    "sample_block",
    "cn_samples",
    "chunk_rng",
    "simulate_chunk",
    "run_ber",
    "CHUNK_TRIALS",
]

log = logging.getLogger(__name__)

CHUNK_TRIALS = 2048


@dataclass(frozen=True)
class ChannelBlock:
    h: np.ndarray
    N0: float

    def __post_init__(self):
        if not self.N0 > 0:
            raise ValueError(f"noise variance must be positive, got {self.N0}")


def cn_samples(rng: np.random.Generator, shape, variance: float = 1.0) -> np.ndarray:
    """Circularly symmetric complex Gaussian samples with ``E|z|^2 = variance``."""
    z = rng.standard_normal(shape + (2,) if isinstance(shape, tuple) else (shape, 2))
    return (z[..., 0] + 1j * z[..., 1]) * math.sqrt(variance / 2.0)


def sample_block(N: int, N0: float, rng: np.random.Generator) -> tuple[ChannelBlock, np.ndarray]:
    """One block of channel gains and noise."""
    if not N0 > 0:
        raise ValueError(f"noise variance must be positive, got {N0}")
    h = cn_samples(rng, (N,))
    n = cn_samples(rng, (N,), N0)
    return ChannelBlock(h, float(N0)), n


def chunk_rng(seed: int, snr_index: int, chunk_index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, snr_index, chunk_index])))


@dataclass
class SimConfig:
    """Monte Carlo sweep settings.

    ``target_bit_errors=None`` disables early stopping so every point runs
    exactly ``max_trials`` blocks.
    """

    scheme: SchemeSpec
    snr_points_db: Sequence[float]
    seed: int = 0
    max_trials: int = 1_000_000
    target_bit_errors: Optional[int] = 200
    workers: int = 1
    with_bound: bool = False
    E_T: Optional[float] = None

    def __post_init__(self):
        if int(self.max_trials) < 1:
            raise ValueError("max_trials must be >= 1")
        if len(self.snr_points_db) == 0:
            raise ValueError("at least one SNR point is required")
        if int(self.workers) < 1:
            raise ValueError("workers must be >= 1")
        if self.target_bit_errors is not None and self.target_bit_errors < 1:
            raise ValueError("target_bit_errors must be positive (or None)")


@dataclass
class BerPoint:
    snr_db: float
    trials: int
    bits_sent: int
    bit_errors: int
    union_bound: Optional[float] = None

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits_sent if self.bits_sent else float("nan")

    @property
    def std_error(self) -> float:
        p = self.ber
        return math.sqrt(p * (1.0 - p) / self.bits_sent) if self.bits_sent else float("nan")


@dataclass
class BerCurve:
    scheme: SchemeSpec
    points: list[BerPoint] = field(default_factory=list)

    @property
    def snr_db(self) -> np.ndarray:
        return np.array([p.snr_db for p in self.points])

    @property
    def ber(self) -> np.ndarray:
        return np.array([p.ber for p in self.points])

    def rows(self):
        for p in self.points:
            yield p.snr_db, p.trials, p.bits_sent, p.bit_errors, p.ber, p.union_bound


def simulate_chunk(cb: Codebook, N0: float, rng: np.random.Generator, trials: int) -> int:
    """Bit errors over ``trials`` blocks drawn from ``rng``."""
    sent = rng.integers(0, cb.L, size=trials)
    H = cn_samples(rng, (trials, cb.N))
    noise = cn_samples(rng, (trials, cb.N), N0)
    Y = cb.symbols[sent] * H + noise
    detected = detect_ml_batch(cb, Y, H)
    return int(bit_errors(sent, detected).sum())


def _run_point(cb: Codebook, cfg: SimConfig, snr_index: int, snr_db: float,
               pool: Optional[ThreadPoolExecutor]) -> BerPoint:
    N0 = float(snr_db_to_n0(snr_db, cb.E_T, cb.N))
    n_chunks = -(-int(cfg.max_trials) // CHUNK_TRIALS)
    sizes = [min(CHUNK_TRIALS, cfg.max_trials - k * CHUNK_TRIALS) for k in range(n_chunks)]

    def job(k):
        return simulate_chunk(cb, N0, chunk_rng(cfg.seed, snr_index, k), sizes[k])

    trials = errors = 0
    wave = max(1, int(cfg.workers))
    k = 0
    while k < n_chunks:
        ks = range(k, min(k + wave, n_chunks))
        results = list(pool.map(job, ks)) if pool is not None else [job(j) for j in ks]
        for j, e in zip(ks, results):
            trials += sizes[j]
            errors += e
            k = j + 1
            if cfg.target_bit_errors is not None and errors >= cfg.target_bit_errors:
                break
        else:
            continue
        break
    bound = union_bound_ber(cb, N0) if cfg.with_bound else None
    log.debug("%s snr=%.2f dB trials=%d errors=%d", cfg.scheme.tag, snr_db, trials, errors)
    return BerPoint(float(snr_db), trials, trials * cb.f, errors, bound)


def run_ber(cfg: SimConfig, cb: Optional[Codebook] = None) -> BerCurve:
    """Sweep ``cfg.snr_points_db`` and return the measured BER curve."""
    if cb is None:
        cb = cfg.scheme.build(cfg.E_T)
    curve = BerCurve(cfg.scheme)
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            for i, snr in enumerate(cfg.snr_points_db):
                curve.points.append(_run_point(cb, cfg, i, snr, pool))
    else:
        for i, snr in enumerate(cfg.snr_points_db):
            curve.points.append(_run_point(cb, cfg, i, snr, None))
    return curve
