"""Weak composition and composition modulation for OFDM blocks.

Codebook construction, the rank-based culling pass, exhaustive ML
detection, Monte Carlo BER sweeps over Rayleigh block fading and the
union bound on BER.
"""

__version__ = "0.1.0"

from .analysis import bound_crossing_snr, pep_approx, pep_exact, union_bound_ber
from .codebook import Codebook, build_cm, build_ofdm, build_ofdm_im, build_wcm, psk, spectral_efficiency
from .combinatorics import (
    Composition,
    count_strict,
    count_weak,
    enumerate_strict,
    enumerate_weak,
    rank_weak,
    strict_to_weak,
    unrank_weak,
    weak_to_strict,
)
from .channel_sim import SimConfig, run_ber
from .modem import decode_ml, encode
from .schemes import SchemeSpec
from .selection import cull, rank_matrix
