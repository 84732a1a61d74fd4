"""
SNR gains at 2.75 bits per subcarrier
=====================================

Where does each union bound cross 1e-5, and how far ahead of OFDM-IM(4,3,8)
is each composition scheme?
"""

from compmod import bound_crossing_snr
from compmod.schemes import FIG2_SCHEMES

*others, ref = FIG2_SCHEMES
ref_snr = bound_crossing_snr(ref.build(), 1e-5)
print(f"{ref.name}: {ref_snr:.2f} dB")
for spec in others:
    snr = bound_crossing_snr(spec.build(), 1e-5)
    print(f"{spec.name}: {snr:.2f} dB, gain {ref_snr - snr:.2f} dB")
