"""
Monte Carlo against the bound
=============================

Simulate CM(7,4,2) with exhaustive ML detection and put the measured BER
next to the union bound. The bound should be loose at low SNR and tight at
high SNR.
"""

from compmod import SchemeSpec, SimConfig, run_ber

spec = SchemeSpec("cm", I=7, N=4, M=2)
cfg = SimConfig(spec, [10, 20, 30], seed=1, max_trials=200_000, target_bit_errors=200, with_bound=True)
for snr, trials, bits, errors, ber, bound in run_ber(cfg).rows():
    print(f"{snr:5.1f} dB  {errors:5d}/{bits:<8d} ber {ber:.3e}  bound {bound:.3e}")
