"""
Building a composition codebook by hand
=======================================

Split I energy quanta over N subcarriers, give each subcarrier a PSK
constellation with one bit per quantum, and list every pattern with the
bits that select it.
"""

from compmod import build_wcm, enumerate_weak
from compmod.codebook import table_rows

# Three quanta over three subcarriers: ten weak compositions in
# lexicographic order.
for comp in enumerate_weak(3, 3):
    print(comp)

# Only 2**3 of the ten patterns get pattern bits, the last two are unused.
cb = build_wcm(I=3, N=3, lam=1)
print(f"\n{cb.L} codewords, {cb.f} bits per block ({cb.f1} pattern + {cb.f2} symbol bits)")
for row in table_rows(cb):
    print(row)
