"""
Culling weak codewords
======================

At high SNR the error rate is dominated by codeword pairs that differ on
only one subcarrier. Culling removes the codewords involved in most of those
pairs until a power-of-two codebook is left.
"""

import numpy as np

from compmod import SchemeSpec, cull, rank_matrix
from compmod.selection import min_rank_pair_stats

full = SchemeSpec("wcm", I=4, N=4, lam=1).build()
Z = rank_matrix(full)
print("before:", full.L, "codewords, (min rank, pairs) =", min_rank_pair_stats(Z))

small = cull(full, 8, Z)
print("after: ", small.L, "codewords, (min rank, pairs) =", min_rank_pair_stats(rank_matrix(small)))

# survivors keep their original order, so source_labels is increasing
print("first survivors came from labels", small.source_labels[:8])
print("rank histogram after culling:", np.bincount(rank_matrix(small).ravel()))
