"""
Nuclear energy
==============

NE_k adds up the nuclear norms of all k-column submatrices.  On Parseval
frames the squared singular values are fixed, so a large NE_k means the
singular values are spread evenly.
"""

import math

import numpy as np

from framelab import constructors as fc
from framelab import measures as ms

h = fc.harmonic_frame(7, (1, 2, 4))
norms = ms.nuclear_norms(h, 2)
print("2-nuclear norms of the ETF (all equal):", np.ptp(norms), norms[:3])
ne2 = ms.nuclear_energy(h, 2)
v2 = ms.total_volume(h, 2)
print("NE_2 =", ne2, " closed form =", math.sqrt(0.5 * 7 * 3 * 36 + 42 * v2))

# squared singular values over all k-subsets sum to N C(M-1, k-1)
for k in (1, 2, 3):
    print(f"k={k}: sum s^2 = {ms.singular_energy(h, k):.10f}  N C(M-1,k-1) = {3 * math.comb(6, k - 1)}")

# complements shift NE by a known amount
psi = fc.naimark_complement(h)
for k in (1, 2, 3):
    diff = ms.nuclear_energy(psi, 7 - k) - ms.nuclear_energy(h, k)
    print(f"k={k}: NE_(M-k)(Psi) - NE_k(Phi) = {diff:.10f}  expected {(7 - 3 - k) * math.comb(7, k)}")

# spread of nuclear norms on a random frame versus the ETF
r = fc.random_parseval(7, 3, 0, "complex")
print("nuclear variance: random", ms.nuclear_variance(r, 2)[0], " ETF", ms.nuclear_variance(h, 2)[0])
