"""
Reference frames and total coherence
=====================================

Build the simplex and harmonic equiangular frames, look at their Gram
matrices and compare total coherence with its upper bound.
"""

import math

import numpy as np

from framelab import constructors as fc
from framelab import measures as ms
from framelab.core import predicates

np.set_printoptions(precision=4, suppress=True)

# three vectors in the plane, 120 degrees apart
mb = fc.mercedes_benz()
print(mb.entries)
print("Gram:\n", mb.entries.T @ mb.entries)

# every equiangular Parseval frame attains sqrt(N(M-N)(M-1))
for label, f in [("simplex_etf(3)", fc.simplex_etf(3)),
                 ("harmonic(7, {1,2,4})", fc.harmonic_frame(7, (1, 2, 4))),
                 ("harmonic(7, {0,1,2})", fc.harmonic_frame(7, (0, 1, 2)))]:
    n, m = f.entries.shape
    bound = math.sqrt(n * (m - n) * (m - 1))
    print(f"{label:22s} TC = {ms.total_coherence(f):.10f}  bound = {bound:.10f}  "
          f"equiangular = {predicates(f).is_equiangular}")

# a Naimark complement keeps total coherence
h = fc.harmonic_frame(7, (1, 2, 4))
psi = fc.naimark_complement(h)
print("complement shape", psi.shape, "TC", ms.total_coherence(psi))

# coherence of the harmonic ETF sits on the Welch bound
print("coherence", ms.coherence(h), "Welch", ms.welch_bound(7, 3))
