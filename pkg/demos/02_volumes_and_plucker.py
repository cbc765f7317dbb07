"""
k-volumes and Plucker coordinates
=================================

Volumes of parallelotopes spanned by subsets of frame vectors, on the
two-orthonormal-bases frame in R^2 that maximizes the total 2-volume.
"""

import math

import numpy as np

from framelab import constructors as fc
from framelab import measures as ms

f = fc.paper_4_2()

# one volume per pair, in lexicographic order (0,1), (0,2), ..., (2,3)
print("2-volumes     ", ms.volumes(f, 2))
print("V_2           ", ms.total_volume(f, 2), "vs 1 + sqrt 2 =", 1 + math.sqrt(2))
print("upper bound   ", math.sqrt(math.comb(4, 2) * math.comb(2, 2)))

# squared volumes always sum to C(N, k) on a Parseval frame
print("sum v^2       ", ms.sum_sq_volume(f, 2))

# for N = 2 the signed 2 x 2 minors are the Plucker coordinates
p = ms.plucker(f)
print("Plucker       ", p)
print("relation      ", ms.plucker_relation_42(p))

# random Parseval frames fall short of the optimum
vals = [ms.total_volume(fc.random_parseval(4, 2, s), 2) for s in range(200)]
print(f"random P(4,2): max V_2 = {max(vals):.6f}, mean = {np.mean(vals):.6f}")

# complementary volumes live on subsets of size >= N
print("CV_3          ", ms.total_comp_volume(f, 3))
