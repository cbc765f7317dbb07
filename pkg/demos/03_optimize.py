"""
Maximizing frame functionals
============================

Projected gradient ascent over Parseval and equal-norm frames with a
smoothing parameter annealed towards zero.
"""

import math

from framelab import optimize as fo
from framelab.constructors import random_parseval
from framelab import measures as ms
from framelab.core import predicates

# total coherence on P(4,3): the optimum is the simplex ETF with TC = 3
traces = fo.multistart(fo.Objective("tc"), 4, 3, seeds=range(20))
best = max(traces, key=lambda t: t.best_true)
print("best TC on P(4,3):", best.best_true)
print("equiangular:", predicates(best.frame).is_equiangular)

# a single run, stage by stage
tr = fo.maximize(random_parseval(4, 2, 1), fo.Objective("vk", 2))
last = {}
for r in tr.records:
    last[r.eps] = r
for eps, r in last.items():
    print(f"eps={eps:.0e}  iter {r.iter:4d}  smoothed={r.f_smooth:.12f}  true={r.f_true:.12f}")
print("target 1 + sqrt 2 =", 1 + math.sqrt(2), "status", tr.status.value)

# on equal-norm frames total coherence is maximized by collapsing onto a line
cfg = fo.OptimizerConfig(manifold="equal_norm")
en = max(fo.multistart(fo.Objective("tc"), 3, 2, range(10), cfg), key=lambda t: t.best_true)
print("best TC on E(3,2):", en.best_true, "coherence", ms.coherence(en.frame))
