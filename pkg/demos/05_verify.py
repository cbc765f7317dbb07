"""
Numerical verification of identities and bounds
===============================================

Every registered check measures a residual on a concrete frame.  The
suite runs them over constructed and seeded random instances.
"""

from framelab import constructors as fc
from framelab.verify import REGISTRY, SuiteConfig, run_check, run_suite

for name, chk in REGISTRY.items():
    print(f"{name:28s} {chk.statement}")

print(run_check("prop_tcnaimark", fc.random_parseval(6, 2, 3)))
print(run_check("thm_fp", fc.random_equal_norm(6, 3, 3), k=2))

report = run_suite(SuiteConfig(m_list=(4, 5, 6), n_list=(2, 3), trials=5, seed=1))
print(report.counts)
worst = max((r for r in report.results if r.skipped is None), key=lambda r: r.residual / r.tolerance)
print("closest to tolerance:", worst.name, worst.context, worst.residual, "/", worst.tolerance)
