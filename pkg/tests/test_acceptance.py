"""Acceptance criteria, one test per criterion.

  1. ETF optima: TC of simplex_etf(2), simplex_etf(3) hit sqrt(N(M-N)(M-1)) within 1e-9
  2. (4,2) example: Plucker vector, V_2 = 1 + sqrt 2 and the Plucker relation within 1e-12
  3. Optimizer recovery: 20 seeds reach 2, 3 and 1 + sqrt 2 within 1e-4
  4. Parseval identity suite: 100 frames per shape, per-identity tolerances
  5. Equal-norm suite: 100 frames per shape, strict frame-potential gap and bounds
  6. ETF certification: harmonic (7,3) and simplex n <= 10
  7. Gradient checks at eps 1e-2 and 1e-4 on P(4,2) and E(5,3)
  8. Split-zero monotonicity with the exact expansion on 50 frames
  9. Byte-identical reports in deterministic mode

Each test appends one PASS/FAIL line to ``LINES``; the conftest prints them
in the terminal summary.  Running this file directly prints them too.
"""

import math
import time

import numpy as np
import pytest

from framelab import constructors as fc
from framelab import measures as ms
from framelab import optimize as fo
from framelab.cli import main as cli_main
from framelab.core import predicates
from framelab.verify import REGISTRY, derive_seed

LINES = []
SHAPES = [(4, 2), (5, 2), (5, 3), (6, 3), (7, 3)]
TRIALS = 100
R2 = math.sqrt(2)


def record(num, title, ok, detail, elapsed, budget):
    ok = ok and elapsed < budget
    line = f"{'PASS' if ok else 'FAIL'} criterion {num}: {title} [{detail}; {elapsed:.2f}s < {budget}s]"
    LINES.append(line)
    print(line)
    assert ok, line


def residual(name, a, k=None):
    chk = REGISTRY[name]
    res, _ = chk.fn(a, k, chk.tolerance)
    return float(res)


def test_c1_etf_optima():
    t0 = time.perf_counter()
    worst = 0.0
    for n, want in [(2, 2.0), (3, 3.0)]:
        m = n + 1
        tc = ms.total_coherence(fc.simplex_etf(n))
        worst = max(worst, abs(tc - want), abs(tc - math.sqrt(n * (m - n) * (m - 1))))
    record(1, "ETF total coherence optima", worst <= 1e-9, f"max err {worst:.1e} <= 1e-9",
           time.perf_counter() - t0, 1)


def test_c2_plucker_4_2():
    t0 = time.perf_counter()
    f = fc.paper_4_2()
    p = ms.plucker(f)
    want = np.array([R2 / 4, 0.5, R2 / 4, R2 / 4, 0.5, R2 / 4])
    e_pl = float(np.max(np.abs(p - want)))
    e_v2 = abs(ms.total_volume(f, 2) - (1 + R2))
    e_rel = abs(ms.plucker_relation_42(p))
    worst = max(e_pl, e_v2, e_rel)
    record(2, "(4,2) Plucker coordinates, V_2 and relation", worst <= 1e-12,
           f"plucker {e_pl:.1e}, V_2 {e_v2:.1e}, relation {e_rel:.1e} <= 1e-12",
           time.perf_counter() - t0, 1)


def test_c3_optimizer_recovery():
    t0 = time.perf_counter()
    cases = [(fo.Objective("tc"), 3, 2, 2.0), (fo.Objective("tc"), 4, 3, 3.0),
             (fo.Objective("vk", 2), 4, 2, 1 + R2)]
    errs = []
    for obj, m, n, target in cases:
        traces = fo.multistart(obj, m, n, range(20))
        errs.append(abs(max(t.best_true for t in traces) - target))
    record(3, "20-seed optimizer recovery", max(errs) <= 1e-4,
           "errors " + ", ".join(f"{e:.1e}" for e in errs) + " <= 1e-4",
           time.perf_counter() - t0, 120)


def _parseval_frames():
    for m, n in SHAPES:
        for t in range(TRIALS):
            yield m, n, fc.random_parseval(m, n, derive_seed(2024, m, n, t)).entries


def test_c4_parseval_identity_suite():
    t0 = time.perf_counter()
    tol = {"prop_prodcos": 1e-9, "nukebound_identity": 1e-9, "prop_tcnaimark": 1e-9,
           "prop_svn": 1e-9, "prop_vcv": 1e-8, "ne_naimark_offset": 1e-7}
    worst = dict.fromkeys(tol, 0.0)
    for m, n, a in _parseval_frames():
        for k in range(1, n + 1):
            worst["prop_prodcos"] = max(worst["prop_prodcos"], residual("prop_prodcos", a, k))
            worst["prop_svn"] = max(worst["prop_svn"], residual("prop_svn", a, k))
            worst["prop_vcv"] = max(worst["prop_vcv"], residual("prop_vcv", a, k))
        for k in range(1, min(4, m) + 1):
            worst["nukebound_identity"] = max(worst["nukebound_identity"],
                                              residual("nukebound_identity", a, k))
        for k in range(1, m):
            worst["ne_naimark_offset"] = max(worst["ne_naimark_offset"],
                                             residual("ne_naimark_offset", a, k))
        worst["prop_tcnaimark"] = max(worst["prop_tcnaimark"], residual("prop_tcnaimark", a))
    ok = all(worst[k] <= tol[k] for k in tol)
    detail = ", ".join(f"{k} {worst[k]:.1e}<={tol[k]:.0e}" for k in tol)
    record(4, f"Parseval identity suite ({TRIALS} frames x {len(SHAPES)} shapes)", ok, detail,
           time.perf_counter() - t0, 120)


def test_c5_equal_norm_suite():
    t0 = time.perf_counter()
    min_margin, eq_err, bound_res, sumsq = math.inf, 0.0, 0.0, 0.0
    for m, n in SHAPES:
        controls = [fc.harmonic_frame(m, range(n)).entries, fc.simplex_etf(n).entries if m == n + 1
                    else fc.harmonic_frame(m, range(m - n, m)).entries]
        for t in range(TRIALS):
            a = fc.random_equal_norm(m, n, derive_seed(2025, m, n, t)).entries
            # the frame potential gap is strict only for k >= 2; k = 1 is always an equality
            for k in range(2, n + 1):
                min_margin = min(min_margin, math.comb(n, k) - ms.sum_sq_volume(a, k))
            for k in range(1, n + 1):
                bound_res = max(bound_res, residual("volwelch", a, k))
            for k in range(n, m + 1):
                bound_res = max(bound_res, residual("cv_cauchy_binet", a, k))
            for k in range(1, m + 1):
                sumsq = max(sumsq, residual("en_ne_sumsq", a, k))
        for c in controls:
            for k in range(1, n + 1):
                eq_err = max(eq_err, abs(ms.sum_sq_volume(c, k) - math.comb(n, k)))
    ok = min_margin > 1e-12 and eq_err <= 1e-9 and bound_res <= 1e-9 and sumsq <= 1e-9
    record(5, f"equal-norm suite ({TRIALS} frames x {len(SHAPES)} shapes)", ok,
           f"min strict margin {min_margin:.1e} > 1e-12, Parseval equality {eq_err:.1e}, "
           f"volwelch/cv bounds {bound_res:.1e}, sum-of-squares {sumsq:.1e} <= 1e-9",
           time.perf_counter() - t0, 120)


def test_c6_etf_certification():
    t0 = time.perf_counter()
    h = fc.harmonic_frame(7, (1, 2, 4)).entries
    g = h.conj().T @ h
    iu = np.triu_indices(7, 1)
    pair_err = float(np.max(np.abs(np.abs(g[iu]) - R2 / 7)))
    npairs = len(iu[0])
    simplex_ok = all(predicates(fc.simplex_etf(n)).is_equiangular for n in range(1, 11))
    # the saturation statement needs N >= 2, so simplex_etf(1) is excluded
    sat = [residual("thm_eanuke_saturation", h)]
    sat += [residual("thm_eanuke_saturation", fc.simplex_etf(n).entries) for n in range(2, 11)]
    tol = REGISTRY["thm_eanuke_saturation"].tolerance
    ok = npairs == 21 and pair_err <= 1e-12 and simplex_ok and max(sat) <= tol
    record(6, "ETF certification", ok,
           f"{npairs} pairs err {pair_err:.1e} <= 1e-12, simplex n<=10 equiangular={simplex_ok}, "
           f"saturation {max(sat):.1e} <= {tol:.0e}", time.perf_counter() - t0, 5)


def test_c7_gradient_checks():
    t0 = time.perf_counter()
    frames = [("P(4,2)", fc.random_parseval(4, 2, 17)), ("E(5,3)", fc.random_equal_norm(5, 3, 17))]
    worst, failures = 0.0, []
    for label, f in frames:
        n, m = f.entries.shape
        cases = [("tc", None), ("neg_ead", None), ("neg_gram_variance", None)]
        cases += [("vk", k) for k in range(1, n + 1)]
        cases += [("cvk", k) for k in range(n, m + 1)]
        cases += [("ne", k) for k in range(1, m + 1)]
        for kind, k in cases:
            for eps in (1e-2, 1e-4):
                err = fo.gradcheck(f, fo.Objective(kind, k, eps))
                tol = 1e-5 if kind in ("tc", "vk") else 1e-4
                worst = max(worst, err)
                if not err < tol:
                    failures.append(f"{label} {kind} k={k} eps={eps}: {err:.1e}")
    record(7, "analytic vs central-difference gradients", not failures,
           f"max rel err {worst:.1e} (< 1e-5 for tc/vk, < 1e-4 otherwise)"
           + (f"; failing {failures}" if failures else ""), time.perf_counter() - t0, 30)


def test_c8_split_zero():
    t0 = time.perf_counter()
    worst, min_gain = 0.0, math.inf
    for t in range(50):
        m, n = SHAPES[t % len(SHAPES)]
        f = fc.append_zero(fc.random_parseval(m, n, derive_seed(2026, t)))
        a = f.entries
        g = fc.split_zero(f)
        src = m - 1  # last nonzero column, the default source
        psi = a[:, src]
        others = [i for i in range(m) if i != src]
        expansion = (np.vdot(psi, psi).real
                     + (2 * R2 - 2) * sum(abs(np.vdot(psi, a[:, i])) for i in others))
        gain = ms.total_coherence(g) - ms.total_coherence(f)
        worst = max(worst, abs(gain - expansion))
        min_gain = min(min_gain, gain)
    record(8, "split-zero monotonicity (50 frames)", min_gain > 0 and worst <= 1e-10,
           f"min gain {min_gain:.3f} > 0, expansion err {worst:.1e} <= 1e-10",
           time.perf_counter() - t0, 5)


def test_c9_determinism(tmp_path, capsys):
    t0 = time.perf_counter()
    outs = []
    for i in range(2):
        d = tmp_path / f"r{i}"
        cli_main(["construct", "random_parseval", "--m", "5", "--n", "2", "--seed", "9",
                  "--out", str(d / "f.json")])
        cli_main(["--deterministic", "analyze", str(d / "f.json"), "--k", "1,2,3",
                  "--out", str(d / "report.json")])
        cli_main(["--deterministic", "verify", "--m-list", "4,5", "--n-list", "2,3", "--trials", "3",
                  "--seed", "9", "--out", str(d / "verify.json")])
        cli_main(["--deterministic", "optimize", "--objective", "ne", "--k", "2", "--m", "4",
                  "--n", "2", "--seeds", "3", "--seed", "9", "--out-dir", str(d / "opt")])
        outs.append([(d / p).read_bytes() for p in
                     ("report.json", "verify.json", "opt/summary.json", "opt/best_frame.json")])
    capsys.readouterr()
    same = outs[0] == outs[1]
    record(9, "deterministic byte-identical JSON", same, "4 report files compared",
           time.perf_counter() - t0, 60)


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-s"]))
