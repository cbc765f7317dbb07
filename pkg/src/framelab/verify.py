"""Named numerical checks of the identities and bounds frames obey.

Each registered check takes a frame (and ``k`` where relevant) and returns
a :class:`CheckResult` whose residual is the measured deviation from the
claimed statement.  A check whose hypothesis does not hold for the given
input reports ``skipped`` with a reason instead of passing silently.
"""

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import measures as ms
from .constructors import (append_zero, harmonic_frame, naimark_complement, onb_padded,
                           paper_4_2, random_equal_norm, random_parseval, simplex_etf, split_zero)
from .core import as_array, gram, predicates, subset_blocks, welch_constant
from .errors import InvalidShape, UnknownCheck

PARSEVAL, EQUAL_NORM, EQUAL_NORM_PARSEVAL, ANY = "parseval", "equal_norm", "equal_norm_parseval", "any"


@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: float
    tolerance: float
    context: str = ""
    skipped: str = None

    def to_dict(self):
        return asdict(self)


@dataclass
class VerifyReport:
    results: list = field(default_factory=list)
    seed: int = None
    trials: int = None

    @property
    def counts(self):
        skipped = sum(r.skipped is not None for r in self.results)
        passed = sum(r.passed for r in self.results)
        return {"total": len(self.results), "passed": passed, "skipped": skipped,
                "failed": len(self.results) - passed - skipped}

    @property
    def ok(self):
        return self.counts["failed"] == 0

    def to_dict(self):
        return {"schema": 1, "seed": self.seed, "trials": self.trials, "summary": self.counts,
                "results": [r.to_dict() for r in self.results]}


class Skip(Exception):
    """Raised inside a check when its hypothesis does not apply."""


@dataclass(frozen=True)
class Check:
    name: str
    statement: str
    requires: str
    uses_k: bool
    tolerance: float
    fn: object


REGISTRY = {}


def check(name, statement, requires=ANY, uses_k=False, tolerance=1e-9):
    def deco(fn):
        REGISTRY[name] = Check(name, statement, requires, uses_k, tolerance, fn)
        return fn
    return deco


def _shape(a):
    n, m = a.shape
    return m, n


def _need(cond, reason):
    if not cond:
        raise Skip(reason)


# -- total coherence -------------------------------------------------------

@check("prop_tcnaimark", "Naimark complements have equal total coherence.", PARSEVAL)
def _tcnaimark(a, k, tol):
    m, n = _shape(a)
    _need(n < m, "needs N < M")
    return abs(ms.total_coherence(a) - ms.total_coherence(naimark_complement(a))), ""


@check("thm_main_bound", "Total coherence on P(M,N) is at most sqrt(N(M-N)(M-1)), "
       "attained exactly by equiangular Parseval frames.", PARSEVAL)
def _tc_upper(a, k, tol):
    m, n = _shape(a)
    _need(n < m, "needs N < M")
    tc, ub = ms.total_coherence(a), math.sqrt(n * (m - n) * (m - 1))
    return max(0.0, tc - ub), f"gap={ub - tc:.3e}"


@check("prop_tcbound_lower", "Equal-norm Parseval frames have total coherence at least max(N, M-N).",
       EQUAL_NORM_PARSEVAL)
def _tc_lower(a, k, tol):
    m, n = _shape(a)
    _need(n < m, "needs N < M")
    return max(0.0, max(n, m - n) - ms.total_coherence(a)), ""


@check("split_zero_increases_tc", "Splitting a vector into a trailing zero slot keeps the frame "
       "Parseval and raises total coherence by |psi|^2 + (2 sqrt 2 - 2) sum |<psi, phi_i>|.",
       PARSEVAL, tolerance=1e-10)
def _split(a, k, tol):
    if np.linalg.norm(a[:, -1]) != 0:
        a = as_array(append_zero(a))
    out = as_array(split_zero(a))
    norms = np.linalg.norm(a, axis=0)
    src = int(np.flatnonzero(norms[:-1] > 0)[-1])
    psi = a[:, src]
    others = [i for i in range(a.shape[1] - 1) if i != src]
    expected = norms[src] ** 2 + (2 * math.sqrt(2) - 2) * float(np.sum(np.abs(psi.conj() @ a[:, others])))
    delta = ms.total_coherence(out) - ms.total_coherence(a)
    still_parseval = predicates(out).is_parseval
    residual = abs(delta - expected) if delta > 0 and still_parseval else math.inf
    return residual, f"delta_tc={delta:.6g}"


@check("ead_identity", "On P(M,N), EAD = N - N^2/M + M(M-1)c^2 - 2c TC.", PARSEVAL, tolerance=1e-8)
def _ead(a, k, tol):
    m, n = _shape(a)
    _need(n < m, "needs N < M")
    c = welch_constant(m, n)
    closed = n - n * n / m + m * (m - 1) * c * c - 2 * c * ms.total_coherence(a)
    return abs(ms.equiangular_distance(a) - closed), ""


@check("v_identity", "On P(M,N), V = N(M-N)/M - TC^2/(M(M-1)).", PARSEVAL, tolerance=1e-8)
def _v(a, k, tol):
    m, n = _shape(a)
    _need(m > 1, "needs M > 1")
    closed = n * (m - n) / m - ms.total_coherence(a) ** 2 / (m * (m - 1))
    return abs(ms.gram_variance(a)[0] - closed), ""


@check("ead_ad_equal_norm", "EAD equals AD exactly when the Parseval frame is equal norm.",
       PARSEVAL, tolerance=1e-10)
def _ead_ad(a, k, tol):
    m, n = _shape(a)
    _need(n < m, "needs N < M")
    gap = ms.equiangular_distance(a) - ms.angular_deviation(a)
    norm_term = float(np.sum((gram(a).diagonal().real - n / m) ** 2))
    equal = predicates(a).is_equal_norm
    # the gap is exactly the norm-variance term, zero iff equal norm
    return abs(gap - norm_term) + (abs(gap) if equal else 0.0), f"equal_norm={equal}"


# -- volumes -----------------------------------------------------------------

def _k_le_n(a, k):
    m, n = _shape(a)
    _need(1 <= k <= n, f"needs 1 <= k <= N (k={k}, N={n})")
    return m, n


@check("prop_prodcos", "Squared k-volumes of a Parseval frame sum to C(N,k).", PARSEVAL, True)
def _prodcos(a, k, tol):
    m, n = _k_le_n(a, k)
    return abs(ms.sum_sq_volume(a, k) - math.comb(n, k)), ""


@check("prop_volbound", "C(N,k) <= V_k <= sqrt(C(M,k) C(N,k)) on P(M,N).", PARSEVAL, True)
def _volbound(a, k, tol):
    m, n = _k_le_n(a, k)
    v = ms.total_volume(a, k)
    lo, hi = math.comb(n, k), math.sqrt(math.comb(m, k) * math.comb(n, k))
    return max(0.0, lo - v, v - hi), f"V_k={v:.12g}"


@check("volvar_identity", "On P(M,N), Var_k = C(N,k) - V_k^2 / C(M,k).", PARSEVAL, True, 1e-8)
def _volvar(a, k, tol):
    m, n = _k_le_n(a, k)
    v = ms.total_volume(a, k)
    return abs(ms.volume_variance(a, k) - (math.comb(n, k) - v * v / math.comb(m, k))), ""


@check("thm_equalvol", "If all k-volumes of a Parseval frame agree, all (k-1)-volumes equal "
       "the equal-volume constant for k-1.", PARSEVAL, True, 1e-6)
def _equalvol(a, k, tol):
    m, n = _k_le_n(a, k)
    _need(k >= 2, "needs k >= 2")
    v = ms.volumes(a, k)
    _need(np.ptp(v) <= 1e-8, "hypothesis not met: k-volumes differ")
    lower = ms.volumes(a, k - 1)
    return float(np.max(np.abs(lower - ms.equal_volume_constant(m, n, k - 1)))), ""


@check("cor_equal_2vol_equiangular", "A Parseval frame with equal 2-volumes is equiangular.",
       PARSEVAL, tolerance=1e-10)
def _equal2(a, k, tol):
    m, n = _shape(a)
    _need(2 <= n < m, "needs 2 <= N < M")
    _need(np.ptp(ms.volumes(a, 2)) <= 1e-8, "hypothesis not met: 2-volumes differ")
    res = predicates(a).residuals
    return max(res["parseval"], res["equal_norm"], res["angle"]), ""


@check("prop_naimarkvol", "Through det(I + A) = 1 + sum det(A_J), equal k-volumes c_{M,N,k} in a "
       "Parseval frame give equal k-volumes c_{M,M-N,k} in its Naimark complement.",
       PARSEVAL, True, 1e-8)
def _naimarkvol(a, k, tol):
    m, n = _shape(a)
    _need(n < m and 1 <= k <= min(n, m - n), f"needs k <= min(N, M-N) (k={k})")
    psi = as_array(naimark_complement(a))
    g = gram(a)
    # det(I - G_K) = sum over J in K of (-1)^|J| det(G_J)
    identity_res = 0.0
    for idx in subset_blocks(m, k):
        for K in idx:
            lhs = ms.volume(psi, list(K)) ** 2
            identity_res = max(identity_res, abs(lhs - _det_expansion(g, K)))
    vols = ms.volumes(a, k)
    if np.max(np.abs(vols - ms.equal_volume_constant(m, n, k))) > 1e-8:
        return identity_res, "hypothesis not met; determinant identity only"
    comp = ms.volumes(psi, k)
    return max(identity_res, float(np.max(np.abs(comp - ms.equal_volume_constant(m, m - n, k))))), ""


def _det_expansion(g, K):
    """``1 + sum_J (-1)^|J| det(G_J)`` over nonempty ``J`` contained in ``K``."""
    total = 1.0
    for j in range(1, len(K) + 1):
        for block in subset_blocks(len(K), j):
            subs = K[block]  # (S, j)
            dets = np.linalg.det(g[subs[:, :, None], subs[:, None, :]]).real
            total += (-1) ** j * float(np.sum(dets))
    return total


@check("prop_svn", "Singular values of Psi_{K^c} equal those of Phi_K up to padding with ones.",
       PARSEVAL, True)
def _svn(a, k, tol):
    m, n = _shape(a)
    _need(n < m and 1 <= k <= n, f"needs N < M and 1 <= k <= N (k={k})")
    psi = as_array(naimark_complement(a))
    worst = 0.0
    for idx in subset_blocks(m, k):
        for K in idx:
            comp = np.setdiff1d(np.arange(m), K)
            s_phi = np.linalg.svd(a[:, K], compute_uv=False)
            s_psi = np.linalg.svd(psi[:, comp], compute_uv=False)
            size = max(s_phi.size, s_psi.size)
            s_phi = np.concatenate([np.ones(size - s_phi.size), s_phi])
            s_psi = np.concatenate([np.ones(size - s_psi.size), s_psi])
            worst = max(worst, float(np.max(np.abs(s_phi - s_psi))))
    return worst, ""


@check("prop_vcv", "V_k of a Parseval frame equals CV_{M-k} of its Naimark complement.",
       PARSEVAL, True, 1e-8)
def _vcv(a, k, tol):
    m, n = _shape(a)
    _need(n < m and 1 <= k <= n, f"needs N < M and 1 <= k <= N (k={k})")
    psi = naimark_complement(a)
    return abs(ms.total_volume(a, k) - ms.total_comp_volume(psi, m - k)), ""


@check("plucker_relation_42", "Plucker coordinates of any 2 x 4 frame satisfy "
       "x12 x34 - x13 x24 + x14 x23 = 0.", ANY, tolerance=1e-10)
def _plucker(a, k, tol):
    _need(a.shape == (2, 4), "needs M=4, N=2")
    return abs(ms.plucker_relation_42(ms.plucker(a))), ""


# -- nuclear energy ----------------------------------------------------------

@check("nukebound_identity", "On P(M,N), squared singular values over all k-subsets sum to "
       "N C(M-1,k-1).", PARSEVAL, True)
def _nukebound(a, k, tol):
    m, n = _shape(a)
    _need(1 <= k <= m, "needs 1 <= k <= M")
    return abs(ms.singular_energy(a, k) - n * math.comb(m - 1, k - 1)), ""


@check("nvar_identity", "On P(M,N), NVar_k = N C(M-1,k-1) - NE_k^2 / (min(N,k) C(M,k)).",
       PARSEVAL, True, 1e-8)
def _nvar(a, k, tol):
    m, n = _shape(a)
    _need(1 <= k <= m, "needs 1 <= k <= M")
    nvar, n_phi, d_phi = ms.nuclear_variance(a, k)
    closed = ms.nuclear_variance_parseval(m, n, k, d_phi * math.comb(m, k))
    return abs(nvar - closed), ""


@check("thm_eanuke_saturation", "Equiangular Parseval frames have equal 2-nuclear norms and attain "
       "NE_2 = sqrt(M N (M-1)^2 / 2 + M(M-1) V_2).", EQUAL_NORM_PARSEVAL)
def _eanuke(a, k, tol):
    m, n = _shape(a)
    _need(2 <= n < m, "needs 2 <= N < M")
    _need(predicates(a).is_equiangular, "input is not equiangular")
    norms = ms.nuclear_norms(a, 2)
    ne = float(np.sum(norms))
    bound = math.sqrt(0.5 * m * n * (m - 1) ** 2 + m * (m - 1) * ms.total_volume(a, 2))
    return max(float(np.ptp(norms)), abs(ne - bound)), f"NE_2={ne:.12g}"


@check("ne_naimark_offset", "NE_{M-k}(Psi) - NE_k(Phi) = (M-N-k) C(M,k) for Naimark complements.",
       PARSEVAL, True, 1e-7)
def _ne_offset(a, k, tol):
    m, n = _shape(a)
    _need(n < m and 1 <= k <= m - 1, "needs N < M and 1 <= k <= M-1")
    psi = naimark_complement(a)
    diff = ms.nuclear_energy(psi, m - k) - ms.nuclear_energy(a, k)
    return abs(diff - (m - n - k) * math.comb(m, k)), ""


# -- equal-norm frames -------------------------------------------------------

@check("thm_fp", "On E(M,N), squared k-volumes sum to at most C(N,k), with equality iff Parseval "
       "(for k >= 2).", EQUAL_NORM, True, 1e-9)
def _fp(a, k, tol):
    m, n = _k_le_n(a, k)
    s, target = ms.sum_sq_volume(a, k), math.comb(n, k)
    if predicates(a).is_parseval or k == 1:
        return abs(s - target), "equality case"
    margin = target - s
    # strict inequality needs a margin above 1e-12
    return (0.0 if margin > 1e-12 else math.inf), f"margin={margin:.3e}"


@check("volwelch", "On E(M,N), the smallest k-volume is at most c_{M,N,k}; for k=2 this is the "
       "Welch bound on coherence.", EQUAL_NORM, True)
def _volwelch(a, k, tol):
    m, n = _k_le_n(a, k)
    _need(n < m, "needs N < M")
    res = max(0.0, ms.min_volume(a, k) - ms.equal_volume_constant(m, n, k))
    if k == 2:
        res = max(res, ms.welch_bound(m, n) - ms.coherence(a))
    return res, ""


@check("cv_cauchy_binet", "On E(M,N), sum cv_k^2 = C(M-N,M-k) det(Phi Phi*) and "
       "CV_k <= sqrt(C(M,k) C(M-N,M-k)) for k >= N.", EQUAL_NORM, True)
def _cv(a, k, tol):
    m, n = _shape(a)
    _need(n <= k <= m, f"needs N <= k <= M (k={k})")
    cv = ms.comp_volumes(a, k)
    det = float(np.linalg.det(a @ a.conj().T).real)
    identity = abs(float(np.sum(cv ** 2)) - math.comb(m - n, m - k) * det)
    upper = math.sqrt(math.comb(m, k) * math.comb(m - n, m - k))
    return max(identity, float(np.sum(cv)) - upper, 0.0), ""


@check("en_ne_sumsq", "On E(M,N), squared singular values over all k-subsets sum to "
       "(kN/M) C(M,k).", EQUAL_NORM, True)
def _en_sumsq(a, k, tol):
    m, n = _shape(a)
    _need(1 <= k <= m, "needs 1 <= k <= M")
    return abs(ms.singular_energy(a, k) - k * n / m * math.comb(m, k)), ""


# -- runners -----------------------------------------------------------------

def _describe(frame):
    a = as_array(frame)
    fld = "complex" if np.iscomplexobj(a) else "real"
    return f"M={a.shape[1]} N={a.shape[0]} {fld}"


def _meets(requires, a):
    if requires == ANY:
        return None
    p = predicates(a)
    if requires in (PARSEVAL, EQUAL_NORM_PARSEVAL) and not p.is_parseval:
        return "input is not Parseval"
    if requires in (EQUAL_NORM, EQUAL_NORM_PARSEVAL) and not p.is_equal_norm:
        return "input is not equal norm"
    return None


def run_check(name, frame=None, k=None, m=None, n=None, seed=None, label=None):
    """Run one registered check on ``frame``, or on a random frame built from ``(m, n, seed)``."""
    try:
        chk = REGISTRY[name]
    except KeyError:
        raise UnknownCheck(name) from None
    if frame is None:
        if None in (m, n, seed):
            raise ValueError("give a frame or all of m, n, seed")
        make = random_equal_norm if chk.requires == EQUAL_NORM else random_parseval
        frame = make(m, n, seed)
        label = label or f"{make.__name__}(m={m}, n={n}, seed={seed})"
    a = as_array(frame)
    context = label or _describe(a)
    if chk.uses_k:
        if k is None:
            raise ValueError(f"check {name} needs k")
        context += f" k={k}"
    reason = _meets(chk.requires, a)
    if reason is None:
        try:
            residual, extra = chk.fn(a, k, chk.tolerance)
        except Skip as skip:
            reason = str(skip)
    if reason is not None:
        return CheckResult(name, False, math.nan, chk.tolerance, context, skipped=reason)
    if extra:
        context += f" ({extra})"
    residual = float(residual)
    return CheckResult(name, residual <= chk.tolerance, residual, chk.tolerance, context)


@dataclass(frozen=True)
class SuiteConfig:
    m_list: tuple = (4, 5, 6, 7, 8)
    n_list: tuple = (2, 3, 4)
    k_list: tuple = (1, 2, 3)
    trials: int = 50
    seed: int = 0
    field: str = "real"


def derive_seed(seed, *tags):
    """Deterministic 64-bit child seed for ``(seed, *tags)``."""
    return int(np.random.SeedSequence([int(seed), *map(int, tags)]).generate_state(1, np.uint64)[0])


def suite_instances(config):
    """``(label, frame)`` pairs the suite runs over, in a fixed order."""
    out = []
    shapes = [(m, n) for m in config.m_list for n in config.n_list if 0 < n < m]
    for m, n in shapes:
        out.append((f"onb_padded({m},{n})", onb_padded(m, n)))
        out.append((f"harmonic({m},0..{n - 1})", harmonic_frame(m, range(n))))
    for n in sorted({n for _, n in shapes} | {2, 3}):
        out.append((f"simplex_etf({n})", simplex_etf(n)))
    out.append(("harmonic(7,{1,2,4})", harmonic_frame(7, (1, 2, 4))))
    out.append(("paper_4_2", paper_4_2()))
    for m, n in shapes:
        for t in range(config.trials):
            s = derive_seed(config.seed, m, n, t, 0)
            out.append((f"random_parseval({m},{n},seed={s})", random_parseval(m, n, s, config.field)))
            s = derive_seed(config.seed, m, n, t, 1)
            out.append((f"random_equal_norm({m},{n},seed={s})", random_equal_norm(m, n, s, config.field)))
    return out


def run_suite(config=SuiteConfig(), names=None, extra=()):
    """Run every applicable check over the constructed and random instances.

    ``extra`` holds additional ``(label, frame)`` pairs, e.g. frames read
    from files.  Inputs a check does not apply to are recorded as skipped.
    """
    names = list(REGISTRY) if names is None else list(names)
    report = VerifyReport(seed=config.seed, trials=config.trials)
    for label, frame in list(suite_instances(config)) + list(extra):
        a = as_array(frame)
        for name in names:
            chk = REGISTRY[name]
            if chk.uses_k:
                ks = [k for k in config.k_list if 1 <= k <= a.shape[1]]
                for k in ks:
                    report.results.append(_suite_one(name, a, k, label))
            else:
                report.results.append(_suite_one(name, a, None, label))
    return report


def _suite_one(name, a, k, label):
    try:
        return run_check(name, a, k=k, label=label)
    except InvalidShape as exc:
        chk = REGISTRY[name]
        return CheckResult(name, False, math.nan, chk.tolerance, label, skipped=str(exc))


def junit_xml(report):
    """Render a report as JUnit XML for CI systems."""
    import xml.etree.ElementTree as ET
    c = report.counts
    suite = ET.Element("testsuite", name="framelab.verify", tests=str(c["total"]),
                       failures=str(c["failed"]), skipped=str(c["skipped"]))
    for r in report.results:
        case = ET.SubElement(suite, "testcase", classname=r.name, name=r.context)
        if r.skipped is not None:
            ET.SubElement(case, "skipped", message=r.skipped)
        elif not r.passed:
            ET.SubElement(case, "failure",
                          message=f"residual {r.residual!r} > tolerance {r.tolerance!r}")
    return ET.tostring(suite, encoding="unicode")
