"""Frame-quality functionals and the closed-form bounds they obey.

Sums over pairs ``i != j`` run over ordered pairs, so every unordered pair
contributes twice.  Sums over subsets ``|K| = k`` enumerate all
``C(M, k)`` subsets and refuse to run past the subset cap.
"""

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .core import (EPS_RANK, FramePredicates, as_array, batched_singular_values,
                   gram, predicates, subset_blocks, welch_constant, _indices)
from .errors import CapExceeded, InvalidShape, ZeroVector

SPARK_CAP = 20


def _off_diagonal(g):
    return g[~np.eye(g.shape[0], dtype=bool)]


def total_coherence(frame):
    """Sum of ``|<phi_i, phi_j>|`` over ordered pairs ``i != j``."""
    g = gram(frame)
    return float(np.sum(np.abs(_off_diagonal(g))))


def coherence(frame, eps=1e-14):
    """Largest inner-product magnitude between normalized frame vectors."""
    a = as_array(frame)
    norms = np.linalg.norm(a, axis=0)
    if np.any(norms <= eps):
        raise ZeroVector("coherence is undefined for a frame with a zero vector")
    if a.shape[1] < 2:
        return 0.0
    return float(np.max(np.abs(_off_diagonal(gram(a / norms)))))


def welch_bound(m, n):
    """Lower bound on the coherence of ``m`` unit vectors in dimension ``n``."""
    if not 0 < n < m:
        raise InvalidShape(f"need 0 < N < M, got M={m}, N={n}")
    return math.sqrt((m - n) / (n * (m - 1)))


def equal_volume_constant(m, n, k):
    """Common k-volume of a Parseval frame whose k-volumes all agree.

    Evaluated as a product of ratios so it stays finite for large M.
    """
    if not 0 <= k <= n <= m:
        raise InvalidShape(f"need 0 <= k <= N <= M, got M={m}, N={n}, k={k}")
    prod = 1.0
    for j in range(k):
        prod *= (n - j) / (m - j)
    return math.sqrt(prod)


@dataclass
class EquiangularConstants:
    m: int
    n: int
    c_mn: float
    tc_upper: float
    tc_lower: float
    c_mnk: dict = field(default_factory=dict)
    vk_upper: dict = field(default_factory=dict)
    vk_lower: dict = field(default_factory=dict)
    cvk_upper: dict = field(default_factory=dict)
    ne_energy_identity: dict = field(default_factory=dict)


def equiangular_constants(m, n, k_list=()):
    """Constants and bounds attached to the shape ``(M, N)``.

    Per-k entries are only filled where they are defined: the volume
    constants need ``k <= N``, the complementary bound needs ``k >= N``.
    """
    if not 0 < n < m:
        raise InvalidShape(f"need 0 < N < M, got M={m}, N={n}")
    out = EquiangularConstants(
        m=m, n=n,
        c_mn=welch_constant(m, n),
        tc_upper=math.sqrt(n * (m - n) * (m - 1)),
        tc_lower=float(max(n, m - n)),
    )
    for k in k_list:
        if not 1 <= k <= m:
            raise InvalidShape(f"k={k} outside 1..{m}")
        if k <= n:
            out.c_mnk[k] = equal_volume_constant(m, n, k)
            out.vk_upper[k] = math.sqrt(math.comb(m, k) * math.comb(n, k))
            out.vk_lower[k] = float(math.comb(n, k))
        if k >= n:
            out.cvk_upper[k] = math.sqrt(math.comb(m, k) * math.comb(m - n, m - k))
        out.ne_energy_identity[k] = float(n * math.comb(m - 1, k - 1))
    return out


def _norm_term(g, n, m):
    return float(np.sum((g.diagonal().real - n / m) ** 2))


def equiangular_distance(frame):
    """Squared Frobenius distance from the Gram matrix of an ideal equiangular frame."""
    g = gram(frame)
    n, m = as_array(frame).shape
    c = welch_constant(m, n)
    return _norm_term(g, n, m) + float(np.sum((np.abs(_off_diagonal(g)) - c) ** 2))


def gram_variance(frame):
    """Return ``(v, c_phi)``: Gram spread about its own mean off-diagonal magnitude."""
    g = gram(frame)
    n, m = as_array(frame).shape
    off = np.abs(_off_diagonal(g))
    c_phi = float(off.mean()) if off.size else 0.0
    return _norm_term(g, n, m) + float(np.sum((off - c_phi) ** 2)), c_phi


def angular_deviation(frame):
    g = gram(frame)
    n, m = as_array(frame).shape
    c = welch_constant(m, n)
    return float(np.sum((np.abs(_off_diagonal(g)) - c) ** 2))


# -- subset machinery -------------------------------------------------------

def subset_singular_values(frame, k, cap=None):
    """Yield ``(index_block, singular_values)`` for all k-subsets, in order."""
    a = as_array(frame)
    for idx in subset_blocks(a.shape[1], k, cap):
        stack = np.moveaxis(a[:, idx], 1, 0)  # (S, N, k)
        yield idx, batched_singular_values(stack)


def _subset_map(frame, k, fn, cap=None):
    parts = [fn(s) for _, s in subset_singular_values(frame, k, cap)]
    return np.concatenate(parts)


def _require_k_le_n(frame, k):
    n, m = as_array(frame).shape
    if not 1 <= k <= min(n, m):
        raise InvalidShape(f"k-volumes need 1 <= k <= min(N, M); got k={k}, N={n}, M={m}")


def volume(frame, k_set):
    """k-dimensional volume of the parallelotope spanned by the selected columns."""
    a = as_array(frame)
    idx = _indices(k_set, a.shape[1])
    if len(idx) > a.shape[0]:
        raise InvalidShape(f"|K|={len(idx)} exceeds N={a.shape[0]}")
    if not idx:
        return 1.0
    return float(np.prod(np.linalg.svd(a[:, idx], compute_uv=False)))


def volumes(frame, k, cap=None):
    """All k-volumes in lexicographic subset order."""
    _require_k_le_n(frame, k)
    return _subset_map(frame, k, lambda s: np.prod(s, axis=1), cap)


def total_volume(frame, k, cap=None):
    return float(np.sum(volumes(frame, k, cap)))


def sum_sq_volume(frame, k, cap=None):
    return float(np.sum(volumes(frame, k, cap) ** 2))


def volume_variance(frame, k, cap=None):
    v = volumes(frame, k, cap)
    return float(np.sum((v - v.mean()) ** 2))


def comp_volume(frame, k_set):
    """Complementary volume ``sqrt(det(Phi_K Phi_K*))`` for ``|K| >= N``."""
    a = as_array(frame)
    idx = _indices(k_set, a.shape[1])
    if len(idx) < a.shape[0]:
        raise InvalidShape(f"|K|={len(idx)} is below N={a.shape[0]}")
    return float(np.prod(np.linalg.svd(a[:, idx], compute_uv=False)))


def comp_volumes(frame, k, cap=None):
    n, m = as_array(frame).shape
    if not n <= k <= m:
        raise InvalidShape(f"complementary volumes need N <= k <= M; got k={k}, N={n}, M={m}")
    return _subset_map(frame, k, lambda s: np.prod(s, axis=1), cap)


def total_comp_volume(frame, k, cap=None):
    return float(np.sum(comp_volumes(frame, k, cap)))


def nuclear_norms(frame, k, cap=None):
    n, m = as_array(frame).shape
    if not 1 <= k <= m:
        raise InvalidShape(f"need 1 <= k <= M; got k={k}, M={m}")
    return _subset_map(frame, k, lambda s: np.sum(s, axis=1), cap)


def nuclear_energy(frame, k, cap=None):
    """Sum of the nuclear norms of all ``N x k`` partial frames."""
    return float(np.sum(nuclear_norms(frame, k, cap)))


def singular_energy(frame, k, cap=None):
    """Sum over k-subsets of the squared singular values."""
    n, m = as_array(frame).shape
    if not 1 <= k <= m:
        raise InvalidShape(f"need 1 <= k <= M; got k={k}, M={m}")
    return float(np.sum(_subset_map(frame, k, lambda s: np.sum(s * s, axis=1), cap)))


def nuclear_variance(frame, k, cap=None):
    """Return ``(nvar, n_phi_k, d_phi_k)``.

    ``n_phi_k`` is the mean singular value over all subsets, ``d_phi_k``
    the mean nuclear norm, and ``nvar`` the spread of every singular value
    about ``n_phi_k``.
    """
    n, m = as_array(frame).shape
    if not 1 <= k <= m:
        raise InvalidShape(f"need 1 <= k <= M; got k={k}, M={m}")
    svals = _subset_map(frame, k, lambda s: s, cap)
    count = math.comb(m, k)
    ne = float(np.sum(svals))
    n_phi = ne / (min(n, k) * count)
    return float(np.sum((svals - n_phi) ** 2)), n_phi, ne / count


def nuclear_variance_parseval(m, n, k, ne):
    """Closed form of the nuclear variance of a Parseval frame from ``NE_k``."""
    return n * math.comb(m - 1, k - 1) - ne * ne / (min(n, k) * math.comb(m, k))


def min_volume(frame, k, cap=None):
    return float(np.min(volumes(frame, k, cap)))


def spark(frame, cap=SPARK_CAP, eps=EPS_RANK):
    """Size of the smallest linearly dependent subset; ``M + 1`` if none."""
    a = as_array(frame)
    n, m = a.shape
    if m > cap:
        raise CapExceeded(m, cap)
    for k in range(1, m + 1):
        if k > n:
            return k
        for _, s in subset_singular_values(a, k, cap=None):
            if np.any(s[:, -1] <= eps * s[:, 0]):
                return k
    return m + 1


def plucker(frame, cap=None):
    """Maximal minors ``det(Phi_K)``, ``|K| = N``, in lexicographic order."""
    a = as_array(frame)
    n, m = a.shape
    if n > m:
        raise InvalidShape(f"Plucker coordinates need N <= M, got N={n}, M={m}")
    parts = [np.linalg.det(np.moveaxis(a[:, idx], 1, 0)) for idx in subset_blocks(m, n, cap)]
    return np.concatenate(parts)


def plucker_relation_42(coords):
    """Residual ``x12 x34 - x13 x24 + x14 x23`` of the single Gr(4, 2) relation."""
    x = np.asarray(coords)
    if x.shape != (6,):
        raise InvalidShape(f"Gr(4,2) has 6 Plucker coordinates, got shape {x.shape}")
    x12, x13, x14, x23, x24, x34 = x
    return x12 * x34 - x13 * x24 + x14 * x23


# -- analysis report --------------------------------------------------------

@dataclass
class KMeasures:
    k: int
    total_volume: float = None
    sum_sq_volume: float = None
    volume_variance: float = None
    min_volume: float = None
    total_comp_volume: float = None
    nuclear_energy: float = None
    nuclear_variance: float = None
    mean_nuclear: float = None
    mean_singular: float = None
    singular_energy: float = None


@dataclass
class AnalysisReport:
    m: int
    n: int
    field: str
    tc: float
    ead: float
    gram_variance_v: float
    ad: float
    c_phi: float
    coherence: float
    min_norm: float
    max_norm: float
    spark: object
    per_k: list
    constants: EquiangularConstants
    predicates: FramePredicates

    def to_dict(self):
        d = asdict(self)
        if self.constants is not None:
            d["constants"] = {
                key: ({str(k): v for k, v in val.items()} if isinstance(val, dict) else val)
                for key, val in d["constants"].items()
            }
        return d


def analyze(frame, k_list=(), cap=None, spark_cap=SPARK_CAP):
    """Evaluate every measure on ``frame``; per-k values where defined."""
    a = as_array(frame)
    n, m = a.shape
    fld = "complex" if np.iscomplexobj(a) else "real"
    shaped = 0 < n < m
    norms = np.linalg.norm(a, axis=0)
    v, c_phi = gram_variance(a)
    try:
        coh = coherence(a)
    except ZeroVector:
        coh = None
    try:
        sp = spark(a, cap=spark_cap)
    except CapExceeded:
        sp = "exceeds cap"
    per_k = []
    for k in k_list:
        if not 1 <= k <= m:
            raise InvalidShape(f"k={k} outside 1..{m}")
        km = KMeasures(k=k)
        if k <= n:
            vols = volumes(a, k, cap)
            km.total_volume = float(np.sum(vols))
            km.sum_sq_volume = float(np.sum(vols ** 2))
            km.volume_variance = float(np.sum((vols - vols.mean()) ** 2))
            km.min_volume = float(np.min(vols))
        if k >= n:
            km.total_comp_volume = total_comp_volume(a, k, cap)
        km.nuclear_variance, km.mean_singular, km.mean_nuclear = nuclear_variance(a, k, cap)
        km.nuclear_energy = km.mean_nuclear * math.comb(m, k)
        km.singular_energy = singular_energy(a, k, cap)
        per_k.append(km)
    return AnalysisReport(
        m=m, n=n, field=fld,
        tc=total_coherence(a),
        ead=equiangular_distance(a) if shaped else None,
        gram_variance_v=v,
        ad=angular_deviation(a) if shaped else None,
        c_phi=c_phi,
        coherence=coh,
        min_norm=float(norms.min()),
        max_norm=float(norms.max()),
        spark=sp,
        per_k=per_k,
        constants=equiangular_constants(m, n, k_list) if shaped else None,
        predicates=predicates(a),
    )


def report_rows(report):
    """Flat ``(measure, k, value, bound_lower, bound_upper)`` rows."""
    c = report.constants
    rows = [
        ("tc", None, report.tc, c.tc_lower if c else None, c.tc_upper if c else None),
        ("ead", None, report.ead, 0.0, None),
        ("gram_variance_v", None, report.gram_variance_v, 0.0, None),
        ("ad", None, report.ad, 0.0, None),
        ("c_phi", None, report.c_phi, None, None),
        ("coherence", None, report.coherence,
         welch_bound(report.m, report.n) if c else None, None),
    ]
    for km in report.per_k:
        k = km.k
        rows += [
            ("total_volume", k, km.total_volume,
             c.vk_lower.get(k) if c else None, c.vk_upper.get(k) if c else None),
            ("volume_variance", k, km.volume_variance, 0.0, None),
            ("min_volume", k, km.min_volume, None, c.c_mnk.get(k) if c else None),
            ("total_comp_volume", k, km.total_comp_volume, None, c.cvk_upper.get(k) if c else None),
            ("nuclear_energy", k, km.nuclear_energy, None, None),
            ("nuclear_variance", k, km.nuclear_variance, 0.0, None),
            ("mean_nuclear", k, km.mean_nuclear, None, None),
            ("mean_singular", k, km.mean_singular, None, None),
        ]
    return rows
