"""Frame representation and the small linear-algebra contract used everywhere.

A frame is an ``N x M`` matrix whose columns are the frame vectors.  All
functions accept either a :class:`Frame` or a plain array.  Subsets of
column indices are 0-based and enumerated in lexicographic order.
"""

import enum
import itertools
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import (CapExceeded, IndexOutOfRange, InvalidShape,
                     NumericalFailure, SingularMatrix)

DEFAULT_SUBSET_CAP = 2_000_000
EPS_RANK = 1e-12
_CHUNK = 1 << 15


class ScalarField(enum.Enum):
    REAL = "real"
    COMPLEX = "complex"

    @property
    def dtype(self):
        return np.float64 if self is ScalarField.REAL else np.complex128


@dataclass(frozen=True, eq=False)
class Frame:
    """Immutable ``N x M`` frame; column ``i`` is the vector phi_i."""

    entries: np.ndarray
    field: ScalarField = None

    def __post_init__(self):
        a = np.array(self.entries)
        if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
            raise InvalidShape(f"frame entries must be a nonempty 2-d array, got shape {a.shape}")
        fld = self.field
        if fld is None:
            fld = ScalarField.COMPLEX if np.iscomplexobj(a) and np.any(a.imag != 0) else ScalarField.REAL
        fld = ScalarField(fld)
        if fld is ScalarField.REAL:
            if np.iscomplexobj(a):
                if np.any(a.imag != 0):
                    raise InvalidShape("real frame has entries with nonzero imaginary part")
                a = a.real
            a = a.astype(np.float64)
        else:
            a = a.astype(np.complex128)
        if not np.all(np.isfinite(a)):
            raise InvalidShape("frame entries must be finite")
        a.flags.writeable = False
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "field", fld)

    @property
    def n_dim(self):
        return self.entries.shape[0]

    @property
    def n_vecs(self):
        return self.entries.shape[1]

    @property
    def shape(self):
        """``(M, N)`` in the order the literature quotes frame sizes."""
        return self.n_vecs, self.n_dim

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __repr__(self):
        return f"Frame(M={self.n_vecs}, N={self.n_dim}, field={self.field.value})"


def as_array(frame):
    """Return the ``N x M`` matrix behind ``frame`` (Frame or array-like)."""
    if isinstance(frame, Frame):
        return frame.entries
    a = np.asarray(frame)
    if a.ndim != 2:
        raise InvalidShape(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def field_of(frame):
    if isinstance(frame, Frame):
        return frame.field
    return ScalarField.COMPLEX if np.iscomplexobj(frame) else ScalarField.REAL


def like(template, entries):
    """Wrap ``entries`` as a Frame with the field of ``template``."""
    fld = field_of(template)
    if fld is ScalarField.REAL and np.iscomplexobj(entries):
        entries = entries.real
    return Frame(entries, fld)


@dataclass(frozen=True)
class SubsetSelector:
    """A strictly increasing subset ``indices`` of ``range(m)``."""

    m: int
    indices: tuple

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise InvalidShape(f"subset indices must be strictly increasing: {idx}")
        if idx and (idx[0] < 0 or idx[-1] >= self.m):
            raise IndexOutOfRange(f"subset {idx} not contained in range({self.m})")
        object.__setattr__(self, "indices", idx)

    @property
    def k(self):
        return len(self.indices)

    def complement(self):
        chosen = set(self.indices)
        return SubsetSelector(self.m, tuple(i for i in range(self.m) if i not in chosen))

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)


def gram(frame):
    """Hermitian Gram matrix ``Phi* Phi``, symmetrized against roundoff."""
    a = as_array(frame)
    g = a.conj().T @ a
    return (g + g.conj().T) / 2


def frame_operator(frame):
    a = as_array(frame)
    s = a @ a.conj().T
    return (s + s.conj().T) / 2


def _indices(k_set, m):
    if isinstance(k_set, SubsetSelector):
        if k_set.m != m:
            raise InvalidShape(f"selector built for m={k_set.m}, frame has M={m}")
        return list(k_set.indices)
    return list(SubsetSelector(m, tuple(k_set)).indices)


def partial_frame(frame, k_set):
    """Columns of ``frame`` indexed by ``k_set``, in index order."""
    a = as_array(frame)
    idx = _indices(k_set, a.shape[1])
    return like(frame, a[:, idx])


def singular_values(frame):
    """Singular values in decreasing order (``min(N, k)`` of them)."""
    try:
        return np.linalg.svd(as_array(frame), compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(str(exc)) from exc


def batched_singular_values(stack):
    """Singular values for a stack of matrices, shape ``(S, min(N, k))``."""
    try:
        return np.linalg.svd(stack, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(str(exc)) from exc


def numerical_rank(frame, eps=EPS_RANK):
    s = singular_values(frame)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > eps * s[0]))


@dataclass(frozen=True)
class Tolerances:
    parseval: float = 1e-10
    norm: float = 1e-10
    angle: float = 1e-10
    rank: float = EPS_RANK


@dataclass(frozen=True)
class FramePredicates:
    is_frame: bool
    is_parseval: bool
    is_equal_norm: bool
    is_equiangular: bool
    residuals: dict = field(default_factory=dict)


def welch_constant(m, n):
    """Common inner-product magnitude of an equiangular Parseval frame."""
    if not 0 < n < m:
        raise InvalidShape(f"the equiangular constant needs 0 < N < M, got M={m}, N={n}")
    return math.sqrt(n * (m - n) / (m * m * (m - 1)))


def predicates(frame, tolerances=Tolerances()):
    a = as_array(frame)
    n, m = a.shape
    g = gram(a)
    norms_sq = g.diagonal().real
    parseval_res = float(np.linalg.norm(frame_operator(a) - np.eye(n)))
    norm_res = float(np.max(np.abs(norms_sq - n / m)))
    rank = numerical_rank(a, tolerances.rank)
    residuals = {"parseval": parseval_res, "equal_norm": norm_res, "rank_deficit": float(n - rank)}
    is_parseval = parseval_res <= tolerances.parseval
    is_equal_norm = norm_res <= tolerances.norm
    is_equiangular = False
    if m > n and m > 1:
        off = np.abs(g[~np.eye(m, dtype=bool)])
        angle_res = float(np.max(np.abs(off - welch_constant(m, n))))
        residuals["angle"] = angle_res
        is_equiangular = is_parseval and is_equal_norm and angle_res <= tolerances.angle
    return FramePredicates(
        is_frame=rank == n,
        is_parseval=is_parseval,
        is_equal_norm=is_equal_norm,
        is_equiangular=is_equiangular,
        residuals=residuals,
    )


def subset_cap():
    """Subset cap, overridable through ``FRAMELAB_SUBSET_CAP``."""
    raw = os.environ.get("FRAMELAB_SUBSET_CAP")
    return int(raw) if raw else DEFAULT_SUBSET_CAP


def check_cap(m, k, cap=None):
    cap = subset_cap() if cap is None else cap
    count = math.comb(m, k)
    if count > cap:
        raise CapExceeded(count, cap)
    return count


def subsets(m, k, cap=None):
    """Yield every k-subset of ``range(m)`` once, lexicographically."""
    if not 0 < k <= m:
        raise InvalidShape(f"need 0 < k <= m, got m={m}, k={k}")
    check_cap(m, k, cap)
    for idx in itertools.combinations(range(m), k):
        yield SubsetSelector(m, idx)


def subset_blocks(m, k, cap=None, chunk=_CHUNK):
    """Yield ``(S, k)`` integer arrays covering all k-subsets in order.

    Reductions over the blocks happen in a fixed order, so sums are
    reproducible bit for bit.
    """
    if not 0 < k <= m:
        raise InvalidShape(f"need 0 < k <= m, got m={m}, k={k}")
    check_cap(m, k, cap)
    combos = itertools.combinations(range(m), k)
    while True:
        block = list(itertools.islice(combos, chunk))
        if not block:
            return
        yield np.array(block, dtype=np.intp).reshape(len(block), k)


def inv_sqrt_psd(matrix, eps=EPS_RANK):
    """``S`` with ``S A S = I`` for Hermitian positive definite ``A``."""
    a = np.asarray(matrix)
    a = (a + a.conj().T) / 2
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(str(exc)) from exc
    if w[0] <= eps:
        raise SingularMatrix(f"smallest eigenvalue {w[0]:.3e} is not above {eps:.1e}")
    s = (v / np.sqrt(w)) @ v.conj().T
    return (s + s.conj().T) / 2
