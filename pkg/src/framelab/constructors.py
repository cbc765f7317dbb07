"""Reference frames, seeded random frames and Naimark complements."""

import math

import numpy as np

from .core import (Frame, ScalarField, SubsetSelector, Tolerances, as_array, field_of,
                   gram, inv_sqrt_psd, like, predicates)
from .errors import (InvalidShape, NotParseval, NumericalFailure, PreconditionFailed,
                     RankMismatch, SingularMatrix)


def _field(field):
    return ScalarField(field) if field is not None else ScalarField.REAL


def rng(seed):
    """Generator for ``seed`` on the counter-based Philox bit generator."""
    seed = int(seed)
    if not 0 <= seed < 2 ** 64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.Philox(seed))


def gaussian(gen, shape, field=ScalarField.REAL):
    if _field(field) is ScalarField.REAL:
        return gen.standard_normal(shape)
    return (gen.standard_normal(shape) + 1j * gen.standard_normal(shape)) / math.sqrt(2)


def onb_padded(m, n, field="real"):
    """Standard basis of F^n followed by ``m - n`` zero vectors."""
    if not 0 < n <= m:
        raise InvalidShape(f"need 0 < n <= m, got m={m}, n={n}")
    a = np.zeros((n, m))
    a[:, :n] = np.eye(n)
    return Frame(a, _field(field))


def _phase_normalize(rows):
    """Make the largest-magnitude entry of each row real and positive."""
    out = np.array(rows, dtype=np.result_type(rows, np.float64))
    for r in out:
        mag = np.abs(r)
        j = int(np.argmax(mag >= mag.max() - 1e-9))
        r *= np.conj(r[j]) / mag[j]
    return out


def naimark_complement(frame, tol=1e-10):
    """Canonical ``(M - N) x M`` frame ``Psi`` with ``Psi* Psi = I - Phi* Phi``.

    The rows of ``Psi`` span the eigenvalue-1 eigenspace of ``I - Phi* Phi``
    (eigenvalues are split at 1/2) and each row is phase-normalized so its
    largest entry is real positive.
    """
    a = as_array(frame)
    n, m = a.shape
    if not n < m:
        raise InvalidShape(f"Naimark complement needs N < M, got N={n}, M={m}")
    pred = predicates(a, Tolerances(parseval=tol))
    if not pred.is_parseval:
        raise NotParseval(f"frame operator deviates from identity by {pred.residuals['parseval']:.3e}")
    proj = np.eye(m) - gram(a)
    w, v = np.linalg.eigh(proj)
    keep = w > 0.5
    if int(keep.sum()) != m - n:
        raise RankMismatch(f"I - Gram has rank {int(keep.sum())}, expected {m - n}")
    psi = _phase_normalize(v[:, keep].conj().T)
    return like(frame, psi)


def simplex_etf(n):
    """Real equiangular Parseval frame of ``n + 1`` vectors in R^n."""
    if n < 1:
        raise InvalidShape(f"need n >= 1, got {n}")
    ones = np.full((1, n + 1), 1 / math.sqrt(n + 1))
    return naimark_complement(Frame(ones, ScalarField.REAL))


def harmonic_frame(m, rows):
    """Rows ``rows`` of the ``m``-point DFT matrix, scaled to a Parseval frame.

    ``rows`` are frequencies in ``0..m-1``; a difference set gives an ETF.
    """
    idx = rows.indices if isinstance(rows, SubsetSelector) else tuple(rows)
    s = np.asarray(idx, dtype=np.int64)
    if s.size == 0 or s.size > m or len(set(idx)) != len(idx) or s.min() < 0 or s.max() >= m:
        raise InvalidShape(f"rows {idx} must be distinct frequencies in 0..{m - 1}")
    j = np.arange(m)
    phase = 2 * np.pi * np.outer(s, j) / m
    return Frame(np.exp(1j * phase) / math.sqrt(m), ScalarField.COMPLEX)


def paper_4_2():
    """Two scaled orthonormal bases of R^2 offset by 45 degrees; maximizes V_2 on P(4, 2)."""
    h = math.sqrt(2) / 2
    return Frame(np.array([[0.5, 0.0, -0.5, -h],
                           [0.5, h, 0.5, 0.0]]), ScalarField.REAL)


def mercedes_benz():
    """Explicit equiangular Parseval frame of three vectors in R^2."""
    return Frame(np.array([[math.sqrt(6) / 3, -math.sqrt(6) / 6, -math.sqrt(6) / 6],
                           [0.0, math.sqrt(2) / 2, -math.sqrt(2) / 2]]), ScalarField.REAL)


def parseval_retract(a):
    """Polar factor ``(A A*)^{-1/2} A``, the nearest Parseval frame."""
    s = a @ a.conj().T
    return inv_sqrt_psd(s) @ a


def random_parseval(m, n, seed, field="real"):
    """Parseval frame whose Gram matrix is a uniformly random rank-n projection."""
    if not 0 < n <= m:
        raise InvalidShape(f"need 0 < n <= m, got m={m}, n={n}")
    fld = _field(field)
    gen = rng(seed)
    for _ in range(3):
        try:
            return Frame(parseval_retract(gaussian(gen, (n, m), fld)), fld)
        except SingularMatrix:
            continue
    raise NumericalFailure("Gaussian draw was rank deficient three times")


def random_equal_norm(m, n, seed, field="real"):
    """Columns drawn uniformly from the sphere of radius ``sqrt(n/m)``."""
    if n < 1 or m < 1:
        raise InvalidShape(f"need positive m and n, got m={m}, n={n}")
    fld = _field(field)
    gen = rng(seed)
    g = gaussian(gen, (n, m), fld)
    norms = np.linalg.norm(g, axis=0)
    while np.any(norms == 0):  # probability zero; redraw the offending columns
        bad = norms == 0
        g[:, bad] = gaussian(gen, (n, int(bad.sum())), fld)
        norms = np.linalg.norm(g, axis=0)
    return Frame(g / norms * math.sqrt(n / m), fld)


def split_zero(frame, source=None, tol=1e-10):
    """Replace a trailing zero vector and ``phi_source`` by two copies of ``phi_source / sqrt 2``.

    The result is again Parseval and has strictly larger total coherence.
    ``source`` defaults to the last nonzero column.
    """
    a = as_array(frame)
    n, m = a.shape
    if m < 2:
        raise PreconditionFailed("need at least two vectors")
    if not predicates(a, Tolerances(parseval=tol)).is_parseval:
        raise NotParseval("split_zero needs a Parseval frame")
    norms = np.linalg.norm(a, axis=0)
    if norms[-1] != 0:
        raise PreconditionFailed("last column is not zero; permute a zero vector to the end first")
    if source is None:
        nonzero = np.flatnonzero(norms[:-1] > 0)
        if nonzero.size == 0:
            raise PreconditionFailed("no nonzero column to split")
        source = int(nonzero[-1])
    elif not 0 <= source < m - 1 or norms[source] == 0:
        raise PreconditionFailed(f"column {source} is not a nonzero column before the last")
    out = np.array(a)
    out[:, source] = a[:, source] / math.sqrt(2)
    out[:, -1] = a[:, source] / math.sqrt(2)
    return Frame(out, field_of(frame))


def append_zero(frame):
    a = as_array(frame)
    return like(frame, np.hstack([a, np.zeros((a.shape[0], 1), dtype=a.dtype)]))
