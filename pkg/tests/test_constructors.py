import math

import numpy as np
import pytest

from framelab import constructors as fc
from framelab import measures as ms
from framelab.core import ScalarField, predicates
from framelab.errors import InvalidShape, NotParseval, PreconditionFailed


@pytest.mark.parametrize("n", range(1, 11))
def test_simplex_is_real_etf(n):
    f = fc.simplex_etf(n)
    assert f.shape == (n + 1, n) and f.field is ScalarField.REAL
    p = predicates(f)
    assert p.is_parseval and p.is_equal_norm and p.is_equiangular
    assert ms.total_coherence(f) == pytest.approx(n, abs=1e-12)


def test_harmonic_frame_parseval_and_difference_set():
    f = fc.harmonic_frame(7, (1, 2, 4))
    assert f.field is ScalarField.COMPLEX
    assert predicates(f).is_equiangular
    # a non difference set is Parseval and equal norm but not equiangular
    g = fc.harmonic_frame(7, (0, 1, 2))
    p = predicates(g)
    assert p.is_parseval and p.is_equal_norm and not p.is_equiangular
    with pytest.raises(InvalidShape):
        fc.harmonic_frame(7, (1, 1))


def test_mercedes_benz_matches_simplex_up_to_unitary(mb):
    g1 = mb.entries.T @ mb.entries
    g2 = fc.simplex_etf(2).entries.T @ fc.simplex_etf(2).entries
    # same Gram up to a signed permutation of columns is enough; compare spectra and |entries|
    assert np.allclose(np.sort(np.abs(g1).ravel()), np.sort(np.abs(g2).ravel()))


@pytest.mark.parametrize("field", ["real", "complex"])
def test_naimark_complement(field):
    f = fc.random_parseval(6, 2, 5, field)
    psi = fc.naimark_complement(f)
    assert psi.shape == (6, 4) and psi.field is f.field
    a, b = f.entries, psi.entries
    assert np.allclose(b.conj().T @ b, np.eye(6) - a.conj().T @ a, atol=1e-12)
    assert predicates(psi).is_parseval
    # double complement spans the original row space
    back = fc.naimark_complement(psi).entries
    assert np.allclose(back.conj().T @ back, a.conj().T @ a, atol=1e-12)


def test_naimark_needs_parseval():
    with pytest.raises(NotParseval):
        fc.naimark_complement(fc.random_equal_norm(5, 2, 0))
    with pytest.raises(InvalidShape):
        fc.naimark_complement(fc.onb_padded(3, 3))


def test_random_frames_are_seeded():
    a = fc.random_parseval(5, 3, 42).entries
    b = fc.random_parseval(5, 3, 42).entries
    c = fc.random_parseval(5, 3, 43).entries
    assert np.array_equal(a, b) and not np.allclose(a, c)
    e = fc.random_equal_norm(5, 3, 1, "complex")
    assert np.allclose(np.linalg.norm(e.entries, axis=0), math.sqrt(3 / 5))
    with pytest.raises(ValueError):
        fc.rng(-1)


def test_split_zero():
    f = fc.append_zero(fc.random_parseval(4, 2, 3))
    g = fc.split_zero(f)
    assert predicates(g).is_parseval
    assert ms.total_coherence(g) > ms.total_coherence(f)
    src = f.entries[:, 3]
    assert np.allclose(g.entries[:, 3], src / math.sqrt(2))
    assert np.allclose(g.entries[:, 4], src / math.sqrt(2))
    with pytest.raises(PreconditionFailed):
        fc.split_zero(fc.random_parseval(4, 2, 3))
    with pytest.raises(PreconditionFailed):
        fc.split_zero(f, source=4)
