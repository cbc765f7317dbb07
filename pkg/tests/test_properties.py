"""Property tests: invariants that must hold for every seed and shape."""

import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from framelab import constructors as fc
from framelab import measures as ms
from framelab.core import predicates

seeds = st.integers(0, 2 ** 32)
fields = st.sampled_from(["real", "complex"])


@st.composite
def shapes(draw, max_m=7):
    m = draw(st.integers(3, max_m))
    n = draw(st.integers(1, m - 1))
    return m, n


@settings(max_examples=60, deadline=None)
@given(shapes(), seeds, fields)
def test_parseval_identities(shape, seed, field):
    m, n = shape
    a = fc.random_parseval(m, n, seed, field).entries
    psi = fc.naimark_complement(a).entries
    tc = ms.total_coherence(a)
    assert abs(tc - ms.total_coherence(psi)) < 1e-9
    assert tc <= math.sqrt(n * (m - n) * (m - 1)) + 1e-9
    v, _ = ms.gram_variance(a)
    assert abs(v - (n * (m - n) / m - tc ** 2 / (m * (m - 1)))) < 1e-9
    for k in range(1, n + 1):
        assert abs(ms.sum_sq_volume(a, k) - math.comb(n, k)) < 1e-9
    for k in range(1, m):
        diff = ms.nuclear_energy(psi, m - k) - ms.nuclear_energy(a, k)
        assert abs(diff - (m - n - k) * math.comb(m, k)) < 1e-7


@settings(max_examples=60, deadline=None)
@given(shapes(), seeds, fields, st.integers(1, 7))
def test_equal_norm_bounds(shape, seed, field, k):
    m, n = shape
    if k > m:
        return
    a = fc.random_equal_norm(m, n, seed, field).entries
    assert abs(ms.singular_energy(a, k) - k * n / m * math.comb(m, k)) < 1e-9
    if k <= n:
        assert ms.sum_sq_volume(a, k) <= math.comb(n, k) + 1e-9
        assert ms.min_volume(a, k) <= ms.equal_volume_constant(m, n, k) + 1e-12
    if k == 2 and n < m:
        assert ms.coherence(a) >= ms.welch_bound(m, n) - 1e-12


@settings(max_examples=40, deadline=None)
@given(shapes(), seeds, fields)
def test_unitary_and_permutation_invariance(shape, seed, field):
    m, n = shape
    a = fc.random_parseval(m, n, seed, field).entries
    gen = np.random.default_rng(seed)
    q, _ = np.linalg.qr(gen.standard_normal((n, n)) + (1j * gen.standard_normal((n, n))
                                                         if field == "complex" else 0))
    b = (q @ a)[:, gen.permutation(m)]
    assert abs(ms.total_coherence(a) - ms.total_coherence(b)) < 1e-10
    k = min(n, 2)
    assert abs(ms.total_volume(a, k) - ms.total_volume(b, k)) < 1e-10
    assert abs(ms.nuclear_energy(a, 2) - ms.nuclear_energy(b, 2)) < 1e-10
    assert predicates(b).is_parseval


@settings(max_examples=40, deadline=None)
@given(shapes(6), seeds)
def test_split_zero_increases_tc(shape, seed):
    m, n = shape
    f = fc.append_zero(fc.random_parseval(m, n, seed))
    g = fc.split_zero(f)
    assert ms.total_coherence(g) > ms.total_coherence(f)
    assert predicates(g).is_parseval
