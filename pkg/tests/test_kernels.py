"""The numba kernels and their numpy twins must agree."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from driftbench.kernels import _numpy

nb = pytest.importorskip("driftbench.kernels._numba")


@given(st.integers(1, 60), st.integers(1, 4), st.integers(1, 7), st.integers(0, 2**31))
def test_knn_vote(count, d, k, seed):
    rng = np.random.default_rng(seed)
    window = np.round(rng.normal(size=(64, d)), 1)  # rounding forces distance ties
    labels = rng.integers(0, 3, 64)
    ages = rng.permutation(64)
    q = np.round(rng.normal(size=d), 1)
    args = (window, labels, ages, count, q, min(k, count), 3)
    assert _numpy.knn_vote(*args) == nb.knn_vote(*args)


@given(st.integers(1, 12), st.integers(1, 5), st.integers(0, 2**31))
def test_nb_bank_scores(E, d, seed):
    rng = np.random.default_rng(seed)
    counts = rng.integers(0, 6, (E, 2)).astype(float)
    counts[:, 0] += 1
    means = rng.normal(size=(E, 2, d))
    m2 = rng.uniform(0, 5, (E, 2, d))
    x = rng.normal(size=d)
    a, b = _numpy.nb_bank_scores(counts, means, m2, x, 1e-9), nb.nb_bank_scores(counts, means, m2, x, 1e-9)
    assert np.array_equal(np.isinf(a), np.isinf(b))
    fin = np.isfinite(a)
    assert np.allclose(a[fin], b[fin], rtol=1e-12)


@given(st.integers(2, 30), st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.integers(0, 2**31))
def test_adwin_find_cut(nb_buckets, p0, p1, seed):
    rng = np.random.default_rng(seed)
    sizes = np.sort(2.0 ** rng.integers(0, 6, nb_buckets))[::-1]
    half = nb_buckets // 2
    p = np.where(np.arange(nb_buckets) < half, p0, p1)
    totals = np.floor(sizes * p + rng.uniform(0, 1, nb_buckets) * 0.5)
    totals = np.minimum(totals, sizes)
    var = totals * (1 - totals / sizes)
    args = (totals, var, sizes, nb_buckets, 0.002, 5)
    assert _numpy.adwin_find_cut(*args) == nb.adwin_find_cut(*args)


@given(st.lists(st.integers(1, 30), min_size=1, max_size=14), st.integers(0, 400))
def test_wilcoxon_tail_count(ranks, obs):
    r = np.array(ranks, dtype=np.int64)
    assert _numpy.wilcoxon_tail_count(r, obs) == nb.wilcoxon_tail_count(r, obs)


@given(st.integers(1, 5), st.integers(1, 4), st.integers(0, 2**31))
def test_mixture_logpdf(d, K, seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(K, d, d))
    chols = np.linalg.cholesky(A @ A.transpose(0, 2, 1) + np.eye(d))
    xs = rng.normal(size=(30, d)) * 3
    centers = rng.normal(size=(K, d))
    logw = np.log(rng.dirichlet(np.ones(K)))
    assert np.allclose(_numpy.mixture_logpdf(xs, centers, chols, logw), nb.mixture_logpdf(xs, centers, chols, logw))


@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**31))
def test_leaf_nb_vote(C, d, seed):
    rng = np.random.default_rng(seed)
    counts = rng.integers(0, 4, C).astype(float)
    w = np.where(rng.random((C, 1)) < 0.2, 0.0, rng.uniform(1, 9, (C, 1))) * np.ones((1, d))
    mean = rng.normal(size=(C, d))
    m2 = rng.uniform(0, 4, (C, d))
    x = rng.normal(size=d)
    args = (counts, w, mean, m2, x, 1e-9)
    assert _numpy.leaf_nb_vote(*args) == nb.leaf_nb_vote(*args)


def test_backend_switch_respects_env(monkeypatch):
    import importlib

    import driftbench.kernels as k

    monkeypatch.setenv("DRIFTBENCH_NUMBA", "0")
    try:
        assert importlib.reload(k).BACKEND == "numpy"
    finally:
        monkeypatch.delenv("DRIFTBENCH_NUMBA")
        importlib.reload(k)
    assert k.BACKEND == "numba"
