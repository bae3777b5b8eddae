import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import rankdata

from driftbench import stats


def brute_wilcoxon(a, b):
    """Two-sided exact signed-rank p by listing every sign assignment."""
    d = np.asarray(a, float) - np.asarray(b, float)
    d = d[d != 0]
    if d.size == 0:
        return 1.0
    r = rankdata(np.abs(d))
    obs = r[d > 0].sum()
    mean = r.sum() / 2
    hits = 0
    for signs in itertools.product((0, 1), repeat=d.size):
        w = float(np.dot(signs, r))
        if abs(w - mean) >= abs(obs - mean) - 1e-9:
            hits += 1
    return hits / 2 ** d.size


def test_identical_samples():
    a = [0.1, 0.2, 0.3, 0.4]
    assert stats.wilcoxon_signed_rank(a, a) == 1.0


def test_all_positive_shift_n10():
    a = np.arange(10) * 0.37
    assert stats.wilcoxon_signed_rank(a + 1 + np.arange(10) * 0.01, a) == pytest.approx(2 / 1024)


def test_length_mismatch():
    with pytest.raises(ValueError):
        stats.wilcoxon_signed_rank([1, 2, 3], [1, 2])


def test_exact_regime_limit():
    with pytest.raises(ValueError):
        stats.wilcoxon_signed_rank(np.arange(26) + 1.0, np.zeros(26))


def test_matches_brute_force_500_cases():
    rng = np.random.default_rng(2024)
    for _ in range(500):
        n = int(rng.integers(2, 13))
        a = np.round(rng.normal(size=n), int(rng.integers(0, 3)))  # rounding creates ties and zeros
        b = np.round(rng.normal(size=n), int(rng.integers(0, 3)))
        assert stats.wilcoxon_signed_rank(a, b) == pytest.approx(brute_wilcoxon(a, b), abs=1e-12)


@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=2, max_size=14))
def test_symmetry(pairs):
    a, b = np.array(pairs, dtype=float).T
    assert stats.wilcoxon_signed_rank(a, b) == stats.wilcoxon_signed_rank(b, a)


@given(st.lists(st.floats(-1, 1), min_size=2, max_size=12), st.lists(st.floats(-1, 1), min_size=2, max_size=12))
def test_p_value_range(a, b):
    n = min(len(a), len(b))
    p = stats.wilcoxon_signed_rank(a[:n], b[:n])
    assert 0 < p <= 1


def test_unpaired_switch():
    a = np.arange(10.0)
    assert stats.wilcoxon_signed_rank(a, a[::-1], paired=False) == 1.0
    p = stats.wilcoxon_signed_rank(a, a + 100, paired=False)
    assert p == pytest.approx(2 / 184756)


def test_group_single_learner():
    g = stats.significance_groups({"S": {"x": [0.1, 0.2]}})
    assert g["S"].best == "x" and g["S"].members == ("x",)


def test_group_identical_learner_included():
    base = np.linspace(0.1, 0.2, 10)
    g = stats.significance_groups({"S": {"a": base, "b": base.copy(), "c": base + 0.5}})["S"]
    assert set(g.members) == {"a", "b"}


def test_group_excludes_oracle():
    g = stats.significance_groups({"S": {"opt": np.zeros(10), "a": np.full(10, 0.3) + np.arange(10) * 1e-3}})["S"]
    assert g.best == "a" and "opt" not in g.pvalues


def test_group_alpha_extremes():
    rng = np.random.default_rng(1)
    table = {"S": {k: rng.uniform(0, 1, 10) + i for i, k in enumerate("abcd")}}
    # every exact p with 10 seeds is >= 2/1024, so a tiny alpha keeps everyone
    assert set(stats.significance_groups(table, alpha=1e-9)["S"].members) == set("abcd")
    # alpha = 1 keeps only learners indistinguishable from the best (p = 1)
    assert stats.significance_groups(table, alpha=1.0)["S"].members == ("a",)


@given(st.permutations(list("abcde")), st.integers(0, 2**31))
def test_group_invariant_under_relabeling(order, seed):
    rng = np.random.default_rng(seed)
    vals = {k: rng.uniform(0, 1, 10) + 0.05 * i for i, k in enumerate("abcde")}
    rename = dict(zip("abcde", order))
    g1 = stats.significance_groups({"S": vals})["S"]
    g2 = stats.significance_groups({"S": {rename[k]: v for k, v in vals.items()}})["S"]
    assert {rename[m] for m in g1.members} == set(g2.members)


def test_group_needs_two_seeds():
    with pytest.raises(ValueError):
        stats.significance_groups({"S": {"a": [0.1], "b": [0.2]}})
