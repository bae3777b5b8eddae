"""Exact Wilcoxon tests and best-learner significance groups."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import mannwhitneyu, rankdata

from . import kernels

MAX_EXACT_N = 25


def wilcoxon_signed_rank(a, b, paired: bool = True) -> float:
    """Two-sided exact p-value comparing per-seed results ``a`` and ``b``.

    Paired: signed-rank over ``a - b`` with zero differences dropped and
    midranks for ties, p counted over all 2^n sign assignments.
    Unpaired: exact rank-sum (Mann-Whitney) test on the two samples.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 1 or b.ndim != 1:
        raise ValueError("samples must be 1-D")
    if a.size != b.size:
        raise ValueError(f"length mismatch: {a.size} vs {b.size}")
    if not paired:
        if np.array_equal(np.sort(a), np.sort(b)):
            return 1.0
        return float(mannwhitneyu(a, b, alternative="two-sided", method="exact").pvalue)
    diff = a - b
    diff = diff[diff != 0]
    n = diff.size
    if n == 0:
        return 1.0
    if n > MAX_EXACT_N:
        raise ValueError(f"{n} nonzero differences exceed the exact regime (<= {MAX_EXACT_N})")
    ranks2 = np.rint(2 * rankdata(np.abs(diff))).astype(np.int64)
    observed2 = int(ranks2[diff > 0].sum())
    count = kernels.wilcoxon_tail_count(ranks2, observed2)
    return min(1.0, count / float(1 << n))


@dataclass(frozen=True)
class Group:
    scenario: str
    best: str
    members: tuple[str, ...]
    pvalues: dict  # learner -> p-value against the best


def group_for(finals: dict, alpha: float = 0.05, paired: bool = True, scenario: str = "") -> Group:
    """Group of learners not significantly different from the lowest-mean one.

    ``finals`` maps learner id -> per-seed final errors. Ties on the mean go to
    the first learner in mapping order.
    """
    if not finals:
        raise ValueError("no learners to compare")
    ids = list(finals)
    means = [float(np.mean(finals[i])) for i in ids]
    best = ids[int(np.argmin(means))]
    pvals = {}
    for lid in ids:
        pvals[lid] = 1.0 if lid == best else wilcoxon_signed_rank(finals[best], finals[lid], paired)
    members = tuple(lid for lid in ids if pvals[lid] >= alpha)
    return Group(scenario, best, members, pvals)


def significance_groups(result, alpha: float = 0.05, paired: bool = True, exclude=("opt",)) -> dict:
    """Per-scenario group tied with the best learner; the oracle is excluded.

    ``result`` is an ExperimentResult or a mapping scenario -> {learner: finals}.
    """
    if hasattr(result, "traces"):
        table = {
            sc: {lid: result.finals(sc, lid) for lid in result.learners}
            for sc in result.scenarios
        }
    else:
        table = result
    out = {}
    for sc, finals in table.items():
        kept = {lid: np.asarray(v) for lid, v in finals.items() if lid not in exclude}
        kept = {lid: v for lid, v in kept.items() if not np.isnan(v).any()}
        if not kept:
            continue
        if any(v.size < 2 for v in kept.values()) and len(kept) > 1:
            raise ValueError(f"{sc}: significance groups need at least 2 seeds")
        out[sc] = group_for(kept, alpha, paired, sc)
    return out
