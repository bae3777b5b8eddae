"""Pure-numpy implementations of the hot kernels.

Every function here has a twin in ``_numba.py`` with the same signature and
the same tie-breaking rules, so both paths produce identical results.
"""

import numpy as np


def knn_vote(window, labels, ages, count, query, k, n_classes):
    """Majority label among the ``k`` nearest stored patterns.

    ``ages`` holds insertion counters; equal distances prefer the older
    pattern. Vote ties go to the label of the nearest neighbour.
    """
    if count == 0:
        return 0
    diff = window[:count] - query
    dist = np.einsum("ij,ij->i", diff, diff)
    if k == 1:
        best = dist.min()
        cand = np.flatnonzero(dist == best)
        if cand.size > 1:
            cand = cand[np.argmin(ages[cand])]
        else:
            cand = cand[0]
        return int(labels[cand])
    k = min(k, count)
    order = np.lexsort((ages[:count], dist))[:k]
    votes = np.bincount(labels[order], minlength=n_classes)
    top = votes.max()
    nearest = labels[order[0]]
    if votes[nearest] == top:
        return int(nearest)
    return int(np.argmax(votes))


def nb_bank_scores(counts, means, m2, x, var_floor):
    """Joint log-likelihood per (expert, class) for a bank of Gaussian NB models.

    counts: (E, C) class weights; means, m2: (E, C, d) Welford accumulators.
    Classes with zero count get -inf.
    """
    n = counts[:, :, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        var = np.where(n > 1.0, m2 / np.maximum(n - 1.0, 1e-300), 0.0)
    var = np.maximum(var, var_floor)
    ll = -0.5 * (np.log(2.0 * np.pi * var) + (x - means) ** 2 / var).sum(axis=2)
    totals = counts.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        logprior = np.log(counts / np.where(totals > 0, totals, 1.0))
    out = logprior + ll
    out[counts <= 0.0] = -np.inf
    return out


def adwin_find_cut(totals, variances, sizes, nb, delta, min_len):
    """Scan bucket boundaries from oldest to newest for a significant split.

    Buckets are ordered oldest first. Returns the number of oldest buckets to
    drop, or 0 if no boundary exceeds the cut threshold.
    """
    if nb < 2:
        return 0
    n_all = sizes[:nb].sum()
    if n_all < 2 * min_len:
        return 0
    tot_all = totals[:nb].sum()
    mean_all = tot_all / n_all
    # window variance from per-bucket (size, total, M2)
    m2_all = variances[:nb].sum() + np.sum(
        sizes[:nb] * (totals[:nb] / sizes[:nb] - mean_all) ** 2
    )
    var = m2_all / n_all
    dd = np.log(2.0 * np.log(n_all) / delta)
    n0 = np.cumsum(sizes[: nb - 1])
    t0 = np.cumsum(totals[: nb - 1])
    n1 = n_all - n0
    t1 = tot_all - t0
    ok = (n0 >= min_len) & (n1 >= min_len)
    if not ok.any():
        return 0
    n0 = n0[ok]
    n1 = n1[ok]
    diff = np.abs(t0[ok] / n0 - t1[ok] / n1)
    m = 1.0 / (n0 - min_len + 1.0) + 1.0 / (n1 - min_len + 1.0)
    eps = np.sqrt(2.0 * m * var * dd) + (2.0 / 3.0) * dd * m
    hit = np.flatnonzero(diff > eps)
    if hit.size == 0:
        return 0
    idx = np.flatnonzero(ok)[hit[-1]]
    return int(idx + 1)


_DOUBLING_LIMIT = 20


def wilcoxon_tail_count(ranks2, observed2):
    """Count sign assignments whose doubled statistic is at least as extreme.

    ``ranks2`` are doubled midranks (integers). The statistic is the doubled
    positive-rank sum; extremeness is measured as distance from its mean,
    compared in 4x units to stay integral.
    """
    ranks2 = np.asarray(ranks2, dtype=np.int64)
    n = ranks2.size
    total = int(ranks2.sum())
    thr = abs(2 * int(observed2) - total)
    head = ranks2[: min(n, _DOUBLING_LIMIT)]
    tail = ranks2[head.size:]
    sums = np.zeros(1, dtype=np.int64)
    for r in head:
        sums = np.concatenate((sums, sums + r))
    count = 0
    for mask in range(1 << tail.size):
        off = 0
        for j in range(tail.size):
            if mask >> j & 1:
                off += int(tail[j])
        count += int(np.count_nonzero(np.abs(2 * (sums + off) - total) >= thr))
    return count


def mixture_logpdf(xs, centers, chols, logw):
    """log p(x) for each row of ``xs`` under a Gaussian mixture.

    chols: (K, d, d) lower Cholesky factors; logw: (K,) log priors.
    Returns (N, K) array of log(prior * pdf) per component.
    """
    xs = np.atleast_2d(xs)
    n, d = xs.shape
    out = np.empty((n, centers.shape[0]))
    for k in range(centers.shape[0]):
        L = chols[k]
        z = np.linalg.solve(L, (xs - centers[k]).T)
        half_logdet = np.log(np.diag(L)).sum()
        out[:, k] = (
            logw[k]
            - 0.5 * np.einsum("ij,ij->j", z, z)
            - half_logdet
            - 0.5 * d * np.log(2.0 * np.pi)
        )
    return out


def leaf_nb_vote(counts, w, mean, m2, x, var_floor):
    """Gaussian naive-Bayes decision from a tree leaf's per-class summaries.

    Classes never seen at the leaf are excluded; no classes seen gives 0. A
    seen class without feature summaries (fresh leaf after a split) makes the
    leaf fall back to its majority class.
    """
    seen = counts > 0
    if not seen.any():
        return 0
    if np.any(seen & (w[:, 0] <= 0)):
        return int(np.argmax(counts))
    with np.errstate(divide="ignore", invalid="ignore"):
        var = np.where(w > 1.0, m2 / np.maximum(w - 1.0, 1e-300), 0.0)
    var = np.maximum(var, var_floor)
    ll = -0.5 * (np.log(var) + (x - mean) ** 2 / var)
    score = np.log(np.where(seen, counts, 1.0)) + ll.sum(axis=1)
    score[~seen] = -np.inf
    return int(np.argmax(score))
