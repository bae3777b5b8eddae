"""numba-compiled twins of the kernels in ``_numpy.py``."""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def knn_vote(window, labels, ages, count, query, k, n_classes):
    if count == 0:
        return 0
    d = window.shape[1]
    if k > count:
        k = count
    best_d = np.full(k, np.inf)
    best_a = np.full(k, np.iinfo(np.int64).max)
    best_i = np.full(k, -1)
    for i in range(count):
        s = 0.0
        for j in range(d):
            t = window[i, j] - query[j]
            s += t * t
        a = ages[i]
        # insertion into the sorted top-k by (distance, age)
        pos = k
        while pos > 0 and (s < best_d[pos - 1] or (s == best_d[pos - 1] and a < best_a[pos - 1])):
            pos -= 1
        if pos < k:
            for q in range(k - 1, pos, -1):
                best_d[q] = best_d[q - 1]
                best_a[q] = best_a[q - 1]
                best_i[q] = best_i[q - 1]
            best_d[pos] = s
            best_a[pos] = a
            best_i[pos] = i
    if k == 1:
        return labels[best_i[0]]
    votes = np.zeros(n_classes, dtype=np.int64)
    for q in range(k):
        votes[labels[best_i[q]]] += 1
    nearest = labels[best_i[0]]
    top = votes.max()
    if votes[nearest] == top:
        return nearest
    return np.argmax(votes)


@njit(cache=True)
def nb_bank_scores(counts, means, m2, x, var_floor):
    E, C, d = means.shape
    out = np.empty((E, C))
    log2pi = math.log(2.0 * math.pi)
    for e in range(E):
        tot = 0.0
        for c in range(C):
            tot += counts[e, c]
        for c in range(C):
            n = counts[e, c]
            if n <= 0.0:
                out[e, c] = -np.inf
                continue
            s = math.log(n / tot)
            for j in range(d):
                v = m2[e, c, j] / (n - 1.0) if n > 1.0 else 0.0
                if v < var_floor:
                    v = var_floor
                r = x[j] - means[e, c, j]
                s += -0.5 * (log2pi + math.log(v) + r * r / v)
            out[e, c] = s
    return out


@njit(cache=True)
def adwin_find_cut(totals, variances, sizes, nb, delta, min_len):
    if nb < 2:
        return 0
    n_all = 0.0
    tot_all = 0.0
    for i in range(nb):
        n_all += sizes[i]
        tot_all += totals[i]
    if n_all < 2 * min_len:
        return 0
    mean_all = tot_all / n_all
    m2_all = 0.0
    for i in range(nb):
        r = totals[i] / sizes[i] - mean_all
        m2_all += variances[i] + sizes[i] * r * r
    var = m2_all / n_all
    dd = math.log(2.0 * math.log(n_all) / delta)
    n0 = 0.0
    t0 = 0.0
    found = 0
    for i in range(nb - 1):
        n0 += sizes[i]
        t0 += totals[i]
        n1 = n_all - n0
        if n0 < min_len or n1 < min_len:
            continue
        t1 = tot_all - t0
        diff = abs(t0 / n0 - t1 / n1)
        m = 1.0 / (n0 - min_len + 1.0) + 1.0 / (n1 - min_len + 1.0)
        eps = math.sqrt(2.0 * m * var * dd) + (2.0 / 3.0) * dd * m
        if diff > eps:
            found = i + 1
    return found


@njit(cache=True)
def wilcoxon_tail_count(ranks2, observed2):
    n = ranks2.shape[0]
    total = 0
    for i in range(n):
        total += ranks2[i]
    thr = abs(2 * observed2 - total)
    count = 0
    # Gray-code walk: one rank flips per step
    s = 0
    if abs(2 * s - total) >= thr:
        count += 1
    signs = np.zeros(n, dtype=np.int8)
    for g in range(1, 1 << n):
        j = 0
        while not (g >> j) & 1:
            j += 1
        if signs[j]:
            s -= ranks2[j]
            signs[j] = 0
        else:
            s += ranks2[j]
            signs[j] = 1
        if abs(2 * s - total) >= thr:
            count += 1
    return count


@njit(cache=True)
def mixture_logpdf(xs, centers, chols, logw):
    n, d = xs.shape
    K = centers.shape[0]
    out = np.empty((n, K))
    z = np.empty(d)
    c0 = 0.5 * d * math.log(2.0 * math.pi)
    for k in range(K):
        L = chols[k]
        hl = 0.0
        for j in range(d):
            hl += math.log(L[j, j])
        for i in range(n):
            # forward substitution L z = x - mu
            q = 0.0
            for a in range(d):
                acc = xs[i, a] - centers[k, a]
                for b in range(a):
                    acc -= L[a, b] * z[b]
                z[a] = acc / L[a, a]
                q += z[a] * z[a]
            out[i, k] = logw[k] - 0.5 * q - hl - c0
    return out


@njit(cache=True)
def leaf_nb_vote(counts, w, mean, m2, x, var_floor):
    C, d = mean.shape
    for c in range(C):
        if counts[c] > 0.0 and w[c, 0] <= 0.0:
            return np.argmax(counts)
    best = -np.inf
    best_c = -1
    for c in range(C):
        if counts[c] <= 0.0:
            continue
        s = math.log(counts[c])
        for j in range(d):
            v = m2[c, j] / (w[c, j] - 1.0) if w[c, j] > 1.0 else 0.0
            if v < var_floor:
                v = var_floor
            r = x[j] - mean[c, j]
            s += -0.5 * (math.log(v) + r * r / v)
        if s > best or best_c < 0:
            best = s
            best_c = c
    if best_c < 0:
        return 0
    return best_c
