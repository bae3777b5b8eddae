"""Hoeffding tree for numeric features with Gaussian split estimation."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import ndtr

from .. import kernels
from .base import Classifier, UnsupportedConfiguration

VAR_FLOOR = 1e-9


class _Leaf:
    __slots__ = ("counts", "total", "w", "mean", "m2", "lo", "hi", "depth", "weight_at_eval")

    def __init__(self, n_classes, dim, depth, counts=None):
        self.counts = np.zeros(n_classes) if counts is None else counts.astype(float)
        self.w = np.zeros((n_classes, dim))
        self.mean = np.zeros((n_classes, dim))
        self.m2 = np.zeros((n_classes, dim))
        self.lo = np.full((n_classes, dim), np.inf)
        self.hi = np.full((n_classes, dim), -np.inf)
        self.depth = depth
        self.total = float(self.counts.sum())
        self.weight_at_eval = self.total

    def update(self, x, label, weight):
        self.counts[label] += weight
        self.total += weight
        n = self.w[label] + weight
        delta = x - self.mean[label]
        self.mean[label] += weight * delta / n
        self.m2[label] += weight * delta * (x - self.mean[label])
        self.w[label] = n
        np.minimum(self.lo[label], x, out=self.lo[label])
        np.maximum(self.hi[label], x, out=self.hi[label])

    def std(self):
        with np.errstate(divide="ignore", invalid="ignore"):
            v = np.where(self.w > 1.0, self.m2 / np.maximum(self.w - 1.0, 1e-300), 0.0)
        return np.sqrt(np.maximum(v, VAR_FLOOR))


class _Split:
    __slots__ = ("feature", "threshold", "left", "right")

    def __init__(self, feature, threshold, left, right):
        self.feature = feature
        self.threshold = threshold
        self.left = left
        self.right = right


def _entropy(dist):
    """Entropy in bits of each row of ``dist`` (weights, not probabilities)."""
    dist = np.atleast_2d(dist)
    tot = dist.sum(axis=-1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(tot > 0, dist / tot, 0.0)
        h = -np.where(p > 0, p * np.log2(p), 0.0).sum(axis=-1)
    return h


def info_gain(pre, branches, min_frac=0.01):
    """Information gain of splitting class distribution ``pre`` into ``branches``.

    branches: (..., B, C). Splits with fewer than two branches carrying at
    least ``min_frac`` of the weight score -inf.
    """
    branches = np.asarray(branches, dtype=float)
    bw = branches.sum(axis=-1)
    total = bw.sum(axis=-1)
    ok = (bw >= min_frac * total[..., None]).sum(axis=-1) >= 2
    h_children = (bw * _entropy(branches.reshape(-1, branches.shape[-1])).reshape(bw.shape)).sum(axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        gain = _entropy(pre)[0] - h_children / total
    return np.where(ok, gain, -np.inf)


def gaussian_split_dists(leaf, feature, n_points=10):
    """Candidate thresholds and their (left, right) class weights for one feature."""
    w = leaf.w[:, feature]
    seen = w > 0
    if not seen.any():
        return np.empty(0), np.empty((0, 2, w.size))
    lo = leaf.lo[seen, feature].min()
    hi = leaf.hi[seen, feature].max()
    if not hi > lo:
        return np.empty(0), np.empty((0, 2, w.size))
    cand = lo + (hi - lo) * np.arange(1, n_points + 1) / (n_points + 1)
    mean = leaf.mean[:, feature]
    sd = leaf.std()[:, feature]
    cdf = ndtr((cand[:, None] - mean[None, :]) / sd[None, :])
    left = w[None, :] * cdf
    below = cand[:, None] < leaf.lo[None, :, feature]
    above = cand[:, None] >= leaf.hi[None, :, feature]
    left = np.where(below, 0.0, np.where(above, w[None, :], left))
    left = np.where(seen[None, :], left, 0.0)
    right = w[None, :] - left
    return cand, np.stack([left, right], axis=1)


class HoeffdingTree(Classifier):
    """Incremental decision tree (VFDT) over numeric features.

    A leaf tries to split once it has gathered ``grace`` more weight since its
    last attempt. The best binary split must beat the runner-up (including the
    no-split option) by the Hoeffding bound
    ``sqrt(R^2 ln(1/delta_split) / (2 n))``, R = log2(n_classes), or the bound
    must drop below ``tie``.
    """

    name = "hoeffding_tree"

    def __init__(
        self,
        n_classes: int,
        dim: int,
        grace: int = 200,
        delta_split: float = 1e-7,
        tie: float = 0.05,
        max_depth: int = 20,
        leaf_prediction: str = "majority",
        nb_threshold: float = 0.0,
        n_split_points: int = 10,
    ):
        super().__init__(n_classes)
        if grace < 1:
            raise UnsupportedConfiguration("grace must be >= 1")
        if not 0 < delta_split < 1:
            raise UnsupportedConfiguration("delta_split must be in (0, 1)")
        if leaf_prediction not in ("majority", "nb"):
            raise UnsupportedConfiguration(f"leaf_prediction must be 'majority' or 'nb', got {leaf_prediction!r}")
        self.dim = dim
        self.grace = grace
        self.delta_split = delta_split
        self.tie = tie
        self.max_depth = max_depth
        self.leaf_prediction = leaf_prediction
        self.nb_threshold = nb_threshold
        self.n_split_points = n_split_points
        self.reset()

    def reset(self):
        self.root = _Leaf(self.n_classes, self.dim, 0)
        self.n_splits = 0

    def _sort(self, x):
        node = self.root
        while type(node) is _Split:
            node = node.left if x[node.feature] <= node.threshold else node.right
        return node

    def depth(self) -> int:
        def walk(n):
            if type(n) is _Split:
                return max(walk(n.left), walk(n.right))
            return n.depth
        return walk(self.root)

    def leaves(self):
        out, stack = [], [self.root]
        while stack:
            n = stack.pop()
            if type(n) is _Split:
                stack += [n.right, n.left]
            else:
                out.append(n)
        return out

    def splits(self):
        out, stack = [], [self.root]
        while stack:
            n = stack.pop()
            if type(n) is _Split:
                out.append(n)
                stack += [n.right, n.left]
        return out

    def predict(self, x):
        leaf = self._sort(x)
        if self.leaf_prediction == "nb" and leaf.total > self.nb_threshold:
            return int(kernels.leaf_nb_vote(leaf.counts, leaf.w, leaf.mean, leaf.m2, x, VAR_FLOOR))
        return int(np.argmax(leaf.counts))

    def train(self, x, label, weight=1.0):
        x = np.asarray(x, dtype=float)
        leaf = self._sort(x)
        leaf.update(x, int(label), float(weight))
        seen = leaf.total
        if seen - leaf.weight_at_eval >= self.grace:
            leaf.weight_at_eval = seen
            if leaf.depth < self.max_depth and np.count_nonzero(leaf.counts) > 1:
                self._attempt_split(leaf, seen)

    def hoeffding_bound(self, n):
        R = math.log2(max(self.n_classes, 2))
        return math.sqrt(R * R * math.log(1.0 / self.delta_split) / (2.0 * n))

    def best_splits(self, leaf):
        """(merit, feature, threshold, branch dists) per feature plus the null split."""
        out = [(0.0, None, None, None)]
        for f in range(self.dim):
            cand, dists = gaussian_split_dists(leaf, f, self.n_split_points)
            if cand.size == 0:
                continue
            gains = info_gain(leaf.counts, dists)
            k = int(np.argmax(gains))
            if np.isfinite(gains[k]):
                out.append((float(gains[k]), f, float(cand[k]), dists[k]))
        out.sort(key=lambda s: s[0], reverse=True)
        return out

    def _attempt_split(self, leaf, n):
        cands = self.best_splits(leaf)
        if len(cands) < 2:
            return
        best, second = cands[0], cands[1]
        eps = self.hoeffding_bound(n)
        if best[1] is None or not (best[0] - second[0] > eps or eps < self.tie):
            return
        _, f, thr, dists = best
        node = _Split(
            f, thr,
            _Leaf(self.n_classes, self.dim, leaf.depth + 1, dists[0]),
            _Leaf(self.n_classes, self.dim, leaf.depth + 1, dists[1]),
        )
        self._replace(leaf, node)
        self.n_splits += 1

    def _replace(self, leaf, node):
        if self.root is leaf:
            self.root = node
            return
        stack = [self.root]
        while stack:
            n = stack.pop()
            if n.left is leaf:
                n.left = node
                return
            if n.right is leaf:
                n.right = node
                return
            stack += [c for c in (n.left, n.right) if type(c) is _Split]
