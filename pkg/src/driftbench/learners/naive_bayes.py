"""Incremental Gaussian naive Bayes, single model and stacked bank."""

from __future__ import annotations

import numpy as np

from .. import kernels
from .base import Classifier

VAR_FLOOR = 1e-9


class NaiveBayesBank:
    """E independent Gaussian NB models sharing one set of arrays.

    Per (expert, class, feature) running mean and M2 are kept with a weighted
    Welford update, so training every expert on a pattern is one vector op.
    """

    def __init__(self, n_classes: int, dim: int, capacity: int = 8):
        self.n_classes = n_classes
        self.dim = dim
        self.size = 0
        self._alloc(capacity)

    def _alloc(self, capacity):
        C, d = self.n_classes, self.dim
        self.counts = np.zeros((capacity, C))
        self.means = np.zeros((capacity, C, d))
        self.m2 = np.zeros((capacity, C, d))

    def add(self) -> int:
        if self.size == self.counts.shape[0]:
            old = (self.counts, self.means, self.m2)
            self._alloc(2 * self.size)
            self.counts[: self.size] = old[0]
            self.means[: self.size] = old[1]
            self.m2[: self.size] = old[2]
        i = self.size
        self.counts[i] = 0.0
        self.means[i] = 0.0
        self.m2[i] = 0.0
        self.size += 1
        return i

    def keep(self, mask: np.ndarray) -> None:
        """Retain experts where ``mask`` is true, preserving order."""
        idx = np.flatnonzero(mask)
        n = idx.size
        self.counts[:n] = self.counts[idx]
        self.means[:n] = self.means[idx]
        self.m2[:n] = self.m2[idx]
        self.size = n

    def scores(self, x) -> np.ndarray:
        s = self.size
        return kernels.nb_bank_scores(self.counts[:s], self.means[:s], self.m2[:s], x, VAR_FLOOR)

    def predict_all(self, x) -> np.ndarray:
        """Per-expert argmax class; untrained experts answer 0."""
        if self.size == 0:
            return np.zeros(0, dtype=np.int64)
        return np.argmax(self.scores(x), axis=1)

    def train_all(self, x, label: int, weight: float = 1.0) -> None:
        s = self.size
        n = self.counts[:s, label] + weight
        self.counts[:s, label] = n
        delta = x - self.means[:s, label]
        self.means[:s, label] += (weight / n)[:, None] * delta
        self.m2[:s, label] += weight * delta * (x - self.means[:s, label])


class NaiveBayes(Classifier):
    name = "naive_bayes"

    def __init__(self, n_classes: int, dim: int):
        super().__init__(n_classes)
        self.dim = dim
        self.reset()

    def reset(self):
        self._bank = NaiveBayesBank(self.n_classes, self.dim, capacity=1)
        self._bank.add()

    def predict(self, x):
        return int(self._bank.predict_all(np.asarray(x, dtype=float))[0])

    def train(self, x, label, weight=1.0):
        self._bank.train_all(np.asarray(x, dtype=float), int(label), weight)

    @property
    def class_counts(self):
        return self._bank.counts[0].copy()

    @property
    def means(self):
        return self._bank.means[0].copy()

    @property
    def variances(self):
        n = self._bank.counts[0][:, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            v = np.where(n > 1, self._bank.m2[0] / np.maximum(n - 1, 1e-300), 0.0)
        return np.maximum(v, VAR_FLOOR)
