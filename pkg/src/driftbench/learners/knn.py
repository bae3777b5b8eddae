"""k-nearest-neighbour classifier over a fixed-size sliding window."""

from __future__ import annotations

import numpy as np

from .. import kernels
from .base import Classifier, UnsupportedConfiguration


class WindowKNN(Classifier):
    """Keeps the last ``wsize`` patterns in a ring buffer.

    Memory is O(wsize). Equal distances prefer the older stored pattern; vote
    ties go to the nearest neighbour's label.
    """

    name = "window_knn"

    def __init__(self, n_classes: int, dim: int, wsize: int = 100, k: int = 1):
        super().__init__(n_classes)
        if int(wsize) < 1:
            raise UnsupportedConfiguration(f"wsize must be >= 1, got {wsize}")
        if not 1 <= int(k) <= int(wsize):
            raise UnsupportedConfiguration(f"k must be in [1, wsize], got {k}")
        self.dim = dim
        self.wsize = int(wsize)
        self.k = int(k)
        self.reset()

    def reset(self):
        self._X = np.zeros((self.wsize, self.dim))
        self._y = np.zeros(self.wsize, dtype=np.int64)
        self._age = np.zeros(self.wsize, dtype=np.int64)
        self._count = 0
        self._next = 0
        self._seen = 0

    def __len__(self):
        return self._count

    def predict(self, x):
        return int(
            kernels.knn_vote(
                self._X, self._y, self._age, self._count,
                np.asarray(x, dtype=float), self.k, self.n_classes,
            )
        )

    def train(self, x, label):
        i = self._next
        self._X[i] = x
        self._y[i] = label
        self._age[i] = self._seen
        self._seen += 1
        self._next = (i + 1) % self.wsize
        self._count = min(self._count + 1, self.wsize)

    def stored(self):
        """(X, labels) oldest first."""
        order = np.argsort(self._age[: self._count], kind="stable")
        return self._X[order].copy(), self._y[order].copy()
