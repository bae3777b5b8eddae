"""Dynamic Weighted Majority over naive Bayes experts."""

from __future__ import annotations

import numpy as np

from .base import Classifier, UnsupportedConfiguration
from .naive_bayes import NaiveBayesBank


class DWM(Classifier):
    """Weighted-vote ensemble that reweights, prunes and grows every ``period`` steps.

    At an update step every expert wrong on the current pattern is scaled by
    ``beta``, weights are renormalized to max 1, experts below ``theta`` are
    dropped and, if the ensemble vote was wrong, a fresh expert with weight 1
    joins. All experts then train on the pattern.
    """

    name = "dwm"

    def __init__(self, n_classes: int, dim: int, beta: float = 0.5, theta: float = 0.01, period: int = 50):
        super().__init__(n_classes)
        if not 0 < beta < 1:
            raise UnsupportedConfiguration(f"beta must be in (0, 1), got {beta}")
        if not 0 <= theta < 1:
            raise UnsupportedConfiguration(f"theta must be in [0, 1), got {theta}")
        if int(period) < 1:
            raise UnsupportedConfiguration(f"period must be >= 1, got {period}")
        self.dim = dim
        self.beta = float(beta)
        self.theta = float(theta)
        self.period = int(period)
        self.reset()

    def reset(self):
        self.bank = NaiveBayesBank(self.n_classes, self.dim)
        self.bank.add()
        self.weights = np.ones(1)
        self._steps = 0
        self.max_experts_seen = 1

    @property
    def n_experts(self) -> int:
        return self.bank.size

    def _vote(self, preds) -> int:
        votes = np.bincount(preds, weights=self.weights, minlength=self.n_classes)
        return int(np.argmax(votes))

    def predict(self, x):
        return self._vote(self.bank.predict_all(np.asarray(x, dtype=float)))

    def train(self, x, label):
        x = np.asarray(x, dtype=float)
        label = int(label)
        self._steps += 1
        preds = self.bank.predict_all(x)
        if self._steps % self.period == 0:
            glob = self._vote(preds)
            w = self.weights
            w[preds != label] *= self.beta
            w /= w.max()
            keep = w >= self.theta
            if not keep.all():
                self.bank.keep(keep)
                self.weights = w[keep]
            if glob != label:
                self.bank.add()
                self.weights = np.append(self.weights, 1.0)
            self.max_experts_seen = max(self.max_experts_seen, self.bank.size)
        self.bank.train_all(x, label)
