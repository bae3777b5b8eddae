"""Bayes-optimal classifier as a learner."""

from __future__ import annotations

import numpy as np

from ..drift import Scenario, bayes_labels, posterior_batch
from .base import Classifier


class BayesOracle(Classifier):
    """Argmax of the true posterior at the current step.

    The step index is the number of patterns trained so far, which matches
    the interleaved test-then-train order. Training data is otherwise ignored.
    """

    name = "oracle"
    batch_capable = True

    def __init__(self, scenario: Scenario):
        super().__init__(scenario.n_classes)
        self.scenario = scenario
        self.reset()

    def reset(self):
        self.t = 0

    def predict(self, x):
        t = min(self.t, self.scenario.length - 1)
        post = posterior_batch(self.scenario, [t], np.asarray(x, dtype=float)[None, :])
        return int(np.argmax(post[0]))

    def train(self, x, label):
        self.t += 1

    def predict_batch(self, ts, xs) -> np.ndarray:
        return bayes_labels(self.scenario, ts, xs)
