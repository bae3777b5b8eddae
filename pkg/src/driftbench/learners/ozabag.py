"""Online bagging with per-member ADWIN error monitors."""

from __future__ import annotations

import numpy as np

from .adwin import ADWIN
from .base import Classifier, UnsupportedConfiguration, learner_rng
from .hoeffding import HoeffdingTree


class OzaBagADWIN(Classifier):
    """Ensemble of ``m`` Hoeffding trees trained with Poisson(1) multiplicities.

    Members predict with naive Bayes at the leaves unless ``leaf_prediction``
    says otherwise. Each member's 0-1 error (measured before it trains on the pattern) feeds
    its ADWIN. When monitors signal an increase in error, the signaling member
    with the highest error estimate is replaced by a fresh tree.
    """

    name = "ozabag_adwin"

    def __init__(
        self,
        n_classes: int,
        dim: int,
        seed: int = 0,
        m: int = 10,
        delta: float = 0.002,
        use_adwin: bool = True,
        **tree_params,
    ):
        super().__init__(n_classes)
        if int(m) < 1:
            raise UnsupportedConfiguration(f"ensemble size m must be >= 1, got {m}")
        self.dim = dim
        self.m = int(m)
        self.delta = float(delta)
        self.use_adwin = bool(use_adwin)
        self.seed = seed
        self.tree_params = tree_params
        self.reset()

    def _tree(self):
        params = {"leaf_prediction": "nb", **self.tree_params}
        return HoeffdingTree(self.n_classes, self.dim, **params)

    def reset(self):
        self.rng = learner_rng(self.seed, 0x0BA6)
        self.members = [self._tree() for _ in range(self.m)]
        self.monitors = [ADWIN(self.delta) for _ in range(self.m)]
        self.n_resets = 0

    def _member_votes(self, x):
        return np.fromiter((t.predict(x) for t in self.members), dtype=np.int64, count=self.m)

    def predict(self, x):
        votes = np.bincount(self._member_votes(np.asarray(x, dtype=float)), minlength=self.n_classes)
        return int(np.argmax(votes))

    def train(self, x, label):
        x = np.asarray(x, dtype=float)
        label = int(label)
        wrong = self._member_votes(x) != label
        ks = self.rng.poisson(1.0, self.m)
        signaled = []
        for i, tree in enumerate(self.members):
            if ks[i] > 0:
                tree.train(x, label, float(ks[i]))
            if self.use_adwin:
                mon = self.monitors[i]
                before = mon.estimation
                if mon.update(float(wrong[i])) and mon.estimation > before:
                    signaled.append(i)
        if signaled:
            worst = max(signaled, key=lambda i: self.monitors[i].estimation)
            self.members[worst] = self._tree()
            self.monitors[worst] = ADWIN(self.delta)
            self.n_resets += 1
