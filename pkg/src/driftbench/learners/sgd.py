"""Two-class linear SVM trained by stochastic subgradient descent on hinge loss."""

from __future__ import annotations

import numpy as np

from .base import Classifier, UnsupportedConfiguration


class SGDLinear(Classifier):
    """Constant-step hinge-loss SGD with L2 shrinkage.

    The first label seen maps to -1, the second to +1. A third distinct label
    raises ``UnsupportedConfiguration``.
    """

    name = "sgd_linear"

    def __init__(self, n_classes: int, dim: int, eta: float = 0.01, lambda_reg: float = 1e-4):
        super().__init__(n_classes)
        if eta <= 0:
            raise UnsupportedConfiguration(f"eta must be > 0, got {eta}")
        if lambda_reg < 0:
            raise UnsupportedConfiguration(f"lambda_reg must be >= 0, got {lambda_reg}")
        self.dim = dim
        self.eta = float(eta)
        self.lambda_reg = float(lambda_reg)
        self.reset()

    def reset(self):
        self.w = np.zeros(self.dim)
        self.b = 0.0
        self._labels: list[int] = []

    def _sign_of(self, label: int) -> float:
        if label not in self._labels:
            if len(self._labels) == 2:
                raise UnsupportedConfiguration(
                    f"sgd_linear is two-class; saw third label {label} after {self._labels}"
                )
            self._labels.append(label)
        return -1.0 if label == self._labels[0] else 1.0

    def decision(self, x) -> float:
        return float(np.dot(self.w, x) + self.b)

    def predict(self, x):
        if not self._labels:
            return 0
        if self.decision(x) > 0 and len(self._labels) == 2:
            return self._labels[1]
        return self._labels[0]

    def train(self, x, label):
        y = self._sign_of(int(label))
        x = np.asarray(x, dtype=float)
        margin = y * self.decision(x)
        self.w *= 1.0 - self.eta * self.lambda_reg
        if margin < 1.0:
            self.w += self.eta * y * x
            self.b += self.eta * y
