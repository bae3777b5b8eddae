"""Predict-then-train classifier contract."""

from __future__ import annotations

import numpy as np


class UnsupportedConfiguration(ValueError):
    pass


class Classifier:
    """Incremental classifier over integer class labels ``0 .. n_classes-1``.

    ``predict`` must not mutate state; ``train`` consumes one pattern.
    Before any training every learner answers class 0.
    """

    name = "classifier"

    def __init__(self, n_classes: int):
        if n_classes < 1:
            raise UnsupportedConfiguration("n_classes must be >= 1")
        self.n_classes = int(n_classes)

    def predict(self, x: np.ndarray) -> int:
        raise NotImplementedError

    def train(self, x: np.ndarray, label: int) -> None:
        raise NotImplementedError

    def reset(self) -> None:
        raise NotImplementedError


def learner_rng(seed: int, salt: int = 0) -> np.random.Generator:
    """Learner-private generator, independent of the data stream's generator."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), 0x1EA2, salt])))
