"""Incremental learners and the reference configurations of the benchmark."""

from __future__ import annotations

import inspect
from dataclasses import dataclass, field

from .adwin import ADWIN
from .base import Classifier, UnsupportedConfiguration, learner_rng
from .dwm import DWM
from .hoeffding import HoeffdingTree
from .knn import WindowKNN
from .naive_bayes import NaiveBayes
from .oracle import BayesOracle
from .ozabag import OzaBagADWIN
from .sgd import SGDLinear

KINDS = {
    "naive_bayes": NaiveBayes,
    "sgd_linear": SGDLinear,
    "window_knn": WindowKNN,
    "dwm": DWM,
    "ozabag_adwin": OzaBagADWIN,
    "hoeffding_tree": HoeffdingTree,
    "oracle": BayesOracle,
}


@dataclass(frozen=True)
class LearnerConfig:
    kind: str
    hyperparameters: dict = field(default_factory=dict)
    label: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UnsupportedConfiguration(f"unknown learner kind {self.kind!r}; choose from {sorted(KINDS)}")
        allowed = _hyperparameter_names(self.kind)
        unknown = set(self.hyperparameters) - allowed
        if unknown:
            raise UnsupportedConfiguration(
                f"{self.kind}: unknown hyperparameter(s) {sorted(unknown)}; allowed {sorted(allowed)}"
            )

    def build(self, scenario, seed: int) -> Classifier:
        cls = KINDS[self.kind]
        if cls is BayesOracle:
            return BayesOracle(scenario)
        hp = dict(self.hyperparameters)
        if cls is OzaBagADWIN:
            hp.setdefault("seed", seed)
        return cls(scenario.n_classes, scenario.dimension, **hp)


def _hyperparameter_names(kind):
    cls = KINDS[kind]
    names = set(inspect.signature(cls.__init__).parameters) - {"self", "n_classes", "dim", "scenario", "tree_params"}
    if cls is OzaBagADWIN:
        names |= _hyperparameter_names("hoeffding_tree")
    return names


# reference configurations, in the column order of the results table
REFERENCE = {
    "opt": LearnerConfig("oracle", {}, "Opt."),
    "nb": LearnerConfig("naive_bayes", {}, "NB"),
    "sgd": LearnerConfig("sgd_linear", {}, "SGD"),
    "dwm": LearnerConfig("dwm", {}, "DWM"),
    "ozab": LearnerConfig("ozabag_adwin", {}, "OZAB"),
    "nn100": LearnerConfig("window_knn", {"wsize": 100}, "NN100"),
    "nn1500": LearnerConfig("window_knn", {"wsize": 1500}, "NN1500"),
    "nn6000": LearnerConfig("window_knn", {"wsize": 6000}, "NN6000"),
}

ORACLE_ID = "opt"


def reference(learner_id: str) -> LearnerConfig:
    key = learner_id.lower()
    if key not in REFERENCE:
        raise UnsupportedConfiguration(
            f"unknown learner id {learner_id!r}; choose from {', '.join(REFERENCE)}"
        )
    return REFERENCE[key]


__all__ = [
    "ADWIN",
    "BayesOracle",
    "Classifier",
    "DWM",
    "HoeffdingTree",
    "KINDS",
    "LearnerConfig",
    "NaiveBayes",
    "ORACLE_ID",
    "OzaBagADWIN",
    "REFERENCE",
    "SGDLinear",
    "UnsupportedConfiguration",
    "WindowKNN",
    "learner_rng",
    "reference",
]
