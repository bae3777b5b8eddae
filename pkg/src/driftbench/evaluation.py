"""Interleaved test-then-train evaluation and prequential error metrics."""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import catalog, drift
from .learners import ORACLE_ID, Classifier, LearnerConfig, reference

log = logging.getLogger(__name__)

DEFAULT_WINDOW = 500


class RunError(RuntimeError):
    def __init__(self, scenario, learner, seed, cause):
        super().__init__(f"run ({scenario}, {learner}, seed {seed}) failed: {cause!r}")
        self.scenario = scenario
        self.learner = learner
        self.seed = seed
        self.cause = cause


@dataclass(eq=False)
class RunTrace:
    scenario: str
    learner: str
    seed: int
    losses: np.ndarray

    def __post_init__(self):
        self.losses = np.asarray(self.losses, dtype=np.uint8)

    def __len__(self):
        return self.losses.size

    @property
    def errors(self) -> int:
        return int(self.losses.sum(dtype=np.int64))

    @property
    def final_ae(self) -> float:
        return ae_cum(self, len(self))


@dataclass(eq=False)
class MetricSeries:
    """Per-step metrics; ``ae_win`` is NaN where fewer than ``w`` losses exist."""

    n: np.ndarray
    ae_cum: np.ndarray
    ae_win: np.ndarray


def _losses(trace) -> np.ndarray:
    return trace.losses if isinstance(trace, RunTrace) else np.asarray(trace)


def ae_cum(trace, n: int) -> float:
    """Mean 0-1 loss over the first ``n`` patterns (1-based)."""
    losses = _losses(trace)
    if not 1 <= n <= losses.size:
        raise ValueError(f"n={n} outside [1, {losses.size}]")
    return float(losses[:n].sum(dtype=np.int64)) / n


def ae_win(trace, n: int, w: int) -> float:
    """Mean 0-1 loss over the ``w`` most recent patterns ending at ``n``."""
    losses = _losses(trace)
    if w < 1:
        raise ValueError(f"window w={w} must be >= 1")
    if not w <= n <= losses.size:
        raise ValueError(f"n={n} must satisfy {w} <= n <= {losses.size}")
    return float(losses[n - w:n].sum(dtype=np.int64)) / w


def ae_cum_series(losses) -> np.ndarray:
    losses = np.asarray(losses, dtype=np.int64)
    return np.cumsum(losses) / np.arange(1, losses.size + 1)


def ae_win_series(losses, w: int) -> np.ndarray:
    """ae_win(n, w) for n = 1..N, NaN for n < w."""
    losses = np.asarray(losses, dtype=np.int64)
    c = np.concatenate(([0], np.cumsum(losses)))
    out = np.full(losses.size, np.nan)
    if w <= losses.size:
        out[w - 1:] = (c[w:] - c[:-w]) / w
    return out


def metric_series(trace, w: int = DEFAULT_WINDOW) -> MetricSeries:
    losses = _losses(trace)
    return MetricSeries(np.arange(1, losses.size + 1), ae_cum_series(losses), ae_win_series(losses, w))


# -- runs -------------------------------------------------------------------

def run_on_arrays(learner: Classifier, ts, X, y) -> np.ndarray:
    """Test-then-train over a materialized stream; returns 0/1 losses."""
    losses = np.empty(len(y), dtype=np.uint8)
    if getattr(learner, "batch_capable", False):
        # predictions do not depend on training, so score the block at once
        pred = learner.predict_batch(ts, X)
        losses[:] = pred != y
        for i in range(len(y)):
            learner.train(X[i], y[i])
        return losses
    predict, train = learner.predict, learner.train
    for i in range(len(y)):
        x = X[i]
        losses[i] = predict(x) != y[i]
        train(x, y[i])
    return losses


def _resolve_learner(learner, scenario, seed):
    if isinstance(learner, Classifier):
        return getattr(learner, "name", type(learner).__name__), learner
    if isinstance(learner, str):
        return learner, reference(learner).build(scenario, seed)
    if isinstance(learner, LearnerConfig):
        return learner.label or learner.kind, learner.build(scenario, seed)
    raise TypeError(f"cannot use {learner!r} as a learner")


def prequential_run(scenario: drift.Scenario, learner, seed: int) -> RunTrace:
    """Stream ``scenario`` with ``seed`` through ``learner``, predict then train.

    ``learner`` may be a Classifier instance, a reference id or a LearnerConfig.
    """
    name, model = _resolve_learner(learner, scenario, seed)
    parts = []
    try:
        for ts, X, y, _ in drift.stream_blocks(scenario, seed):
            parts.append(run_on_arrays(model, ts, X, y))
    except Exception as exc:
        raise RunError(scenario.name, name, seed, exc) from exc
    return RunTrace(scenario.name, name, seed, np.concatenate(parts))


# -- experiments ------------------------------------------------------------

@dataclass(eq=False)
class ExperimentResult:
    scenarios: list[str]
    learners: list[str]
    seeds: list[int]
    window: int
    traces: dict = field(default_factory=dict)  # (scenario, learner, seed) -> RunTrace
    failures: list = field(default_factory=list)  # (scenario, learner, seed, message)

    def finals(self, scenario: str, learner: str) -> np.ndarray:
        """Final AE_preq per seed, in seed order; NaN for failed runs."""
        return np.array(
            [
                self.traces[(scenario, learner, s)].final_ae if (scenario, learner, s) in self.traces else np.nan
                for s in self.seeds
            ]
        )

    def mean_final(self, scenario: str, learner: str) -> float:
        return float(np.mean(self.finals(scenario, learner)))

    def mean_curve(self, scenario: str, learner: str) -> np.ndarray:
        """Seed-averaged ae_win for n = 1..length (NaN before the window fills)."""
        curves = [
            ae_win_series(self.traces[(scenario, learner, s)].losses, self.window)
            for s in self.seeds
            if (scenario, learner, s) in self.traces
        ]
        return np.mean(curves, axis=0)


def worker_count() -> int:
    env = os.environ.get("DRIFTBENCH_THREADS")
    cpus = os.cpu_count() or 1
    if env:
        try:
            return max(1, min(int(env), cpus))
        except ValueError:
            log.warning("ignoring non-integer DRIFTBENCH_THREADS=%r", env)
    return cpus


def _unit(scenario_name, learner_specs, seed):
    """All learners on one (scenario, seed) stream. Returns traces and failures."""
    scenario = catalog.resolve(scenario_name) if isinstance(scenario_name, str) else scenario_name
    ts, X, y, _ = drift.stream_arrays(scenario, seed)
    traces, failures = [], []
    for lid, cfg in learner_specs:
        try:
            model = cfg.build(scenario, seed)
            traces.append(RunTrace(scenario.name, lid, seed, run_on_arrays(model, ts, X, y)))
        except Exception as exc:  # keep the grid going
            failures.append((scenario.name, lid, seed, repr(exc)))
    return traces, failures


def run_experiment(
    scenarios,
    learners,
    seeds: int = 10,
    w: int = DEFAULT_WINDOW,
    workers: int | None = None,
    progress=None,
) -> ExperimentResult:
    """Run every (scenario, learner, seed) cell; seeds are 1..``seeds``.

    ``scenarios`` are canonical names, file paths or Scenario objects;
    ``learners`` are reference ids or a mapping id -> LearnerConfig.
    """
    if not scenarios or not learners:
        raise ValueError("need at least one scenario and one learner")
    if seeds < 1:
        raise ValueError("seeds must be >= 1")
    if isinstance(learners, dict):
        specs = list(learners.items())
    else:
        specs = [(lid.lower(), reference(lid)) for lid in learners]
    seed_list = list(range(1, seeds + 1))
    resolved = [catalog.resolve(s) if isinstance(s, str) else s for s in scenarios]
    names = [s.name for s in resolved]
    result = ExperimentResult(names, [lid for lid, _ in specs], seed_list, w)
    units = [(sc, seed) for sc in resolved for seed in seed_list]
    n_workers = min(workers or worker_count(), len(units))
    if n_workers <= 1:
        outputs = (_unit(sc, specs, seed) for sc, seed in units)
        _collect(result, outputs, units, progress)
    else:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            futures = [pool.submit(_unit, sc, specs, seed) for sc, seed in units]
            _collect(result, (f.result() for f in futures), units, progress)
    result.failures.sort()
    return result


def _collect(result, outputs, units, progress):
    for (sc, seed), (traces, failures) in zip(units, outputs):
        for tr in traces:
            result.traces[(tr.scenario, tr.learner, tr.seed)] = tr
        for f in failures:
            log.error("run failed: %s / %s / seed %d: %s", *f)
        result.failures.extend(failures)
        if progress is not None:
            progress(sc.name, seed)


def oracle_finals(scenario, seeds: int = 10) -> np.ndarray:
    """Final AE_preq of the Bayes oracle for seeds 1..``seeds``."""
    return np.array(
        [prequential_run(scenario, ORACLE_ID, s).final_ae for s in range(1, seeds + 1)]
    )
