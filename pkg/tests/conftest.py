import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from driftbench import drift

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def component(center, stddev, rotation=(), weight=1.0, phases=(), start=0):
    base = drift.GaussianParams.from_stddev(center, stddev, rotation)
    return drift.ComponentTimeline(start, weight, base, tuple(phases))


def scenario(*classes, length=100, name="toy"):
    """classes: (name, [components]) or (name, [components], class_weight)."""
    specs = []
    for spec in classes:
        cname, comps = spec[0], spec[1]
        w = spec[2] if len(spec) > 2 else 1.0
        specs.append(drift.ClassSpec(cname, w, tuple(comps)))
    d = specs[0].components[0].base.dimension
    return drift.Scenario(name, d, length, tuple(specs))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
