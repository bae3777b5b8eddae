"""Benchmark toolkit for incremental learning on drifting Gaussian-mixture streams."""

__version__ = "0.1.0"
