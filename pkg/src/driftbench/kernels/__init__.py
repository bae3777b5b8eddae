"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports cleanly and ``DRIFTBENCH_NUMBA`` is
not set to ``0``. Both paths are kept bit-compatible on decisions (labels,
counts, cut positions); floating outputs agree to round-off.
"""

import os

from . import _numpy

BACKEND = "numpy"

if os.environ.get("DRIFTBENCH_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off"):
    try:
        from . import _numba as _impl

        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba missing
        _impl = _numpy
else:
    _impl = _numpy

knn_vote = _impl.knn_vote
nb_bank_scores = _impl.nb_bank_scores
adwin_find_cut = _impl.adwin_find_cut
wilcoxon_tail_count = _impl.wilcoxon_tail_count
mixture_logpdf = _impl.mixture_logpdf
leaf_nb_vote = _impl.leaf_nb_vote

__all__ = [
    "BACKEND",
    "knn_vote",
    "nb_bank_scores",
    "adwin_find_cut",
    "wilcoxon_tail_count",
    "mixture_logpdf",
    "leaf_nb_vote",
]
