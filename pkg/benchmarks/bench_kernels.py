"""Time the numba kernels against their numpy twins.

Run with ``python3 benchmarks/bench_kernels.py``; needs numba installed.
"""

import timeit

import numpy as np

from driftbench.kernels import _numba, _numpy


def cases(rng):
    window = rng.normal(size=(1500, 2))
    labels = rng.integers(0, 2, 1500)
    ages = np.arange(1500)
    q = rng.normal(size=2)
    counts = rng.uniform(1, 50, (40, 2))
    means = rng.normal(size=(40, 2, 2))
    m2 = rng.uniform(1, 20, (40, 2, 2))
    sizes = np.repeat([16.0, 8, 4, 2, 1], 5)
    totals = np.floor(sizes * rng.uniform(0, 1, sizes.size))
    var = sizes * 0.2
    ranks2 = np.arange(2, 42, 2, dtype=np.int64)
    xs = rng.normal(size=(1024, 2))
    centers = rng.normal(size=(3, 2))
    chols = np.repeat(np.eye(2)[None], 3, axis=0)
    logw = np.log(np.full(3, 1 / 3))
    lc = rng.uniform(1, 50, 2)
    return {
        "knn_vote (1500 x 2)": ("knn_vote", (window, labels, ages, 1500, q, 1, 2)),
        "nb_bank_scores (40 experts)": ("nb_bank_scores", (counts, means, m2, q, 1e-9)),
        "adwin_find_cut (25 buckets)": ("adwin_find_cut", (totals, var, sizes, 25, 0.002, 5)),
        "wilcoxon_tail_count (n=20)": ("wilcoxon_tail_count", (ranks2, 120)),
        "mixture_logpdf (1024 x 3)": ("mixture_logpdf", (xs, centers, chols, logw)),
        "leaf_nb_vote (2 classes)": ("leaf_nb_vote", (lc, means[0] * 0 + 10, means[0], m2[0], q, 1e-9)),
    }


def main():
    rng = np.random.default_rng(0)
    print(f"{'kernel':32s}{'numpy us':>12s}{'numba us':>12s}{'speedup':>10s}")
    for label, (name, args) in cases(rng).items():
        fn_np, fn_nb = getattr(_numpy, name), getattr(_numba, name)
        fn_nb(*args)  # compile
        a, b = fn_np(*args), fn_nb(*args)
        assert np.allclose(a, b), name
        reps = 3 if name == "wilcoxon_tail_count" else 200
        t_np = min(timeit.repeat(lambda: fn_np(*args), number=reps, repeat=3)) / reps * 1e6
        t_nb = min(timeit.repeat(lambda: fn_nb(*args), number=reps, repeat=3)) / reps * 1e6
        print(f"{label:32s}{t_np:12.1f}{t_nb:12.1f}{t_np / t_nb:10.1f}")


if __name__ == "__main__":
    main()
