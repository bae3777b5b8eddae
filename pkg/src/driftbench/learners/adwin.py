"""ADWIN change detector over an exponential histogram of buckets."""

from __future__ import annotations

import numpy as np

from .. import kernels


class ADWIN:
    """Adaptive window over values in [0, 1].

    Buckets at level ``i`` summarize ``2**i`` values as (total, M2); each level
    holds at most ``max_buckets`` of them. Every ``clock`` inputs the window is
    scanned for a boundary where the two sides' means differ by more than

        eps = sqrt(2 m var ln(2 ln(n)/delta)) + 2/3 m ln(2 ln(n)/delta),
        m = 1/(n0 - min_len + 1) + 1/(n1 - min_len + 1),

    and the oldest bucket is dropped until no boundary qualifies.
    """

    def __init__(self, delta: float = 0.002, max_buckets: int = 5, clock: int = 32, min_len: int = 5):
        if not 0 < delta < 1:
            raise ValueError(f"delta must be in (0, 1), got {delta}")
        self.delta = float(delta)
        self.max_buckets = int(max_buckets)
        self.clock = int(clock)
        self.min_len = int(min_len)
        self.reset()

    def reset(self):
        self._levels: list[list[list[float]]] = [[]]
        self.width = 0
        self.total = 0.0
        self._ticks = 0
        self.n_detections = 0

    @property
    def estimation(self) -> float:
        return self.total / self.width if self.width else 0.0

    def buckets(self):
        """(totals, m2, sizes) arrays ordered oldest first."""
        tot, m2, size = [], [], []
        for lvl in range(len(self._levels) - 1, -1, -1):
            n = float(1 << lvl)
            for t, v in self._levels[lvl]:
                tot.append(t)
                m2.append(v)
                size.append(n)
        return np.array(tot), np.array(m2), np.array(size)

    def update(self, value: float) -> bool:
        """Add ``value``; True if the window was cut at this step."""
        value = float(value)
        self._levels[0].append([value, 0.0])
        self.width += 1
        self.total += value
        self._compress()
        self._ticks += 1
        if self._ticks % self.clock == 0 and self.width >= 2 * self.min_len:
            return self._detect()
        return False

    def _compress(self):
        lvl = 0
        while lvl < len(self._levels) and len(self._levels[lvl]) > self.max_buckets:
            row = self._levels[lvl]
            (ta, va), (tb, vb) = row[0], row[1]
            del row[:2]
            n = float(1 << lvl)
            merged = [ta + tb, va + vb + n / 2.0 * (ta / n - tb / n) ** 2]
            if lvl + 1 == len(self._levels):
                self._levels.append([])
            self._levels[lvl + 1].append(merged)
            lvl += 1

    def _drop_oldest(self):
        top = len(self._levels) - 1
        t, _ = self._levels[top].pop(0)
        self.width -= 1 << top
        self.total -= t
        while len(self._levels) > 1 and not self._levels[-1]:
            self._levels.pop()

    def _detect(self) -> bool:
        cut = False
        while True:
            tot, m2, size = self.buckets()
            if kernels.adwin_find_cut(tot, m2, size, tot.size, self.delta, self.min_len) == 0:
                break
            self._drop_oldest()
            cut = True
        if cut:
            self.n_detections += 1
        return cut
