"""Histograms with the fixed binning rule i = floor(x / w).

Bins are stored sparsely (no zero counts); bin i covers
[i*w, (i+1)*w) and its center is (i + 0.5)*w.  Binning is anchored at
zero so the symmetry statistics stay honest.
"""

from __future__ import annotations

import numpy as np


class Histogram:
    __slots__ = ("width", "bins")

    def __init__(self, width, bins=None):
        if width <= 0:
            raise ValueError("box width must be positive")
        self.width = float(width)
        self.bins = dict(bins or {})
        if any(c <= 0 for c in self.bins.values()):
            raise ValueError("stored bins must have positive counts")

    @classmethod
    def from_values(cls, values, width):
        if width <= 0:
            raise ValueError("box width must be positive")
        values = np.asarray(values, dtype=np.float64)
        if len(values) == 0:
            return cls(width, {})
        idx = np.floor(values / width).astype(np.int64)
        uniq, counts = np.unique(idx, return_counts=True)
        return cls(width, {int(i): int(c) for i, c in zip(uniq, counts)})

    def total(self):
        return sum(self.bins.values())

    def center(self, index):
        return (index + 0.5) * self.width

    def centers_counts(self):
        """Sorted (centers, counts) arrays over nonempty bins."""
        if not self.bins:
            return (np.zeros(0), np.zeros(0))
        items = sorted(self.bins.items())
        centers = np.array([(i + 0.5) * self.width for i, _ in items])
        counts = np.array([c for _, c in items], dtype=np.float64)
        return centers, counts

    def peak(self):
        return max(self.bins.values(), default=0)

    def __len__(self):
        return len(self.bins)

    def __eq__(self, other):
        if not isinstance(other, Histogram):
            return NotImplemented
        return self.width == other.width and self.bins == other.bins

    def __repr__(self):
        return f"Histogram(width={self.width}, nonempty={len(self.bins)})"


def write_histogram(histogram, path):
    centers, counts = histogram.centers_counts()
    with open(path, "w") as fh:
        for x, c in zip(centers, counts):
            fh.write(f"{x:.10g}\t{int(c)}\n")
