"""Finite probability mass functions over consecutive integers."""

from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np

#: Largest tolerated negative weight (treated as rounding noise and clipped).
WEIGHT_FLOOR = -1e-12
#: Tolerated excess above unit total mass.
MASS_SLACK = 1e-9


class Pmf:
    """A discrete distribution stored as a support offset plus a weight array.

    The value ``offset + i`` carries probability ``weights[i]``.  Totals may
    fall short of one for deliberately truncated distributions; callers are
    expected to account for the missing tail explicitly.
    """

    __slots__ = ("offset", "weights")

    def __init__(self, offset: int, weights, check: bool = True):
        self.offset = int(offset)
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("pmf weights must form a non-empty 1-D sequence")
        if check:
            lowest = w.min()
            if lowest < WEIGHT_FLOOR:
                raise ValueError(f"negative pmf weight: {lowest}")
            if lowest < 0.0:
                w = np.clip(w, 0.0, None)
            total = w.sum()
            if total > 1.0 + MASS_SLACK:
                raise ValueError(f"pmf mass {total} exceeds 1")
        self.weights = w

    @classmethod
    def delta(cls, value: int) -> "Pmf":
        """Point mass at ``value``."""
        return cls(value, [1.0], check=False)

    @classmethod
    def from_items(cls, items: Iterable[tuple[int, float]]) -> "Pmf":
        pairs = dict(items)
        if not pairs:
            raise ValueError("cannot build a pmf from no items")
        lo, hi = min(pairs), max(pairs)
        w = np.zeros(hi - lo + 1)
        for value, prob in pairs.items():
            w[value - lo] = prob
        return cls(lo, w)

    @property
    def support_min(self) -> int:
        return self.offset

    @property
    def support_max(self) -> int:
        return self.offset + len(self.weights) - 1

    def p(self, value: int) -> float:
        i = value - self.offset
        if 0 <= i < len(self.weights):
            return float(self.weights[i])
        return 0.0

    __call__ = p

    def items(self) -> Iterator[tuple[int, float]]:
        for i, w in enumerate(self.weights):
            yield self.offset + i, float(w)

    def total(self) -> float:
        return float(self.weights.sum())

    def mean(self) -> float:
        values = self.offset + np.arange(len(self.weights))
        return float(values @ self.weights)

    def cdf(self) -> np.ndarray:
        """Cumulative mass aligned with the support (index i holds F(offset+i))."""
        return np.cumsum(self.weights)

    def cdf_at(self, value: int) -> float:
        if value < self.offset:
            return 0.0
        i = min(value - self.offset, len(self.weights) - 1)
        return float(self.weights[: i + 1].sum())

    def quantile(self, q: float) -> int:
        """Smallest support value whose CDF reaches ``q``."""
        cum = self.cdf()
        idx = int(np.searchsorted(cum, q, side="left"))
        if idx >= len(cum):
            raise ValueError(f"quantile {q} exceeds available mass {cum[-1]}")
        return self.offset + idx

    def convolve(self, other: "Pmf") -> "Pmf":
        """Distribution of the sum of two independent variables."""
        return Pmf(self.offset + other.offset,
                   np.convolve(self.weights, other.weights), check=False)

    def trimmed(self, floor: float = 0.0) -> "Pmf":
        """Drop leading/trailing weights at or below ``floor``."""
        keep = np.flatnonzero(self.weights > floor)
        if keep.size == 0:
            return Pmf(self.offset, [0.0], check=False)
        lo, hi = keep[0], keep[-1]
        return Pmf(self.offset + int(lo), self.weights[lo : hi + 1].copy(), check=False)

    def __repr__(self) -> str:
        return (f"Pmf(offset={self.offset}, n={len(self.weights)}, "
                f"total={self.weights.sum():.6g})")
