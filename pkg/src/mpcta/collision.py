"""Per-level collision statistics for binary splitting trees.

The level-m state of a contention tree maps to a balls-into-bins problem:
contenders are balls, the 2^m level nodes are bins, and a collision is a bin
with two or more balls.  This module provides the child-collision law of a
single collision, its partition-conditioned convolution, the one-step
transition p(X_m | X_{m-1}) of the collision-count chain, and the exact
marginal p(X_m).

All functions are pure; memo tables hold immutable values only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import numpy as np

from .combinatorics import (
    Partition,
    _stirling,
    collision_arrangements,
    enumerate_partitions,
    partition_probability,
)
from .pmf import Pmf

_CHILDREN: dict[tuple[int, int], np.ndarray] = {}
_CONTENDER_ROWS: dict[tuple[int, int, int], np.ndarray] = {}
_TRANSITION_ROWS: dict[tuple[int, int, int], np.ndarray] = {}
_MARGINALS: dict[tuple[int, int], np.ndarray] = {}


@dataclass(frozen=True)
class TreeConfig:
    """Parameters of a multichannel binary contention tree.

    ``n`` initial contenders resolve over ``2 * g`` parallel channels, i.e.
    ``g`` contention frames per time slot.  The tree is binary and unbiased;
    other branching factors or split biases are rejected because the closed
    forms used throughout assume fair binary splitting.
    """

    n: int
    g: int = 1
    q: int = 2
    split_prob: float = 0.5

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"analysis requires at least 2 contenders (n >= 2), got n={self.n}")
        if self.g < 1:
            raise ValueError(f"need at least one contention frame per slot (g >= 1), got g={self.g}")
        if self.q != 2:
            raise ValueError(f"only binary trees are supported (q = 2), got q={self.q}")
        if self.split_prob != 0.5:
            raise ValueError(f"only unbiased splitting is supported (split_prob = 1/2), "
                             f"got {self.split_prob}")

    @property
    def channels(self) -> int:
        return 2 * self.g


def max_collisions(n: int, m: int) -> int:
    """Largest feasible collision count at level m with n contenders."""
    return min(n // 2, 1 << m)


def child_collision_pmf(eta: int) -> Pmf:
    """Distribution of the number of child collisions under one collision.

    A collision of ``eta`` contenders splits by fair coin flips into two
    child nodes; a child with two or more contenders is a new collision.
    For eta = 2 the children are (2,0) or (1,1) with equal chance; for
    eta > 2 at least one child collides, and exactly one collides with
    probability (eta + 1) / 2^(eta - 1) (empty or singleton complement).
    All weights are dyadic rationals, hence exact in binary floating point.
    """
    if eta < 2:
        raise ValueError(f"a collision holds at least 2 contenders, got eta={eta}")
    if eta == 2:
        return Pmf(0, [0.5, 0.5, 0.0], check=False)
    one = (eta + 1) * 0.5 ** (eta - 1)
    return Pmf(0, [0.0, one, 1.0 - one], check=False)


def children_given_partition(partition: Partition) -> Pmf:
    """Total child collisions of a level whose collision sizes form ``partition``.

    Sibling subtrees split independently, so the total is the convolution of
    the per-part child-collision laws; support is [0, 2 * count].
    """
    if partition.count < 1:
        raise ValueError("children_given_partition needs a non-empty partition")
    acc = np.array([1.0])
    for part in partition.parts:
        acc = np.convolve(acc, child_collision_pmf(part).weights)
    return Pmf(0, acc, check=False)


def _children_table(k: int, x: int) -> np.ndarray:
    """Child-collision pmf over [0, 2x] given x collisions holding k contenders.

    Mixture over all partitions of k into x parts >= 2, weighted by the
    partition probabilities.  Depends only on (k, x), so it is shared across
    levels and across initial contender counts; this is the hot table.
    """
    key = (k, x)
    table = _CHILDREN.get(key)
    if table is None:
        partitions = enumerate_partitions(k, x)
        if not partitions:
            raise ValueError(f"no partitions of {k} contenders into {x} collisions")
        table = np.zeros(2 * x + 1)
        for partition in partitions:
            weight = float(partition_probability(partition))
            conv = children_given_partition(partition).weights
            table[: len(conv)] += weight * conv
        _CHILDREN[key] = table
    return table


def collisions_given_prev_and_k(x_m: int, x_prev: int, k_prev: int) -> float:
    """p(X_m = x_m | x_prev collisions held k_prev contenders at level m-1)."""
    if x_prev < 1 or k_prev < 2 * x_prev:
        raise ValueError(f"need x_prev >= 1 and k_prev >= 2 * x_prev, "
                         f"got x_prev={x_prev}, k_prev={k_prev}")
    table = _children_table(k_prev, x_prev)
    if 0 <= x_m < len(table):
        return float(table[x_m])
    return 0.0


def _contender_row(n: int, m: int, x: int) -> np.ndarray:
    """p(K_m = k | X_m = x) for k = 0..n, with 2^m bins at level m."""
    key = (n, m, x)
    row = _CONTENDER_ROWS.get(key)
    if row is None:
        bins = 1 << m
        counts = [collision_arrangements(n, k, bins, x) for k in range(n + 1)]
        total = sum(counts)
        if total == 0:
            raise ValueError(f"{x} collisions at level {m} are impossible with {n} contenders")
        row = np.array([float(Fraction(c, total)) for c in counts])
        _CONTENDER_ROWS[key] = row
    return row


def contenders_given_collisions(k: int, x: int, m: int, n: int) -> float:
    """Probability that the x collisions at level m jointly hold k contenders."""
    if not 0 <= x <= (1 << m):
        raise ValueError(f"need 0 <= x <= 2^m, got x={x}, m={m}")
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    return float(_contender_row(n, m, x)[k])


def _transition_row(n: int, m: int, x_prev: int) -> np.ndarray:
    """p(X_m = x | X_{m-1} = x_prev) over x = 0..2*x_prev, for n contenders.

    Total probability over the contender count k of the x_prev collisions
    at level m-1 (which lives on 2^(m-1) bins), then over the partitions of
    k, both already folded into the memoized ingredient tables.
    """
    key = (n, m, x_prev)
    row = _TRANSITION_ROWS.get(key)
    if row is None:
        krow = _contender_row(n, m - 1, x_prev)
        row = np.zeros(2 * x_prev + 1)
        for k in range(2 * x_prev, n + 1):
            weight = krow[k]
            if weight == 0.0:
                continue
            table = _children_table(k, x_prev)
            row[: len(table)] += weight * table
        _TRANSITION_ROWS[key] = row
    return row


def collision_transition(x_m: int, x_prev: int, m: int, n: int) -> float:
    """One-step conditional p(X_m = x_m | X_{m-1} = x_prev).

    The no-collision state is absorbing.  The conditional is exact given
    only X_{m-1}; the Markov approximation enters later, when these rows are
    chained without level cross-correlations.
    """
    if x_prev == 0:
        return 1.0 if x_m == 0 else 0.0
    row = _transition_row(n, m, x_prev)
    if 0 <= x_m < len(row):
        return float(row[x_m])
    return 0.0


def marginal_collisions(m: int, n: int) -> Pmf:
    """Exact marginal distribution of the collision count at level m.

    Balls-into-bins over 2^m bins: the number of arrangements of n balls
    into i occupied bins with exactly x crowded, summed over the feasible
    occupied-bin counts, divided by (2^m)^n.  The root level (m = 0) is a
    guaranteed single collision since n >= 2.
    """
    if n < 2:
        raise ValueError(f"marginal_collisions requires n >= 2, got n={n}")
    if m < 0:
        raise ValueError(f"level must be non-negative, got m={m}")
    if m == 0:
        return Pmf(0, [0.0, 1.0], check=False)  # offset 0 like every level
    key = (n, m)
    weights = _MARGINALS.get(key)
    if weights is None:
        bins = 1 << m
        xhat = max_collisions(n, m)
        denominator = bins ** n
        weights = np.zeros(xhat + 1)
        for x in range(xhat + 1):
            numerator = 0
            for i in range(max(x, 1), min(n - x, bins) + 1):
                groupings = _stirling(n, i, x)
                if groupings:
                    numerator += groupings * comb(bins, i) * factorial(i)
            weights[x] = float(Fraction(numerator, denominator))
        _MARGINALS[key] = weights
    return Pmf(0, weights.copy(), check=False)
