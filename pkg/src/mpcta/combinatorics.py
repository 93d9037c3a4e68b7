"""Exact counting primitives for balls-into-bins collision statistics.

Everything here is exact: counts are arbitrary-precision integers and
probabilities are integer ratios (``fractions.Fraction``) converted to float
only by the caller.  Memo tables are plain dicts; entries are immutable pure
values, so concurrent readers are safe and a duplicated computation under a
race is harmless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

_STIRLING: dict[tuple[int, int, int], int] = {}
_PARTITIONS: dict[tuple[int, int], tuple["Partition", ...]] = {}


def stirling_crowded(balls: int, groups: int, crowded: int) -> int:
    """Count set partitions of distinguishable balls by crowded-group number.

    Returns the number of ways to split ``balls`` distinguishable balls into
    exactly ``groups`` non-empty unlabeled groups of which exactly ``crowded``
    hold two or more balls.  This refines the Stirling numbers of the second
    kind: summing over ``crowded`` recovers S(balls, groups).  Satisfies the
    recursion obtained by placing the last ball into an existing crowded
    group, an existing singleton, or a new singleton.
    """
    if balls < 1 or groups < 1 or crowded < 0 or crowded > groups:
        raise ValueError(
            f"stirling_crowded needs balls >= 1, groups >= 1, 0 <= crowded <= groups; "
            f"got ({balls}, {groups}, {crowded})")
    return _stirling(balls, groups, crowded)


def _stirling(n: int, r: int, j: int) -> int:
    # Structural zeros: each group needs a ball and each crowded group two.
    if j < 0 or r < 1 or j > r or r > n or n < r + j:
        return 0
    key = (n, r, j)
    val = _STIRLING.get(key)
    if val is None:
        if n == 1:
            val = 1  # the guards leave only (r, j) == (1, 0)
        else:
            val = (j * _stirling(n - 1, r, j)
                   + (r - j + 1) * _stirling(n - 1, r, j - 1)
                   + _stirling(n - 1, r - 1, j))
        _STIRLING[key] = val
    return val


def collision_arrangements(balls: int, collided: int, bins: int, collisions: int) -> int:
    """Count labeled-bin arrangements with a given collision census.

    Number of ways to drop ``balls`` distinguishable balls into ``bins``
    labeled bins so that exactly ``collisions`` bins hold two or more balls
    and those bins hold ``collided`` balls in total.  Structurally impossible
    censuses (fewer than two balls per collision, more occupied bins than
    available) count zero rather than raising, since total-probability sums
    sweep over them.
    """
    if collisions < 0 or collisions > bins or collided < 0 or collided > balls:
        raise ValueError(
            f"need 0 <= collisions <= bins and 0 <= collided <= balls; "
            f"got balls={balls}, collided={collided}, bins={bins}, collisions={collisions}")
    if balls < 1:
        raise ValueError("collision_arrangements needs at least one ball")
    occupied = collisions + balls - collided  # collided bins plus singletons
    if collided < 2 * collisions or occupied > bins:
        return 0
    groupings = _stirling(balls, occupied, collisions)
    if groupings == 0:
        return 0
    return groupings * math.comb(bins, occupied) * math.factorial(occupied)


@dataclass(frozen=True)
class Partition:
    """An integer partition into parts of size two or more.

    ``parts`` is kept in non-decreasing order, which makes the canonical
    form unique and enumeration order stable.
    """

    parts: tuple[int, ...]

    def __post_init__(self):
        if any(p < 2 for p in self.parts):
            raise ValueError(f"partition parts must be >= 2: {self.parts}")
        if any(a > b for a, b in zip(self.parts, self.parts[1:])):
            raise ValueError(f"partition parts must be non-decreasing: {self.parts}")

    @property
    def total(self) -> int:
        return sum(self.parts)

    @property
    def count(self) -> int:
        return len(self.parts)

    def multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for p in self.parts:
            out[p] = out.get(p, 0) + 1
        return out


def enumerate_partitions(total: int, count: int) -> tuple[Partition, ...]:
    """All partitions of ``total`` into exactly ``count`` parts of size >= 2.

    Deterministic lexicographic order over the non-decreasing part tuples.
    Empty when no such partition exists.
    """
    if total < 0 or count < 0:
        raise ValueError(f"enumerate_partitions needs non-negative arguments, "
                         f"got ({total}, {count})")
    key = (total, count)
    cached = _PARTITIONS.get(key)
    if cached is None:
        cached = tuple(Partition(parts) for parts in _partition_tuples(total, count, 2))
        _PARTITIONS[key] = cached
    return cached


def _partition_tuples(remaining, slots, minimum):
    if slots == 0:
        if remaining == 0:
            yield ()
        return
    for part in range(minimum, remaining // slots + 1):
        for rest in _partition_tuples(remaining - part, slots - 1, part):
            yield (part,) + rest


def partition_probability(partition: Partition) -> Fraction:
    """Probability of one specific partition of collided balls.

    Given that ``total`` balls land in ``count`` bins with every bin getting
    at least two, the chance the multiset of bin sizes equals this partition:
    the multinomial count of labeled splittings with these sizes, corrected
    for repeated sizes, over the count of all valid groupings.
    """
    k, x = partition.total, partition.count
    if x < 1:
        raise ValueError("partition_probability needs a non-empty partition")
    groupings = _stirling(k, x, x)
    if groupings == 0:
        raise ValueError(f"no partitions of {k} into {x} parts >= 2 exist")
    denominator = groupings
    for part in partition.parts:
        denominator *= math.factorial(part)
    for mult in partition.multiplicities().values():
        denominator *= math.factorial(mult)
    return Fraction(math.factorial(k), denominator)


def all_distinct_probability(bins: int, balls: int) -> float:
    """Probability that ``balls`` uniform throws land in pairwise distinct bins.

    Computed as the stable product of (1 - i/bins) factors; exact 0 when
    there are more balls than bins.
    """
    if bins < 1 or balls < 0:
        raise ValueError(f"need bins >= 1 and balls >= 0, got ({bins}, {balls})")
    if balls > bins:
        return 0.0
    alpha = float(bins)
    prob = 1.0
    for i in range(1, balls):
        prob *= 1.0 - i / alpha
    return prob
