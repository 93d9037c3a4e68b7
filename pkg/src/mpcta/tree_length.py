"""Tree-length distribution via forward propagation of the collision chain.

The total number of time slots is 1 (root) + sum over levels of
ceil(X_{m-1} / g), where X_m is the collision count at level m.  We propagate
the joint law of (X_m, S_m) forward, where S_m accumulates the slots of
levels 1..m, treating the chain as Markov in X.  The no-collision state is
absorbing: mass arriving there with accumulated slot count s corresponds to a
finished tree of length 1 + s.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .collision import TreeConfig, _transition_row, max_collisions
from .combinatorics import all_distinct_probability
from .pmf import Pmf

DEFAULT_EPSILON = 0.999
_LEVEL_CAP = 400  # 2^400 bins; far past any attainable completion target


def select_truncation_level(n: int, epsilon: float) -> int:
    """Smallest level by which the tree finishes with probability >= epsilon.

    The per-level completion mass telescopes, so the cumulative completion
    probability through level m is just the probability that n balls land
    pairwise distinct among 2^m bins.
    """
    if n < 2:
        raise ValueError(f"requires at least 2 contenders (n >= 2), got n={n}")
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie strictly between 0 and 1, got {epsilon}")
    for m in range(1, _LEVEL_CAP + 1):
        if all_distinct_probability(1 << m, n) >= epsilon:
            return m
    raise RuntimeError(f"no truncation level below {_LEVEL_CAP} reached epsilon={epsilon}")


@dataclass(frozen=True)
class TruncationPolicy:
    """A completion-probability target and the level that satisfies it."""

    epsilon: float
    m_max: int


class LevelChainTable:
    """Joint law p(X_m = x, S_m = s) for every level m = 0..m_max.

    ``levels[m]`` is a 2-D array indexed [x, s].  Level 0 is the seed state:
    the root always collides and no slots are counted yet, so all mass sits
    at (x, s) = (1, 0).  Level 1 therefore always lands on s = 1: the root's
    two children fit one time slot for any g.
    """

    def __init__(self, config: TreeConfig, levels: list[np.ndarray]):
        self.config = config
        self.levels = levels

    @property
    def m_max(self) -> int:
        return len(self.levels) - 1

    def level(self, m: int) -> np.ndarray:
        return self.levels[m]

    def alive_mass(self, m: int) -> float:
        """Probability that level m still contains collisions."""
        return float(self.levels[m][1:].sum())

    def collision_marginal(self, m: int) -> Pmf:
        """Chain-propagated marginal of X_m (exact, since one-step rows are)."""
        return Pmf(0, self.levels[m].sum(axis=1), check=False)


def build_level_chain(config: TreeConfig, m_max: int) -> LevelChainTable:
    """Propagate the (collision count, cumulative slots) joint to level m_max."""
    if m_max < 1:
        raise ValueError(f"need at least one level, got m_max={m_max}")
    n, g = config.n, config.g

    seed = np.zeros((2, 1))
    seed[1, 0] = 1.0
    levels = [seed]
    for m in range(1, m_max + 1):
        prev = levels[-1]
        xhat_prev = prev.shape[0] - 1
        xhat = max_collisions(n, m)
        shift_max = -(-xhat_prev // g)
        nxt = np.zeros((xhat + 1, prev.shape[1] + shift_max))
        nxt[0, : prev.shape[1]] += prev[0]  # finished trees accumulate no slots
        for x_prev in range(1, xhat_prev + 1):
            mass = prev[x_prev]
            if not mass.any():
                continue
            # Entries beyond xhat are structural zeros (children need two
            # contenders each), so clipping the row loses nothing.
            row = _transition_row(n, m, x_prev)[: xhat + 1]
            shift = -(-x_prev // g)  # slots occupied by this level's 2*x_prev nodes
            block = np.outer(row, mass)
            nxt[: len(row), shift : shift + prev.shape[1]] += block
        levels.append(nxt)
    return LevelChainTable(config, levels)


@dataclass(frozen=True)
class TreeLengthDistribution:
    """Truncated distribution of the total tree length in time slots.

    ``pmf`` covers trees that finish by the truncation level; ``tail_mass``
    is the probability still unresolved there.  The truncated mean
    underestimates the true mean by at most roughly ``mean_tail_bound``.
    """

    config: TreeConfig
    pmf: Pmf
    tail_mass: float
    truncation_level: int

    @property
    def mean(self) -> float:
        return self.pmf.mean()

    @property
    def mean_tail_bound(self) -> float:
        return self.tail_mass * self.pmf.support_max


def tree_length_pmf(config: TreeConfig, epsilon: float = DEFAULT_EPSILON,
                    m_max: int | None = None) -> TreeLengthDistribution:
    """Distribution of the total number of time slots to resolve the tree.

    The chain is truncated at the level where the completion probability
    reaches ``epsilon`` (or at the explicit ``m_max``); unfinished mass is
    reported as ``tail_mass``, never silently renormalized.
    """
    if m_max is None:
        m_max = select_truncation_level(config.n, epsilon)
    chain = build_level_chain(config, m_max)
    final = chain.level(m_max)
    finished = final[0]
    tail = float(final[1:].sum())
    # Finished mass at accumulated slots s is a tree of t = s + 1 total slots;
    # s >= 1 always, so p(T <= 1) = 0.
    pmf = Pmf(1, finished, check=False).trimmed()
    return TreeLengthDistribution(config, pmf, tail, m_max)


def tree_length_mean(config: TreeConfig, epsilon: float = DEFAULT_EPSILON) -> float:
    """Mean of the truncated tree-length distribution (biased low by the tail)."""
    return tree_length_pmf(config, epsilon).mean
