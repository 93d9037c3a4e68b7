"""Access-delay statistics of a tagged contender in the multichannel tree.

A contender that succeeds at level h waits S_{h-1} slots (levels 1..h-1)
plus its slot position V_h inside level h; the root slot is excluded from
the delay by convention.  The success level H has a closed-form law; the
(T_h, S_{h-1}) joint comes from the collision chain, conditioned on the
tree actually reaching level h (the success event implies it).  Slot
positions within the level follow from the node position being uniform over
the level's nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .collision import TreeConfig, marginal_collisions, max_collisions
from .pmf import Pmf
from .tree_length import DEFAULT_EPSILON, LevelChainTable, build_level_chain

#: Residual success-level mass below which the infinite sum over h is cut.
H_TAIL = 1e-12


def success_level_pmf(n: int) -> Pmf:
    """Distribution of the level at which the tagged contender succeeds.

    The contender is alone at level h exactly when no rival shares its
    first h split choices, so the CDF is (1 - 2^-h)^(n-1) and the pmf its
    difference.  Truncated once the residual mass drops below H_TAIL.
    """
    if n < 2:
        raise ValueError(f"requires at least 2 contenders (n >= 2), got n={n}")
    weights = []
    cdf_prev = 0.0
    h = 1
    while True:
        cdf = (1.0 - 0.5 ** h) ** (n - 1)
        weights.append(cdf - cdf_prev)
        if 1.0 - cdf < H_TAIL:
            break
        cdf_prev = cdf
        h += 1
    return Pmf(1, weights, check=False)


def level_nodes_pmf(n: int, h: int) -> Pmf:
    """Node count of level h given that the tree reaches it.

    Every level-(h-1) collision spawns two nodes, so the count is twice the
    collision count, conditioned away from zero; odd counts are impossible.
    """
    if h < 1:
        raise ValueError(f"level must be >= 1, got h={h}")
    marg = marginal_collisions(h - 1, n)
    # Conditioning on >= 1 collision: summing the positive-x masses keeps full
    # precision even when p(0) is within an ulp of 1 at deep levels.
    alive = float(marg.weights[1:].sum())
    if alive <= 0.0:
        raise ValueError(f"level {h} is unreachable with {n} contenders")
    xhat = max_collisions(n, h - 1)
    weights = np.zeros(2 * xhat - 1)  # l = 2..2*xhat
    for x in range(1, xhat + 1):
        weights[2 * x - 2] = marg.p(x) / alive
    return Pmf(2, weights, check=False)


def node_position_pmf(n: int, h: int) -> Pmf:
    """Position of the success node within level h (1-based).

    The unbiased tree is statistically symmetric, so the position is uniform
    over the level's nodes; mixing over the node count gives a suffix sum of
    the conditioned collision marginal.
    """
    if h < 1:
        raise ValueError(f"level must be >= 1, got h={h}")
    marg = marginal_collisions(h - 1, n)
    alive = float(marg.weights[1:].sum())
    if alive <= 0.0:
        raise ValueError(f"level {h} is unreachable with {n} contenders")
    xhat = max_collisions(n, h - 1)
    # suffix[x] = sum_{x' >= x} p(x') / (2 x'), so p(w) = suffix[ceil(w/2)] / alive
    suffix = np.zeros(xhat + 2)
    for x in range(xhat, 0, -1):
        suffix[x] = suffix[x + 1] + marg.p(x) / (2.0 * x)
    weights = [suffix[(w + 1) // 2] / alive for w in range(1, 2 * xhat + 1)]
    return Pmf(1, weights, check=False)


def slot_position_given_level_size(v: int, l_h: int, g: int) -> float:
    """p(success slot position = v | level holds l_h nodes), with 2g nodes per slot.

    The level's l_h nodes fill ceil(l_h / 2g) slots left to right; all full
    slots are equally likely landing spots, the trailing partial slot
    proportionally less so.
    """
    if l_h < 2 or l_h % 2:
        raise ValueError(f"level sizes are even and >= 2, got {l_h}")
    if g < 1:
        raise ValueError(f"need g >= 1, got {g}")
    t = -(-l_h // (2 * g))
    if v < 1 or v > t:
        return 0.0
    if v < t:
        return 2 * g / l_h
    return (l_h - 2 * g * (t - 1)) / l_h


def joint_slots_level(config: TreeConfig, h: int,
                      chain: LevelChainTable | None = None) -> np.ndarray:
    """Sub-probability table p(T_h = t, S_{h-1} = s), indexed [t, s].

    T_h is the slot count of level h and S_{h-1} the slots accumulated over
    levels 1..h-1.  Only alive histories contribute (t >= 1), so the total
    is the probability that the tree reaches level h, not 1.  For h = 1 the
    table is deterministic: one slot for the root's children, nothing before.
    """
    if h < 1:
        raise ValueError(f"level must be >= 1, got h={h}")
    if chain is None:
        chain = build_level_chain(config, max(h - 1, 1))
    elif chain.m_max < h - 1:
        raise ValueError(f"chain covers levels up to {chain.m_max}, need {h - 1}")
    prev = chain.level(h - 1)
    g = config.g
    xhat_prev = prev.shape[0] - 1
    t_max = -(-xhat_prev // g)
    table = np.zeros((t_max + 1, prev.shape[1]))
    for x in range(1, xhat_prev + 1):
        table[-(-x // g)] += prev[x]
    return table


@dataclass(frozen=True)
class DelayDistribution:
    """Truncated access-delay distribution in time slots.

    ``mean`` is the mean of the truncated pmf; the true mean exceeds it by
    at most roughly ``tail_mass`` times the largest plausible delay.
    """

    pmf: Pmf
    mean: float
    tail_mass: float

    def quantile(self, q: float) -> int:
        return self.pmf.quantile(q)


def _slot_position_weights(t: int, g: int, level_nodes: Pmf, p_t: float) -> np.ndarray:
    """p(V_h = v | T_h = t) over v = 0..t via the level-size mixture.

    Mixes the per-size slot-position law over the node counts consistent
    with t slots, normalized by the chain's own marginal of T_h so the
    Bayes inversion stays internally consistent.
    """
    vw = np.zeros(t + 1)
    lo = max(2 * g * (t - 1) + 2, level_nodes.support_min)
    hi = min(2 * g * t, level_nodes.support_max)
    for l_h in range(lo, hi + 1, 2):
        p_l = level_nodes.p(l_h)
        if p_l == 0.0:
            continue
        for v in range(1, t + 1):
            vw[v] += slot_position_given_level_size(v, l_h, g) * p_l
    return vw / p_t


def delay_pmf(config: TreeConfig, epsilon: float = DEFAULT_EPSILON) -> DelayDistribution:
    """Full access-delay pmf, assembled over success levels.

    For each success level h, the delay is S_{h-1} + V_h under the chain
    joint conditioned on the tree reaching level h (success at h implies
    reaching it; without the conditioning the h-term would be under-weighted
    by exactly that reaching probability).  The result's support starts at
    d = 1 and its normalization deficit, bounded by the success-level
    truncation residual, is reported as ``tail_mass``.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie strictly between 0 and 1, got {epsilon}")
    n, g = config.n, config.g
    levels = success_level_pmf(n)
    h_max = levels.support_max
    chain = build_level_chain(config, max(h_max - 1, 1))

    s_cap = chain.level(h_max - 1).shape[1]
    t_cap = -(-max_collisions(n, h_max - 1) // g)
    acc = np.zeros(s_cap + t_cap + 1)
    for h, p_h in levels.items():
        if p_h == 0.0:
            continue
        table = joint_slots_level(config, h, chain)
        alive = table.sum()
        if alive == 0.0:
            continue
        nodes = level_nodes_pmf(n, h)
        for t in range(1, table.shape[0]):
            svec = table[t]
            mass = svec.sum()
            if mass == 0.0:
                continue
            vw = _slot_position_weights(t, g, nodes, mass / alive)
            # d = s + v: convolving the s-column with the v-weights lands on d
            contrib = np.convolve(svec / alive, vw)
            acc[: len(contrib)] += p_h * contrib
    pmf = Pmf(0, acc, check=False).trimmed()
    tail = max(0.0, 1.0 - pmf.total())
    return DelayDistribution(pmf=pmf, mean=pmf.mean(), tail_mass=tail)


def mean_delay(config: TreeConfig) -> float:
    """Mean access delay from exact per-level marginals.

    Builds E{S_{h-1}} from the exact collision marginals of each earlier
    level, conditioned on that level holding collisions (success at level h
    implies every earlier level did), plus the expected slot position within
    the success level, and mixes over the success-level law.
    """
    n, g = config.n, config.g
    levels = success_level_pmf(n)
    h_max = levels.support_max

    # E{ceil(X_k / g) | X_k >= 1} per level; level 0 is the root collision.
    cond_slot_mean = np.zeros(h_max)
    cond_slot_mean[0] = 1.0
    for k in range(1, h_max):
        marg = marginal_collisions(k, n)
        alive = float(marg.weights[1:].sum())
        if alive <= 0.0:
            cond_slot_mean[k] = 0.0
            continue
        total = sum(-(-x // g) * marg.p(x) for x in range(1, marg.support_max + 1))
        cond_slot_mean[k] = total / alive

    mean = 0.0
    prefix = 0.0  # sum of cond_slot_mean[0..h-2]
    for h, p_h in levels.items():
        if h >= 2:
            prefix += cond_slot_mean[h - 2]
        position = node_position_pmf(n, h)
        ev = sum(-(-w // (2 * g)) * p for w, p in position.items())
        mean += p_h * (prefix + ev)
    return mean


def single_channel_delay_pmf(n: int, epsilon: float = DEFAULT_EPSILON) -> DelayDistribution:
    """Access-delay pmf of the single-channel tree, in contention slots.

    A g = 1 time slot always holds two nodes, so the single-channel delay
    folds onto the g = 1 multichannel delay by halving (ceiling), and each
    multichannel mass splits evenly over its two contention-slot preimages.
    """
    base = delay_pmf(TreeConfig(n=n, g=1), epsilon)
    src = base.pmf
    weights = np.zeros(2 * src.support_max)
    for d, p in src.items():
        weights[2 * d - 2] = p / 2.0  # contention slot 2d - 1
        weights[2 * d - 1] = p / 2.0  # contention slot 2d
    pmf = Pmf(1, weights, check=False).trimmed()
    return DelayDistribution(pmf=pmf, mean=pmf.mean(), tail_mass=base.tail_mass)
