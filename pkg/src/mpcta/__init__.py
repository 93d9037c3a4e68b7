"""Tree-length and access-delay statistics of multichannel parallel binary
contention tree algorithms, plus a seeded Monte Carlo validator."""

from .collision import (
    TreeConfig,
    child_collision_pmf,
    children_given_partition,
    collision_transition,
    collisions_given_prev_and_k,
    contenders_given_collisions,
    marginal_collisions,
    max_collisions,
)
from .combinatorics import (
    Partition,
    all_distinct_probability,
    collision_arrangements,
    enumerate_partitions,
    partition_probability,
    stirling_crowded,
)
from .delay import (
    DelayDistribution,
    delay_pmf,
    joint_slots_level,
    level_nodes_pmf,
    mean_delay,
    node_position_pmf,
    single_channel_delay_pmf,
    slot_position_given_level_size,
    success_level_pmf,
)
from .pmf import Pmf
from .simulate import (
    InjectedSplits,
    RandomSplits,
    SimConfig,
    SimRecord,
    run_replications,
    simulate_tree,
)
from .tree_length import (
    DEFAULT_EPSILON,
    LevelChainTable,
    TreeLengthDistribution,
    TruncationPolicy,
    build_level_chain,
    select_truncation_level,
    tree_length_mean,
    tree_length_pmf,
)
from .validation import (
    EmpiricalCdf,
    KsReport,
    empirical_cdf,
    evaluate_config,
    ks_statistic,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_EPSILON",
    "DelayDistribution",
    "EmpiricalCdf",
    "InjectedSplits",
    "KsReport",
    "LevelChainTable",
    "Partition",
    "Pmf",
    "RandomSplits",
    "SimConfig",
    "SimRecord",
    "TreeConfig",
    "TreeLengthDistribution",
    "TruncationPolicy",
    "all_distinct_probability",
    "build_level_chain",
    "child_collision_pmf",
    "children_given_partition",
    "collision_arrangements",
    "collision_transition",
    "collisions_given_prev_and_k",
    "contenders_given_collisions",
    "delay_pmf",
    "empirical_cdf",
    "enumerate_partitions",
    "evaluate_config",
    "joint_slots_level",
    "ks_statistic",
    "level_nodes_pmf",
    "marginal_collisions",
    "max_collisions",
    "mean_delay",
    "node_position_pmf",
    "partition_probability",
    "run_replications",
    "select_truncation_level",
    "simulate_tree",
    "single_channel_delay_pmf",
    "slot_position_given_level_size",
    "stirling_crowded",
    "success_level_pmf",
    "sweep",
    "tree_length_mean",
    "tree_length_pmf",
    "__version__",
]
