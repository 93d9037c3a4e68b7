"""Monte Carlo simulator for multichannel binary contention trees.

Trees are generated breadth first: every collision splits its contenders by
fair coin flips into two child nodes, which are transmitted even when empty
or singleton.  Scheduling is separate from generation, so the same tree can
be laid out as BFS multichannel slots (the default, 2g nodes per slot within
a level), single-channel BFS or DFS node orders, or one-frame-per-slot DFS;
the serial orders exist only to reproduce reference slot-index vectors.

Replication i draws its splits from an independent Philox stream keyed by
(seed, i), so results are bit-identical for a given (seed, runs) and do not
depend on execution order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .collision import TreeConfig

SCHEDULES = ("bfs", "bfs-single", "dfs-single", "dfs-frame")

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SimConfig:
    """One simulation campaign: tree parameters, replication count, seed."""

    n: int
    runs: int
    seed: int
    g: int = 1
    schedule: str = "bfs"

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"contender count cannot be negative, got {self.n}")
        if self.runs < 1:
            raise ValueError(f"need at least one run, got {self.runs}")
        if self.g < 1:
            raise ValueError(f"need g >= 1, got {self.g}")
        if self.schedule not in SCHEDULES:
            raise ValueError(f"unknown schedule {self.schedule!r}, expected one of {SCHEDULES}")
        if self.schedule == "dfs-frame" and self.g != 1:
            raise ValueError("the dfs-frame schedule is defined for g = 1 only")

    @property
    def tree(self) -> TreeConfig:
        """The analytic-side configuration; requires n >= 2."""
        return TreeConfig(n=self.n, g=self.g)


@dataclass
class SimRecord:
    """One simulated tree, with per-contender outcomes indexed by contender id."""

    total_slots: int
    total_nodes: int
    levels_reached: int
    delays: np.ndarray          # success slot index minus the root slot
    success_slots: np.ndarray   # absolute slot index of the success
    success_levels: np.ndarray


class RandomSplits:
    """Fair-coin split source backed by a numpy Generator.

    Bits are drawn in chunks and served in consumption order, so results
    only depend on the generator state and the (deterministic) BFS order in
    which collisions request them.
    """

    _CHUNK = 4096

    def __init__(self, rng: np.random.Generator):
        self._rng = rng
        self._buffer = np.empty(0, dtype=np.int64)
        self._pos = 0

    def bits(self, count: int) -> Sequence[int]:
        if self._pos + count > len(self._buffer):
            self._buffer = self._rng.integers(0, 2, size=max(count, self._CHUNK))
            self._pos = 0
        out = self._buffer[self._pos : self._pos + count]
        self._pos += count
        return out


class InjectedSplits:
    """Deterministic split source consumed in BFS collision order.

    Each line is a 0/1 string, one character per contender of the collision
    it resolves (in ascending contender-id order).
    """

    def __init__(self, lines: Iterable[str]):
        self._lines = [ln.strip() for ln in lines if ln.strip()]
        self._next = 0

    def bits(self, count: int) -> Sequence[int]:
        if self._next >= len(self._lines):
            raise ValueError("injected split sequence exhausted: every collision "
                             "needs one 0/1 line in BFS order")
        line = self._lines[self._next]
        self._next += 1
        if len(line) != count or set(line) - {"0", "1"}:
            raise ValueError(f"injected split line {self._next} must be {count} "
                             f"characters of 0/1, got {line!r}")
        return [int(c) for c in line]


def replication_rng(seed: int, rep: int) -> np.random.Generator:
    """Independent counter-based stream for replication ``rep`` of ``seed``."""
    key = ((seed & _MASK64) << 64) | (rep & _MASK64)
    return np.random.Generator(np.random.Philox(key=key))


class _StreamPool:
    """Reusable Philox generator re-keyed per replication.

    Produces bit-identical streams to ``replication_rng(seed, rep)`` while
    skipping the per-construction entropy draw, which dominates small-n
    campaigns with many replications.
    """

    def __init__(self, seed: int):
        self._seed = seed & _MASK64
        self._bg = np.random.Philox(key=0)
        self._state = self._bg.state
        self.generator = np.random.Generator(self._bg)

    def rekey(self, rep: int) -> np.random.Generator:
        st = self._state
        st["state"]["key"][0] = rep & _MASK64  # low word
        st["state"]["key"][1] = self._seed     # high word
        st["state"]["counter"][:] = 0
        st["buffer_pos"] = 4
        st["has_uint32"] = 0
        st["uinteger"] = 0
        self._bg.state = st
        return self.generator


def simulate_tree(n: int, g: int = 1, oracle=None, schedule: str = "bfs",
                  rng: np.random.Generator | None = None) -> SimRecord:
    """Generate and schedule one tree; returns the per-contender outcomes.

    Nodes with zero or one contenders still occupy their contention slot but
    spawn no children.  N = 1 succeeds in the root (delay 0 by convention);
    N = 0 schedules the empty root slot and resolves nobody.
    """
    if schedule not in SCHEDULES:
        raise ValueError(f"unknown schedule {schedule!r}, expected one of {SCHEDULES}")
    if oracle is None:
        oracle = RandomSplits(rng if rng is not None else np.random.default_rng())

    # Tree generation, breadth first; node ids are creation-ordered.
    members = [tuple(range(n))]
    children: list[tuple[int, int] | None] = [None]
    levels = [[0]]
    current = [0]
    depth = 0
    while current:
        nxt = []
        for nid in current:
            crowd = members[nid]
            if len(crowd) < 2:
                continue
            bits = oracle.bits(len(crowd))
            zeros = tuple(c for c, b in zip(crowd, bits) if b == 0)
            ones = tuple(c for c, b in zip(crowd, bits) if b == 1)
            first = len(members)
            members.extend((zeros, ones))
            children.extend((None, None))
            children[nid] = (first, first + 1)
            nxt.extend((first, first + 1))
        if nxt:
            levels.append(nxt)
            depth += 1
        current = nxt

    slot_of, total_slots = _schedule_slots(levels, children, g, schedule)

    success_slots = np.zeros(n, dtype=np.int64)
    success_levels = np.zeros(n, dtype=np.int64)
    for level, nodes in enumerate(levels):
        for nid in nodes:
            if len(members[nid]) == 1:
                cid = members[nid][0]
                success_slots[cid] = slot_of[nid]
                success_levels[cid] = level
    return SimRecord(
        total_slots=total_slots,
        total_nodes=len(members),
        levels_reached=depth,
        delays=success_slots - 1,
        success_slots=success_slots,
        success_levels=success_levels,
    )


def _schedule_slots(levels, children, g, schedule):
    """Absolute slot index per node id, plus the total slot count."""
    slot_of = np.zeros(len(children), dtype=np.int64)
    if schedule == "bfs":
        # Root alone in slot 1; each later level packs 2g nodes per slot.
        slot_of[levels[0][0]] = 1
        used = 1
        for nodes in levels[1:]:
            for pos, nid in enumerate(nodes):
                slot_of[nid] = used + pos // (2 * g) + 1
            used += -(-len(nodes) // (2 * g))
        return slot_of, used
    if schedule == "bfs-single":
        rank = 0
        for nodes in levels:
            for nid in nodes:
                rank += 1
                slot_of[nid] = rank
        return slot_of, rank
    if schedule == "dfs-single":
        # Preorder, resolving the 0-branch subtree fully before the 1-branch.
        rank = 0
        stack = [levels[0][0]]
        while stack:
            nid = stack.pop()
            rank += 1
            slot_of[nid] = rank
            if children[nid] is not None:
                zero, one = children[nid]
                stack.extend((one, zero))
        return slot_of, rank
    # dfs-frame: both children of a collision share one slot; frames follow
    # the collision preorder.
    slot_of[levels[0][0]] = 1
    frames = 0
    order = [levels[0][0]]
    while order:
        nid = order.pop()
        if children[nid] is None:
            continue
        frames += 1
        zero, one = children[nid]
        slot_of[zero] = slot_of[one] = frames + 1
        order.extend((one, zero))
    return slot_of, frames + 1


@dataclass
class SimAggregates:
    """Merged statistics over a replication campaign."""

    config: SimConfig
    runs: int = 0
    tree_length_hist: dict[int, int] = field(default_factory=dict)
    delay_hist: dict[int, int] = field(default_factory=dict)
    success_slot_hist: dict[int, int] = field(default_factory=dict)
    success_level_hist: dict[int, int] = field(default_factory=dict)
    slot_sum: float = 0.0
    slot_sq_sum: float = 0.0
    delay_sum: float = 0.0
    delay_sq_sum: float = 0.0
    delay_count: int = 0

    def absorb(self, record: SimRecord) -> None:
        self.runs += 1
        t = record.total_slots
        self.tree_length_hist[t] = self.tree_length_hist.get(t, 0) + 1
        self.slot_sum += t
        self.slot_sq_sum += t * t
        for d in record.delays.tolist():
            self.delay_hist[d] = self.delay_hist.get(d, 0) + 1
        for s in record.success_slots.tolist():
            self.success_slot_hist[s] = self.success_slot_hist.get(s, 0) + 1
        for h in record.success_levels.tolist():
            self.success_level_hist[h] = self.success_level_hist.get(h, 0) + 1
        self.delay_sum += float(record.delays.sum())
        self.delay_sq_sum += float((record.delays.astype(float) ** 2).sum())
        self.delay_count += len(record.delays)

    @property
    def mean_tree_length(self) -> float:
        return self.slot_sum / self.runs

    @property
    def var_tree_length(self) -> float:
        return self.slot_sq_sum / self.runs - self.mean_tree_length ** 2

    @property
    def mean_delay(self) -> float:
        return self.delay_sum / self.delay_count

    @property
    def var_delay(self) -> float:
        return self.delay_sq_sum / self.delay_count - self.mean_delay ** 2


@dataclass
class SimResult:
    aggregates: SimAggregates
    records: list[SimRecord] | None


def run_replications(config: SimConfig, keep_records: bool = True,
                     inject: Sequence[str] | None = None) -> SimResult:
    """Run the campaign; bit-identical results for identical (seed, runs).

    With ``inject``, every replication resolves the same deterministic tree
    (useful for reference-vector checks); otherwise replication i draws from
    its own (seed, i)-keyed stream, so merging is order-independent.
    """
    aggregates = SimAggregates(config=config)
    records: list[SimRecord] | None = [] if keep_records else None
    pool = _StreamPool(config.seed) if inject is None else None
    for rep in range(config.runs):
        if inject is not None:
            oracle = InjectedSplits(inject)
        else:
            oracle = RandomSplits(pool.rekey(rep))
        record = simulate_tree(config.n, config.g, oracle, config.schedule)
        aggregates.absorb(record)
        if records is not None:
            records.append(record)
    return SimResult(aggregates=aggregates, records=records)


def contender_rows(records: Iterable[SimRecord]):
    """Raw per-contender rows: (run_id, level, delay_slots, success_slot_index)."""
    for run_id, record in enumerate(records):
        for cid in range(len(record.delays)):
            yield (run_id, int(record.success_levels[cid]),
                   int(record.delays[cid]), int(record.success_slots[cid]))


def summary_dict(aggregates: SimAggregates) -> dict:
    """JSON-ready campaign summary: histograms plus first two moments."""
    cfg = aggregates.config
    out = {
        "config": {"n": cfg.n, "g": cfg.g, "runs": cfg.runs,
                   "seed": cfg.seed, "schedule": cfg.schedule},
        "tree_length_hist": {str(k): v for k, v in sorted(aggregates.tree_length_hist.items())},
        "delay_hist": {str(k): v for k, v in sorted(aggregates.delay_hist.items())},
        "success_slot_hist": {str(k): v for k, v in sorted(aggregates.success_slot_hist.items())},
        "success_level_hist": {str(k): v for k, v in sorted(aggregates.success_level_hist.items())},
        "mean_tree_length": aggregates.mean_tree_length,
        "var_tree_length": aggregates.var_tree_length,
    }
    if aggregates.delay_count:
        out["mean_delay"] = aggregates.mean_delay
        out["var_delay"] = aggregates.var_delay
    return out
