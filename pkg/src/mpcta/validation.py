"""Empirical-vs-analytical comparison via the Kolmogorov-Smirnov statistic.

The analytic CDF is capped at its computed total mass (its deliberate
truncation tail is never folded back in), so a comparison against a full
empirical CDF can disagree by at most the tail mass beyond the model error.
Only the statistic is computed; a hypothesis test would be meaningless here
because the analytic model is knowingly approximate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .collision import TreeConfig
from .delay import DelayDistribution, delay_pmf
from .pmf import Pmf
from .simulate import SimConfig, run_replications
from .tree_length import DEFAULT_EPSILON


@dataclass(frozen=True)
class EmpiricalCdf:
    """Right-continuous step CDF of an integer sample."""

    values: np.ndarray     # sorted distinct sample values
    cumulative: np.ndarray # fraction of samples <= values[i]
    n: int

    @classmethod
    def from_samples(cls, samples: Sequence[int]) -> "EmpiricalCdf":
        arr = np.asarray(samples)
        if arr.size == 0:
            raise ValueError("cannot build an empirical CDF from no samples")
        values, counts = np.unique(arr, return_counts=True)
        return cls(values=values, cumulative=np.cumsum(counts) / arr.size, n=int(arr.size))

    @classmethod
    def from_histogram(cls, hist: Mapping[int, int]) -> "EmpiricalCdf":
        if not hist:
            raise ValueError("cannot build an empirical CDF from an empty histogram")
        values = np.array(sorted(hist))
        counts = np.array([hist[v] for v in values], dtype=float)
        total = counts.sum()
        return cls(values=values, cumulative=np.cumsum(counts) / total, n=int(total))

    def at(self, value) -> np.ndarray:
        """CDF evaluated at ``value`` (scalar or array)."""
        idx = np.searchsorted(self.values, value, side="right")
        padded = np.concatenate(([0.0], self.cumulative))
        return padded[idx]


def empirical_cdf(samples: Sequence[int]) -> EmpiricalCdf:
    return EmpiricalCdf.from_samples(samples)


@dataclass(frozen=True)
class KsReport:
    """Maximum CDF discrepancy between a sample and an analytic pmf."""

    ks: float
    argmax: int
    samples: int
    analytic_tail_mass: float
    config: dict | None = None

    def to_dict(self) -> dict:
        out = {"ks": self.ks, "argmax_d": self.argmax,
               "samples": self.samples, "analytic_tail_mass": self.analytic_tail_mass}
        if self.config is not None:
            out["config"] = dict(self.config)
        return out


def ks_statistic(emp: EmpiricalCdf, analytic: Pmf, config: dict | None = None) -> KsReport:
    """Exact maximum absolute CDF difference over the union of supports.

    Both CDFs are integer step functions, so the maximum over all integers
    is attained at a jump point of one of them.  The analytic CDF saturates
    at its total mass; mass beyond the truncation stays unclaimed.
    """
    grid = np.union1d(emp.values,
                      analytic.offset + np.arange(len(analytic.weights)))
    analytic_cdf = np.array([analytic.cdf_at(int(d)) for d in grid])
    diffs = np.abs(emp.at(grid) - analytic_cdf)
    best = int(np.argmax(diffs))
    return KsReport(ks=float(diffs[best]), argmax=int(grid[best]), samples=emp.n,
                    analytic_tail_mass=max(0.0, 1.0 - analytic.total()),
                    config=config)


def _mix_seed(seed: int, n: int, g: int) -> int:
    """Stable per-config seed so sweep entries are independent experiments."""
    z = (seed ^ (n * 0x9E3779B97F4A7C15) ^ (g * 0xBF58476D1CE4E5B9)) & (2**64 - 1)
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & (2**64 - 1)
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & (2**64 - 1)
    return z ^ (z >> 31)


@dataclass
class SweepEntry:
    """One (n, g) comparison: report plus the curves behind it."""

    report: KsReport
    analytic: DelayDistribution
    empirical: EmpiricalCdf
    delay_hist: dict[int, int]


def evaluate_config(n: int, g: int, runs: int, seed: int,
                    epsilon: float = DEFAULT_EPSILON) -> SweepEntry:
    """Simulate one configuration and compare its delay CDF to the model."""
    cfg_seed = _mix_seed(seed, n, g)
    sim = run_replications(SimConfig(n=n, runs=runs, seed=cfg_seed, g=g),
                           keep_records=False)
    hist = sim.aggregates.delay_hist
    emp = EmpiricalCdf.from_histogram(hist)
    analytic = delay_pmf(TreeConfig(n=n, g=g), epsilon)
    report = ks_statistic(emp, analytic.pmf,
                          config={"n": n, "g": g, "runs": runs,
                                  "seed": cfg_seed, "epsilon": epsilon})
    return SweepEntry(report=report, analytic=analytic, empirical=emp, delay_hist=hist)


def sweep(ns: Sequence[int], gs: Sequence[int], runs: int, seed: int,
          epsilon: float = DEFAULT_EPSILON) -> list[KsReport]:
    """KS reports over the Cartesian product of contender counts and g values."""
    if not ns or not gs:
        raise ValueError("sweep needs at least one n and one g")
    return [evaluate_config(n, g, runs, seed, epsilon).report
            for n in ns for g in gs]


def curve_rows(entry: SweepEntry):
    """Long-format rows (n, g, d, analytic_pmf, analytic_cdf, empirical_pmf,
    empirical_cdf) over the union of supports."""
    cfg = entry.report.config
    pmf = entry.analytic.pmf
    grid = np.union1d(entry.empirical.values,
                      pmf.offset + np.arange(len(pmf.weights)))
    emp_cdf = entry.empirical.at(grid)
    total = entry.empirical.n
    for i, d in enumerate(int(v) for v in grid):
        yield (cfg["n"], cfg["g"], d,
               pmf.p(d), pmf.cdf_at(d),
               entry.delay_hist.get(d, 0) / total, float(emp_cdf[i]))
