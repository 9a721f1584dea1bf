"""
Metrics Report - end-of-run FIB, path and overhead metrics plus throughput

A report is a plain snapshot: the run hands over the FIB of every router, the
transmission counters and the delivery log, and everything here is computed
from that snapshot. The same figures can be recomputed from a saved trace with
`app.framework.metrics.replay`.

CSV schemas:
    fib_size.csv    seed,strategy,C,P,scope,avg_entries
    overhead.csv    seed,strategy,C,P,interest_discoveries,data_discoveries
    app.csv         seed,strategy,k,scope,app
    throughput.csv  seed,strategy,time_bin,consumer,delivered
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

Scope = Literal["all", "core"]
SCOPES: Tuple[Scope, ...] = ("all", "core")

FIB_COLUMNS = ["seed", "strategy", "C", "P", "scope", "avg_entries"]
OVERHEAD_COLUMNS = ["seed", "strategy", "C", "P", "interest_discoveries", "data_discoveries"]
APP_COLUMNS = ["seed", "strategy", "k", "scope", "app"]
THROUGHPUT_COLUMNS = ["seed", "strategy", "time_bin", "consumer", "delivered"]

# share of the pre-failure mean a bin must reach to count as recovered
RECOVERY_SHARE = 0.9
# full bins before the failure that make up the pre-failure mean
PRE_FAILURE_BINS = 3


def improvement_ratio(baseline: float, approximate: float) -> float:
    """
    baseline / approximate for one paired metric

    Returns:
        float: 1.0 when both are zero, inf when only the approximate value is
    """
    if approximate == 0:
        return 1.0 if baseline == 0 else math.inf
    return baseline / approximate


def routers_in_scope(roles: Dict[str, str], scope: Scope) -> List[str]:
    if scope == "all":
        return sorted(roles)
    return sorted(router for router, role in roles.items() if role == scope)


def avg_fib_entries(fibs: Dict[str, Dict[str, Sequence[int]]], roles: Dict[str, str], scope: Scope = "all") -> float:
    """Mean number of FIB leaves over the scoped routers"""
    routers = routers_in_scope(roles, scope)
    if not routers:
        return 0.0
    return float(np.mean([sum(1 for faces in fibs.get(r, {}).values() if faces) for r in routers]))


def avg_paths_per_prefix(
    fibs: Dict[str, Dict[str, Sequence[int]]],
    roles: Dict[str, str],
    scope: Scope = "all",
) -> float:
    """
    Average faces per (router, prefix) pair

    The prefix universe is every prefix held by at least one scoped router;
    routers lacking a prefix contribute 0 for it.
    """
    routers = routers_in_scope(roles, scope)
    universe = {prefix for r in routers for prefix, faces in fibs.get(r, {}).items() if faces}
    if not routers or not universe:
        return 0.0
    total = sum(len(faces) for r in routers for faces in fibs.get(r, {}).values() if faces)
    return total / (len(routers) * len(universe))


def bin_edges(duration: float, width: float) -> np.ndarray:
    count = max(1, int(math.ceil(duration / width - 1e-9)))
    return np.arange(count + 1) * width


def throughput_counts(times: Sequence[float], duration: float, width: float) -> pd.Series:
    """Deliveries per bin, indexed by bin start"""
    edges = bin_edges(duration, width)
    counts, _ = np.histogram(np.asarray(times, dtype=float), bins=edges)
    return pd.Series(counts.astype(int), index=pd.Index(edges[:-1], name="time_bin"), name="delivered")


@dataclass
class MetricsReport:
    """Everything measured in one run"""
    scenario: str
    strategy: str
    seed: int
    duration: float
    throughput_bin: float
    roles: Dict[str, str]
    fibs: Dict[str, Dict[str, Sequence[int]]]
    consumers: List[str]
    producers: int
    parallel_links: int
    discovery_interest_count: int = 0
    discovery_data_count: int = 0
    deliveries: List[Tuple[float, str]] = field(default_factory=list)
    discoveries_issued: List[Tuple[float, str]] = field(default_factory=list)
    failure_times: List[float] = field(default_factory=list)
    bfd_detections: List[float] = field(default_factory=list)
    events: Dict[str, int] = field(default_factory=dict)
    mean_path_hops: float = 0.0
    trace: Optional[pd.DataFrame] = None

    # ============================================================================
    # Metrics
    # ============================================================================

    def avg_fib_entries(self, scope: Scope = "all") -> float:
        return avg_fib_entries(self.fibs, self.roles, scope)

    def avg_paths_per_prefix(self, scope: Scope = "all") -> float:
        return avg_paths_per_prefix(self.fibs, self.roles, scope)

    def discovery_overhead(self) -> Dict[str, int]:
        return {
            "interest_discoveries": self.discovery_interest_count,
            "data_discoveries": self.discovery_data_count,
        }

    def max_faces_per_leaf(self) -> int:
        return max((len(faces) for fib in self.fibs.values() for faces in fib.values()), default=0)

    def throughput_series(self, consumer: Optional[str] = None, width: Optional[float] = None) -> pd.Series:
        """Delivered Data per bin for one consumer, or all consumers together"""
        width = width or self.throughput_bin
        times = [t for t, name in self.deliveries if consumer is None or name == consumer]
        return throughput_counts(times, self.duration, width)

    def pre_failure_mean(self, failure_time: float, consumer: Optional[str] = None) -> float:
        """Mean of the last full bins before the failure"""
        series = self.throughput_series(consumer)
        before = series[series.index + self.throughput_bin <= failure_time + 1e-9]
        if before.empty:
            return 0.0
        return float(before.iloc[-PRE_FAILURE_BINS:].mean())

    def min_post_failure_share(self, failure_time: float, consumer: Optional[str] = None) -> float:
        """Lowest bin after the failure as a share of the pre-failure mean"""
        reference = self.pre_failure_mean(failure_time, consumer)
        if reference == 0:
            return 0.0
        series = self.throughput_series(consumer)
        after = series[(series.index >= failure_time - 1e-9) & (series.index + self.throughput_bin <= self.duration + 1e-9)]
        if after.empty:
            return 1.0
        return float(after.min()) / reference

    def recovery_time(self, failure_time: float, consumer: Optional[str] = None) -> Optional[float]:
        """
        Seconds from the failure to the first bin back at 90% of the pre-failure mean

        Returns:
            Optional[float]: None when throughput never recovers (or never flowed)
        """
        reference = self.pre_failure_mean(failure_time, consumer)
        if reference == 0:
            return None
        series = self.throughput_series(consumer)
        for start, delivered in series.items():
            if start + self.throughput_bin <= failure_time + 1e-9:
                continue
            if delivered >= RECOVERY_SHARE * reference:
                return max(0.0, float(start) - failure_time)
        return None

    def post_failure_discoveries(self, failure_time: Optional[float] = None) -> int:
        """Consumer-issued discoveries at or after the (first) failure"""
        if failure_time is None:
            if not self.failure_times:
                return 0
            failure_time = min(self.failure_times)
        return sum(1 for issued, _ in self.discoveries_issued if issued >= failure_time)

    @property
    def delivered(self) -> int:
        return len(self.deliveries)

    # ============================================================================
    # Export
    # ============================================================================

    def fib_frame(self) -> pd.DataFrame:
        rows = [
            (self.seed, self.strategy, len(self.consumers), self.producers, scope, self.avg_fib_entries(scope))
            for scope in SCOPES
        ]
        return pd.DataFrame(rows, columns=FIB_COLUMNS)

    def overhead_frame(self) -> pd.DataFrame:
        rows = [(
            self.seed,
            self.strategy,
            len(self.consumers),
            self.producers,
            self.discovery_interest_count,
            self.discovery_data_count,
        )]
        return pd.DataFrame(rows, columns=OVERHEAD_COLUMNS)

    def app_frame(self) -> pd.DataFrame:
        rows = [
            (self.seed, self.strategy, self.parallel_links, scope, self.avg_paths_per_prefix(scope))
            for scope in SCOPES
        ]
        return pd.DataFrame(rows, columns=APP_COLUMNS)

    def throughput_frame(self) -> pd.DataFrame:
        frames = []
        for consumer in self.consumers:
            series = self.throughput_series(consumer)
            frames.append(pd.DataFrame({
                "seed": self.seed,
                "strategy": self.strategy,
                "time_bin": series.index.to_numpy(),
                "consumer": consumer,
                "delivered": series.to_numpy(),
            }))
        if not frames:
            return pd.DataFrame(columns=THROUGHPUT_COLUMNS)
        return pd.concat(frames, ignore_index=True)[THROUGHPUT_COLUMNS]

    def summary(self) -> Dict[str, object]:
        """Flat key-value view for logs and the `run` command"""
        summary: Dict[str, object] = {
            "scenario": self.scenario,
            "strategy": self.strategy,
            "seed": self.seed,
            "avg_fib_all": round(self.avg_fib_entries("all"), 4),
            "avg_fib_core": round(self.avg_fib_entries("core"), 4),
            "app_all": round(self.avg_paths_per_prefix("all"), 4),
            "app_core": round(self.avg_paths_per_prefix("core"), 4),
            "discovery_interests": self.discovery_interest_count,
            "discovery_data": self.discovery_data_count,
            "delivered": self.delivered,
            "discoveries_issued": len(self.discoveries_issued),
        }
        if self.failure_times:
            failure = min(self.failure_times)
            recovery = self.recovery_time(failure)
            summary["failure_time"] = failure
            summary["post_failure_discoveries"] = self.post_failure_discoveries(failure)
            summary["min_post_failure_share"] = round(self.min_post_failure_share(failure), 4)
            summary["recovery_time"] = None if recovery is None else round(recovery, 4)
            summary["bfd_detections"] = len(self.bfd_detections)
        return summary

    def __repr__(self) -> str:
        return (
            f"<MetricsReport(scenario='{self.scenario}', strategy='{self.strategy}', seed={self.seed}, "
            f"fib_all={self.avg_fib_entries('all'):.2f}, delivered={self.delivered})>"
        )
