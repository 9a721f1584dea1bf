"""
Paired-strategy sweeps

Every (value, seed) pair is run once per strategy on the same topology and
workload, so baseline / approximate ratios compare like with like.

Experiments:
    fib-vs-C    vary consumers (C)
    fib-vs-P    vary producers (P)
    app-vs-k    vary parallel links per adjacency (k)

Runs are independent; with workers > 1 they go to a process pool. Results are
assembled in task order, so the CSVs do not depend on the worker count.

Usage:
    >>> result = sweep("fib-vs-C", base, values=[10, 100], seeds=range(5))
    >>> result.fib.head()
"""

import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence, Tuple

import pandas as pd
from tqdm import tqdm

from app.core.exceptions import ConfigurationError, SweepError
from app.framework.metrics.report import (
    FIB_COLUMNS,
    OVERHEAD_COLUMNS,
    improvement_ratio,
)
from app.framework.sim.runner import run
from app.schemas.scenario import ScenarioConfig

logger = logging.getLogger(__name__)

EXPERIMENTS: Dict[str, str] = {
    "fib-vs-C": "consumers",
    "fib-vs-P": "producers",
    "app-vs-k": "parallel_links",
}
STRATEGIES: Tuple[str, str] = ("approximate", "self-learning")
BASELINE = "self-learning"
RATIO = "ratio"

RATIO_COLUMNS = ["experiment", "value", "seed", "C", "P", "metric", "scope", "ratio"]


@dataclass(frozen=True)
class SweepTask:
    index: int
    value: int
    seed: int
    strategy: str
    scenario: ScenarioConfig


@dataclass
class SweepResult:
    """Per-run rows of one sweep plus paired ratios"""
    experiment: str
    fib: pd.DataFrame
    overhead: pd.DataFrame
    app: pd.DataFrame
    ratios: pd.DataFrame
    mean_path_hops: List[float] = field(default_factory=list)

    def mean_ratio(self, metric: str, value: int, scope: str = "all") -> float:
        """Seed-averaged ratio"""
        rows = self.ratios[
            (self.ratios["metric"] == metric) & (self.ratios["value"] == value) & (self.ratios["scope"] == scope)
        ]
        return float(rows["ratio"].mean())

    def fib_csv_frame(self) -> pd.DataFrame:
        """fib_size.csv rows: both strategies plus `ratio` rows"""
        ratios = self.ratios[self.ratios["metric"] == "fib"].rename(columns={"ratio": "avg_entries"})
        ratios = ratios.assign(strategy=RATIO)[FIB_COLUMNS]
        return pd.concat([self.fib, ratios], ignore_index=True)

    def overhead_csv_frame(self) -> pd.DataFrame:
        """overhead.csv rows: both strategies plus `ratio` rows"""
        ratios = self.ratios[self.ratios["metric"] != "fib"]
        wide = ratios.pivot_table(index=["value", "seed", "C", "P"], columns="metric", values="ratio").reset_index()
        wide = wide.assign(strategy=RATIO)[OVERHEAD_COLUMNS]
        return pd.concat([self.overhead, wide], ignore_index=True)


def _run_task(task: SweepTask) -> Tuple[int, Dict[str, pd.DataFrame], float]:
    report = run(task.scenario)
    frames = {"fib": report.fib_frame(), "overhead": report.overhead_frame(), "app": report.app_frame()}
    return task.index, frames, report.mean_path_hops


def plan(experiment: str, base: ScenarioConfig, values: Iterable[int], seeds: Iterable[int]) -> List[SweepTask]:
    """
    Every (value, seed, strategy) run of a sweep

    Raises:
        ConfigurationError: unknown experiment or an invalid derived scenario
    """
    if experiment not in EXPERIMENTS:
        raise ConfigurationError(
            f"Unknown experiment '{experiment}'",
            details={"experiment": experiment, "available": sorted(EXPERIMENTS)},
        )
    if base.is_explicit and experiment != "app-vs-k":
        raise ConfigurationError(
            f"{experiment} needs a generated topology",
            details={"experiment": experiment, "scenario": base.name},
        )
    field_name = EXPERIMENTS[experiment]
    tasks: List[SweepTask] = []
    for value in values:
        for seed in seeds:
            for strategy in STRATEGIES:
                data = base.model_dump()
                data.update({field_name: value, "seed": seed, "strategy": strategy})
                try:
                    scenario = ScenarioConfig.model_validate(data)
                except ValueError as e:
                    raise ConfigurationError(
                        f"Invalid {field_name}={value} for {experiment}",
                        details={"value": value, "error": str(e)},
                    ) from e
                tasks.append(SweepTask(len(tasks), int(value), int(seed), strategy, scenario))
    return tasks


def _ratios(experiment: str, tasks: Sequence[SweepTask], frames: Dict[int, Dict[str, pd.DataFrame]]) -> pd.DataFrame:
    paired: Dict[Tuple[int, int], Dict[str, Dict[str, pd.DataFrame]]] = {}
    for task in tasks:
        paired.setdefault((task.value, task.seed), {})[task.strategy] = frames[task.index]

    rows = []
    for (value, seed), by_strategy in paired.items():
        approx, baseline = by_strategy["approximate"], by_strategy[BASELINE]
        consumers, producers = (int(approx["fib"][column].iloc[0]) for column in ("C", "P"))
        for scope in ("all", "core"):
            a = approx["fib"].loc[approx["fib"]["scope"] == scope, "avg_entries"].iloc[0]
            b = baseline["fib"].loc[baseline["fib"]["scope"] == scope, "avg_entries"].iloc[0]
            rows.append((experiment, value, seed, consumers, producers, "fib", scope, improvement_ratio(b, a)))
        for metric in ("interest_discoveries", "data_discoveries"):
            a = approx["overhead"][metric].iloc[0]
            b = baseline["overhead"][metric].iloc[0]
            rows.append((experiment, value, seed, consumers, producers, metric, "all", improvement_ratio(b, a)))
    return pd.DataFrame(rows, columns=RATIO_COLUMNS)


def sweep(
    experiment: str,
    base: ScenarioConfig,
    values: Iterable[int],
    seeds: Iterable[int],
    workers: int = 1,
    progress: bool = True,
) -> SweepResult:
    """
    Run both strategies for every value and seed

    Args:
        experiment: fib-vs-C, fib-vs-P or app-vs-k
        base: scenario the swept field is substituted into
        values: swept values
        seeds: seeds per value
        workers: process-pool size; 1 runs inline
        progress: show a tqdm bar

    Returns:
        SweepResult: per-run frames and paired ratios

    Raises:
        ConfigurationError: unknown experiment or invalid values
        SweepError: one or more runs failed; nothing is returned
    """
    tasks = plan(experiment, base, list(values), list(seeds))
    frames: Dict[int, Dict[str, pd.DataFrame]] = {}
    hops: Dict[int, float] = {}
    failed: List[Dict[str, object]] = []
    logger.info(f"Sweep {experiment}: {len(tasks)} runs on {workers} worker(s)")

    bar = tqdm(total=len(tasks), desc=experiment, disable=not progress)
    if workers <= 1:
        for task in tasks:
            try:
                index, result, mean_hops = _run_task(task)
                frames[index], hops[index] = result, mean_hops
            except Exception as e:
                logger.error(f"Run failed: {task.strategy} value={task.value} seed={task.seed}: {e}", exc_info=True)
                failed.append({"strategy": task.strategy, "value": task.value, "seed": task.seed, "error": str(e)})
            bar.update(1)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(_run_task, task): task for task in tasks}
            for future in as_completed(futures):
                task = futures[future]
                try:
                    index, result, mean_hops = future.result()
                    frames[index], hops[index] = result, mean_hops
                except Exception as e:
                    logger.error(f"Run failed: {task.strategy} value={task.value} seed={task.seed}: {e}")
                    failed.append({"strategy": task.strategy, "value": task.value, "seed": task.seed, "error": str(e)})
                bar.update(1)
    bar.close()

    if failed:
        raise SweepError(f"{len(failed)} of {len(tasks)} runs failed", details={"failed": failed})

    ordered = [frames[task.index] for task in tasks]
    result = SweepResult(
        experiment=experiment,
        fib=pd.concat([f["fib"] for f in ordered], ignore_index=True),
        overhead=pd.concat([f["overhead"] for f in ordered], ignore_index=True),
        app=pd.concat([f["app"] for f in ordered], ignore_index=True),
        ratios=_ratios(experiment, tasks, frames),
        mean_path_hops=[hops[task.index] for task in tasks if task.strategy == "approximate"],
    )
    logger.info(f"Sweep {experiment} finished")
    return result


def summarize(result: SweepResult) -> pd.DataFrame:
    """Seed-averaged ratios per value, metric and scope"""
    return (
        result.ratios.groupby(["experiment", "value", "metric", "scope"], as_index=False)["ratio"]
        .mean()
        .sort_values(["metric", "scope", "value"])
        .reset_index(drop=True)
    )

