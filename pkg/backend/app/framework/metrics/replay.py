"""
Trace replay - recompute run metrics from a saved packet trace

FIB state is rebuilt by applying the fib-* events in trace order; overhead and
throughput come from the tx-discovery-* and app-data rows. For any traced run
the replayed report equals the live one.

Usage:
    >>> live = run(scenario, trace=True)
    >>> replayed = replay_report(live.trace, live)
    >>> replayed.avg_fib_entries("core") == live.avg_fib_entries("core")
    True
"""

import logging
from dataclasses import replace
from typing import Dict, List

import pandas as pd

from app.core.exceptions import ConfigurationError
from app.framework.metrics.collector import TRACE_COLUMNS
from app.framework.metrics.report import MetricsReport

logger = logging.getLogger(__name__)


def _check_columns(trace: pd.DataFrame) -> None:
    missing = [column for column in TRACE_COLUMNS if column not in trace.columns]
    if missing:
        raise ConfigurationError("Trace is missing columns", details={"missing": missing})


def replay_fibs(trace: pd.DataFrame) -> Dict[str, Dict[str, List[int]]]:
    """Router -> prefix -> faces after applying every FIB event"""
    _check_columns(trace)
    fibs: Dict[str, Dict[str, List[int]]] = {}
    events = trace[trace["event"].str.startswith("fib-")]
    for node, event, name, face in events[["node", "event", "name", "face"]].itertuples(index=False):
        fib = fibs.setdefault(node, {})
        if event == "fib-add":
            fib.setdefault(name, []).append(int(face))
        elif event == "fib-replace":
            fib[name] = [int(face)]
        elif event == "fib-remove-face":
            faces = fib.get(name, [])
            if int(face) in faces:
                faces.remove(int(face))
        elif event == "fib-remove-entry":
            fib.pop(name, None)
    return {node: {prefix: faces for prefix, faces in fib.items() if faces} for node, fib in fibs.items()}


def replay_report(trace: pd.DataFrame, like: MetricsReport) -> MetricsReport:
    """
    Rebuild a report from a trace

    Args:
        trace: frame with the trace columns, as written by `run --trace`
        like: report supplying run metadata (roles, consumers, duration)

    Returns:
        MetricsReport: metrics derived only from the trace
    """
    _check_columns(trace)
    events = trace["event"]
    fibs = replay_fibs(trace)
    deliveries = [(float(t), str(node)) for t, node in trace.loc[events == "app-data", ["time", "node"]].itertuples(index=False)]
    issued = [(float(t), str(node)) for t, node in trace.loc[events == "app-discovery", ["time", "node"]].itertuples(index=False)]

    logger.debug(f"Replayed {len(trace)} trace rows for {like.scenario} seed={like.seed}")
    return replace(
        like,
        fibs={router: fibs.get(router, {}) for router in like.roles},
        discovery_interest_count=int((events == "tx-discovery-interest").sum()),
        discovery_data_count=int((events == "tx-discovery-data").sum()),
        deliveries=deliveries,
        discoveries_issued=issued,
        events=events.value_counts().to_dict(),
        trace=trace,
    )
