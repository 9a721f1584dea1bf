"""Run metrics: live collection, end-of-run report and trace replay"""

from app.framework.metrics.collector import TRACE_COLUMNS, MetricsCollector
from app.framework.metrics.replay import replay_fibs, replay_report
from app.framework.metrics.report import (
    APP_COLUMNS,
    FIB_COLUMNS,
    OVERHEAD_COLUMNS,
    THROUGHPUT_COLUMNS,
    MetricsReport,
    improvement_ratio,
)

__all__ = [
    "APP_COLUMNS",
    "FIB_COLUMNS",
    "OVERHEAD_COLUMNS",
    "THROUGHPUT_COLUMNS",
    "TRACE_COLUMNS",
    "MetricsCollector",
    "MetricsReport",
    "improvement_ratio",
    "replay_fibs",
    "replay_report",
]
