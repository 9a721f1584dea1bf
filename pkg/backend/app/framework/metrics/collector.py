"""
Metrics Collector - run-time counters and the optional packet trace

Forwarders, links and apps report into one collector per run. Counters are always
kept; trace rows are only materialised when tracing is enabled.

Trace columns: time, node, event, name, nonce, face, reason.
"""

import logging
from collections import Counter
from typing import Any, List, Optional, Tuple

import pandas as pd

from app.framework.foundation.packets import Data, Interest, Nack

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ["time", "node", "event", "name", "nonce", "face", "reason"]

TraceRow = Tuple[float, str, str, str, Optional[int], Optional[int], str]


class MetricsCollector:
    """Counters and trace of one simulation run"""

    def __init__(self, trace_enabled: bool = False) -> None:
        self.trace_enabled = trace_enabled
        self.events: Counter = Counter()
        self.transmissions: Counter = Counter()
        self.discovery_interest_times: List[float] = []
        self.discovery_data_times: List[float] = []
        self.discoveries_issued: List[Tuple[float, str]] = []
        self.deliveries: List[Tuple[float, str]] = []
        self.rows: List[TraceRow] = []

    # ---------------------------------------------------------------- events

    def record(
        self,
        time: float,
        node: str,
        event: str,
        subject: Any = None,
        face: Optional[int] = None,
        reason: Optional[str] = None,
    ) -> None:
        """
        Count an event and trace it when enabled

        Args:
            subject: a packet or a name; packets contribute name, nonce and
                (for NACKs) reason
        """
        self.events[event] += 1
        if not self.trace_enabled:
            return

        name = ""
        nonce: Optional[int] = None
        if isinstance(subject, (Interest, Data, Nack)):
            name = str(subject.name)
            if isinstance(subject, (Interest, Nack)):
                nonce = subject.nonce
            if isinstance(subject, Nack) and reason is None:
                reason = subject.reason.value
        elif subject is not None:
            name = str(subject)
        self.rows.append((time, node, event, name, nonce, face, reason or ""))

    def on_transmit(self, time: float, kind: str) -> None:
        """A packet of `kind` left a network face"""
        self.transmissions[kind] += 1
        if kind == "discovery-interest":
            self.discovery_interest_times.append(time)
        elif kind == "discovery-data":
            self.discovery_data_times.append(time)

    def on_delivery(self, time: float, consumer: str) -> None:
        self.deliveries.append((time, consumer))

    def on_discovery_issued(self, time: float, consumer: str) -> None:
        self.discoveries_issued.append((time, consumer))

    # ---------------------------------------------------------------- views

    @property
    def discovery_interest_count(self) -> int:
        return self.transmissions["discovery-interest"]

    @property
    def discovery_data_count(self) -> int:
        return self.transmissions["discovery-data"]

    def trace_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.rows, columns=TRACE_COLUMNS)
        frame["nonce"] = frame["nonce"].astype("Int64")
        frame["face"] = frame["face"].astype("Int64")
        return frame
