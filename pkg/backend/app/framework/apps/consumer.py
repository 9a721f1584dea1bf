"""
Consumer application - Stop-and-Wait discovery gating with an AIMD window

The consumer requests `<prefix>/<seq>` for increasing seq, either at a fixed
rate or (window-only mode) as fast as the congestion window allows.

* NoRoute NACK: the interest is queued and, while the seq still has retries
  left, a discovery interest goes out; while it is in flight nothing else is
  sent. Its Data satisfies the seq it was issued for, then queued interests
  leave first, in seq order. A seq whose retries are used up is abandoned.
* AltRoute NACK: immediate retransmission with a fresh nonce, window untouched.
* Timeout, or too many AltRoute retries of one seq, falls back to discovery.

Every timeout halves ssthresh and resets cwnd to 1. A NoRoute once data has
flowed also counts as a loss, at most once per window of interests.

Usage:
    >>> consumer = Consumer("consumer0", parse_name("/d0/c0"), loop, rng, collector)
    >>> consumer.attach(forwarder)
    >>> consumer.start(at=0.0, stop_at=60.0)
"""

import bisect
import logging
import math
from collections import deque
from dataclasses import dataclass
from typing import TYPE_CHECKING, Deque, Dict, List, Optional

import numpy as np

from app.framework.foundation.names import Name
from app.framework.foundation.packets import Data, FaceKind, Interest, Nack, NackReason, Packet
from app.framework.metrics.collector import MetricsCollector
from app.framework.sim.event_loop import EventHandle, EventLoop

if TYPE_CHECKING:
    from app.framework.engine.forwarder import Forwarder

logger = logging.getLogger(__name__)

_NONCE_BOUND = 2**63 - 1


class AimdWindow:
    """Slow start below ssthresh, +1/cwnd above it, halve on loss"""

    def __init__(self, initial_cwnd: float = 1.0, initial_ssthresh: float = 64.0, max_cwnd: Optional[float] = None):
        self.cwnd = initial_cwnd
        self.ssthresh = initial_ssthresh
        self.max_cwnd = max_cwnd
        self.recovery_point = 0

    @property
    def in_slow_start(self) -> bool:
        return self.cwnd < self.ssthresh

    @property
    def allowance(self) -> int:
        """Interests that may be outstanding"""
        return max(1, int(math.floor(self.cwnd + 1e-9)))

    def on_data(self) -> None:
        if self.in_slow_start:
            self.cwnd += 1.0
        else:
            self.cwnd += 1.0 / self.cwnd
        if self.max_cwnd is not None:
            self.cwnd = min(self.cwnd, self.max_cwnd)

    def on_timeout(self) -> None:
        self.ssthresh = max(self.cwnd / 2.0, 1.0)
        self.cwnd = 1.0

    def on_loss(self, seq: int, next_seq: int) -> bool:
        """
        Multiplicative decrease

        Losses of interests sent before the last decrease belong to the same
        window and are ignored.

        Returns:
            bool: True when the window was reduced
        """
        if seq < self.recovery_point:
            return False
        self.on_timeout()
        self.recovery_point = next_seq
        return True

    def __repr__(self) -> str:
        return f"<AimdWindow(cwnd={self.cwnd:.2f}, ssthresh={self.ssthresh:.2f})>"


@dataclass
class _Outstanding:
    nonce: int
    sent_at: float
    timer: EventHandle


@dataclass
class _Discovery:
    seq: int
    nonce: int
    timer: EventHandle


class Consumer:
    """Requests one prefix"""

    def __init__(
        self,
        name: str,
        prefix: Name,
        loop: EventLoop,
        rng: np.random.Generator,
        collector: MetricsCollector,
        rate: float = 8.0,
        window_only: bool = False,
        max_cwnd: Optional[float] = None,
        initial_cwnd: float = 1.0,
        initial_ssthresh: float = 64.0,
        max_alt_attempts: int = 3,
        discovery_timer: float = 1.0,
        interest_lifetime: float = 2.0,
    ) -> None:
        self.name = name
        self.prefix = prefix
        self.loop = loop
        self.rng = rng
        self.collector = collector
        self.rate = rate
        self.window_only = window_only
        self.window = AimdWindow(initial_cwnd, initial_ssthresh, max_cwnd)
        self.max_alt_attempts = max_alt_attempts
        self.discovery_timer = discovery_timer
        self.interest_lifetime = interest_lifetime

        self.forwarder: Optional["Forwarder"] = None
        self.face: Optional[int] = None
        self.stop_at = math.inf

        self.next_seq = 0
        self.outstanding: Dict[int, _Outstanding] = {}
        self.backlog: Deque[int] = deque()
        self.retransmit: List[int] = []
        self.attempts: Dict[int, int] = {}
        self.discovery: Optional[_Discovery] = None

        self.delivered = 0
        self.discoveries_issued = 0
        self.interests_sent = 0

    # ============================================================================
    # Lifecycle
    # ============================================================================

    def attach(self, forwarder: "Forwarder") -> int:
        self.forwarder = forwarder
        self.face = forwarder.add_app_face(self, FaceKind.CONSUMER)
        return self.face

    def start(self, at: float = 0.0, stop_at: float = math.inf) -> None:
        self.stop_at = stop_at
        self.loop.schedule_at(at, self._begin)

    def _begin(self) -> None:
        logger.debug(f"{self.name}: start requesting {self.prefix} at {self.loop.now:.3f}")
        if self.window_only:
            self.pump()
        else:
            self.tick()

    @property
    def discovery_in_flight(self) -> bool:
        return self.discovery is not None

    @property
    def queued(self) -> int:
        return len(self.backlog) + len(self.retransmit)

    # ============================================================================
    # Sending
    # ============================================================================

    def tick(self) -> None:
        """Generate the next interest of a rate-driven workload"""
        if self.loop.now >= self.stop_at:
            return
        self.backlog.append(self.next_seq)
        self.next_seq += 1
        self.pump()
        self.loop.schedule(1.0 / self.rate, self.tick)

    def _take_next(self) -> Optional[int]:
        if self.retransmit:
            return self.retransmit.pop(0)
        if self.backlog:
            return self.backlog.popleft()
        if self.window_only and self.loop.now < self.stop_at:
            seq = self.next_seq
            self.next_seq += 1
            return seq
        return None

    def pump(self) -> None:
        """Send queued or new interests while the window allows and no discovery is pending"""
        while self.discovery is None and len(self.outstanding) < self.window.allowance:
            seq = self._take_next()
            if seq is None:
                return
            self._express(seq)

    def _nonce(self) -> int:
        return int(self.rng.integers(0, _NONCE_BOUND, dtype=np.int64))

    def _name_of(self, seq: int) -> Name:
        return self.prefix.append(str(seq))

    def _express(self, seq: int) -> None:
        nonce = self._nonce()
        timer = self.loop.schedule(self.interest_lifetime, self._on_timeout, seq, nonce)
        self.outstanding[seq] = _Outstanding(nonce, self.loop.now, timer)
        self.interests_sent += 1
        self.forwarder.receive_from_app(Interest(self._name_of(seq), nonce), self.face)

    def _queue(self, seq: int) -> None:
        if seq not in self.retransmit:
            bisect.insort(self.retransmit, seq)

    def _start_discovery(self, seq: int) -> None:
        if seq in self.retransmit:
            self.retransmit.remove(seq)
        nonce = self._nonce()
        timer = self.loop.schedule(self.discovery_timer, self._on_discovery_timeout)
        self.discovery = _Discovery(seq, nonce, timer)
        self.discoveries_issued += 1

        name = self._name_of(seq)
        self.collector.on_discovery_issued(self.loop.now, self.name)
        self.collector.record(self.loop.now, self.name, "app-discovery", name)
        logger.debug(f"{self.name}: discovery for {name} at {self.loop.now:.3f}")
        self.forwarder.receive_from_app(Interest(name, nonce, is_discovery=True), self.face)

    def _on_discovery_timeout(self) -> None:
        if self.discovery is None:
            return
        seq = self.discovery.seq
        self.discovery = None
        self._start_discovery(seq)

    # ============================================================================
    # Receiving
    # ============================================================================

    def _seq_of(self, name: Name) -> Optional[int]:
        if len(name) != len(self.prefix) + 1 or not self.prefix.is_prefix_of(name):
            return None
        try:
            return int(name.components[-1])
        except ValueError:
            return None

    def receive(self, packet: Packet) -> None:
        if isinstance(packet, Data):
            self.on_data(packet)
        elif isinstance(packet, Nack):
            self.on_nack(packet)

    def on_data(self, data: Data) -> None:
        seq = self._seq_of(data.name)
        if seq is None:
            return

        if data.is_discovery:
            if self.discovery is None or self.discovery.seq != seq:
                return
            self.discovery.timer.cancel()
            self.discovery = None
        else:
            outstanding = self.outstanding.pop(seq, None)
            if outstanding is None:
                return
            outstanding.timer.cancel()

        self.delivered += 1
        self.attempts.pop(seq, None)
        self.window.on_data()
        self.collector.on_delivery(self.loop.now, self.name)
        self.collector.record(self.loop.now, self.name, "app-data", data)
        self.pump()

    def on_nack(self, nack: Nack) -> None:
        seq = self._seq_of(nack.name)
        if seq is None:
            return
        outstanding = self.outstanding.get(seq)
        if outstanding is None or outstanding.nonce != nack.nonce:
            return

        del self.outstanding[seq]
        outstanding.timer.cancel()
        self.collector.record(self.loop.now, self.name, "app-nack", nack)

        if nack.reason is NackReason.ALT_ROUTE:
            attempts = self.attempts.get(seq, 0) + 1
            self.attempts[seq] = attempts
            if attempts < self.max_alt_attempts and self.discovery is None:
                self._express(seq)
                return
            self._queue(seq)
            if self.discovery is None:
                self._start_discovery(seq)
            return

        if self.delivered:
            self.window.on_loss(seq, self.next_seq)
        if self.discovery is not None:
            self._queue(seq)
        elif self.attempts.get(seq, 0) < self.max_alt_attempts:
            self._start_discovery(seq)
        else:
            self._abandon(seq)
        self.pump()

    def _on_timeout(self, seq: int, nonce: int) -> None:
        outstanding = self.outstanding.get(seq)
        if outstanding is None or outstanding.nonce != nonce:
            return
        del self.outstanding[seq]
        self.collector.record(self.loop.now, self.name, "app-timeout", self._name_of(seq))

        self.window.on_timeout()
        attempts = self.attempts.get(seq, 0) + 1
        self.attempts[seq] = attempts
        self._queue(seq)
        if attempts >= self.max_alt_attempts and self.discovery is None:
            self._start_discovery(seq)
        self.pump()

    def _abandon(self, seq: int) -> None:
        self.attempts.pop(seq, None)
        self.collector.record(self.loop.now, self.name, "app-abandon", self._name_of(seq))
        logger.debug(f"{self.name}: gave up on seq {seq} at {self.loop.now:.3f}")

    def __repr__(self) -> str:
        return (
            f"<Consumer(name='{self.name}', prefix='{self.prefix}', delivered={self.delivered}, "
            f"cwnd={self.window.cwnd:.2f})>"
        )
