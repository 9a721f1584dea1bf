"""
Event Loop - deterministic discrete-event scheduler

Events are ordered by (time, insertion sequence), so two events at the same
instant run in the order they were scheduled and a run with a fixed seed always
replays identically.

Usage:
    >>> loop = EventLoop()
    >>> loop.schedule(0.5, print, "half a second")
    >>> loop.run(until=1.0)
"""

import heapq
import itertools
import logging
from typing import Any, Callable, List, Optional, Tuple

from app.core.exceptions import SchedulingError

logger = logging.getLogger(__name__)


class EventHandle:
    """Cancellable reference to a scheduled callback"""

    __slots__ = ("time", "callback", "args", "cancelled")

    def __init__(self, time: float, callback: Callable[..., Any], args: Tuple[Any, ...]) -> None:
        self.time = time
        self.callback = callback
        self.args = args
        self.cancelled = False

    def cancel(self) -> None:
        self.cancelled = True


class EventLoop:
    """Single-threaded simulation clock"""

    def __init__(self) -> None:
        self.now = 0.0
        self.processed = 0
        self._queue: List[Tuple[float, int, EventHandle]] = []
        self._sequence = itertools.count()

    def schedule(self, delay: float, callback: Callable[..., Any], *args: Any) -> EventHandle:
        """
        Run callback after delay seconds

        Raises:
            SchedulingError: negative delay
        """
        if delay < 0:
            raise SchedulingError(
                f"Cannot schedule {delay:.9f}s in the past",
                details={"now": self.now, "delay": delay},
            )
        return self._push(self.now + delay, callback, args)

    def schedule_at(self, time: float, callback: Callable[..., Any], *args: Any) -> EventHandle:
        """
        Run callback at absolute time

        Raises:
            SchedulingError: time is before the current clock
        """
        if time < self.now:
            raise SchedulingError(
                f"Cannot schedule at {time:.9f}, clock is at {self.now:.9f}",
                details={"now": self.now, "time": time},
            )
        return self._push(time, callback, args)

    def _push(self, time: float, callback: Callable[..., Any], args: Tuple[Any, ...]) -> EventHandle:
        handle = EventHandle(time, callback, args)
        heapq.heappush(self._queue, (time, next(self._sequence), handle))
        return handle

    def run(self, until: Optional[float] = None) -> int:
        """
        Process events in order

        Args:
            until: stop before the first event later than this time; the clock
                is then advanced to `until`

        Returns:
            int: events processed by this call
        """
        count = 0
        while self._queue:
            time, _, handle = self._queue[0]
            if until is not None and time > until:
                break
            heapq.heappop(self._queue)
            if handle.cancelled:
                continue
            self.now = time
            handle.callback(*handle.args)
            count += 1

        if until is not None and self.now < until:
            self.now = until
        self.processed += count
        logger.debug(f"Processed {count} events, clock at {self.now:.6f}")
        return count

    @property
    def pending(self) -> int:
        return sum(1 for _, _, handle in self._queue if not handle.cancelled)
