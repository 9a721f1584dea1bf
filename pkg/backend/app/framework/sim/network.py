"""
Network - routers, links, failure injection and BFD

Links are bidirectional, infinite-bandwidth and pure-delay. Every link carries
an epoch; failing it bumps the epoch so packets already in flight are lost on
arrival, and anything sent while it is down is dropped at once. Parallel links
between the same routers are separate Link objects and separate faces.

BFD is analytic: hellos cross every link each `interval` seconds (phase 0), and
an endpoint declares the link dead `dead_multiplier` intervals after the last
hello that arrived before the failure.

Usage:
    >>> network = Network(loop, collector, strategy="approximate")
    >>> network.add_router("R1", role="edge")
    >>> network.add_router("R2", role="core")
    >>> network.connect("R1", "R2", delay=0.01)
    >>> network.fail_link("R1", "R2", at=8.0)
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional

from app.core.exceptions import ConfigurationError
from app.framework.engine.forwarder import Forwarder
from app.framework.foundation.packets import Packet
from app.framework.metrics.collector import MetricsCollector
from app.framework.sim.event_loop import EventLoop

logger = logging.getLogger(__name__)

# float tolerance when locating the last hello before a failure
_HELLO_EPSILON = 1e-9


class Link:
    """One physical link between two routers"""

    def __init__(self, link_id: int, a: Forwarder, b: Forwarder, delay: float, loop: EventLoop) -> None:
        self.link_id = link_id
        self.a = a
        self.b = b
        self.delay = delay
        self.loop = loop
        self.up = True
        self.epoch = 0
        self.failed_at: Optional[float] = None
        self.face_a = a.add_network_face(self, b.name)
        self.face_b = b.add_network_face(self, a.name)
        self.sent = 0
        self.delivered = 0
        self.dropped = 0

    @property
    def key(self) -> FrozenSet[str]:
        return frozenset((self.a.name, self.b.name))

    def endpoint_face(self, router: Forwarder) -> int:
        return self.face_a if router is self.a else self.face_b

    def transmit(self, sender: Forwarder, packet: Packet) -> bool:
        """
        Put a packet on the link

        Returns:
            bool: False when the link is down and the packet was dropped
        """
        self.sent += 1
        if not self.up:
            self.dropped += 1
            sender.trace("drop-link-down", packet, self.endpoint_face(sender))
            return False
        if sender is self.a:
            receiver, face = self.b, self.face_b
        else:
            receiver, face = self.a, self.face_a
        self.loop.schedule(self.delay, self._arrive, receiver, face, packet, self.epoch)
        return True

    def _arrive(self, receiver: Forwarder, face: int, packet: Packet, epoch: int) -> None:
        if epoch != self.epoch:
            self.dropped += 1
            receiver.trace("drop-link-down", packet, face)
            return
        self.delivered += 1
        receiver.receive(packet, face)

    def fail(self, now: float) -> bool:
        """Take the link down; False when it already was"""
        if not self.up:
            return False
        self.up = False
        self.epoch += 1
        self.failed_at = now
        return True

    def __repr__(self) -> str:
        state = "up" if self.up else "down"
        return f"<Link({self.a.name}-{self.b.name}#{self.link_id}, {self.delay * 1000:.1f}ms, {state})>"


@dataclass
class BfdMonitor:
    """Analytic BFD session on every link"""
    interval: float = 0.005
    dead_multiplier: int = 3
    enabled: bool = True
    detections: List[float] = field(default_factory=list)

    def detection_time(self, link: Link, failed_at: float) -> float:
        """
        When the endpoints declare a link failed at `failed_at` dead

        The last hello to arrive was sent at the latest multiple of `interval`
        no later than `failed_at - delay`.
        """
        last_sent = math.floor((failed_at - link.delay) / self.interval + _HELLO_EPSILON) * self.interval
        return last_sent + link.delay + self.dead_multiplier * self.interval

    def watch(self, link: Link, failed_at: float, loop: EventLoop) -> Optional[float]:
        if not self.enabled:
            return None
        detect_at = max(self.detection_time(link, failed_at), failed_at)
        loop.schedule_at(detect_at, self._notify, link)
        return detect_at

    def _notify(self, link: Link) -> None:
        now = link.loop.now
        self.detections.append(now)
        logger.info(f"BFD: link {link.a.name}-{link.b.name}#{link.link_id} declared down at {now:.6f}")
        link.a.on_face_down(link.face_a)
        link.b.on_face_down(link.face_b)


class Network:
    """Routers, links and their failure schedule"""

    def __init__(
        self,
        loop: EventLoop,
        collector: MetricsCollector,
        strategy: str = "approximate",
        interest_lifetime: float = 2.0,
        tmp: float = 0.05,
        bfd: Optional[BfdMonitor] = None,
    ) -> None:
        self.loop = loop
        self.collector = collector
        self.strategy = strategy
        self.interest_lifetime = interest_lifetime
        self.tmp = tmp
        self.bfd = bfd or BfdMonitor()
        self.routers: Dict[str, Forwarder] = {}
        self.links: List[Link] = []
        self._by_pair: Dict[FrozenSet[str], List[Link]] = {}

    def add_router(self, name: str, role: str = "core") -> Forwarder:
        if name in self.routers:
            raise ConfigurationError(f"Duplicate router '{name}'", details={"router": name})
        forwarder = Forwarder(
            name,
            self.loop,
            self.collector,
            strategy=self.strategy,
            role=role,
            interest_lifetime=self.interest_lifetime,
            tmp=self.tmp,
        )
        self.routers[name] = forwarder
        return forwarder

    def connect(self, a: str, b: str, delay: float = 0.01, parallel: int = 1) -> List[Link]:
        """
        Add `parallel` links between two routers

        Raises:
            ConfigurationError: unknown router, self-loop or non-positive count
        """
        for router in (a, b):
            if router not in self.routers:
                raise ConfigurationError(f"Unknown router '{router}'", details={"router": router})
        if a == b:
            raise ConfigurationError(f"Self-loop on '{a}'", details={"router": a})
        if parallel < 1:
            raise ConfigurationError("parallel_links must be at least 1", details={"parallel": parallel})

        created = []
        for _ in range(parallel):
            link = Link(len(self.links), self.routers[a], self.routers[b], delay, self.loop)
            self.links.append(link)
            self._by_pair.setdefault(link.key, []).append(link)
            created.append(link)
        return created

    def links_between(self, a: str, b: str) -> List[Link]:
        return list(self._by_pair.get(frozenset((a, b)), []))

    def fail_link(self, a: str, b: str, at: float) -> None:
        """
        Schedule the failure of every link between a and b

        Raises:
            ConfigurationError: no link between a and b
        """
        links = self.links_between(a, b)
        if not links:
            raise ConfigurationError(f"Unknown link {a}-{b}", details={"link": f"{a}-{b}"})
        self.loop.schedule_at(at, self._fail, links)

    def _fail(self, links: List[Link]) -> None:
        now = self.loop.now
        for link in links:
            if not link.fail(now):
                logger.debug(f"Link {link.a.name}-{link.b.name}#{link.link_id} already down")
                continue
            logger.info(f"Link {link.a.name}-{link.b.name}#{link.link_id} failed at {now:.6f}")
            self.collector.record(now, f"{link.a.name}-{link.b.name}", "link-down", None, link.link_id)
            self.bfd.watch(link, now, self.loop)

    def start(self, sweep_interval: float = 1.0) -> None:
        for forwarder in self.routers.values():
            forwarder.start(sweep_interval)

    def packets_in_flight(self) -> int:
        return sum(link.sent - link.delivered - link.dropped for link in self.links)

    def __repr__(self) -> str:
        return f"<Network(routers={len(self.routers)}, links={len(self.links)}, strategy='{self.strategy}')>"
