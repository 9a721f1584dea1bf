"""
Forwarder - one router: faces, FIB, PIT and the strategy that drives them

Network faces sit on links; app faces connect a local consumer or producer with
zero delay. Incoming packets are dispatched by kind to the strategy; every
outgoing packet goes through `send`, which counts network transmissions and
writes the trace.

Usage:
    >>> fw = Forwarder("R1", loop, collector, strategy="approximate")
    >>> face = fw.add_network_face(link, peer="R2")
    >>> fw.receive(interest, face)
"""

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Sequence, Union

from app.framework.fib.trie import FibTrie
from app.framework.foundation.names import Name
from app.framework.foundation.packets import Data, FaceKind, Interest, Nack, NackReason, Packet, packet_kind
from app.framework.metrics.collector import MetricsCollector
from app.framework.pit.table import PendingInterestTable
from app.framework.sim.event_loop import EventLoop
from app.framework.strategies.registry import StrategyRegistry

if TYPE_CHECKING:
    from app.framework.sim.network import Link

logger = logging.getLogger(__name__)


@dataclass
class Face:
    face_id: int
    kind: FaceKind
    peer: str
    link: Optional["Link"] = None
    app: Any = None
    up: bool = True


class Forwarder:
    """NDN router"""

    def __init__(
        self,
        name: str,
        loop: EventLoop,
        collector: MetricsCollector,
        strategy: str = "approximate",
        role: str = "core",
        interest_lifetime: float = 2.0,
        tmp: float = 0.05,
    ) -> None:
        self.name = name
        self.role = role
        self.loop = loop
        self.collector = collector
        self.fib = FibTrie()
        self.pit = PendingInterestTable(lifetime=interest_lifetime, tmp=tmp)
        self.faces: Dict[int, Face] = {}
        self.strategy = StrategyRegistry.create(strategy, self)

    @property
    def now(self) -> float:
        return self.loop.now

    # ============================================================================
    # Faces
    # ============================================================================

    def add_network_face(self, link: "Link", peer: str) -> int:
        face_id = len(self.faces)
        self.faces[face_id] = Face(face_id, FaceKind.NETWORK, peer, link=link)
        return face_id

    def add_app_face(self, app: Any, kind: FaceKind) -> int:
        face_id = len(self.faces)
        self.faces[face_id] = Face(face_id, kind, getattr(app, "name", kind.value), app=app)
        return face_id

    def register_prefix(self, prefix: Name, face: int) -> None:
        """Route a producer's prefix to its local face"""
        self.fib_insert(prefix, face, local=True)

    def is_up(self, face: int) -> bool:
        return self.faces[face].up

    def is_local(self, face: int) -> bool:
        return self.faces[face].kind.is_local

    def network_faces(self) -> List[int]:
        return [face.face_id for face in self.faces.values() if face.kind is FaceKind.NETWORK]

    def local_producer_face(self, name: Name) -> Optional[int]:
        for face in self.faces.values():
            if face.kind is FaceKind.PRODUCER and face.app.serves(name):
                return face.face_id
        return None

    def neighbor(self, face: int) -> str:
        return self.faces[face].peer

    # ============================================================================
    # Packet path
    # ============================================================================

    def receive(self, packet: Packet, face: int) -> None:
        """Dispatch an incoming packet to the strategy"""
        if isinstance(packet, Interest):
            if packet.is_discovery:
                self.strategy.on_discovery_interest(packet, face)
            else:
                self.strategy.on_interest(packet, face)
        elif isinstance(packet, Data):
            if packet.is_discovery:
                self.strategy.on_discovery_data(packet, face)
            else:
                self.strategy.on_data(packet, face)
        else:
            self.strategy.on_nack(packet, face)

    def receive_from_app(self, packet: Packet, face: int) -> None:
        self.loop.schedule(0.0, self.receive, packet, face)

    def send(self, packet: Packet, face: int) -> None:
        target = self.faces[face]
        kind = packet_kind(packet)

        if target.kind is FaceKind.NETWORK:
            if not target.up:
                self.trace("drop-face-down", packet, face)
                return
            self.trace(f"tx-{kind}", packet, face)
            self.collector.on_transmit(self.now, kind)
            target.link.transmit(self, packet)
            return

        self.trace(f"local-{kind}", packet, face)
        self.loop.schedule(0.0, self._deliver_local, target, packet)

    def _deliver_local(self, face: Face, packet: Packet) -> None:
        if face.kind is FaceKind.PRODUCER:
            if not isinstance(packet, Interest):
                return
            reply = face.app.on_interest(packet)
            if reply is None:
                # the producer rejected the name
                reply = Nack(packet.name, packet.nonce, NackReason.NO_ROUTE)
            self.receive(reply, face.face_id)
            return
        face.app.receive(packet)

    # ============================================================================
    # FIB maintenance with tracing
    # ============================================================================

    def fib_insert(self, prefix: Name, face: int, local: bool = False, replace: bool = False) -> None:
        if self.fib.insert(prefix, face, local=local, replace=replace):
            self.trace("fib-replace" if replace else "fib-add", prefix, face)

    def fib_remove_face(self, prefix: Union[Name, Sequence[str]], face: int) -> None:
        tokens = self.fib.resolve(prefix)
        if tokens is not None and self.fib.remove_face_from_leaf(tokens, face):
            self.trace("fib-remove-face", Name(tokens), face)

    def fib_remove_entry(self, prefix: Union[Name, Sequence[str]]) -> None:
        tokens = self.fib.resolve(prefix)
        if tokens is not None and self.fib.remove_entry(tokens):
            self.trace("fib-remove-entry", Name(tokens))

    def fib_remove_face_everywhere(self, face: int) -> None:
        for tokens, deleted in self.fib.remove_face_everywhere(face):
            self.trace("fib-remove-face", Name(tokens), face)
            if deleted:
                self.trace("fib-remove-entry", Name(tokens))

    # ============================================================================
    # Failure detection and housekeeping
    # ============================================================================

    def on_face_down(self, face: int) -> None:
        """BFD declared the neighbour on face unreachable"""
        target = self.faces[face]
        if not target.up:
            return
        logger.debug(f"{self.name}: face {face} to {target.peer} down at {self.now:.6f}")
        self.trace("face-down", None, face)
        target.up = False
        self.strategy.on_face_down(face)

    def start(self, sweep_interval: float = 1.0) -> None:
        """Begin periodic PIT expiry"""
        self.loop.schedule(sweep_interval, self._sweep, sweep_interval)

    def _sweep(self, interval: float) -> None:
        self.pit.expire(self.now)
        self.loop.schedule(interval, self._sweep, interval)

    def trace(self, event: str, subject: Union[Packet, Name, None] = None, face: Optional[int] = None) -> None:
        self.collector.record(self.now, self.name, event, subject, face)

    def fib_size(self) -> int:
        return self.fib.leaf_count()

    def fib_faces(self) -> Dict[str, Sequence[int]]:
        """Canonical prefix -> faces"""
        return {str(Name(tokens)): faces.faces for tokens, faces in self.fib.entries()}

    def __repr__(self) -> str:
        return f"<Forwarder(name='{self.name}', role='{self.role}', faces={len(self.faces)}, fib={self.fib_size()})>"
