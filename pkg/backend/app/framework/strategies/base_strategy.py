"""
Base Strategy - abstract forwarding strategy of one forwarder

A strategy decides what a forwarder does with each packet kind. The forwarder
owns the tables (FIB, PIT), the faces and the trace; the strategy only reads and
mutates them through the forwarder. Behaviour that does not depend on the
routing scheme (plain Data, BFD face-down handling, flooding) lives here.

Usage:
    >>> class MyStrategy(BaseStrategy):
    ...     @property
    ...     def metadata(self):
    ...         return StrategyMetadata(name="my-strategy", description="...")
    ...     def on_interest(self, interest, iface): ...
"""

import logging
from abc import ABC, abstractmethod
from typing import TYPE_CHECKING, Iterable, List

from pydantic import BaseModel, Field

from app.framework.foundation.packets import Data, Interest, Nack, NackReason
from app.framework.pit.table import AdmitResult, DataResult

if TYPE_CHECKING:
    from app.framework.engine.forwarder import Forwarder

logger = logging.getLogger(__name__)


class StrategyMetadata(BaseModel):
    """Strategy description shown by the CLI and stored with results"""
    name: str = Field(..., description="Strategy id used in scenarios and CSV files")
    description: str = Field(..., description="What the strategy does")
    multipath: bool = Field(default=False, description="Keeps several faces per prefix")
    approximate: bool = Field(default=False, description="Falls back to a DFS below the LPM stopping node")


class BaseStrategy(ABC):
    """Forwarding behaviour bound to one forwarder"""

    def __init__(self, forwarder: "Forwarder") -> None:
        self.forwarder = forwarder

    @property
    @abstractmethod
    def metadata(self) -> StrategyMetadata:
        pass

    @abstractmethod
    def on_interest(self, interest: Interest, iface: int) -> None:
        pass

    @abstractmethod
    def on_discovery_interest(self, interest: Interest, iface: int) -> None:
        pass

    @abstractmethod
    def on_discovery_data(self, data: Data, oface: int) -> None:
        pass

    @abstractmethod
    def on_nack(self, nack: Nack, oface: int) -> None:
        pass

    # ============================================================================
    # Shared behaviour
    # ============================================================================

    def on_data(self, data: Data, oface: int) -> None:
        """Regular Data follows the PIT back to every waiting downstream face"""
        fw = self.forwarder
        outcome = fw.pit.consume_on_data(data.name, fw.now, oface)
        if outcome.result is not DataResult.FIRST_DATA:
            fw.trace("drop-unsolicited", data, oface)
            return
        for face in outcome.in_faces:
            fw.send(data, face)

    def on_face_down(self, face: int) -> None:
        """
        Local reaction to a BFD detection

        Pending regular interests sent on the dead face are handled as if the
        upstream had answered NoRoute; then the face leaves every FIB entry.
        """
        fw = self.forwarder
        for entry in fw.pit.entries_via(face):
            if entry.is_discovery:
                entry.out_faces_pending.discard(face)
                continue
            self.on_nack(Nack(entry.name, entry.nonce, NackReason.NO_ROUTE), face)
        fw.fib_remove_face_everywhere(face)

    def admit_filtered(self, interest: Interest, iface: int) -> AdmitResult:
        """PIT admission with drop tracing"""
        fw = self.forwarder
        result = fw.pit.admit_interest(interest.name, interest.nonce, iface, interest.is_discovery, fw.now)
        if result is AdmitResult.LOOP_DROP:
            fw.trace("drop-loop", interest, iface)
        elif result is AdmitResult.DUPLICATE_DROP:
            fw.trace("drop-duplicate", interest, iface)
        elif result is AdmitResult.APPENDED_FACE:
            fw.trace("aggregate", interest, iface)
        return result

    def flood(self, interest: Interest, iface: int) -> List[int]:
        """
        Send a discovery interest on every usable network face except iface

        A local producer serving the name takes the interest instead.
        """
        fw = self.forwarder
        producer_face = fw.local_producer_face(interest.name)
        targets: List[int]
        if producer_face is not None:
            targets = [producer_face]
        else:
            targets = [face for face in fw.network_faces() if face != iface and fw.is_up(face)]
        fw.pit.mark_sent(interest.name, targets)
        for face in targets:
            fw.send(interest, face)
        return targets

    def nack_downstream(self, in_faces: Iterable[int], nack: Nack) -> None:
        for face in in_faces:
            self.forwarder.send(nack, face)

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__}(node='{self.forwarder.name}', strategy='{self.metadata.name}')>"
