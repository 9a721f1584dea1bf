"""
Packets - Interest / Data / Nack

Packets are immutable; forwarders re-send the same object on every hop. A NACK
rewrite (NoRoute -> AltRoute) creates a new Nack via `with_reason`.
"""

from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Union

from app.framework.foundation.names import Name


class NackReason(str, Enum):
    NO_ROUTE = "NoRoute"
    ALT_ROUTE = "AltRoute"
    UNSOLICITED_DATA = "UnsolicitedData"


class FaceKind(str, Enum):
    """Network faces sit on links; app faces connect local applications"""
    NETWORK = "network"
    CONSUMER = "consumer"
    PRODUCER = "producer"

    @property
    def is_local(self) -> bool:
        return self is not FaceKind.NETWORK


@dataclass(frozen=True, slots=True)
class Interest:
    name: Name
    nonce: int
    is_discovery: bool = False


@dataclass(frozen=True, slots=True)
class Data:
    name: Name
    announced_prefix: Optional[Name] = None
    is_discovery: bool = False
    payload_size: int = 1024


@dataclass(frozen=True, slots=True)
class Nack:
    name: Name
    nonce: int
    reason: NackReason

    def with_reason(self, reason: NackReason) -> "Nack":
        return replace(self, reason=reason)


Packet = Union[Interest, Data, Nack]


def packet_kind(packet: Packet) -> str:
    """Trace label of a packet: interest, discovery-interest, data, discovery-data, nack"""
    if isinstance(packet, Interest):
        return "discovery-interest" if packet.is_discovery else "interest"
    if isinstance(packet, Data):
        return "discovery-data" if packet.is_discovery else "data"
    return "nack"


def packet_nonce(packet: Packet) -> Optional[int]:
    return None if isinstance(packet, Data) else packet.nonce
