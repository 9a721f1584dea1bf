"""
Producer application

Answers every interest under one of its prefixes. Discovery interests get
discovery Data announcing the interest name minus its sequence component, which
is the prefix routers install. Interests outside its prefixes are rejected; the
forwarder turns a rejection into a NoRoute NACK.
"""

import logging
from typing import TYPE_CHECKING, Iterable, List, Optional

from app.framework.foundation.names import Name
from app.framework.foundation.packets import Data, FaceKind, Interest

if TYPE_CHECKING:
    from app.framework.engine.forwarder import Forwarder

logger = logging.getLogger(__name__)


class Producer:
    def __init__(self, name: str, prefixes: Iterable[Name], payload_size: int = 1024) -> None:
        self.name = name
        self.prefixes: List[Name] = list(prefixes)
        self.payload_size = payload_size
        self.served = 0
        self.rejected = 0
        self.forwarder: Optional["Forwarder"] = None
        self.face: Optional[int] = None

    def attach(self, forwarder: "Forwarder") -> int:
        """Connect to the access router and register every prefix on the local face"""
        self.forwarder = forwarder
        self.face = forwarder.add_app_face(self, FaceKind.PRODUCER)
        for prefix in self.prefixes:
            forwarder.register_prefix(prefix, self.face)
        return self.face

    def serves(self, name: Name) -> bool:
        return any(prefix.is_prefix_of(name) for prefix in self.prefixes)

    def on_interest(self, interest: Interest) -> Optional[Data]:
        """
        Data for a served name, None to reject

        Returns:
            Optional[Data]: discovery Data carries announced_prefix = name minus seq
        """
        if not self.serves(interest.name):
            self.rejected += 1
            return None
        self.served += 1
        if interest.is_discovery:
            return Data(
                interest.name,
                announced_prefix=interest.name.parent(),
                is_discovery=True,
                payload_size=self.payload_size,
            )
        return Data(interest.name, payload_size=self.payload_size)

    def __repr__(self) -> str:
        return f"<Producer(name='{self.name}', prefixes={[str(p) for p in self.prefixes]})>"
