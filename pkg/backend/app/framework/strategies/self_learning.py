"""
Self-learning strategy (single-path baseline)

Regular interests use plain longest prefix match. Discovery interests are
flooded, duplicates dropped without aggregation, and only the first discovery
Data installs a route, replacing whatever the entry held. A NoRoute NACK removes
the route and travels back to the consumer, which starts a new discovery.
"""

import logging

from app.framework.foundation.packets import Data, Interest, Nack, NackReason
from app.framework.pit.table import AdmitResult, DataResult
from app.framework.strategies.base_strategy import BaseStrategy, StrategyMetadata

logger = logging.getLogger(__name__)


class SelfLearningStrategy(BaseStrategy):
    """One face per prefix, learned from the first discovery Data"""

    @property
    def metadata(self) -> StrategyMetadata:
        return StrategyMetadata(
            name="self-learning",
            description="Plain LPM, flooded discovery, first Data wins, NoRoute triggers rediscovery",
        )

    def on_interest(self, interest: Interest, iface: int) -> None:
        fw = self.forwarder
        if self.admit_filtered(interest, iface) is not AdmitResult.NEW:
            return

        result = fw.fib.lpm_lookup(interest.name, usable=lambda face: face != iface and fw.is_up(face))
        if result.is_no_route:
            fw.pit.remove(interest.name)
            fw.trace("no-route", interest, iface)
            fw.send(Nack(interest.name, interest.nonce, NackReason.NO_ROUTE), iface)
            return

        fw.pit.mark_sent(interest.name, [result.face], leaf=result.leaf)
        fw.send(interest, result.face)

    def on_discovery_interest(self, interest: Interest, iface: int) -> None:
        fw = self.forwarder
        entry = fw.pit.get(interest.name, fw.now)
        if entry is not None and entry.nonce == interest.nonce:
            fw.trace("drop-loop", interest, iface)
            return
        if self.admit_filtered(interest, iface) is not AdmitResult.NEW:
            return
        if not self.flood(interest, iface):
            fw.trace("drop-dead-end", interest, iface)

    def on_discovery_data(self, data: Data, oface: int) -> None:
        fw = self.forwarder
        outcome = fw.pit.consume_on_data(data.name, fw.now, oface)
        if outcome.result is not DataResult.FIRST_DATA:
            fw.trace("drop-unsolicited", data, oface)
            return

        if not fw.is_local(oface):
            fw.fib_insert(data.announced_prefix or data.name.parent(), oface, replace=True)
        for face in outcome.in_faces:
            fw.send(data, face)

    def on_nack(self, nack: Nack, oface: int) -> None:
        fw = self.forwarder
        if nack.reason is NackReason.UNSOLICITED_DATA:
            return

        entry = fw.pit.get(nack.name, fw.now)
        if entry is None or entry.nonce != nack.nonce or oface not in entry.out_faces_pending:
            fw.trace("drop-stale-nack", nack, oface)
            return
        in_faces = tuple(entry.in_faces)

        if nack.reason is NackReason.ALT_ROUTE:
            fw.pit.mark_nacked(nack.name)
        else:
            if not fw.is_local(oface) and entry.fib_leaf is not None:
                fw.fib_remove_entry(entry.fib_leaf)
            fw.pit.remove(nack.name)
        self.nack_downstream(in_faces, nack)
