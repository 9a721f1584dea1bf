"""
Approximate multipath strategy

Regular interests use the approximate lookup: longest prefix match, then a DFS
below the stopping node when no entry covers the name. Discovery interests are
flooded and aggregated per (name, nonce); the first discovery Data installs the
primary face and Data arriving within the alternative window adds further faces
to the same entry.

On a NoRoute NACK the failed face leaves the entry that supplied it, whether the
longest prefix match or the DFS found it; if a network face remains the NACK is
turned into AltRoute so the consumer retries without a new discovery, otherwise
the entry is deleted.
"""

import logging

from app.framework.foundation.packets import Data, Interest, Nack, NackReason
from app.framework.pit.table import AdmitResult, DataResult
from app.framework.strategies.base_strategy import BaseStrategy, StrategyMetadata

logger = logging.getLogger(__name__)


class ApproximateStrategy(BaseStrategy):
    """Approximate forwarding with multipath self-learning"""

    @property
    def metadata(self) -> StrategyMetadata:
        return StrategyMetadata(
            name="approximate",
            description="LPM with DFS fallback, flooded discovery, alternative paths and AltRoute NACKs",
            multipath=True,
            approximate=True,
        )

    def on_interest(self, interest: Interest, iface: int) -> None:
        fw = self.forwarder
        if self.admit_filtered(interest, iface) is not AdmitResult.NEW:
            return

        result = fw.fib.af_lookup(interest.name, usable=lambda face: face != iface and fw.is_up(face))
        if result.is_no_route:
            fw.pit.remove(interest.name)
            fw.trace("no-route", interest, iface)
            fw.send(Nack(interest.name, interest.nonce, NackReason.NO_ROUTE), iface)
            return

        fw.pit.mark_sent(interest.name, [result.face], leaf=result.leaf)
        if result.approximate:
            fw.trace("approximate-forward", interest, result.face)
        fw.send(interest, result.face)

    def on_discovery_interest(self, interest: Interest, iface: int) -> None:
        fw = self.forwarder
        admitted = self.admit_filtered(interest, iface)
        if admitted is AdmitResult.APPENDED_FACE:
            # the first Data already went downstream
            answer = fw.pit.late_answer(interest.name, iface, fw.now)
            if answer is not None:
                fw.send(answer, iface)
            return
        if admitted is not AdmitResult.NEW:
            return
        if not self.flood(interest, iface):
            fw.trace("drop-dead-end", interest, iface)

    def on_discovery_data(self, data: Data, oface: int) -> None:
        fw = self.forwarder
        outcome = fw.pit.consume_on_data(data.name, fw.now, oface)
        prefix = data.announced_prefix or data.name.parent()

        if outcome.result is DataResult.UNSOLICITED:
            fw.trace("drop-unsolicited", data, oface)
            if not fw.is_local(oface):
                fw.send(Nack(data.name, 0, NackReason.UNSOLICITED_DATA), oface)
            return

        # the producer's own registration already covers the prefix locally
        if not fw.is_local(oface):
            fw.fib_insert(prefix, oface)

        if outcome.result is DataResult.FIRST_DATA:
            fw.pit.keep_answer(data.name, data)
            for face in outcome.in_faces:
                fw.send(data, face)

    def on_nack(self, nack: Nack, oface: int) -> None:
        fw = self.forwarder
        if nack.reason is NackReason.UNSOLICITED_DATA:
            fw.trace("rx-unsolicited-nack", nack, oface)
            return

        entry = fw.pit.get(nack.name, fw.now)
        if entry is None or entry.nonce != nack.nonce or oface not in entry.out_faces_pending:
            fw.trace("drop-stale-nack", nack, oface)
            return
        in_faces = tuple(entry.in_faces)

        if nack.reason is NackReason.ALT_ROUTE:
            fw.pit.mark_nacked(nack.name)
            self.nack_downstream(in_faces, nack)
            return

        leaf = entry.fib_leaf
        # answered by a local app: no route of ours to repair
        if fw.is_local(oface) or leaf is None:
            fw.pit.remove(nack.name)
            self.nack_downstream(in_faces, nack)
            return

        fw.fib_remove_face(leaf, oface)
        alternative = fw.fib.next_alternative_face(
            leaf,
            usable=lambda face: fw.is_up(face) and face not in in_faces,
        )
        if alternative is not None:
            fw.pit.mark_nacked(nack.name)
            self.nack_downstream(in_faces, nack.with_reason(NackReason.ALT_ROUTE))
            return

        fw.fib_remove_entry(leaf)
        fw.pit.remove(nack.name)
        self.nack_downstream(in_faces, nack)
