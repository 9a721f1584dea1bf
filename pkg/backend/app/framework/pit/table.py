"""
Pending Interest Table

One entry per name. Regular interests follow the usual NDN rules (loop drop on a
repeated nonce, aggregation of different downstream faces). Discovery interests
with the same (name, nonce) are aggregated: every incoming face is recorded but
only the first copy is forwarded. After the first discovery Data the entry keeps
its pending upstream faces for a short window `tmp` so that Data arriving on the
other paths can still install alternative routes. The first Data is kept for that
window too; a copy aggregated after it left is answered with it.

A bounded dead-nonce list remembers (name, nonce) pairs of removed entries so
late copies of a flood are still recognised as loops.

Usage:
    >>> from app.framework.pit.table import PendingInterestTable, AdmitResult
    >>> pit = PendingInterestTable(lifetime=2.0, tmp=0.05)
    >>> pit.admit_interest(name, nonce=7, iface=1, is_discovery=True, now=0.0)
    <AdmitResult.NEW: 'new'>
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Deque, Dict, Iterable, List, Optional, Set, Tuple

from app.framework.foundation.names import Name
from app.framework.foundation.packets import Data

logger = logging.getLogger(__name__)

FaceId = int

# float tolerance for expiry comparisons
EPSILON = 1e-9


class AdmitResult(str, Enum):
    NEW = "new"
    APPENDED_FACE = "appended-face"
    LOOP_DROP = "loop-drop"
    DUPLICATE_DROP = "duplicate-drop"


class DataResult(str, Enum):
    FIRST_DATA = "first-data"
    ALT_WINDOW = "alt-window"
    UNSOLICITED = "unsolicited"


@dataclass
class PitEntry:
    name: Name
    nonce: int
    is_discovery: bool
    lifetime_expiry: float
    in_faces: List[FaceId] = field(default_factory=list)
    out_faces_pending: Set[FaceId] = field(default_factory=set)
    tmp_expiry: Optional[float] = None
    nacked: bool = False
    # tokens of the FIB entry the interest was forwarded by
    fib_leaf: Optional[Tuple[str, ...]] = None
    answer: Optional[Data] = None

    def add_in_face(self, face: FaceId) -> bool:
        if face in self.in_faces:
            return False
        self.in_faces.append(face)
        return True

    @property
    def expiry(self) -> float:
        if self.tmp_expiry is None:
            return self.lifetime_expiry
        return max(self.lifetime_expiry, self.tmp_expiry)

    def is_expired(self, now: float) -> bool:
        return now >= self.expiry - EPSILON

    def is_settled(self, now: float) -> bool:
        """Nothing left to deliver or collect"""
        tmp_over = self.tmp_expiry is None or now >= self.tmp_expiry - EPSILON
        return not self.in_faces and not self.out_faces_pending and tmp_over


@dataclass(frozen=True)
class ConsumeOutcome:
    result: DataResult
    in_faces: Tuple[FaceId, ...] = ()
    is_discovery: bool = False


class DeadNonceList:
    """FIFO-bounded set of (name, nonce) pairs"""

    def __init__(self, capacity: int = 4096) -> None:
        self.capacity = capacity
        self._order: Deque[Tuple[Name, int]] = deque()
        self._members: Set[Tuple[Name, int]] = set()

    def add(self, name: Name, nonce: int) -> None:
        key = (name, nonce)
        if key in self._members:
            return
        if len(self._order) >= self.capacity:
            self._members.discard(self._order.popleft())
        self._order.append(key)
        self._members.add(key)

    def __contains__(self, key: object) -> bool:
        return key in self._members

    def __len__(self) -> int:
        return len(self._order)


class PendingInterestTable:
    """PIT of one forwarder"""

    def __init__(self, lifetime: float = 2.0, tmp: float = 0.05, dead_nonce_capacity: int = 4096) -> None:
        self.lifetime = lifetime
        self.tmp = tmp
        self.dead_nonces = DeadNonceList(dead_nonce_capacity)
        self._entries: Dict[Name, PitEntry] = {}

    # ---------------------------------------------------------------- access

    def get(self, name: Name, now: float) -> Optional[PitEntry]:
        entry = self._entries.get(name)
        if entry is not None and entry.is_expired(now):
            self.remove(name)
            return None
        return entry

    def remove(self, name: Name) -> Optional[PitEntry]:
        entry = self._entries.pop(name, None)
        if entry is not None:
            self.dead_nonces.add(entry.name, entry.nonce)
        return entry

    def _create(self, name: Name, nonce: int, iface: FaceId, is_discovery: bool, now: float) -> PitEntry:
        entry = PitEntry(
            name=name,
            nonce=nonce,
            is_discovery=is_discovery,
            lifetime_expiry=now + self.lifetime,
            in_faces=[iface],
        )
        self._entries[name] = entry
        return entry

    # ------------------------------------------------------------ operations

    def admit_interest(
        self,
        name: Name,
        nonce: int,
        iface: FaceId,
        is_discovery: bool,
        now: float,
    ) -> AdmitResult:
        """
        Record an incoming interest

        Every duplicate discovery copy (same name and nonce) is aggregated, its
        face joining the downstream faces whatever path it took.

        Returns:
            AdmitResult: NEW (forward it), APPENDED_FACE (aggregated, discard),
            LOOP_DROP or DUPLICATE_DROP
        """
        entry = self.get(name, now)

        if entry is not None and entry.nonce == nonce:
            if is_discovery and entry.is_discovery:
                entry.add_in_face(iface)
                return AdmitResult.APPENDED_FACE
            return AdmitResult.LOOP_DROP

        if (name, nonce) in self.dead_nonces:
            return AdmitResult.LOOP_DROP

        if entry is None:
            self._create(name, nonce, iface, is_discovery, now)
            return AdmitResult.NEW

        # a fresh discovery round, a mismatched kind, or a retransmission after
        # an AltRoute NACK supersedes the old entry
        if is_discovery or entry.is_discovery or entry.nacked:
            self.remove(name)
            self._create(name, nonce, iface, is_discovery, now)
            return AdmitResult.NEW

        if iface in entry.in_faces:
            return AdmitResult.DUPLICATE_DROP
        entry.add_in_face(iface)
        return AdmitResult.APPENDED_FACE

    def consume_on_data(self, name: Name, now: float, oface: Optional[FaceId] = None) -> ConsumeOutcome:
        """
        Match incoming Data

        FIRST_DATA hands back every downstream face except oface and clears
        them. A discovery entry then opens its `tmp` window; a regular entry is
        removed. Inside the window further Data is ALT_WINDOW; anything else is
        UNSOLICITED.
        """
        entry = self.get(name, now)
        if entry is None:
            return ConsumeOutcome(DataResult.UNSOLICITED)

        if entry.tmp_expiry is None:
            in_faces = tuple(face for face in entry.in_faces if face != oface)
            entry.in_faces.clear()
            if oface is not None:
                entry.out_faces_pending.discard(oface)
            if entry.is_discovery:
                entry.tmp_expiry = now + self.tmp
            else:
                self.remove(name)
            return ConsumeOutcome(DataResult.FIRST_DATA, in_faces, entry.is_discovery)

        if now < entry.tmp_expiry - EPSILON:
            if oface is not None:
                self.clear_out_face(name, oface, now)
            return ConsumeOutcome(DataResult.ALT_WINDOW, (), entry.is_discovery)

        return ConsumeOutcome(DataResult.UNSOLICITED, (), entry.is_discovery)

    def mark_sent(self, name: Name, ofaces: Iterable[FaceId], leaf: Optional[Tuple[str, ...]] = None) -> None:
        entry = self._entries.get(name)
        if entry is not None:
            entry.out_faces_pending.update(ofaces)
            if leaf is not None:
                entry.fib_leaf = leaf

    def keep_answer(self, name: Name, data: Data) -> None:
        entry = self._entries.get(name)
        if entry is not None and entry.is_discovery:
            entry.answer = data

    def late_answer(self, name: Name, iface: FaceId, now: float) -> Optional[Data]:
        """
        First discovery Data for a face aggregated after that Data went out

        Only inside the `tmp` window; the face leaves the downstream faces.
        """
        entry = self.get(name, now)
        if entry is None or entry.answer is None or entry.tmp_expiry is None:
            return None
        if now >= entry.tmp_expiry - EPSILON or iface not in entry.in_faces:
            return None
        entry.in_faces.remove(iface)
        return entry.answer

    def clear_out_face(self, name: Name, oface: FaceId, now: float) -> None:
        entry = self._entries.get(name)
        if entry is None:
            return
        entry.out_faces_pending.discard(oface)
        if entry.is_settled(now):
            self.remove(name)

    def mark_nacked(self, name: Name) -> None:
        entry = self._entries.get(name)
        if entry is not None:
            entry.nacked = True
            entry.out_faces_pending.clear()

    def entries_via(self, oface: FaceId) -> List[PitEntry]:
        """Entries still waiting on an upstream face"""
        return [entry for entry in self._entries.values() if oface in entry.out_faces_pending]

    def expire(self, now: float) -> int:
        """Drop expired and settled entries; returns how many were removed"""
        stale = [
            name for name, entry in self._entries.items()
            if entry.is_expired(now) or entry.is_settled(now)
        ]
        for name in stale:
            self.remove(name)
        return len(stale)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, name: object) -> bool:
        return name in self._entries
