"""
FIB Trie - longest prefix match with approximate (DFS) fallback

Each trie node is keyed by one token (a name component or a character). A node
holding a non-empty FaceList is a leaf in the forwarding sense; it may still have
children, since alternative-path insertion can nest prefixes.

Lookup follows the approximate forwarding rule:
    1. longest prefix match from the root;
    2. when no node on the path holds faces, a depth-first search below the
       stopping node returns the first leaf, visiting children in lexicographic
       token order;
    3. a local face found by the DFS is never used (NoRoute).

Route maintenance (face removal, entry removal, alternatives) acts on the entry
the lookup resolved for the name: the LPM entry, or the leaf the DFS supplied.
Every FORWARD result carries that entry's tokens in `leaf`, so a NACK arriving
later can repair exactly the entry that was used even after the trie changed.

Usage:
    >>> from app.framework.fib.trie import FibTrie
    >>> from app.framework.foundation.names import parse_name
    >>> fib = FibTrie()
    >>> fib.insert(parse_name("/A/B/D"), 1)
    >>> fib.af_lookup(parse_name("/A/B/Y")).face
    1
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Set, Tuple, Union

from app.framework.foundation.names import Name, TokenMode, tokenize

FaceId = int
FacePredicate = Callable[[FaceId], bool]


class FaceList:
    """
    Ordered, duplicate-free faces of one FIB entry

    The head is the face currently in use; removing it promotes the next one.
    """

    __slots__ = ("_faces", "_local")

    def __init__(self) -> None:
        self._faces: List[FaceId] = []
        self._local: Set[FaceId] = set()

    def add(self, face: FaceId, local: bool = False) -> bool:
        if face in self._faces:
            return False
        self._faces.append(face)
        if local:
            self._local.add(face)
        return True

    def remove(self, face: FaceId) -> bool:
        if face not in self._faces:
            return False
        self._faces.remove(face)
        self._local.discard(face)
        return True

    def clear(self) -> None:
        self._faces.clear()
        self._local.clear()

    def is_local(self, face: FaceId) -> bool:
        return face in self._local

    def first(self, usable: Optional[FacePredicate] = None) -> Optional[FaceId]:
        for face in self._faces:
            if usable is None or usable(face):
                return face
        return None

    def first_network(self, usable: Optional[FacePredicate] = None) -> Optional[FaceId]:
        for face in self._faces:
            if face in self._local:
                continue
            if usable is None or usable(face):
                return face
        return None

    @property
    def faces(self) -> Tuple[FaceId, ...]:
        return tuple(self._faces)

    def __len__(self) -> int:
        return len(self._faces)

    def __iter__(self) -> Iterator[FaceId]:
        return iter(tuple(self._faces))

    def __contains__(self, face: object) -> bool:
        return face in self._faces

    def __repr__(self) -> str:
        marked = [f"{face}*" if face in self._local else str(face) for face in self._faces]
        return f"FaceList([{', '.join(marked)}])"


class _TrieNode:
    __slots__ = ("children", "faces")

    def __init__(self) -> None:
        self.children: Dict[str, "_TrieNode"] = {}
        self.faces: Optional[FaceList] = None

    @property
    def is_leaf(self) -> bool:
        return self.faces is not None and len(self.faces) > 0


# ============================================================================
# Lookup results
# ============================================================================

@dataclass(frozen=True)
class LpmLeaf:
    """LPM found an entry on the query path"""
    faces: FaceList
    depth: int
    node: _TrieNode
    tokens: Tuple[str, ...] = ()


@dataclass(frozen=True)
class LpmStop:
    """No entry on the path; `node` is the stopping node Sn"""
    node: _TrieNode
    depth: int
    tokens: Tuple[str, ...] = ()


LpmResult = Union[LpmLeaf, LpmStop]


class LookupAction(str, Enum):
    FORWARD = "forward"
    DELIVER = "deliver"
    NO_ROUTE = "no-route"


@dataclass(frozen=True)
class LookupResult:
    """
    Outcome of af_lookup

    FORWARD always carries a network face. DELIVER carries the local face an
    exact (LPM) entry points to. `approximate` marks a DFS resolution and
    `leaf` names the entry that supplied the face.
    """
    action: LookupAction
    face: Optional[FaceId] = None
    approximate: bool = False
    leaf: Optional[Tuple[str, ...]] = None

    @classmethod
    def forward(cls, face: FaceId, leaf: Tuple[str, ...], approximate: bool = False) -> "LookupResult":
        return cls(LookupAction.FORWARD, face, approximate, leaf)

    @classmethod
    def deliver(cls, face: FaceId, leaf: Tuple[str, ...]) -> "LookupResult":
        return cls(LookupAction.DELIVER, face, False, leaf)

    @classmethod
    def no_route(cls, approximate: bool = False) -> "LookupResult":
        return cls(LookupAction.NO_ROUTE, None, approximate)

    @property
    def is_forward(self) -> bool:
        return self.action is LookupAction.FORWARD

    @property
    def is_no_route(self) -> bool:
        return self.action is LookupAction.NO_ROUTE


NO_ROUTE = LookupResult.no_route()


# ============================================================================
# Trie
# ============================================================================

class FibTrie:
    """Forwarding table of one node"""

    __slots__ = ("mode", "_root", "_leaf_count")

    def __init__(self, mode: TokenMode = TokenMode.COMPONENT) -> None:
        self.mode = mode
        self._root = _TrieNode()
        self._leaf_count = 0

    # ---------------------------------------------------------------- helpers

    def _tokens(self, prefix: Union[Name, Sequence[str]]) -> Sequence[str]:
        if isinstance(prefix, Name):
            return tokenize(prefix, self.mode)
        return prefix

    @staticmethod
    def _dfs(start: _TrieNode) -> Optional[Tuple[_TrieNode, List[Tuple[_TrieNode, str]]]]:
        """First leaf below start (inclusive) and the (parent, token) pairs leading to it"""
        stack: List[Tuple[_TrieNode, List[Tuple[_TrieNode, str]]]] = [(start, [])]
        while stack:
            node, path = stack.pop()
            if node.is_leaf:
                return node, path
            for token in sorted(node.children, reverse=True):
                stack.append((node.children[token], path + [(node, token)]))
        return None

    def _resolve_path(self, prefix: Union[Name, Sequence[str]]) -> List[Tuple[_TrieNode, str]]:
        """
        (parent, token) pairs from the root to the entry route maintenance acts on

        That is the deepest node on the path holding a FaceList, drained ones
        included so consecutive removals keep resolving to the same entry. Empty
        when there is none.
        """
        node = self._root
        path: List[Tuple[_TrieNode, str]] = []
        deepest = 0
        for token in self._tokens(prefix):
            child = node.children.get(token)
            if child is None:
                break
            path.append((node, token))
            node = child
            if node.faces is not None:
                deepest = len(path)
        return path[:deepest]

    def _resolve(self, prefix: Union[Name, Sequence[str]]) -> Optional[_TrieNode]:
        path = self._resolve_path(prefix)
        if not path:
            return None
        parent, token = path[-1]
        return parent.children[token]

    # ------------------------------------------------------------- mutation

    def insert(
        self,
        prefix: Union[Name, Sequence[str]],
        face: FaceId,
        local: bool = False,
        replace: bool = False,
    ) -> bool:
        """
        Add a face to the entry for prefix

        Args:
            prefix: name or token sequence
            face: face to add (appended at the tail)
            local: face leads to a local application
            replace: drop the existing faces first (single-path routing)

        Returns:
            bool: True when the entry changed
        """
        node = self._root
        for token in self._tokens(prefix):
            child = node.children.get(token)
            if child is None:
                child = _TrieNode()
                node.children[token] = child
            node = child

        if node.faces is None:
            node.faces = FaceList()
        was_leaf = len(node.faces) > 0

        if replace:
            if node.faces.faces == (face,) and node.faces.is_local(face) == local:
                return False
            node.faces.clear()

        changed = node.faces.add(face, local)
        if not was_leaf and len(node.faces) > 0:
            self._leaf_count += 1
        elif was_leaf and len(node.faces) == 0:
            self._leaf_count -= 1
        return changed or replace

    def remove_face_from_leaf(self, prefix: Union[Name, Sequence[str]], face: FaceId) -> bool:
        """
        Remove a failed face from the entry resolved for prefix

        The entry stays in place when it drains so that `next_alternative_face`
        and `remove_entry` still resolve to it. Callers repairing the entry a
        lookup used pass its tokens (`LookupResult.leaf`), which also covers a
        leaf only the DFS reached.
        """
        node = self._resolve(prefix)
        if node is None or node.faces is None:
            return False
        was_leaf = len(node.faces) > 0
        removed = node.faces.remove(face)
        if removed and was_leaf and len(node.faces) == 0:
            self._leaf_count -= 1
        return removed

    def remove_entry(self, prefix: Union[Name, Sequence[str]]) -> bool:
        """Delete the resolved entry and prune childless, faceless ancestors"""
        path = self._resolve_path(prefix)
        if not path:
            return False
        parent, token = path[-1]
        node = parent.children[token]
        if node.faces is not None and len(node.faces) > 0:
            self._leaf_count -= 1
        node.faces = None

        for parent, token in reversed(path):
            child = parent.children[token]
            if child.children or child.faces is not None:
                break
            del parent.children[token]
        return True

    def remove_face_everywhere(self, face: FaceId) -> List[Tuple[Tuple[str, ...], bool]]:
        """
        Drop a dead face from every entry, deleting entries it was the last face of

        Returns:
            List[Tuple[Tuple[str, ...], bool]]: (tokens, entry_deleted) for every
            entry that lost the face
        """
        touched: List[Tuple[Tuple[str, ...], bool]] = []
        for tokens, faces in list(self.entries()):
            if face in faces:
                self.remove_face_from_leaf(tokens, face)
                deleted = len(faces) == 0
                if deleted:
                    self.remove_entry(tokens)
                touched.append((tokens, deleted))
        return touched

    # --------------------------------------------------------------- lookups

    def dfs_first_leaf(self, node: Optional[_TrieNode] = None) -> Optional[FaceList]:
        """FaceList of the first leaf below node (the root by default), children in token order"""
        found = self._dfs(self._root if node is None else node)
        return None if found is None else found[0].faces

    def lpm(self, prefix: Union[Name, Sequence[str]]) -> LpmResult:
        """
        Longest prefix match

        Returns:
            LpmLeaf for the deepest node on the path holding faces, otherwise
            LpmStop at the deepest matched node
        """
        node = self._root
        matched: List[str] = []
        leaf: Optional[LpmLeaf] = None
        for token in self._tokens(prefix):
            child = node.children.get(token)
            if child is None:
                break
            node = child
            matched.append(token)
            if node.is_leaf:
                leaf = LpmLeaf(node.faces, len(matched), node, tuple(matched))  # type: ignore[arg-type]
        if leaf is not None:
            return leaf
        return LpmStop(node, len(matched), tuple(matched))

    def af_lookup(
        self,
        prefix: Union[Name, Sequence[str]],
        usable: Optional[FacePredicate] = None,
    ) -> LookupResult:
        """
        Approximate forwarding lookup

        Args:
            prefix: interest name (without the sequence component)
            usable: predicate rejecting failed faces or the arrival face

        Returns:
            LookupResult: FORWARD on a network face, DELIVER to a local face of
            an exact entry, or NO_ROUTE
        """
        match = self.lpm(prefix)
        if isinstance(match, LpmLeaf):
            face = match.faces.first(usable)
            if face is None:
                return NO_ROUTE
            if match.faces.is_local(face):
                return LookupResult.deliver(face, match.tokens)
            return LookupResult.forward(face, match.tokens)

        found = self._dfs(match.node)
        if found is None:
            return LookupResult.no_route(approximate=True)
        node, below = found
        face = node.faces.first(usable)  # type: ignore[union-attr]
        if face is None or node.faces.is_local(face):  # type: ignore[union-attr]
            return LookupResult.no_route(approximate=True)
        leaf = match.tokens + tuple(token for _, token in below)
        return LookupResult.forward(face, leaf, approximate=True)

    def lpm_lookup(
        self,
        prefix: Union[Name, Sequence[str]],
        usable: Optional[FacePredicate] = None,
    ) -> LookupResult:
        """Plain longest prefix match, no DFS fallback"""
        match = self.lpm(prefix)
        if isinstance(match, LpmStop):
            return NO_ROUTE
        face = match.faces.first(usable)
        if face is None:
            return NO_ROUTE
        if match.faces.is_local(face):
            return LookupResult.deliver(face, match.tokens)
        return LookupResult.forward(face, match.tokens)

    def next_alternative_face(
        self,
        prefix: Union[Name, Sequence[str]],
        usable: Optional[FacePredicate] = None,
    ) -> Optional[FaceId]:
        """Head network face of the resolved entry after failed-face removal"""
        node = self._resolve(prefix)
        if node is None or node.faces is None:
            return None
        return node.faces.first_network(usable)

    def resolve(self, prefix: Union[Name, Sequence[str]]) -> Optional[Tuple[str, ...]]:
        """Tokens of the entry route maintenance acts on for prefix, None when there is none"""
        path = self._resolve_path(prefix)
        if not path:
            return None
        return tuple(token for _, token in path)

    def faces_of(self, prefix: Union[Name, Sequence[str]]) -> Optional[FaceList]:
        """Exact entry for prefix, None when absent"""
        node = self._root
        for token in self._tokens(prefix):
            node = node.children.get(token)  # type: ignore[assignment]
            if node is None:
                return None
        return node.faces if node.is_leaf else None

    # ---------------------------------------------------------------- metrics

    def leaf_count(self) -> int:
        return self._leaf_count

    def entries(self) -> Iterator[Tuple[Tuple[str, ...], FaceList]]:
        """(token tuple, faces) for every leaf, in lexicographic order"""
        stack: List[Tuple[_TrieNode, Tuple[str, ...]]] = [(self._root, ())]
        while stack:
            node, tokens = stack.pop()
            if node.is_leaf:
                yield tokens, node.faces  # type: ignore[misc]
            for token in sorted(node.children, reverse=True):
                stack.append((node.children[token], tokens + (token,)))

    def prefixes(self) -> List[str]:
        """Canonical text of every leaf"""
        if self.mode is TokenMode.COMPONENT:
            return [str(Name(tokens)) for tokens, _ in self.entries()]
        return ["/" + "".join(tokens) for tokens, _ in self.entries()]

    def __len__(self) -> int:
        return self._leaf_count

    def __repr__(self) -> str:
        return f"<FibTrie(mode={self.mode.value}, leaves={self._leaf_count})>"
