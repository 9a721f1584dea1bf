"""
Names - hierarchical NDN names and their tokenization

A Name is an immutable sequence of non-empty components rendered as
`/c1/c2/.../ck`. The FIB trie consumes names as token lists, either one token per
component (forwarding) or one token per character (lookup microbenchmark).

Usage:
    >>> from app.framework.foundation.names import parse_name, tokenize, TokenMode
    >>> name = parse_name("/A/B/F")
    >>> name.components
    ('A', 'B', 'F')
    >>> tokenize(parse_name("/AB"), TokenMode.CHARACTER)
    ['A', 'B']
"""

from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple

from app.core.exceptions import NameParseError

SEPARATOR = "/"


class TokenMode(str, Enum):
    """How a name is split into trie edge tokens"""
    COMPONENT = "component"
    CHARACTER = "character"


@dataclass(frozen=True, slots=True)
class Name:
    """
    Hierarchical name

    The empty component tuple is the root `/`; it is never routable but is used
    as the trie root and as the result of stripping the only component.
    """
    components: Tuple[str, ...]

    @classmethod
    def of(cls, *components: str) -> "Name":
        for component in components:
            if not component or SEPARATOR in component:
                raise NameParseError(
                    f"Invalid name component: {component!r}",
                    details={"component": component},
                )
        return cls(tuple(components))

    def __str__(self) -> str:
        return SEPARATOR + SEPARATOR.join(self.components)

    def __len__(self) -> int:
        return len(self.components)

    @property
    def is_root(self) -> bool:
        return not self.components

    def append(self, component: str) -> "Name":
        return Name.of(*self.components, component)

    def prefix(self, length: int) -> "Name":
        """First `length` components"""
        return Name(self.components[:length])

    def parent(self) -> "Name":
        """Name without its last component (the sequence number for workload names)"""
        return Name(self.components[:-1])

    def is_prefix_of(self, other: "Name") -> bool:
        return other.components[: len(self.components)] == self.components


def parse_name(text: str) -> Name:
    """
    Parse canonical text into a Name

    Args:
        text: canonical form `/c1/.../ck`

    Returns:
        Name: parsed name

    Raises:
        NameParseError: missing leading `/` or an empty component
    """
    if not text.startswith(SEPARATOR):
        raise NameParseError(f"Name must start with '/': {text!r}", details={"text": text})
    if text == SEPARATOR:
        raise NameParseError("Root name has no components", details={"text": text})

    components = text[1:].split(SEPARATOR)
    if any(not component for component in components):
        raise NameParseError(f"Empty component in name: {text!r}", details={"text": text})
    return Name(tuple(components))


def tokenize(name: Name, mode: TokenMode) -> List[str]:
    """
    Split a name into trie tokens

    Character mode keeps the separators between components as tokens so
    prefix relations survive in the character trie.

    Args:
        name: name to split
        mode: component or character tokens

    Returns:
        List[str]: ordered tokens
    """
    if mode is TokenMode.COMPONENT:
        return list(name.components)
    return list(str(name)[1:])
