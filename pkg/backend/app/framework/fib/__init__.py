"""FIB trie and its lookup microbenchmark"""

from app.framework.fib.trie import FaceList, FibTrie, LookupAction, LookupResult

__all__ = ["FaceList", "FibTrie", "LookupAction", "LookupResult"]
