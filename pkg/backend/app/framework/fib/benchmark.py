"""
FIB microbenchmark - lookup and insertion latency versus trie size

Builds character-mode tries from seeded random prefixes (up to `prefix_len`
characters), then times batches of random lookups and insertions. Every batch is
repeated `repetitions` times; rows report the per-operation mean and standard
deviation in nanoseconds.

Absolute numbers depend on the machine; only trends and ratios are meaningful.

Usage:
    >>> from app.framework.fib.benchmark import bench_fib
    >>> frame = bench_fib([1_000, 10_000], repetitions=5)
    >>> list(frame.columns)
    ['trie_size', 'op', 'mean_ns', 'stddev_ns']
"""

import logging
import time
from typing import Iterable, List, Optional

import numpy as np
import pandas as pd
from tqdm import tqdm

from app.core.exceptions import BenchmarkError
from app.framework.fib.trie import FibTrie
from app.framework.foundation.names import TokenMode

logger = logging.getLogger(__name__)

_ALPHABET = np.array(list("abcdefghijklmnopqrstuvwxyz0123456789"))
BENCH_COLUMNS = ["trie_size", "op", "mean_ns", "stddev_ns"]


def random_prefixes(count: int, rng: np.random.Generator, prefix_len: int = 50) -> List[str]:
    """
    Random canonical prefixes of at most `prefix_len` characters after the root

    Args:
        count: number of prefixes
        rng: seeded generator
        prefix_len: maximum length in characters

    Returns:
        List[str]: prefixes such as `/k3x/ab9q2/...`
    """
    lengths = rng.integers(max(2, prefix_len // 2), prefix_len + 1, size=count)
    letters = _ALPHABET[rng.integers(0, len(_ALPHABET), size=(count, prefix_len))]
    cut_points = rng.integers(3, 11, size=(count, prefix_len // 3 + 1))

    prefixes: List[str] = []
    for row, length, cuts in zip(letters, lengths, cut_points):
        chars = list(row[:length])
        position = 0
        for cut in cuts:
            position += int(cut)
            if position >= length - 1:
                break
            chars[position] = "/"
        prefixes.append("/" + "".join(chars))
    return prefixes


def _char_tokens(prefix: str) -> List[str]:
    return list(prefix[1:])


def build_trie(prefixes: Iterable[str]) -> FibTrie:
    """Character trie holding one face per prefix"""
    trie = FibTrie(TokenMode.CHARACTER)
    for face, prefix in enumerate(prefixes):
        trie.insert(_char_tokens(prefix), face)
    return trie


def _time_batch(operation, batch: List[List[str]]) -> float:
    start = time.perf_counter_ns()
    for tokens in batch:
        operation(tokens)
    return (time.perf_counter_ns() - start) / len(batch)


def bench_fib(
    sizes: Iterable[int],
    prefix_len: int = 50,
    repetitions: int = 20,
    batch: int = 100,
    seed: int = 0,
    progress: bool = False,
) -> pd.DataFrame:
    """
    Time lookups and insertions at each trie size

    Args:
        sizes: trie sizes (number of inserted prefixes)
        prefix_len: maximum prefix length in characters
        repetitions: repetitions per batch
        batch: operations per batch
        seed: generator seed

    Returns:
        pd.DataFrame: columns trie_size, op, mean_ns, stddev_ns; two rows per size

    Raises:
        BenchmarkError: non-positive size, batch or repetition count
    """
    sizes = list(sizes)
    if not sizes or any(size <= 0 for size in sizes):
        raise BenchmarkError("Trie sizes must be positive", details={"sizes": sizes})
    if batch <= 0 or repetitions <= 0:
        raise BenchmarkError(
            "Batch and repetitions must be positive",
            details={"batch": batch, "repetitions": repetitions},
        )

    rows = []
    for size in tqdm(sizes, desc="bench-fib", disable=not progress):
        rng = np.random.default_rng([seed, size])
        prefixes = random_prefixes(size, rng, prefix_len)
        trie = build_trie(prefixes)
        logger.info(f"Built character trie: {size} prefixes, {trie.leaf_count()} leaves")

        lookup_samples = []
        insert_samples = []
        next_face = size
        for _ in range(repetitions):
            picks = rng.integers(0, size, size=batch)
            queries = [_char_tokens(prefixes[i]) for i in picks]
            lookup_samples.append(_time_batch(trie.af_lookup, queries))

            fresh = [_char_tokens(p) for p in random_prefixes(batch, rng, prefix_len)]
            insert_samples.append(
                _time_batch(lambda tokens: trie.insert(tokens, next_face), fresh)
            )
            # keep the measured size constant across repetitions
            for tokens in fresh:
                if trie.remove_face_from_leaf(tokens, next_face) and trie.faces_of(tokens) is None:
                    trie.remove_entry(tokens)
            next_face += 1

        for op, samples in (("lookup", lookup_samples), ("insert", insert_samples)):
            rows.append({
                "trie_size": size,
                "op": op,
                "mean_ns": float(np.mean(samples)),
                "stddev_ns": float(np.std(samples)),
            })

    return pd.DataFrame(rows, columns=BENCH_COLUMNS)


def lookup_ratio(frame: pd.DataFrame, smaller: int, larger: int) -> Optional[float]:
    """mean lookup(smaller) / mean lookup(larger)"""
    lookups = frame[frame["op"] == "lookup"].set_index("trie_size")["mean_ns"]
    if smaller not in lookups.index or larger not in lookups.index:
        return None
    return float(lookups[smaller] / lookups[larger])
