"""Streaming generation of the candidate space, sharded by index residue."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from mechcat.core import AdjacencyMatrix, JointKind, cell_count, check_links

BLOCK = 1 << 16


@dataclass(frozen=True)
class Shard:
    shard_index: int = 0
    shard_count: int = 1

    def __post_init__(self) -> None:
        if self.shard_count < 1:
            raise ValueError("shard_count must be >= 1")
        if not 0 <= self.shard_index < self.shard_count:
            raise ValueError(f"shard_index must be in 0..{self.shard_count - 1}")


def total_count(n: int) -> int:
    check_links(n)
    return 5 ** cell_count(n)


def index_blocks(n: int, shard: Shard = Shard(), block: int = BLOCK) -> Iterator[np.ndarray]:
    """Ascending int64 index arrays covering the shard, ``block`` at a time."""
    total = total_count(n)
    step = shard.shard_count
    first = shard.shard_index
    span = block * step
    for start in range(first, total, span):
        yield np.arange(start, min(start + span, total), step, dtype=np.int64)


def digits_of(n: int, indices: np.ndarray) -> np.ndarray:
    """(N, cells) base-5 digit array, most significant cell first."""
    m = cell_count(n)
    out = np.empty((len(indices), m), dtype=np.int8)
    rest = indices.copy()
    for pos in range(m - 1, -1, -1):
        out[:, pos] = rest % 5
        rest //= 5
    return out


def enumerate_stream(n: int, shard: Shard = Shard()) -> Iterator[tuple[int, AdjacencyMatrix]]:
    """Every ``(index, matrix)`` of the shard in ascending index order."""
    kinds = tuple(JointKind)
    for idx in index_blocks(n, shard):
        for k, row in zip(idx.tolist(), digits_of(n, idx).tolist()):
            yield k, AdjacencyMatrix(n, tuple(kinds[d] for d in row))
