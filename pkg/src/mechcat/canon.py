"""Isomorph rejection: minimal encoding over relabelings of intermediate links."""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations

import numpy as np

from mechcat.core import AdjacencyMatrix, cell_pairs, encode_matrix


@lru_cache(maxsize=None)
def admissible_perms(n: int) -> tuple[tuple[int, ...], ...]:
    """Relabelings fixing link 0 and link n-1; identity first."""
    return tuple((0, *p, n - 1) for p in permutations(range(1, n - 1)))


@lru_cache(maxsize=None)
def cell_sources(n: int) -> np.ndarray:
    """(perms, cells) table: cell ``c`` of ``sigma(m)`` is cell ``src[s, c]`` of ``m``."""
    pairs = cell_pairs(n)
    pos = {pair: k for k, pair in enumerate(pairs)}
    rows = []
    for perm in admissible_perms(n):
        src = [0] * len(pairs)
        for k, (i, j) in enumerate(pairs):
            a, b = perm[i], perm[j]
            src[pos[(min(a, b), max(a, b))]] = k
        rows.append(src)
    return np.array(rows, dtype=np.intp)


def canonical_form(m: AdjacencyMatrix) -> AdjacencyMatrix:
    best = m
    best_key = encode_matrix(m)
    for perm in admissible_perms(m.n)[1:]:
        img = m.permuted(perm)
        key = encode_matrix(img)
        if key < best_key:
            best, best_key = img, key
    return best


def is_canonical(m: AdjacencyMatrix) -> bool:
    cells = m.cells
    for src in cell_sources(m.n)[1:]:
        # lexicographic cell order == numeric order of the base-5 index
        img = tuple(cells[s] for s in src)
        if img < cells:
            return False
    return True


def canonical_mask(digits: np.ndarray) -> np.ndarray:
    """Vectorised :func:`is_canonical` over rows of a (N, cells) digit array."""
    n = _links_for_cells(digits.shape[1])
    weights = 5 ** np.arange(digits.shape[1] - 1, -1, -1, dtype=np.int64)
    own = digits @ weights
    ok = np.ones(len(digits), dtype=bool)
    for src in cell_sources(n)[1:]:
        ok &= own <= digits[:, src] @ weights
    return ok


def _links_for_cells(cells: int) -> int:
    n = 3
    while n * (n - 1) // 2 < cells:
        n += 1
    return n
