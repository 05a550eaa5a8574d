"""Domain types: joint kinds, adjacency matrices and their integer encoding."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

MIN_LINKS = 3
MAX_LINKS = 6


class JointKind(enum.IntEnum):
    """Edge alphabet of the link graph; values double as base-5 digits."""

    EMPTY = 0
    REVOLUTE = 1
    PRISMATIC = 2
    CYLINDRICAL = 3
    SPHERICAL = 4

    @property
    def letter(self) -> str:
        return _LETTERS[self]

    @property
    def freedoms(self) -> int:
        return _FREEDOMS[self]

    @property
    def angular_freedoms(self) -> int:
        return _ANGULAR[self]

    @property
    def actuatable(self) -> bool:
        return self in (JointKind.REVOLUTE, JointKind.PRISMATIC)

    @classmethod
    def from_letter(cls, letter: str) -> "JointKind":
        try:
            return _FROM_LETTER[letter]
        except KeyError:
            raise ValueError(f"unknown joint letter {letter!r}") from None


_LETTERS = {0: "O", 1: "R", 2: "P", 3: "C", 4: "S"}
_FREEDOMS = {0: 0, 1: 1, 2: 1, 3: 2, 4: 3}
_ANGULAR = {0: 0, 1: 1, 2: 0, 3: 1, 4: 3}
_FROM_LETTER = {v: JointKind(k) for k, v in _LETTERS.items()}

R = JointKind.REVOLUTE
P = JointKind.PRISMATIC
C = JointKind.CYLINDRICAL
S = JointKind.SPHERICAL
O = JointKind.EMPTY


def check_links(n: int) -> None:
    if not MIN_LINKS <= n <= MAX_LINKS:
        raise ValueError(f"links must be in {MIN_LINKS}..{MAX_LINKS}, got {n}")


@lru_cache(maxsize=None)
def cell_pairs(n: int) -> tuple[tuple[int, int], ...]:
    """Strict upper-triangle (i, j) pairs in row-major storage order."""
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


def cell_count(n: int) -> int:
    return n * (n - 1) // 2


@dataclass(frozen=True)
class AdjacencyMatrix:
    """Symmetric link/joint matrix stored as its strict upper triangle.

    Link 0 is the base and link ``n - 1`` the end-effector. One cell per link
    pair, so at most one joint joins any two links.
    """

    n: int
    cells: tuple[JointKind, ...]

    def __post_init__(self) -> None:
        check_links(self.n)
        if len(self.cells) != cell_count(self.n):
            raise ValueError(
                f"expected {cell_count(self.n)} cells for n={self.n}, got {len(self.cells)}"
            )
        object.__setattr__(self, "cells", tuple(JointKind(c) for c in self.cells))

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[tuple[int, int, JointKind]]
    ) -> "AdjacencyMatrix":
        pos = {pair: k for k, pair in enumerate(cell_pairs(n))}
        cells = [JointKind.EMPTY] * cell_count(n)
        for i, j, kind in edges:
            if i == j:
                raise ValueError("a joint must connect two distinct links")
            key = (min(i, j), max(i, j))
            if cells[pos[key]] != JointKind.EMPTY:
                raise ValueError(f"link pair {key} already has a joint")
            cells[pos[key]] = JointKind(kind)
        return cls(n, tuple(cells))

    def joint(self, i: int, j: int) -> JointKind:
        if i == j:
            raise ValueError("diagonal entries are links, not joints")
        a, b = min(i, j), max(i, j)
        # row-major offset of (a, b) in the strict upper triangle
        k = a * self.n - a * (a + 1) // 2 + (b - a - 1)
        return self.cells[k]

    def edges(self) -> list[tuple[int, int, JointKind]]:
        return [
            (i, j, kind)
            for (i, j), kind in zip(cell_pairs(self.n), self.cells)
            if kind != JointKind.EMPTY
        ]

    def permuted(self, perm: Sequence[int]) -> "AdjacencyMatrix":
        """Relabel link ``i`` as ``perm[i]``."""
        return AdjacencyMatrix.from_edges(
            self.n, ((perm[i], perm[j], k) for i, j, k in self.edges())
        )

    def to_text(self) -> str:
        return format_matrix(self)

    def __str__(self) -> str:
        return format_matrix(self)


def decode_index(n: int, k: int) -> AdjacencyMatrix:
    """Matrix whose cells are the base-5 digits of ``k``, most significant first."""
    check_links(n)
    m = cell_count(n)
    if not 0 <= k < 5**m:
        raise ValueError(f"index {k} out of range for n={n} (0..{5**m - 1})")
    digits = [0] * m
    for pos in range(m - 1, -1, -1):
        k, digits[pos] = divmod(k, 5)
    return AdjacencyMatrix(n, tuple(JointKind(d) for d in digits))


def encode_matrix(m: AdjacencyMatrix) -> int:
    k = 0
    for c in m.cells:
        k = k * 5 + int(c)
    return k


@dataclass(frozen=True, order=True)
class ClassSignature:
    nR: int = 0
    nP: int = 0
    nC: int = 0
    nS: int = 0

    @property
    def label(self) -> str:
        parts = []
        for letter, count in zip("RPCS", (self.nR, self.nP, self.nC, self.nS)):
            if count == 1:
                parts.append(letter)
            elif count > 1:
                parts.append(f"{letter}^{count}")
        return "".join(parts)

    @property
    def total(self) -> int:
        return self.nR + self.nP + self.nC + self.nS

    def sort_key(self) -> tuple[int, int, int, int]:
        # descending R, then P, C, S
        return (-self.nR, -self.nP, -self.nC, -self.nS)

    @classmethod
    def parse(cls, label: str) -> "ClassSignature":
        """Inverse of :attr:`label`; also accepts repeated letters such as ``PPCS``."""
        counts = dict.fromkeys("RPCS", 0)
        pos = 0
        for tok in re.finditer(r"([RPCS])(?:\^(\d+))?|(\S)", label):
            if tok.start() != pos or tok.group(3):
                raise ValueError(f"bad class label {label!r}")
            counts[tok.group(1)] += int(tok.group(2) or 1)
            pos = tok.end()
        if pos != len(label):
            raise ValueError(f"bad class label {label!r}")
        return cls(counts["R"], counts["P"], counts["C"], counts["S"])

    def __str__(self) -> str:
        return self.label


def classify(m: AdjacencyMatrix) -> ClassSignature:
    counts = [0] * 5
    for c in m.cells:
        counts[c] += 1
    return ClassSignature(counts[1], counts[2], counts[3], counts[4])


def format_matrix(m: AdjacencyMatrix) -> str:
    """``"L1 O R; O L2 P; R P L3"`` style text, one row per link."""
    rows = []
    for i in range(m.n):
        row = []
        for j in range(m.n):
            row.append(f"L{i + 1}" if i == j else m.joint(i, j).letter)
        rows.append(" ".join(row))
    return "; ".join(rows)


def parse_matrix(text: str) -> AdjacencyMatrix:
    """Parse the row text format; the matrix must be symmetric."""
    rows = [r.split() for r in text.strip().split(";")]
    n = len(rows)
    check_links(n)
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ValueError(f"row {i + 1} has {len(row)} entries, expected {n}")
        if row[i] != f"L{i + 1}":
            raise ValueError(f"diagonal entry of row {i + 1} must be L{i + 1}, got {row[i]!r}")
    cells = []
    for i, j in cell_pairs(n):
        upper = JointKind.from_letter(rows[i][j])
        lower = JointKind.from_letter(rows[j][i])
        if upper != lower:
            raise ValueError(f"matrix not symmetric at ({i + 1},{j + 1})")
        cells.append(upper)
    return AdjacencyMatrix(n, tuple(cells))


@dataclass(frozen=True)
class FilterTrace:
    """Per-criterion verdicts for one candidate, in evaluation order."""

    matrix_index: int
    verdicts: tuple[tuple[str, bool], ...] = ()
    first_failure: str | None = None

    @property
    def accepted(self) -> bool:
        return self.first_failure is None


@dataclass(frozen=True)
class CatalogEntry:
    matrix: AdjacencyMatrix
    signature: ClassSignature
    dof: int
    links: int
    canonical_index: int
    engine_version: str
    criteria_config_hash: str

    @property
    def sort_key(self) -> tuple[int, int]:
        return (self.links, self.canonical_index)
