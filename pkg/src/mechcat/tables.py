"""Published class tables, keyed by DOF, used by ``verify-tables``.

Labels are normalised to exponent form. The 1-DOF row printed as "PPCS"
(count 36) is stored as RPCS: a P^2CS row with count 18 is listed
separately, and 36 is exactly the count of the mixed R/P class.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PublishedTable:
    name: str
    links: tuple[int, ...]
    dof: int
    classes: tuple[tuple[str, int], ...]
    exact: bool
    """Exact match required; otherwise class set plus total within ``total_tol``."""
    total_tol: float = 0.0
    exact_classes: tuple[str, ...] = ()

    @property
    def total(self) -> int:
        return sum(c for _, c in self.classes)


PUBLISHED = (
    PublishedTable(
        "table-1", (4,), 1,
        (("R^2CS", 18), ("R^2S^2", 3), ("RPCS", 36), ("RPS^2", 6),
         ("RC^3", 6), ("P^2CS", 18), ("P^2S^2", 3), ("PC^3", 6)),
        exact=False, total_tol=0.05,
    ),
    PublishedTable(
        "table-2", (3, 4, 5), 2,
        (("R^3S^2", 5), ("R^2PS^2", 15), ("RP^2S^2", 15), ("P^3S^2", 5),
         ("R^3CS", 64), ("R^2PCS", 192), ("R^2C^3", 23), ("RP^2CS", 192),
         ("RPC^3", 48), ("P^3CS", 60), ("P^2C^3", 22), ("R^2", 1), ("RP", 2), ("P^2", 1)),
        exact=False, total_tol=0.05,
        exact_classes=("R^2", "RP", "P^2", "R^3S^2", "P^3S^2"),
    ),
    PublishedTable(
        "table-3", (3, 4, 5), 3,
        (("R^3", 1), ("R^2P", 3), ("RP^2", 3), ("P^3", 1)),
        exact=True,
    ),
    PublishedTable(
        "table-4", (3, 4, 5), 4,
        (("R^4", 1), ("R^3P", 4), ("R^2P^2", 6), ("RP^3", 4)),
        exact=True,
    ),
)


@dataclass(frozen=True)
class TableCheck:
    table: PublishedTable
    observed: dict[str, int]
    problems: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.problems

    def diff_lines(self) -> list[str]:
        expected = dict(self.table.classes)
        out = []
        for label in list(expected) + sorted(set(self.observed) - set(expected)):
            e = expected.get(label, 0)
            o = self.observed.get(label, 0)
            mark = "ok" if e == o else f"{o - e:+d}"
            out.append(f"  {label:>10} expected {e:>4} observed {o:>4}  {mark}")
        total = sum(self.observed.values())
        out.append(f"  {'total':>10} expected {self.table.total:>4} observed {total:>4}")
        return out


def compare(table: PublishedTable, summary: list[tuple[str, int]]) -> TableCheck:
    observed = dict(summary)
    expected = dict(table.classes)
    problems = []
    if table.exact:
        if observed != expected:
            problems.append("class counts differ")
    else:
        if set(observed) != set(expected):
            problems.append("class set differs")
        total = sum(observed.values())
        if abs(total - table.total) > table.total_tol * table.total:
            problems.append(f"total {total} outside {table.total} +/- {table.total_tol:.0%}")
        for label in table.exact_classes:
            if observed.get(label, 0) != expected[label]:
                problems.append(f"{label} count {observed.get(label, 0)} != {expected[label]}")
    return TableCheck(table, observed, tuple(problems))
