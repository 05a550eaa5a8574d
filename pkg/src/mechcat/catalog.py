"""Catalog files, class tables and DOT export."""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import IO, Iterable

from mechcat.core import (
    AdjacencyMatrix,
    CatalogEntry,
    ClassSignature,
    classify,
    encode_matrix,
    format_matrix,
    parse_matrix,
)

HEADER = "# mechcat catalog: links\tdof\tclass\tcanonical_index\tmatrix\tengine_version\tcriteria_hash"
FIELDS = 7


class CatalogParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def format_record(e: CatalogEntry) -> str:
    return "\t".join([
        str(e.links),
        str(e.dof),
        e.signature.label,
        str(e.canonical_index),
        format_matrix(e.matrix),
        e.engine_version,
        e.criteria_config_hash,
    ])


def parse_record(text: str, line: int = 0) -> CatalogEntry:
    parts = text.rstrip("\n").split("\t")
    if len(parts) != FIELDS:
        raise CatalogParseError(line, f"expected {FIELDS} tab-separated fields, got {len(parts)}")
    links, dof, label, index, matrix_text, version, digest = parts
    try:
        matrix = parse_matrix(matrix_text)
        entry = CatalogEntry(
            matrix=matrix,
            signature=ClassSignature.parse(label),
            dof=int(dof),
            links=int(links),
            canonical_index=int(index),
            engine_version=version,
            criteria_config_hash=digest,
        )
    except ValueError as exc:
        raise CatalogParseError(line, str(exc)) from None
    # the decimal index and the matrix text must describe the same mechanism
    if entry.links != matrix.n:
        raise CatalogParseError(line, f"links={entry.links} but matrix has {matrix.n} links")
    if encode_matrix(matrix) != entry.canonical_index:
        raise CatalogParseError(line, "canonical index does not match matrix text")
    if classify(matrix) != entry.signature:
        raise CatalogParseError(line, f"class {label} does not match matrix joints")
    return entry


def write_records(entries: Iterable[CatalogEntry], dest: str | Path | IO[str]) -> None:
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            write_records(entries, fh)
        return
    dest.write(HEADER + "\n")
    for e in entries:
        dest.write(format_record(e) + "\n")


def read_records(source: str | Path | IO[str]) -> list[CatalogEntry]:
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            return read_records(fh)
    out = []
    for lineno, raw in enumerate(source, start=1):
        if not raw.strip() or raw.startswith("#"):
            continue
        out.append(parse_record(raw, lineno))
    return out


def to_dot(m: AdjacencyMatrix, name: str = "mechanism") -> str:
    """Undirected DOT graph: links as nodes, joints as labelled edges."""
    lines = [f"graph {name} {{"]
    for v in range(m.n):
        if v == 0:
            label = "Base"
        elif v == m.n - 1:
            label = "EE"
        else:
            label = f"L{v + 1}"
        lines.append(f'  n{v} [label="{label}"];')
    for i, j, kind in m.edges():
        lines.append(f'  n{i} -- n{j} [label="{kind.letter}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_class_table(summary: Iterable[tuple[str, int]], dest: str | Path | IO[str]) -> None:
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            write_class_table(summary, fh)
        return
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(["class", "count"])
    total = 0
    for label, count in summary:
        writer.writerow([label, count])
        total += count
    writer.writerow(["total", total])


def class_table_text(summary: Iterable[tuple[str, int]]) -> str:
    buf = io.StringIO()
    write_class_table(summary, buf)
    return buf.getvalue()
