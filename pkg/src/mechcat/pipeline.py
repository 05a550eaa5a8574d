"""Generation -> filters -> isomorph rejection -> classification."""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import cached_property
from typing import Callable, Iterable

import numpy as np

from mechcat import __version__
from mechcat.canon import is_canonical
from mechcat.core import (
    AdjacencyMatrix,
    CatalogEntry,
    ClassSignature,
    FilterTrace,
    JointKind,
    cell_pairs,
    check_links,
    classify,
    encode_matrix,
)
from mechcat.genmatrix import Shard, digits_of, index_blocks
from mechcat.mobility import (
    actuation_criteria_ok,
    compute_locks,
    ee_spherical_ok,
    effective_dof,
    idle_spins,
    prismatic_only_ok,
    uncontrollable_parts_ok,
)
from mechcat.screwcheck import DEFAULT_RANK_TOL, DEFAULT_TRIALS, analyze, numeric_mobility
from mechcat.topology import LinkGraph, all_links_contribute, base_ee_connected, cycle_basis

log = logging.getLogger(__name__)

# evaluation order, cheapest first
ORDER = (
    "isolated-link",
    "has-rp",
    "dof-range",
    "rp-count",
    "path-coverage",
    "noncontrib",
    "ee-two-s",
    "prismatic-only",
    "s-s-cut",
    "loop-angular",
    "locked-actuation",
    "iso-canonical",
    "jacobian-rank",
)
# numeric mobility needs SVDs, so it runs once the cheap structural checks pass
NUMERIC_ORDER = tuple(c for c in ORDER if c != "dof-range")[:-1] + ("dof-range", "jacobian-rank")
VECTORISABLE = {"isolated-link", "has-rp", "rp-count", "dof-range"}


def criteria_order(dof_mode: str) -> tuple[str, ...]:
    return NUMERIC_ORDER if dof_mode == "numeric" else ORDER


def vector_stages(dof_mode: str) -> tuple[str, ...]:
    """Leading criteria evaluated on whole index blocks with numpy."""
    out = []
    for crit in criteria_order(dof_mode):
        if crit not in VECTORISABLE or (crit == "dof-range" and dof_mode == "numeric"):
            break
        out.append(crit)
    return tuple(out)


@dataclass(frozen=True)
class PipelineConfig:
    links: tuple[int, ...] = (4,)
    target_dof: int = 1
    dof_mode: str = "kutzbach"
    trials: int = DEFAULT_TRIALS
    rank_tol: float = DEFAULT_RANK_TOL
    collect_traces: bool = False
    shards: int = 1
    workers: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "links", tuple(sorted(set(self.links))))
        for n in self.links:
            check_links(n)
        if self.target_dof < 1:
            raise ValueError("target_dof must be >= 1")
        if self.dof_mode not in ("kutzbach", "numeric"):
            raise ValueError(f"unknown dof_mode {self.dof_mode!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.shards < 1 or self.workers < 1:
            raise ValueError("shards and workers must be >= 1")

    @property
    def criteria_hash(self) -> str:
        """Digest of every setting that can change the accepted set."""
        payload = {
            "target_dof": self.target_dof,
            "dof_mode": self.dof_mode,
            "trials": self.trials,
            "rank_tol": self.rank_tol,
            "criteria": criteria_order(self.dof_mode),
        }
        blob = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class RunStats:
    generated: int = 0
    rejected_by: dict[str, int] = field(default_factory=dict)
    accepted: int = 0
    wall_time: float = 0.0

    def reject(self, criterion: str, count: int = 1) -> None:
        if count:
            self.rejected_by[criterion] = self.rejected_by.get(criterion, 0) + count

    def merge(self, other: "RunStats") -> None:
        self.generated += other.generated
        self.accepted += other.accepted
        for k, v in other.rejected_by.items():
            self.reject(k, v)

    def consistent(self) -> bool:
        return self.generated == self.accepted + sum(self.rejected_by.values())

    def lines(self) -> list[str]:
        out = [f"generated: {self.generated}"]
        for crit in ORDER:
            if crit in self.rejected_by:
                out.append(f"rejected {crit}: {self.rejected_by[crit]}")
        out.append(f"accepted: {self.accepted}")
        out.append(f"wall_time: {self.wall_time:.2f}s")
        return out


class Candidate:
    """Lazily computed analyses of one matrix, shared by the criteria."""

    def __init__(self, index: int, matrix: AdjacencyMatrix, cfg: PipelineConfig):
        self.index = index
        self.matrix = matrix
        self.cfg = cfg

    @cached_property
    def graph(self) -> LinkGraph:
        return LinkGraph.from_matrix(self.matrix)

    @cached_property
    def basis(self):
        return cycle_basis(self.graph)

    @cached_property
    def locks(self):
        return compute_locks(self.graph, self.basis)

    @cached_property
    def mobility(self):
        return analyze(self.graph, self.basis, self.index, self.cfg.trials, self.cfg.rank_tol)

    def dof(self) -> int:
        g = self.graph
        kutz = effective_dof(g)
        # numeric mobility never falls below the Kutzbach count
        if self.cfg.dof_mode == "kutzbach" or kutz > self.cfg.target_dof:
            return kutz
        return numeric_mobility(g, self.basis, self.index, self.cfg.trials,
                                self.cfg.rank_tol) - idle_spins(g)

    def check(self, criterion: str) -> bool:
        return _CHECKS[criterion](self)


def _rp(c: Candidate) -> int:
    return sum(1 for e in c.graph.edges if e.kind.actuatable)


_CHECKS: dict[str, Callable[[Candidate], bool]] = {
    "isolated-link": lambda c: all(c.graph.degree(v) > 0 for v in range(c.graph.n)),
    "has-rp": lambda c: _rp(c) >= 1,
    "dof-range": lambda c: c.dof() == c.cfg.target_dof,
    "rp-count": lambda c: _rp(c) >= c.cfg.target_dof,
    "path-coverage": lambda c: base_ee_connected(c.graph),
    "noncontrib": lambda c: all_links_contribute(c.graph),
    "ee-two-s": lambda c: ee_spherical_ok(c.graph),
    "prismatic-only": lambda c: prismatic_only_ok(c.graph, c.cfg.target_dof),
    "s-s-cut": lambda c: uncontrollable_parts_ok(c.graph),
    "loop-angular": lambda c: not c.locks.locked_joints,
    "locked-actuation": lambda c: actuation_criteria_ok(c.graph, c.locks, c.cfg.target_dof),
    "iso-canonical": lambda c: is_canonical(c.matrix),
    "jacobian-rank": lambda c: c.mobility.ee_rank == c.cfg.target_dof,
}


def apply_filters(
    m: AdjacencyMatrix,
    cfg: PipelineConfig,
    index: int | None = None,
    full: bool = False,
    order: Iterable[str] | None = None,
) -> FilterTrace:
    """Run the criteria in order, stopping at the first failure unless ``full``."""
    if index is None:
        index = encode_matrix(m)
    if order is None:
        order = criteria_order(cfg.dof_mode)
    cand = Candidate(index, m, cfg)
    verdicts = []
    first = None
    for crit in order:
        ok = cand.check(crit)
        verdicts.append((crit, ok))
        if not ok and first is None:
            first = crit
            if not full:
                break
    return FilterTrace(index, tuple(verdicts), first)


class _Vectorised:
    """Per-block counts backing the cheap leading criteria."""

    def __init__(self, n: int, digits: np.ndarray):
        present = digits > 0
        spherical = digits == JointKind.SPHERICAL
        deg = np.zeros((len(digits), n), dtype=np.int8)
        sdeg = np.zeros_like(deg)
        for k, (i, j) in enumerate(cell_pairs(n)):
            deg[:, i] += present[:, k]
            deg[:, j] += present[:, k]
            sdeg[:, i] += spherical[:, k]
            sdeg[:, j] += spherical[:, k]
        counts = [(digits == kind).sum(axis=1) for kind in range(5)]
        self.isolated = (deg == 0).any(axis=1)
        self.rp = counts[1] + counts[2]
        kutz = 6 * (n - 1) - 5 * counts[1] - 5 * counts[2] - 4 * counts[3] - 3 * counts[4]
        inner = slice(1, n - 1)
        spins = ((deg[:, inner] == 2) & (sdeg[:, inner] == 2)).sum(axis=1)
        self.eff_dof = kutz - spins


def run_shard(n: int, shard: Shard, cfg: PipelineConfig) -> tuple[list[CatalogEntry], RunStats, list[FilterTrace]]:
    stats = RunStats()
    entries: list[CatalogEntry] = []
    traces: list[FilterTrace] = []
    kinds = tuple(JointKind)
    stages = vector_stages(cfg.dof_mode)
    rest = tuple(c for c in criteria_order(cfg.dof_mode) if c not in stages)
    for idx in index_blocks(n, shard):
        digits = digits_of(n, idx)
        stats.generated += len(idx)
        vec = _Vectorised(n, digits)
        alive = np.ones(len(idx), dtype=bool)
        stage_fail = {
            "isolated-link": vec.isolated,
            "has-rp": vec.rp < 1,
            "dof-range": vec.eff_dof != cfg.target_dof,
            "rp-count": vec.rp < cfg.target_dof,
        }
        for crit in stages:
            fail = alive & stage_fail[crit]
            stats.reject(crit, int(fail.sum()))
            alive &= ~fail
        for k, row in zip(idx[alive].tolist(), digits[alive].tolist()):
            m = AdjacencyMatrix(n, tuple(kinds[d] for d in row))
            trace = apply_filters(m, cfg, k, full=cfg.collect_traces, order=rest)
            if cfg.collect_traces:
                traces.append(trace)
            if trace.first_failure is not None:
                stats.reject(trace.first_failure)
                continue
            stats.accepted += 1
            entries.append(CatalogEntry(
                matrix=m,
                signature=classify(m),
                dof=cfg.target_dof,
                links=n,
                canonical_index=k,
                engine_version=__version__,
                criteria_config_hash=cfg.criteria_hash,
            ))
    return entries, stats, traces


def _shard_job(args):
    n, shard, cfg = args
    return run_shard(n, shard, cfg)


def worker_count(cfg: PipelineConfig) -> int:
    env = os.environ.get("MECHCAT_THREADS")
    if env:
        return max(1, int(env))
    return cfg.workers


def run(cfg: PipelineConfig) -> tuple[list[CatalogEntry], RunStats]:
    """Enumerate every configured link count; entries sorted by (links, index)."""
    start = time.perf_counter()
    jobs = [(n, Shard(s, cfg.shards), cfg) for n in cfg.links for s in range(cfg.shards)]
    workers = min(worker_count(cfg), len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_shard_job, jobs))
    else:
        results = [_shard_job(j) for j in jobs]
    entries: list[CatalogEntry] = []
    stats = RunStats()
    for part, part_stats, _ in results:
        entries.extend(part)
        stats.merge(part_stats)
    entries.sort(key=lambda e: e.sort_key)
    stats.wall_time = time.perf_counter() - start
    log.info("run %s: %d accepted of %d", cfg.links, stats.accepted, stats.generated)
    return entries, stats


def summarize(entries: Iterable[CatalogEntry]) -> list[tuple[str, int]]:
    """Class label -> count, ordered by descending R, then P, C, S counts."""
    counts = Counter(e.signature for e in entries)
    return [(sig.label, counts[sig]) for sig in sorted(counts, key=ClassSignature.sort_key)]


def summary_total(summary: list[tuple[str, int]]) -> int:
    return sum(c for _, c in summary)


def config_dict(cfg: PipelineConfig) -> dict:
    return asdict(cfg)
