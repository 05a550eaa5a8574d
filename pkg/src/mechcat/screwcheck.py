"""Numerical screw-theory mobility.

Joints get random positions and axes, loop closure is written as signed sums
of joint twists, and mobility is read off the null space of that system. The
end-effector twist rank is the image of the null space along a base-to-EE
tree path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from mechcat.core import JointKind
from mechcat.topology import CycleBasis, LinkGraph, components, tree_path

DEFAULT_TRIALS = 4
DEFAULT_RANK_TOL = 1e-8


@dataclass(frozen=True)
class GeometrySample:
    seed: int
    positions: np.ndarray
    """(E, 3) joint positions in [-1, 1]^3, indexed by edge id."""
    axes: np.ndarray
    """(E, 3) unit axes; ignored for S joints."""


@dataclass(frozen=True)
class MobilityResult:
    numeric_dof: int
    ee_rank: int
    trials_used: int
    rank_tolerance: float


def derive_seed(matrix_index: int, trial: int) -> int:
    """64-bit seed fixed by the candidate index and trial number."""
    ss = np.random.SeedSequence([int(matrix_index) & (2**64 - 1), int(matrix_index) >> 64, trial])
    return int(ss.generate_state(1, np.uint64)[0])


def sample_geometry(g: LinkGraph, seed: int) -> GeometrySample:
    rng = np.random.default_rng(seed)
    count = len(g.edges)
    positions = rng.uniform(-1.0, 1.0, size=(count, 3))
    axes = rng.normal(size=(count, 3))
    axes /= np.linalg.norm(axes, axis=1, keepdims=True)
    return GeometrySample(seed, positions, axes)


_UNIT = np.eye(3)


def joint_screws(kind: JointKind, p: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Unit twists ``[w; v]`` of one joint as the rows of a (f, 6) array."""
    if kind == JointKind.REVOLUTE:
        return np.concatenate([a, np.cross(p, a)])[None, :]
    if kind == JointKind.PRISMATIC:
        return np.concatenate([np.zeros(3), a])[None, :]
    if kind == JointKind.CYLINDRICAL:
        return np.stack([
            np.concatenate([a, np.cross(p, a)]),
            np.concatenate([np.zeros(3), a]),
        ])
    if kind == JointKind.SPHERICAL:
        return np.hstack([_UNIT, np.cross(p, _UNIT)])
    return np.zeros((0, 6))


def screw_columns(g: LinkGraph, geom: GeometrySample) -> tuple[np.ndarray, list[slice]]:
    """All joint twists as columns of a (6, F) array, with each edge's column span."""
    blocks = []
    spans = []
    start = 0
    for e in g.edges:
        s = joint_screws(e.kind, geom.positions[e.id], geom.axes[e.id])
        blocks.append(s.T)
        spans.append(slice(start, start + len(s)))
        start += len(s)
    cols = np.hstack(blocks) if blocks else np.zeros((6, 0))
    return cols, spans


def constraint_matrix(g: LinkGraph, basis: CycleBasis, geom: GeometrySample) -> np.ndarray:
    """Loop-closure system, one 6-row block per basis loop."""
    cols, spans = screw_columns(g, geom)
    out = np.zeros((6 * len(basis.loops), cols.shape[1]))
    for row, loop in enumerate(basis.loops):
        block = out[6 * row : 6 * row + 6]
        for eid, direction in loop:
            block[:, spans[eid]] += direction * cols[:, spans[eid]]
    return out


def numerical_rank(a: np.ndarray, tol: float) -> int:
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def null_space(a: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal null-space basis as columns."""
    cols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(cols)
    _, s, vt = np.linalg.svd(a)
    rank = int(np.sum(s > tol * s[0])) if s.size and s[0] > 0 else 0
    return vt[rank:].T


def ee_twist_rank(
    g: LinkGraph, basis: CycleBasis, geom: GeometrySample, nullspace: np.ndarray,
    tol: float = DEFAULT_RANK_TOL,
) -> int:
    """Rank of end-effector twists over all closure-compatible joint rates."""
    cols, spans = screw_columns(g, geom)
    path = tree_path(basis.parent, g, g.base, g.ee)
    jac = np.zeros_like(cols)
    for eid, direction in path:
        jac[:, spans[eid]] = direction * cols[:, spans[eid]]
    return numerical_rank(jac @ nullspace, tol) if nullspace.shape[1] else 0


def analyze(
    g: LinkGraph,
    basis: CycleBasis,
    matrix_index: int,
    trials: int = DEFAULT_TRIALS,
    tol: float = DEFAULT_RANK_TOL,
) -> MobilityResult:
    """Generic mobility and EE twist rank over ``trials`` geometry samples.

    A degenerate sample can only lower the closure rank (inflating mobility)
    or the EE rank, so the sample with the highest closure rank wins, ties
    broken by the higher EE rank.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    freedoms = sum(e.kind.freedoms for e in g.edges)
    # a disconnected end-effector has no twist relative to the base
    label = components(g)
    reachable = label[g.base] == label[g.ee]
    best = (-1, -1)
    for trial in range(trials):
        geom = sample_geometry(g, derive_seed(matrix_index, trial))
        a = constraint_matrix(g, basis, geom)
        rank = numerical_rank(a, tol)
        ee = ee_twist_rank(g, basis, geom, null_space(a, tol), tol) if reachable else 0
        best = max(best, (rank, ee))
    return MobilityResult(freedoms - best[0], best[1], trials, tol)


def numeric_mobility(
    g: LinkGraph,
    basis: CycleBasis,
    matrix_index: int,
    trials: int = DEFAULT_TRIALS,
    tol: float = DEFAULT_RANK_TOL,
) -> int:
    """Joint-space mobility ``F - rank`` at the best-conditioned of ``trials`` samples."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    freedoms = sum(e.kind.freedoms for e in g.edges)
    rank = 0
    for trial in range(trials):
        geom = sample_geometry(g, derive_seed(matrix_index, trial))
        rank = max(rank, numerical_rank(constraint_matrix(g, basis, geom), tol))
    return freedoms - rank


def jacobian_criterion_ok(
    g: LinkGraph,
    basis: CycleBasis,
    matrix_index: int,
    target_dof: int,
    trials: int = DEFAULT_TRIALS,
    tol: float = DEFAULT_RANK_TOL,
) -> bool:
    """EE velocity spans exactly as many directions as there are actuations."""
    return analyze(g, basis, matrix_index, trials, tol).ee_rank == target_dof
