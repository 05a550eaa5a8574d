from __future__ import annotations

import pytest

from mechcat.core import AdjacencyMatrix, C, P, R, S, parse_matrix
from mechcat.pipeline import PipelineConfig, run

# five-link matrix whose third link has no joints
MATRIX_A = "L1 O O R P; O L2 O C S; O O L3 O O; R C O L4 O; P S O O L5"


def chain(*kinds, n: int | None = None) -> AdjacencyMatrix:
    """Serial chain 0-1-...-k with the given joints."""
    n = n or len(kinds) + 1
    return AdjacencyMatrix.from_edges(n, [(i, i + 1, k) for i, k in enumerate(kinds)])


def ring(*kinds) -> AdjacencyMatrix:
    """Single loop 0-1-...-(k-1)-0; the last joint closes on the base."""
    n = len(kinds)
    return AdjacencyMatrix.from_edges(n, [(i, (i + 1) % n, k) for i, k in enumerate(kinds)])


@pytest.fixture
def matrix_a() -> AdjacencyMatrix:
    return parse_matrix(MATRIX_A)


# dangling chain 1-3-4 off the base-to-EE path 0-1-2-5
FIG1 = AdjacencyMatrix.from_edges(6, [(0, 1, R), (1, 2, R), (2, 5, R), (1, 3, R), (3, 4, R)])
# loop 1-2-3-4 hanging on the path 0-1-5 by link 1 alone
FIG2 = AdjacencyMatrix.from_edges(
    6, [(0, 1, R), (1, 5, R), (1, 2, R), (2, 3, R), (3, 4, S), (1, 4, C)]
)
# two loops, two actuated R joints, EE tied to the base by one R joint
FIG3 = parse_matrix("L1 O O S R; O L2 R O S; O R L3 S O; S O S L4 S; R S O S L5")
# loop P,P,C,C,C around all five links
FIG4 = ring(P, P, C, C, C)
# S-S pair splitting {base, L2} from {L3, EE}
FIG7 = AdjacencyMatrix.from_edges(4, [(0, 1, R), (1, 2, S), (0, 3, S), (2, 3, R)])
# S-S pair isolating {L2, L3} with base and EE on the same side
FIG8 = AdjacencyMatrix.from_edges(4, [(0, 1, S), (1, 2, R), (2, 3, S), (0, 3, R)])


@pytest.fixture(scope="session")
def table1_run():
    return run(PipelineConfig(links=(4,), target_dof=1))


@pytest.fixture(scope="session")
def table3_run():
    return run(PipelineConfig(links=(3, 4, 5), target_dof=3))


@pytest.fixture(scope="session")
def table4_run():
    return run(PipelineConfig(links=(3, 4, 5), target_dof=4))
