import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIG4, FIG7, FIG8, chain, ring
from mechcat.core import AdjacencyMatrix, C, JointKind, P, R, S, cell_count
from mechcat.mobility import (
    LockReport,
    actuation_criteria_ok,
    compute_locks,
    ee_spherical_ok,
    effective_dof,
    idle_spins,
    kutzbach_dof,
    loop_angular_freedom,
    prismatic_only_ok,
    uncontrollable_parts_ok,
)
from mechcat.screwcheck import numeric_mobility
from mechcat.topology import LinkGraph, cycle_basis


def graph(m: AdjacencyMatrix) -> LinkGraph:
    return LinkGraph.from_matrix(m)


def locks(m: AdjacencyMatrix) -> LockReport:
    g = graph(m)
    return compute_locks(g, cycle_basis(g))


def test_kutzbach_values():
    assert kutzbach_dof(graph(chain(R, R, R))) == 3
    assert kutzbach_dof(graph(ring(R, R, C, S))) == 1
    assert kutzbach_dof(graph(ring(R, R, R, R))) == -2


def test_idle_spin_binary_link():
    # link 1 sits between two ball joints and nothing else
    m = AdjacencyMatrix.from_edges(4, [(0, 1, S), (1, 3, S), (0, 2, R), (2, 3, R)])
    g = graph(m)
    assert idle_spins(g) == 1
    assert effective_dof(g) == kutzbach_dof(g) - 1 == 1
    assert idle_spins(graph(chain(R, S, S))) == 1
    # an S-S end-effector is not an intermediate link
    ee_balls = AdjacencyMatrix.from_edges(4, [(0, 1, R), (1, 3, S), (0, 2, R), (2, 3, S)])
    assert idle_spins(graph(ee_balls)) == 0


def test_loop_angular_freedom():
    g = graph(FIG4)
    (loop,) = cycle_basis(g).loops
    assert loop_angular_freedom(g, loop) == 3
    g = graph(ring(R, R, C, S))
    (loop,) = cycle_basis(g).loops
    assert loop_angular_freedom(g, loop) == 6


def test_fig4_cylindricals_demoted():
    report = locks(FIG4)
    cyl = {e.id for e in graph(FIG4).edges if e.kind == C}
    assert report.demoted_cylindricals == cyl
    assert not report.locked_joints


def test_no_locks_for_open_chain():
    assert locks(chain(R, P, S, C)).empty


def test_no_locks_rrcs_and_all_rates_move():
    assert locks(ring(R, R, C, S)).empty
    g = graph(ring(R, R, C, S))
    # 7 freedoms, one loop of rank 6 leaves a one-parameter motion
    assert numeric_mobility(g, cycle_basis(g), 0) == 1


def test_rrrr_fully_locked():
    report = locks(ring(R, R, R, R))
    assert report.locked_joints == {0, 1, 2, 3}


def test_translational_loop_not_locked():
    # four sliders in a loop keep one translation
    assert locks(ring(P, P, P, P)).empty


def test_lock_report_disjoint_and_in_range():
    rng = random.Random(2)
    for _ in range(2000):
        n = rng.randint(3, 5)
        m = AdjacencyMatrix(n, tuple(JointKind(rng.randint(0, 4)) for _ in range(cell_count(n))))
        g = graph(m)
        basis = cycle_basis(g)
        report = compute_locks(g, basis)
        ids = {e.id for e in g.edges}
        assert not report.locked_joints & report.demoted_cylindricals
        assert report.locked_joints <= ids and report.demoted_cylindricals <= ids
        # rerunning from its own output is a no-op
        assert compute_locks(g, basis, start=report) == report


def test_actuation_criteria():
    assert not actuation_criteria_ok(graph(ring(C, C, C, S)), LockReport(), 1)
    assert actuation_criteria_ok(graph(ring(R, R, C, S)), LockReport(), 1)
    g = graph(FIG4)
    assert not actuation_criteria_ok(g, compute_locks(g, cycle_basis(g)), 3)
    assert actuation_criteria_ok(g, compute_locks(g, cycle_basis(g)), 2)
    g = graph(ring(R, R, R, R))
    assert not actuation_criteria_ok(g, compute_locks(g, cycle_basis(g)), 1)


def test_prismatic_only():
    assert not prismatic_only_ok(graph(chain(P, P, P, P)), 4)
    assert prismatic_only_ok(graph(chain(P, P, P)), 3)
    assert prismatic_only_ok(graph(chain(R, P, P, P)), 4)


def test_ee_two_spherical():
    two_s = AdjacencyMatrix.from_edges(4, [(0, 1, R), (0, 2, R), (1, 3, S), (2, 3, S)])
    assert not ee_spherical_ok(graph(two_s))
    s_and_r = AdjacencyMatrix.from_edges(4, [(0, 1, R), (0, 2, R), (1, 3, S), (2, 3, R)])
    assert ee_spherical_ok(graph(s_and_r))
    three = AdjacencyMatrix.from_edges(
        5, [(0, 1, R), (0, 2, R), (0, 3, R), (1, 4, S), (2, 4, S), (3, 4, C)]
    )
    assert ee_spherical_ok(graph(three))


def test_uncontrollable_parts():
    assert not uncontrollable_parts_ok(graph(FIG7))
    assert not uncontrollable_parts_ok(graph(FIG8))
    # one link between two balls: superfluous spin, tolerated
    single = AdjacencyMatrix.from_edges(4, [(0, 1, S), (1, 3, S), (0, 2, R), (2, 3, R)])
    assert uncontrollable_parts_ok(graph(single))


@settings(max_examples=150, deadline=None)
@given(n=st.integers(3, 6), data=st.data())
def test_relabel_invariance(n, data):
    cells = data.draw(st.lists(st.integers(0, 4), min_size=cell_count(n), max_size=cell_count(n)))
    inner = data.draw(st.permutations(range(1, n - 1)))
    m = AdjacencyMatrix(n, tuple(JointKind(c) for c in cells))
    img = m.permuted((0, *inner, n - 1))
    g, h = graph(m), graph(img)
    assert kutzbach_dof(g) == kutzbach_dof(h)
    assert idle_spins(g) == idle_spins(h)
    assert uncontrollable_parts_ok(g) == uncontrollable_parts_ok(h)
    assert ee_spherical_ok(g) == ee_spherical_ok(h)


@pytest.mark.parametrize("kinds", [(R, R, R), (P, C), (S, R, P, C), (C, C, C, C, S)])
def test_serial_kutzbach_is_freedom_sum(kinds):
    assert kutzbach_dof(graph(chain(*kinds))) == sum(k.freedoms for k in kinds)
