"""Kutzbach mobility and the structural (non-numerical) filter criteria."""

from __future__ import annotations

from dataclasses import dataclass

from mechcat.core import JointKind
from mechcat.topology import CycleBasis, LinkGraph, Loop, cut_sides, spherical_two_cuts

# stable ids used in traces, stats and CLI output
CRITERIA = (
    "dof-range",
    "has-rp",
    "rp-count",
    "isolated-link",
    "path-coverage",
    "noncontrib",
    "iso-canonical",
    "ee-two-s",
    "locked-actuation",
    "jacobian-rank",
    "loop-angular",
    "s-s-cut",
    "prismatic-only",
)


@dataclass(frozen=True)
class LockReport:
    locked_joints: frozenset[int] = frozenset()
    demoted_cylindricals: frozenset[int] = frozenset()
    """C joints whose rotation is locked, so they act as P joints."""

    @property
    def empty(self) -> bool:
        return not self.locked_joints and not self.demoted_cylindricals


def kutzbach_dof(g: LinkGraph) -> int:
    """Spatial Kutzbach mobility ``6(n - 1) - sum(6 - f_i)``."""
    return 6 * (g.n - 1) - sum(6 - e.kind.freedoms for e in g.edges)


def idle_spins(g: LinkGraph) -> int:
    """Intermediate links held only by two S joints.

    Each such link spins freely about the line through the two ball
    centres; the spin is an internal, superfluous freedom.
    """
    count = 0
    for v in range(1, g.n - 1):
        inc = g.incident(v)
        if len(inc) == 2 and all(e.kind == JointKind.SPHERICAL for e in inc):
            count += 1
    return count


def effective_dof(g: LinkGraph) -> int:
    """Kutzbach mobility less the idle spins of S-S binary links."""
    return kutzbach_dof(g) - idle_spins(g)


def loop_angular_freedom(g: LinkGraph, loop: Loop) -> int:
    return sum(g.edges[eid].kind.angular_freedoms for eid, _ in loop)


def compute_locks(g: LinkGraph, basis: CycleBasis, start: LockReport | None = None) -> LockReport:
    """Fixpoint of the two loop locking rules over the fundamental loops.

    (a) A loop with at most three live angular freedoms cannot rotate for
        arbitrary joint placement: its R and S joints lock and its C joints
        keep only their sliding freedom.
    (b) A loop whose remaining freedoms do not exceed the closure rank locks
        completely. The closure rank is 6, or 3 for a loop left with no
        angular freedom (pure translation). The idle spin of an S-S binary
        link on the loop is not counted as a freedom.

    ``start`` seeds the iteration with an earlier report.
    """
    start = start or LockReport()
    locked: set[int] = set(start.locked_joints)
    demoted: set[int] = set(start.demoted_cylindricals)
    spin_pairs = []
    for v in range(1, g.n - 1):
        inc = g.incident(v)
        if len(inc) == 2 and all(e.kind == JointKind.SPHERICAL for e in inc):
            spin_pairs.append({inc[0].id, inc[1].id})

    def angular(eid: int) -> int:
        if eid in locked or eid in demoted:
            return 0
        return g.edges[eid].kind.angular_freedoms

    def freedom(eid: int) -> int:
        if eid in locked:
            return 0
        if eid in demoted:
            return 1
        return g.edges[eid].kind.freedoms

    changed = True
    while changed:
        changed = False
        for loop in basis.loops:
            ids = [eid for eid, _ in loop]
            ang = sum(angular(eid) for eid in ids)
            if 0 < ang <= 3:
                for eid in ids:
                    kind = g.edges[eid].kind
                    if eid in locked or eid in demoted:
                        continue
                    if kind == JointKind.CYLINDRICAL:
                        demoted.add(eid)
                        changed = True
                    elif kind in (JointKind.REVOLUTE, JointKind.SPHERICAL):
                        locked.add(eid)
                        changed = True
                ang = 0
            total = sum(freedom(eid) for eid in ids)
            total -= sum(1 for pair in spin_pairs if pair <= set(ids) and not pair & locked)
            rank = 6 if ang else 3
            if 0 < total <= rank:
                for eid in ids:
                    if eid not in locked:
                        locked.add(eid)
                        demoted.discard(eid)
                        changed = True
    return LockReport(frozenset(locked), frozenset(demoted))


def actuation_criteria_ok(g: LinkGraph, locks: LockReport, target_dof: int) -> bool:
    rp = [e for e in g.edges if e.kind.actuatable]
    live = [e for e in rp if e.id not in locks.locked_joints]
    return len(rp) >= 1 and len(rp) >= target_dof and len(live) >= target_dof


def prismatic_only_ok(g: LinkGraph, target_dof: int) -> bool:
    # purely linear end-effector motion spans at most 3 directions
    all_p = bool(g.edges) and all(e.kind == JointKind.PRISMATIC for e in g.edges)
    return not (all_p and target_dof > 3)


def ee_spherical_ok(g: LinkGraph) -> bool:
    inc = g.incident(g.ee)
    return not (len(inc) == 2 and all(e.kind == JointKind.SPHERICAL for e in inc))


def uncontrollable_parts_ok(g: LinkGraph) -> bool:
    """No part hangs on two S joints unless it is a single link away from base and EE."""
    for cut in spherical_two_cuts(g):
        base_side, other = cut_sides(g, cut)
        if g.ee not in base_side:
            return False
        if len(other) > 1:
            return False
    return True
