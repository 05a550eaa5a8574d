"""Graph analyses on the link graph: connectivity, path coverage, loops, S-S cuts."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from mechcat.core import AdjacencyMatrix, JointKind


@dataclass(frozen=True)
class Edge:
    i: int
    j: int
    kind: JointKind
    id: int

    def other(self, v: int) -> int:
        return self.j if v == self.i else self.i


@dataclass(frozen=True)
class LinkGraph:
    """Links as vertices, joints as edges; edge ids follow matrix cell order."""

    n: int
    edges: tuple[Edge, ...]

    @classmethod
    def from_matrix(cls, m: AdjacencyMatrix) -> "LinkGraph":
        return cls(m.n, tuple(Edge(i, j, k, e) for e, (i, j, k) in enumerate(m.edges())))

    @property
    def base(self) -> int:
        return 0

    @property
    def ee(self) -> int:
        return self.n - 1

    def incident(self, v: int) -> list[Edge]:
        return [e for e in self.edges if e.i == v or e.j == v]

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if e.i == v or e.j == v)

    def adjacency(self, skip: frozenset[int] = frozenset()) -> list[list[Edge]]:
        adj: list[list[Edge]] = [[] for _ in range(self.n)]
        for e in self.edges:
            if e.id not in skip:
                adj[e.i].append(e)
                adj[e.j].append(e)
        return adj


Loop = tuple[tuple[int, int], ...]
"""Closed walk as ``(edge_id, direction)``; +1 means traversed from lower to higher link."""


@dataclass(frozen=True)
class CycleBasis:
    loops: tuple[Loop, ...]
    tree_edges: frozenset[int]
    parent: tuple[tuple[int, int] | None, ...]
    """Per vertex, ``(parent_vertex, edge_id)`` in the spanning forest, None at roots."""


def components(g: LinkGraph, skip: frozenset[int] = frozenset()) -> list[int]:
    """Component label per vertex (labels are the smallest vertex of each component)."""
    adj = g.adjacency(skip)
    label = [-1] * g.n
    for root in range(g.n):
        if label[root] >= 0:
            continue
        label[root] = root
        stack = [root]
        while stack:
            v = stack.pop()
            for e in adj[v]:
                w = e.other(v)
                if label[w] < 0:
                    label[w] = root
                    stack.append(w)
    return label


def has_isolated_link(g: LinkGraph) -> bool:
    deg = [0] * g.n
    for e in g.edges:
        deg[e.i] += 1
        deg[e.j] += 1
    return any(d == 0 for d in deg)


def base_ee_connected(g: LinkGraph) -> bool:
    label = components(g)
    return label[g.base] == label[g.ee]


def biconnected_blocks(g: LinkGraph) -> list[frozenset[int]]:
    """Vertex sets of the biconnected blocks (bridges count as 2-vertex blocks)."""
    adj = g.adjacency()
    disc = [-1] * g.n
    low = [0] * g.n
    blocks: list[frozenset[int]] = []
    counter = 0
    for root in range(g.n):
        if disc[root] >= 0 or not adj[root]:
            continue
        disc[root] = low[root] = counter
        counter += 1
        edge_stack: list[Edge] = []
        # iterative DFS: (vertex, id of edge used to reach it, iterator position)
        frames = [(root, -1, 0)]
        while frames:
            v, via, pos = frames[-1]
            if pos < len(adj[v]):
                frames[-1] = (v, via, pos + 1)
                e = adj[v][pos]
                if e.id == via:
                    continue
                w = e.other(v)
                if disc[w] < 0:
                    edge_stack.append(e)
                    disc[w] = low[w] = counter
                    counter += 1
                    frames.append((w, e.id, 0))
                elif disc[w] < disc[v]:
                    edge_stack.append(e)
                    low[v] = min(low[v], disc[w])
                continue
            frames.pop()
            if not frames:
                break
            u = frames[-1][0]
            low[u] = min(low[u], low[v])
            if low[v] >= disc[u]:
                block: set[int] = set()
                while True:
                    f = edge_stack.pop()
                    block.update((f.i, f.j))
                    if f.id == via:
                        break
                blocks.append(frozenset(block))
    return blocks


def contributing_links(g: LinkGraph) -> frozenset[int]:
    """Vertices lying on at least one simple base -> end-effector path.

    Such vertices are exactly those of the biconnected blocks met along the
    block-cut tree path joining the base to the end-effector.
    """
    if not base_ee_connected(g):
        return frozenset()
    blocks = biconnected_blocks(g)
    # block-cut tree: vertex nodes v, block nodes n + b
    tree: dict[int, list[int]] = {}
    for b, verts in enumerate(blocks):
        for v in verts:
            tree.setdefault(v, []).append(g.n + b)
            tree.setdefault(g.n + b, []).append(v)
    prev = {g.base: g.base}
    queue = [g.base]
    for node in queue:
        for nxt in tree.get(node, ()):
            if nxt not in prev:
                prev[nxt] = node
                queue.append(nxt)
    on_path: set[int] = set()
    node = g.ee
    while node != g.base:
        if node >= g.n:
            on_path.update(blocks[node - g.n])
        node = prev[node]
    return frozenset(on_path)


def all_links_contribute(g: LinkGraph) -> bool:
    """Every link sits on some simple base -> end-effector path.

    Rejects dangling open chains as well as loops hanging off a single cut link.
    """
    return len(contributing_links(g)) == g.n


def simple_paths(g: LinkGraph, s: int, t: int) -> list[tuple[int, ...]]:
    """All simple s-t vertex paths by exhaustive DFS (test oracle, exponential)."""
    adj = g.adjacency()
    out: list[tuple[int, ...]] = []

    def walk(path: list[int], seen: set[int]) -> None:
        v = path[-1]
        if v == t:
            out.append(tuple(path))
            return
        for e in adj[v]:
            w = e.other(v)
            if w not in seen:
                seen.add(w)
                path.append(w)
                walk(path, seen)
                path.pop()
                seen.discard(w)

    walk([s], {s})
    return out


def spanning_forest(g: LinkGraph) -> tuple[tuple[int, int] | None, ...]:
    """Parent pointers of the spanning forest grown lowest-edge-id first.

    Each tree is grown from its lowest-numbered vertex (vertex 0 first) by
    repeatedly adding the smallest-id edge leaving the tree.
    """
    parent: list[tuple[int, int] | None] = [None] * g.n
    seen = [False] * g.n
    for root in range(g.n):
        if seen[root]:
            continue
        seen[root] = True
        grew = True
        while grew:
            grew = False
            # earlier trees are whole components, so a half-seen edge touches this tree
            for e in g.edges:
                if seen[e.i] != seen[e.j]:
                    inside = e.i if seen[e.i] else e.j
                    outside = e.other(inside)
                    seen[outside] = True
                    parent[outside] = (inside, e.id)
                    grew = True
                    break
    return tuple(parent)


def tree_path(parent, g: LinkGraph, u: int, v: int) -> list[tuple[int, int]]:
    """Tree walk from ``u`` to ``v`` as ``(edge_id, direction)`` steps."""
    def up(x: int) -> list[int]:
        chain = [x]
        while parent[x] is not None:
            x = parent[x][0]
            chain.append(x)
        return chain

    cu, cv = up(u), up(v)
    if cu[-1] != cv[-1]:
        raise ValueError(f"links {u} and {v} are not connected")
    common = set(cv)
    meet = next(x for x in cu if x in common)
    steps: list[tuple[int, int]] = []
    x = u
    while x != meet:
        p, eid = parent[x]
        steps.append((eid, _direction(g, eid, x, p)))
        x = p
    down: list[tuple[int, int]] = []
    x = v
    while x != meet:
        p, eid = parent[x]
        down.append((eid, _direction(g, eid, p, x)))
        x = p
    steps.extend(reversed(down))
    return steps


def _direction(g: LinkGraph, eid: int, frm: int, to: int) -> int:
    e = g.edges[eid]
    return 1 if (e.i, e.j) == (frm, to) else -1


def cycle_basis(g: LinkGraph) -> CycleBasis:
    """Fundamental loops of the deterministic spanning forest, one per chord.

    Each loop starts along its chord (lower -> higher link) and returns
    through the tree. Loop count is ``E - V + C``.
    """
    parent = spanning_forest(g)
    tree = frozenset(p[1] for p in parent if p is not None)
    loops = []
    for e in g.edges:
        if e.id in tree:
            continue
        loops.append(((e.id, 1), *tree_path(parent, g, e.j, e.i)))
    return CycleBasis(tuple(loops), tree, parent)


def spherical_two_cuts(g: LinkGraph) -> list[tuple[int, int]]:
    """Pairs of S joints that are the only joints between two complementary parts.

    A pair qualifies when some bipartition of the links is crossed by exactly
    these two edges: either removing both leaves two components with both
    edges running between them, or both are bridges hanging off a common
    middle component.
    """
    spherical = [e.id for e in g.edges if e.kind == JointKind.SPHERICAL]
    out = []
    for a, b in combinations(spherical, 2):
        if _cut_partition(g, a, b) is not None:
            out.append((a, b))
    return out


def _cut_partition(g: LinkGraph, a: int, b: int) -> tuple[frozenset[int], frozenset[int]] | None:
    before = components(g)
    after = components(g, frozenset((a, b)))
    ea, eb = g.edges[a], g.edges[b]
    if before[ea.i] != before[eb.i]:
        return None
    region = {v for v in range(g.n) if before[v] == before[ea.i]}
    parts = {after[v] for v in region}
    if len(parts) == 2:
        if after[ea.i] == after[ea.j] or after[eb.i] == after[eb.j]:
            return None
        one = frozenset(v for v in region if after[v] == after[ea.i])
    elif len(parts) == 3:
        ends_a = {after[ea.i], after[ea.j]}
        ends_b = {after[eb.i], after[eb.j]}
        middle = ends_a & ends_b
        (mid,) = middle
        one = frozenset(v for v in region if after[v] == mid)
    else:
        return None
    other = frozenset(region - one)
    # parts not holding the links outside the region still count as "rest of the graph"
    rest = frozenset(v for v in range(g.n) if v not in region)
    return one, other | rest


def cut_sides(g: LinkGraph, cut: tuple[int, int]) -> tuple[frozenset[int], frozenset[int]]:
    """Split the links along an S-S cut; the first side holds the base."""
    parts = _cut_partition(g, *cut)
    if parts is None:
        raise ValueError(f"edges {cut} do not form a two-joint cut")
    one, other = parts
    return (one, other) if g.base in one else (other, one)
