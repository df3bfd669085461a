"""Local-search approximations for weighted independent sets.

``square_imp`` applies improving claws under the ``w^2`` potential until none
remain. ``square_plus_imp`` uses ``(w+1)^2`` instead and, whenever the claw
phase stalls, looks for an augmenting path in the auxiliary element graph
whose edges are the weight-1 candidates avoiding the weight-2 members.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass

from arborleaf.clawgraph import (
    IndependentSet,
    IntersectionGraph,
    Potential,
    find_improving_claw,
    swap,
)
from arborleaf.errors import IterationCapExceeded, NotAugmenting


def iteration_cap(graph: IntersectionGraph) -> int:
    return 10 * (9 * graph.n + 1)


def _claw_phase(
    graph: IntersectionGraph, current: IndependentSet, potential: Potential, cap: int
) -> IndependentSet:
    steps = current.improvements
    while True:
        claw = find_improving_claw(graph, current, potential)
        if claw is None:
            return current
        steps += 1
        if steps > cap:
            raise IterationCapExceeded(f"local search passed {cap} improvements")
        nxt = IndependentSet.of(graph, swap(graph, current.members, claw.talons), steps)
        assert nxt.potential(potential) > current.potential(potential)
        current = nxt


def _start(graph: IntersectionGraph, initial: Iterable[int] | None) -> IndependentSet:
    return IndependentSet.of(graph, initial or ())


def square_imp(graph: IntersectionGraph, initial: Iterable[int] | None = None) -> IndependentSet:
    """Claw local search under the sum of squared weights.

    ``initial`` seeds the search (the default is the empty set); the result
    has no improving claw and is a maximal independent set.
    """
    return _claw_phase(graph, _start(graph, initial), Potential.W2, iteration_cap(graph))


# --- auxiliary graph --------------------------------------------------------


@dataclass(frozen=True)
class AuxGraph:
    """Element graph H whose edges are weight-1 candidates avoiding ``forbidden``.

    ``edges`` maps each element pair to the candidates carrying exactly that
    set, lowest index first.
    """

    vertices: tuple
    edges: dict
    forbidden: frozenset

    def neighbors(self) -> dict:
        adj: dict = {v: [] for v in self.vertices}
        for e in self.edges:
            x, y = sorted(e)
            adj[x].append(y)
            adj[y].append(x)
        for v in adj:
            adj[v].sort()
        return adj


@dataclass(frozen=True)
class Matching:
    """Edges of H taken by weight-1 members of the independent set."""

    edges: dict  # frozenset({x, y}) -> candidate index in A

    def covered(self) -> set:
        out: set = set()
        for e in self.edges:
            out |= e
        return out

    def mate(self) -> dict:
        m = {}
        for e in self.edges:
            x, y = tuple(e)
            m[x], m[y] = y, x
        return m


@dataclass(frozen=True)
class AlternatingPath:
    vertices: tuple

    @property
    def edges(self) -> list[frozenset]:
        return [frozenset(p) for p in zip(self.vertices, self.vertices[1:])]

    def is_augmenting(self, aux: AuxGraph, matching: Matching) -> bool:
        vs = self.vertices
        if len(vs) < 2 or len(set(vs)) != len(vs):
            return False
        covered = matching.covered()
        if vs[0] in covered or vs[-1] in covered:
            return False
        for i, e in enumerate(self.edges):
            if e not in aux.edges or (e in matching.edges) != (i % 2 == 1):
                return False
        return True


def build_aux_graph(graph: IntersectionGraph, independent: IndependentSet) -> tuple[AuxGraph, Matching]:
    forbidden: set = set()
    for v in independent.members:
        if graph.weights[v] == 2:
            forbidden |= graph.sets(v)
    edges: dict = {}
    for v in range(graph.n):
        s = graph.sets(v)
        if graph.weights[v] == 1 and len(s) == 2 and not (s & forbidden):
            edges.setdefault(s, []).append(v)
    vertices: set = set()
    for e in edges:
        vertices |= e
    aux = AuxGraph(
        tuple(sorted(vertices)),
        {e: tuple(ws) for e, ws in sorted(edges.items(), key=lambda kv: sorted(kv[0]))},
        frozenset(forbidden),
    )
    matched = {}
    for v in independent.members:
        s = graph.sets(v)
        if graph.weights[v] == 1 and s in aux.edges:
            matched[s] = v
    return aux, Matching(matched)


def find_augmenting_path(aux: AuxGraph, matching: Matching) -> AlternatingPath | None:
    """Edmonds' blossom search for an M-augmenting path in H.

    Roots are tried in ascending element order and neighbours are scanned in
    ascending order, so the returned path is a deterministic function of the
    input. Returns ``None`` when M is maximum.
    """
    verts = list(aux.vertices)
    index = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    adj = [[] for _ in range(n)]
    for e in aux.edges:
        x, y = (index[z] for z in sorted(e))
        adj[x].append(y)
        adj[y].append(x)
    for a in adj:
        a.sort()
    match = [-1] * n
    for e in matching.edges:
        x, y = (index[z] for z in e)
        match[x], match[y] = y, x

    for root in range(n):
        if match[root] != -1:
            continue
        path = _search_from(root, adj, match)
        if path is not None:
            return AlternatingPath(tuple(verts[i] for i in path))
    return None


def _search_from(root: int, adj: list[list[int]], match: list[int]) -> list[int] | None:
    n = len(adj)
    base = list(range(n))
    parent = [-1] * n
    used = [False] * n
    used[root] = True
    queue = deque([root])

    def lca(a: int, b: int) -> int:
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if match[a] == -1:
                break
            a = parent[match[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[match[b]]

    def mark_path(v: int, b: int, child: int, blossom: list[bool]) -> None:
        while base[v] != b:
            blossom[base[v]] = blossom[base[match[v]]] = True
            parent[v] = child
            child = match[v]
            v = parent[match[v]]

    while queue:
        v = queue.popleft()
        for to in adj[v]:
            if base[v] == base[to] or match[v] == to:
                continue
            if to == root or (match[to] != -1 and parent[match[to]] != -1):
                cur = lca(v, to)
                blossom = [False] * n
                mark_path(v, cur, to, blossom)
                mark_path(to, cur, v, blossom)
                for i in range(n):
                    if blossom[base[i]]:
                        base[i] = cur
                        if not used[i]:
                            used[i] = True
                            queue.append(i)
            elif parent[to] == -1:
                parent[to] = v
                if match[to] == -1:
                    path = []
                    w = to
                    while w != -1:
                        pw = parent[w]
                        path.extend((w, pw))
                        w = match[pw]
                    return path[::-1]
                used[match[to]] = True
                queue.append(match[to])
    return None


def apply_augment(
    graph: IntersectionGraph,
    independent: IndependentSet,
    aux: AuxGraph,
    matching: Matching,
    path: AlternatingPath,
) -> IndependentSet:
    """Swap the path's matched candidates for its unmatched ones (``A xor P``)."""
    if not path.is_augmenting(aux, matching):
        raise NotAugmenting(f"path {path.vertices} is not M-augmenting")
    members = set(independent.members)
    for i, e in enumerate(path.edges):
        if i % 2:
            members.remove(matching.edges[e])
        else:
            members.add(aux.edges[e][0])
    out = IndependentSet.of(graph, members, independent.improvements + 1)
    assert len(out.members) == len(independent.members) + 1
    return out


def square_plus_imp(graph: IntersectionGraph, initial: Iterable[int] | None = None) -> IndependentSet:
    """Claw local search under ``(w+1)^2`` interleaved with augmenting paths.

    The augmenting phase runs only when weights are ``|U| - 1``.
    """
    cap = iteration_cap(graph)
    current = _start(graph, initial)
    while True:
        current = _claw_phase(graph, current, Potential.W2_PLUS, cap)
        if not graph.unit_weights:
            return current
        aux, matching = build_aux_graph(graph, current)
        path = find_augmenting_path(aux, matching)
        if path is None:
            return current
        if current.improvements + 1 > cap:
            raise IterationCapExceeded(f"local search passed {cap} improvements")
        current = apply_augment(graph, current, aux, matching, path)
