"""Rooted DAGs and branchings over them.

Nodes are dense integers ``0..n-1``. Arcs are kept sorted by ``(source,
target)`` and every iteration order downstream derives from that, so all
algorithms built on these types are deterministic.
"""

from __future__ import annotations

import heapq
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

from arborleaf.errors import (
    ArcOutOfRange,
    CycleDetected,
    DuplicateArc,
    InvalidBranching,
    SelfLoop,
    UnreachableNode,
)

Arc = tuple[int, int]


@dataclass(frozen=True)
class RootedDag:
    """Immutable DAG with a root that reaches every node.

    Build instances through :func:`validate_dag`; the constructor itself does
    not check the invariants.
    """

    n: int
    root: int
    arcs: tuple[Arc, ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    @cached_property
    def out_neighbors(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.arcs:
            out[u].append(v)
        return tuple(tuple(o) for o in out)

    @cached_property
    def in_neighbors(self) -> tuple[tuple[int, ...], ...]:
        inn: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.arcs:
            inn[v].append(u)
        return tuple(tuple(sorted(i)) for i in inn)

    @cached_property
    def arc_set(self) -> frozenset[Arc]:
        return frozenset(self.arcs)

    @cached_property
    def topological_order(self) -> tuple[int, ...]:
        # Kahn with a min-heap: smallest ready node first.
        indeg = [len(p) for p in self.in_neighbors]
        ready = [v for v in range(self.n) if indeg[v] == 0]
        heapq.heapify(ready)
        order = []
        while ready:
            u = heapq.heappop(ready)
            order.append(u)
            for v in self.out_neighbors[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    heapq.heappush(ready, v)
        return tuple(order)

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self.arc_set

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)


def _find_cycle(n: int, out: Sequence[Sequence[int]]) -> list[int] | None:
    # Iterative three-colour DFS; returns the nodes of one cycle in order.
    color = [0] * n
    parent = [-1] * n
    for start in range(n):
        if color[start]:
            continue
        stack = [(start, iter(out[start]))]
        color[start] = 1
        while stack:
            u, it = stack[-1]
            for v in it:
                if color[v] == 0:
                    color[v] = 1
                    parent[v] = u
                    stack.append((v, iter(out[v])))
                    break
                if color[v] == 1:
                    cycle = [u]
                    while cycle[-1] != v:
                        cycle.append(parent[cycle[-1]])
                    return cycle[::-1]
            else:
                color[u] = 2
                stack.pop()
    return None


def validate_dag(
    n: int,
    arcs: Iterable[Sequence[int]],
    root: int = 0,
    labels: Sequence[str] | None = None,
) -> RootedDag:
    """Check the rooted-DAG invariants and return the frozen graph.

    Raises one of the :class:`~arborleaf.errors.DagError` subclasses naming the
    offending arc, node or cycle.
    """
    if n < 1:
        raise ValueError("a rooted dag needs at least one node")
    if not 0 <= root < n:
        raise ArcOutOfRange((root, root), n)
    if labels is not None and len(labels) != n:
        raise ValueError(f"expected {n} labels, got {len(labels)}")
    seen: set[Arc] = set()
    for raw in arcs:
        u, v = int(raw[0]), int(raw[1])
        if not (0 <= u < n and 0 <= v < n):
            raise ArcOutOfRange((u, v), n)
        if u == v:
            raise SelfLoop(u)
        if (u, v) in seen:
            raise DuplicateArc((u, v))
        seen.add((u, v))
    ordered = tuple(sorted(seen))
    out: list[list[int]] = [[] for _ in range(n)]
    for u, v in ordered:
        out[u].append(v)
    cycle = _find_cycle(n, out)
    if cycle is not None:
        raise CycleDetected(cycle)
    reached = [False] * n
    reached[root] = True
    stack = [root]
    while stack:
        u = stack.pop()
        for v in out[u]:
            if not reached[v]:
                reached[v] = True
                stack.append(v)
    for v in range(n):
        if not reached[v]:
            raise UnreachableNode(v, root)
    # Reachability plus acyclicity already force this; checked anyway.
    indeg = [0] * n
    for _, v in ordered:
        indeg[v] += 1
    assert [v for v in range(n) if indeg[v] == 0] == [root]
    return RootedDag(n, root, ordered, tuple(labels) if labels is not None else None)


@dataclass(frozen=True)
class Branching:
    """In-degree <= 1 sub-digraph of a rooted DAG, stored as a parent map.

    ``parent[v]`` is the parent of ``v`` or ``None``. Out-degrees and
    component data are derived lazily and cached.
    """

    dag: RootedDag
    parent: tuple[int | None, ...]

    def __post_init__(self) -> None:
        if len(self.parent) != self.dag.n:
            raise InvalidBranching(f"parent map has {len(self.parent)} entries for n={self.dag.n}")
        for v, p in enumerate(self.parent):
            if p is not None and not self.dag.has_arc(p, v):
                raise InvalidBranching(f"arc ({p}, {v}) is not an arc of the dag")
        # An in-degree <= 1 subgraph of a DAG is a forest; checked anyway.
        if self.dag.n and _find_cycle(self.dag.n, self.children) is not None:
            raise InvalidBranching("parent map contains a cycle")

    @classmethod
    def empty(cls, dag: RootedDag) -> Branching:
        return cls(dag, (None,) * dag.n)

    @classmethod
    def from_arcs(cls, dag: RootedDag, arcs: Iterable[Arc]) -> Branching:
        parent: list[int | None] = [None] * dag.n
        for u, v in arcs:
            if parent[v] is not None:
                raise InvalidBranching(f"node {v} would get two parents")
            parent[v] = u
        return cls(dag, tuple(parent))

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        kids: list[list[int]] = [[] for _ in range(self.dag.n)]
        for v, p in enumerate(self.parent):
            if p is not None:
                kids[p].append(v)
        return tuple(tuple(k) for k in kids)

    @cached_property
    def arcs(self) -> tuple[Arc, ...]:
        return tuple(sorted((p, v) for v, p in enumerate(self.parent) if p is not None))

    def out_degree(self, v: int) -> int:
        return len(self.children[v])

    def in_degree(self, v: int) -> int:
        return 0 if self.parent[v] is None else 1

    @cached_property
    def component_roots(self) -> tuple[int, ...]:
        return tuple(v for v, p in enumerate(self.parent) if p is None)

    @cached_property
    def component_of(self) -> tuple[int, ...]:
        comp = [-1] * self.dag.n
        for r in self.component_roots:
            stack = [r]
            while stack:
                u = stack.pop()
                comp[u] = r
                stack.extend(self.children[u])
        return tuple(comp)

    def with_arcs(self, arcs: Iterable[Arc]) -> Branching:
        parent = list(self.parent)
        for u, v in arcs:
            if parent[v] is not None:
                raise InvalidBranching(f"node {v} already has parent {parent[v]}")
            parent[v] = u
        return Branching(self.dag, tuple(parent))

    def contains(self, other: Branching) -> bool:
        return all(p is None or p == q for p, q in zip(other.parent, self.parent))

    def is_spanning_arborescence(self) -> bool:
        return self.component_roots == (self.dag.root,)

    def as_mapping(self) -> Mapping[int, int]:
        return {v: p for v, p in enumerate(self.parent) if p is not None}


def leaves(branching: Branching) -> int:
    """Number of out-degree-0 nodes; isolated nodes count as leaves."""
    return sum(1 for kids in branching.children if not kids)


def is_t_branching(branching: Branching, t: int) -> bool:
    if t < 1:
        raise ValueError("t must be positive")
    return all(not kids or len(kids) >= t for kids in branching.children)


def component_stats(branching: Branching) -> tuple[int, int]:
    """Return ``(N, k)``: nodes in, and number of, components with an arc."""
    sizes: dict[int, int] = {}
    for r in branching.component_of:
        sizes[r] = sizes.get(r, 0) + 1
    nontrivial = [s for s in sizes.values() if s >= 2]
    return sum(nontrivial), len(nontrivial)
