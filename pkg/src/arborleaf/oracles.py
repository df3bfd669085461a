"""Exact solvers used as ground truth, and the 3D-matching reduction.

Nothing here approximates: every search has an explicit node budget and
raises :class:`~arborleaf.errors.BudgetExceeded` instead of truncating.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass

from arborleaf import kernels
from arborleaf.clawgraph import (
    HereditaryCollection,
    IndependentSet,
    IntersectionGraph,
    build_intersection_graph,
)
from arborleaf.errors import BudgetExceeded, MalformedInput
from arborleaf.graph import Branching, RootedDag, leaves

DEFAULT_BUDGET = 10**7


def default_budget() -> int:
    raw = os.environ.get("ARBORLEAF_ORACLE_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


def exact_max_leaf(dag: RootedDag, budget: int | None = None) -> tuple[int, Branching]:
    """Maximum leaf count over spanning arborescences, with a witness.

    Branch-and-bound over parent functions (one in-arc per non-root node).
    """
    budget = default_budget() if budget is None else budget
    order = [v for v in dag.topological_order if v != dag.root]
    in_mask = [sum(1 << u for u in dag.in_neighbors[v]) for v in range(dag.n)]
    best, parent, _ = kernels.max_leaf_bnb(order, in_mask, dag.n, budget)
    witness = Branching(dag, tuple(None if p < 0 else p for p in parent))
    assert witness.is_spanning_arborescence() and leaves(witness) == best
    return best, witness


def exact_max_leaf_by_arcs(dag: RootedDag, budget: int | None = None) -> int:
    """Second, structurally different oracle: recurse over arc subsets.

    Each arc is either taken or skipped, keeping in-degree <= 1; at the leaves
    of the recursion the subset must have ``n - 1`` arcs and reach every node
    from the root. Exponential in the arc count; for cross-checks only.
    """
    budget = default_budget() if budget is None else budget
    arcs = list(dag.arcs)
    n = dag.n
    has_parent = [False] * n
    children: list[list[int]] = [[] for _ in range(n)]
    best = -1
    nodes = 0

    def spanning() -> bool:
        seen = {dag.root}
        stack = [dag.root]
        while stack:
            u = stack.pop()
            for v in children[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == n

    def rec(i: int, taken: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded("exact_max_leaf_by_arcs", budget)
        if taken + (len(arcs) - i) < n - 1:
            return
        if taken == n - 1:
            if spanning():
                best = max(best, sum(1 for c in children if not c))
            return
        u, v = arcs[i]
        if not has_parent[v] and v != dag.root:
            has_parent[v] = True
            children[u].append(v)
            rec(i + 1, taken + 1)
            children[u].pop()
            has_parent[v] = False
        rec(i + 1, taken)

    rec(0, 0)
    return best


def exact_wmis(graph: IntersectionGraph, budget: int | None = None) -> tuple[int, IndependentSet]:
    """Maximum-weight independent set by branch-and-bound."""
    budget = default_budget() if budget is None else budget
    best, mask, _ = kernels.mwis_bnb(graph.neighbor_masks, graph.weights, budget)
    members = [v for v in range(graph.n) if (mask >> v) & 1]
    witness = IndependentSet.of(graph, members)
    assert witness.weight == best
    return best, witness


def brute_force_wmis(graph: IntersectionGraph) -> int:
    """Enumerate every vertex subset; for graphs of a dozen vertices or so."""
    best = 0
    for r in range(1, graph.n + 1):
        for combo in itertools.combinations(range(graph.n), r):
            if graph.is_independent(combo):
                best = max(best, graph.weight_of(combo))
    return best


# --- 3D matching ------------------------------------------------------------


@dataclass(frozen=True)
class ThreeDMInstance:
    """Triples ``(x, y, z)`` over three disjoint index ranges ``[0, q)``."""

    q: int
    triples: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        if self.q < 1:
            raise ValueError("q must be positive")
        for t in self.triples:
            if len(t) != 3 or not all(0 <= c < self.q for c in t):
                raise ValueError(f"triple {t} is out of range for q={self.q}")

    def element_sets(self) -> list[frozenset[int]]:
        # X, Y, Z are laid out as [0, q), [q, 2q), [2q, 3q).
        q = self.q
        return [frozenset((x, q + y, 2 * q + z)) for x, y, z in self.triples]


def parse_3dm(text: str) -> ThreeDMInstance:
    """Read the line format: ``q`` on the first line, then ``x y z`` per line."""
    rows = []
    q = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        parts = stripped.split()
        try:
            values = [int(p) for p in parts]
        except ValueError:
            col = next(i for i, p in enumerate(parts) if not p.lstrip("-").isdigit())
            raise MalformedInput(f"non-integer token {parts[col]!r}", lineno, line.index(parts[col]) + 1)
        if q is None:
            if len(values) != 1:
                raise MalformedInput("header must be a single integer q", lineno, 1)
            q = values[0]
            continue
        if len(values) != 3:
            raise MalformedInput(f"expected 3 indices, got {len(values)}", lineno, 1)
        rows.append(tuple(values))
    if q is None:
        raise MalformedInput("empty 3DM file", 1, 1)
    try:
        return ThreeDMInstance(q, tuple(rows))
    except ValueError as exc:
        raise MalformedInput(str(exc)) from exc


def format_3dm(inst: ThreeDMInstance) -> str:
    return "".join([f"{inst.q}\n"] + [f"{x} {y} {z}\n" for x, y, z in inst.triples])


def reduce_3dm(inst: ThreeDMInstance) -> IntersectionGraph:
    """Triples plus all their 2-subsets, as a weighted {2,3}-intersection graph."""
    collection = HereditaryCollection.close(
        (f"s{i}", s) for i, s in enumerate(inst.element_sets())
    )
    return build_intersection_graph(collection)


def has_perfect_3dm(inst: ThreeDMInstance) -> bool:
    """Direct backtracking: cover each X index by one triple, disjointly."""
    by_x: list[list[tuple[int, int]]] = [[] for _ in range(inst.q)]
    for x, y, z in sorted(set(inst.triples)):
        by_x[x].append((y, z))

    def rec(x: int, used_y: int, used_z: int) -> bool:
        if x == inst.q:
            return True
        for y, z in by_x[x]:
            if not (used_y >> y) & 1 and not (used_z >> z) & 1:
                if rec(x + 1, used_y | 1 << y, used_z | 1 << z):
                    return True
        return False

    return rec(0, 0, 0)


def decide_3dm(inst: ThreeDMInstance, budget: int | None = None) -> bool:
    """Perfect matching exists iff the reduction has an independent set of weight 2q."""
    opt, _ = exact_wmis(reduce_3dm(inst), budget)
    return opt >= 2 * inst.q


def random_3dm(q: int, count: int, rng) -> ThreeDMInstance:
    triples = tuple(
        (rng.below(q), rng.below(q), rng.below(q)) for _ in range(count)
    )
    return ThreeDMInstance(q, triples)
