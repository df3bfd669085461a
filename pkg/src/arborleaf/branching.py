"""Greedy expansion of branchings and extraction of 2-/3-expansions."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from arborleaf.clawgraph import Candidate, HereditaryCollection
from arborleaf.errors import ConflictingExpansions, PreconditionViolated
from arborleaf.graph import Branching, RootedDag, is_t_branching


@dataclass(frozen=True)
class Expansion:
    """Arcs from an out-degree-0 ``anchor`` to in-degree-0 ``targets``."""

    anchor: int
    targets: frozenset[int]


def eligible_targets(dag: RootedDag, branching: Branching, v: int) -> list[int]:
    """Out-neighbours of ``v`` that have no parent in ``branching``."""
    return [u for u in dag.out_neighbors[v] if branching.parent[u] is None]


def greedy_expand(dag: RootedDag, t: int, forest: Branching) -> Branching:
    """Grow ``forest`` into a maximal spanning ``t``-branching.

    Every out-degree-0 vertex, taken in topological order, absorbs all of its
    parentless out-neighbours when there are at least ``t`` of them. Eligible
    sets only shrink as arcs are added, so one pass is already maximal.
    """
    if t < 1:
        raise ValueError("t must be positive")
    if forest.dag is not dag and forest.dag != dag:
        raise PreconditionViolated("branching belongs to a different dag")
    if not is_t_branching(forest, t + 1):
        raise PreconditionViolated(f"input is not a spanning {t + 1}-branching")
    parent = list(forest.parent)
    outdeg = [len(k) for k in forest.children]
    for v in dag.topological_order:
        if outdeg[v]:
            continue
        targets = [u for u in dag.out_neighbors[v] if parent[u] is None]
        if len(targets) >= t:
            for u in targets:
                parent[u] = v
            outdeg[v] = len(targets)
    return Branching(dag, tuple(parent))


def extract_candidates(dag: RootedDag, f1: Branching) -> HereditaryCollection:
    """All non-trivial expansions applicable to a maximal 4-branching.

    Each out-degree-0 vertex with 2 or 3 parentless out-neighbours yields a
    candidate labelled by the node; a 3-set candidate ``v`` also yields
    ``v_u`` for each ``u`` in its set, carrying the other two elements.
    """
    out: list[Candidate] = []
    for v in range(dag.n):
        if f1.out_degree(v):
            continue
        targets = eligible_targets(dag, f1, v)
        if len(targets) >= 4:
            raise PreconditionViolated(
                f"node {dag.label(v)} still has {len(targets)} eligible targets; "
                "the 4-branching is not maximal"
            )
        if len(targets) < 2:
            continue
        fs = frozenset(targets)
        out.append(Candidate(dag.label(v), fs, anchor=v))
        if len(fs) == 3:
            idx = len(out) - 1
            for u in sorted(fs):
                out.append(Candidate(f"{dag.label(v)}_{dag.label(u)}", fs - {u}, anchor=v, parent=idx))
    return HereditaryCollection(tuple(out))


def apply_expansions(forest: Branching, chosen: Iterable[Candidate]) -> Branching:
    """Add ``anchor -> target`` arcs for each chosen candidate."""
    chosen = list(chosen)
    seen: set[int] = set()
    anchors: set[int] = set()
    arcs = []
    for c in chosen:
        if c.anchor is None:
            raise ConflictingExpansions(f"candidate {c.label!r} has no anchor")
        if c.anchor in anchors or forest.out_degree(c.anchor):
            raise ConflictingExpansions(f"anchor of {c.label!r} is already internal")
        anchors.add(c.anchor)
        for u in c.elements:
            if u in seen or forest.parent[u] is not None:
                raise ConflictingExpansions(f"target {u} of {c.label!r} already has a parent")
            seen.add(u)
            arcs.append((c.anchor, u))
    return forest.with_arcs(arcs)
