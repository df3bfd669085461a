"""Hereditary {2,3}-collections and their weighted intersection multigraphs.

A candidate is a 2-set or 3-set of ground elements. Two candidates are
adjacent when their sets meet; the multigraph view carries ``|U_x & U_y|``
parallel edges, which :meth:`IntersectionGraph.multiplicity` reports. Vertex
weights are ``|U| - 1``, so only weights 1 and 2 occur.
"""

from __future__ import annotations

import enum
import itertools
from collections.abc import Hashable, Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

from arborleaf import kernels
from arborleaf.errors import InvalidCollection

Element = Hashable


@dataclass(frozen=True)
class Candidate:
    """One expansion: a labelled 2- or 3-set of elements.

    ``anchor`` is the DAG node whose arcs realise the expansion (``None`` for
    synthetic collections). ``parent`` is the index of the 3-set candidate a
    derived 2-set was cut from.
    """

    label: str
    elements: frozenset
    anchor: int | None = None
    parent: int | None = None

    @property
    def weight(self) -> int:
        return len(self.elements) - 1

    def sorted_elements(self) -> list:
        return sorted(self.elements)


@dataclass(frozen=True)
class HereditaryCollection:
    candidates: tuple[Candidate, ...]

    def __post_init__(self) -> None:
        labels = set()
        present = {c.elements for c in self.candidates}
        for c in self.candidates:
            if c.label in labels:
                raise InvalidCollection(f"duplicate candidate id {c.label!r}")
            labels.add(c.label)
            if len(c.elements) not in (2, 3):
                raise InvalidCollection(f"candidate {c.label!r} has {len(c.elements)} elements")
            if len(c.elements) == 3:
                for pair in itertools.combinations(sorted(c.elements), 2):
                    if frozenset(pair) not in present:
                        raise InvalidCollection(
                            f"3-set {c.label!r} lacks its 2-subset {set(pair)}"
                        )

    @classmethod
    def close(cls, sets: Iterable[tuple[str, Iterable[Element]]]) -> HereditaryCollection:
        """Build a collection from ``(label, set)`` pairs, adding for every
        3-set ``v = {a,b,c}`` the derived candidates ``v_a, v_b, v_c``."""
        out: list[Candidate] = []
        for label, elems in sets:
            fs = frozenset(elems)
            out.append(Candidate(label, fs))
            if len(fs) == 3:
                idx = len(out) - 1
                for drop in sorted(fs):
                    out.append(Candidate(f"{label}_{drop}", fs - {drop}, parent=idx))
        return cls(tuple(out))

    def __len__(self) -> int:
        return len(self.candidates)

    def index(self, label: str) -> int:
        for i, c in enumerate(self.candidates):
            if c.label == label:
                return i
        raise KeyError(label)


class Potential(enum.Enum):
    """Objective driving the local search: sum of ``w^2`` or ``(w+1)^2``."""

    W2 = "w2"
    W2_PLUS = "w2plus"

    def of(self, weight: int) -> int:
        return weight * weight if self is Potential.W2 else (weight + 1) * (weight + 1)


@dataclass(frozen=True)
class IntersectionGraph:
    """Weighted intersection multigraph of a collection.

    Vertex ``i`` is ``collection.candidates[i]``. ``weights`` may be
    overridden with arbitrary positive integers, which keeps the local-search
    engine usable outside the {1,2} class.
    """

    collection: HereditaryCollection
    weights: tuple[int, ...]
    neighbor_masks: tuple[int, ...]
    incidence: dict = field(compare=False, repr=False)

    @property
    def n(self) -> int:
        return len(self.weights)

    def sets(self, v: int) -> frozenset:
        return self.collection.candidates[v].elements

    def label(self, v: int) -> str:
        return self.collection.candidates[v].label

    def index(self, label: str) -> int:
        return self.collection.index(label)

    def multiplicity(self, x: int, y: int) -> int:
        return len(self.sets(x) & self.sets(y))

    def adjacent(self, x: int, y: int) -> bool:
        return bool((self.neighbor_masks[x] >> y) & 1)

    def neighbors(self, v: int) -> list[int]:
        return [u for u in range(self.n) if (self.neighbor_masks[v] >> u) & 1]

    def is_independent(self, members: Iterable[int]) -> bool:
        mask = 0
        for v in members:
            if mask & (1 << v) or self.neighbor_masks[v] & mask:
                return False
            mask |= 1 << v
        return True

    def weight_of(self, members: Iterable[int]) -> int:
        return sum(self.weights[v] for v in members)

    def potential_of(self, members: Iterable[int], potential: Potential) -> int:
        return sum(potential.of(self.weights[v]) for v in members)

    @cached_property
    def unit_weights(self) -> bool:
        return all(w == len(self.sets(v)) - 1 for v, w in enumerate(self.weights))

    @cached_property
    def k4_members(self) -> dict[int, tuple[int, int, int]]:
        """For each 3-set vertex, the three 2-subset vertices forming its K4.

        Provenance links win; otherwise the lowest-index candidate with the
        right set is used.
        """
        by_set: dict[frozenset, list[int]] = {}
        for i, c in enumerate(self.collection.candidates):
            by_set.setdefault(c.elements, []).append(i)
        out = {}
        for v, c in enumerate(self.collection.candidates):
            if len(c.elements) != 3:
                continue
            picks = []
            for drop in sorted(c.elements):
                options = by_set[c.elements - {drop}]
                linked = [i for i in options if self.collection.candidates[i].parent == v]
                picks.append(linked[0] if linked else options[0])
            out[v] = tuple(picks)
        return out


def build_intersection_graph(
    collection: HereditaryCollection, weights: Sequence[int] | None = None
) -> IntersectionGraph:
    cands = collection.candidates
    incidence: dict = {}
    for i, c in enumerate(cands):
        for e in c.elements:
            incidence.setdefault(e, []).append(i)
    masks = [0] * len(cands)
    for members in incidence.values():
        for i in members:
            for j in members:
                if i != j:
                    masks[i] |= 1 << j
    if weights is None:
        weights = [c.weight for c in cands]
    elif len(weights) != len(cands) or any(w <= 0 for w in weights):
        raise ValueError("weights must be positive, one per candidate")
    return IntersectionGraph(
        collection,
        tuple(int(w) for w in weights),
        tuple(masks),
        {e: tuple(m) for e, m in incidence.items()},
    )


@dataclass(frozen=True)
class IndependentSet:
    members: frozenset[int]
    weight: int
    w2: int
    w2_plus: int
    #: improvement steps the local search took to reach this set
    improvements: int = 0

    @classmethod
    def of(cls, graph: IntersectionGraph, members: Iterable[int], improvements: int = 0) -> IndependentSet:
        members = frozenset(members)
        if not graph.is_independent(members):
            raise ValueError("members are not independent")
        return cls(
            members,
            graph.weight_of(members),
            graph.potential_of(members, Potential.W2),
            graph.potential_of(members, Potential.W2_PLUS),
            improvements,
        )

    def potential(self, potential: Potential) -> int:
        return self.w2 if potential is Potential.W2 else self.w2_plus

    def labels(self, graph: IntersectionGraph) -> list[str]:
        return sorted(graph.label(v) for v in self.members)

    def mask(self) -> int:
        m = 0
        for v in self.members:
            m |= 1 << v
        return m


@dataclass(frozen=True)
class Claw:
    """Talons plus an optional center (absent only for 1-claws)."""

    center: int | None
    talons: tuple[int, ...]


def swap(graph: IntersectionGraph, members: Iterable[int], talons: Iterable[int]) -> frozenset[int]:
    """``(A | T) - N(T)``."""
    talons = list(talons)
    nt = 0
    for t in talons:
        nt |= graph.neighbor_masks[t]
    return frozenset(v for v in members if not (nt >> v) & 1) | frozenset(talons)


def find_improving_claw(
    graph: IntersectionGraph, independent: IndependentSet, potential: Potential
) -> Claw | None:
    """First claw (deterministic order) whose talons raise the potential."""
    pot = [potential.of(w) for w in graph.weights]
    hit = kernels.find_claw(graph.neighbor_masks, pot, independent.mask())
    if hit is None:
        return None
    center, talons = hit
    return Claw(None if center < 0 else center, tuple(talons))


# --- structural verification ------------------------------------------------


@dataclass
class StructureReport:
    no_four_claw: bool = True
    three_claw_centers_heavy: bool = True
    k4_present: bool = True
    domination: bool = True
    single_neighbors: bool = True
    witnesses: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.no_four_claw
            and self.three_claw_centers_heavy
            and self.k4_present
            and self.domination
            and self.single_neighbors
        )

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "no_four_claw": self.no_four_claw,
            "three_claw_centers_heavy": self.three_claw_centers_heavy,
            "k4_present": self.k4_present,
            "domination": self.domination,
            "single_neighbors": self.single_neighbors,
            "witnesses": list(self.witnesses),
        }


def _max_independent_in(graph: IntersectionGraph, pool: list[int], cap: int) -> list[int] | None:
    # An independent subset of ``pool`` of size ``cap`` if one exists.
    nbr = graph.neighbor_masks

    def rec(start: int, blocked: int, picked: list[int]) -> list[int] | None:
        if len(picked) == cap:
            return list(picked)
        for i in range(start, len(pool)):
            if len(pool) - i < cap - len(picked):
                return None
            v = pool[i]
            if not (blocked >> v) & 1:
                picked.append(v)
                hit = rec(i + 1, blocked | nbr[v], picked)
                picked.pop()
                if hit is not None:
                    return hit
        return None

    return rec(0, 0, [])


def verify_structure(graph: IntersectionGraph) -> StructureReport:
    """Check the three structural properties of weighted {2,3}-intersection graphs.

    (i) no 4-claw, and every 3-claw has a weight-2 center; (ii) every
    weight-2 vertex ``v`` dominates the neighbourhood of its K4; (iii) every
    single neighbour of ``v`` has exactly two weight-1 neighbours in that K4.
    """
    rep = StructureReport()
    lab = graph.label
    for z in range(graph.n):
        nbrs = graph.neighbors(z)
        four = _max_independent_in(graph, nbrs, 4)
        if four is not None:
            rep.no_four_claw = False
            rep.witnesses.append(f"4-claw centered at {lab(z)}: {[lab(t) for t in four]}")
        if graph.weights[z] != 2:
            three = _max_independent_in(graph, nbrs, 3)
            if three is not None:
                rep.three_claw_centers_heavy = False
                rep.witnesses.append(
                    f"3-claw with weight-{graph.weights[z]} center {lab(z)}: {[lab(t) for t in three]}"
                )
    for v, k4 in graph.k4_members.items():
        if graph.weights[v] != 2:
            continue
        if any(graph.multiplicity(v, y) != 2 for y in k4) or any(
            graph.multiplicity(a, b) != 1 for a, b in itertools.combinations(k4, 2)
        ):
            rep.k4_present = False
            rep.witnesses.append(f"K4 of {lab(v)} malformed")
        closed = graph.neighbor_masks[v] | (1 << v)
        for y in k4:
            stray = graph.neighbor_masks[y] & ~closed
            if stray:
                rep.domination = False
                rep.witnesses.append(f"{lab(v)} does not dominate N({lab(y)})")
        for u in graph.neighbors(v):
            if graph.multiplicity(u, v) != 1:
                continue
            count = sum(1 for y in k4 if graph.adjacent(u, y))
            if count != 2:
                rep.single_neighbors = False
                rep.witnesses.append(
                    f"single neighbour {lab(u)} of {lab(v)} meets {count} K4 vertices"
                )
    return rep
