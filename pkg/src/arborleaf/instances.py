"""Instance generators, bundled fixtures and serialization.

Random instances come from :class:`XorShift64Star`, seeded through one round
of splitmix64::

    x ^= x >> 12
    x ^= x << 25     (mod 2**64)
    x ^= x >> 27
    out = x * 0x2545F4914F6CDD1D  (mod 2**64)

so a descriptor reproduces the same instance in any language.
"""

from __future__ import annotations

import hashlib
import json
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from arborleaf.clawgraph import (
    Candidate,
    HereditaryCollection,
    IntersectionGraph,
    build_intersection_graph,
)
from arborleaf.errors import InvalidCollection, MalformedInput, UnknownFixture
from arborleaf.graph import Branching, RootedDag, validate_dag

MASK64 = (1 << 64) - 1


def splitmix64(seed: int) -> int:
    z = (seed + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class XorShift64Star:
    """xorshift64* generator; state must be nonzero."""

    def __init__(self, seed: int) -> None:
        self.state = splitmix64(seed & MASK64) or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & MASK64

    def below(self, k: int) -> int:
        """Uniform-ish integer in ``[0, k)`` by multiply-shift."""
        if k <= 0:
            raise ValueError("k must be positive")
        return (self.next_u64() * k) >> 64

    def coin(self, p: Fraction) -> bool:
        """True with probability ``p``, compared exactly: ``u < p * 2**64``."""
        return self.next_u64() * p.denominator < p.numerator << 64


def _as_fraction(density) -> Fraction:
    p = Fraction(density).limit_denominator(10**6) if isinstance(density, float) else Fraction(density)
    if not 0 < p <= 1:
        raise ValueError(f"density must lie in (0, 1], got {density}")
    return p


# --- random generators ------------------------------------------------------


def gen_random_dag(n: int, density, seed: int, kind: str = "random-forward") -> RootedDag:
    """Random rooted DAG on ``0..n-1`` with node 0 as root.

    ``random-forward`` flips a coin for every pair ``u < v``; ``random-layered``
    first sorts nodes ``1..n-1`` into layers and only flips for arcs between
    consecutive layers. Either way a node left without an in-arc gets ``(0, v)``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    p = _as_fraction(density)
    rng = XorShift64Star(seed)
    arcs: list[tuple[int, int]] = []
    if kind == "random-forward":
        for u in range(n):
            for v in range(u + 1, n):
                if rng.coin(p):
                    arcs.append((u, v))
    elif kind == "random-layered":
        layers = max(2, round((n - 1) ** 0.5))
        layer = [0] + sorted(1 + rng.below(layers) for _ in range(n - 1))
        for u in range(n):
            for v in range(u + 1, n):
                if layer[v] == layer[u] + 1 and rng.coin(p):
                    arcs.append((u, v))
    else:
        raise ValueError(f"unknown generator kind {kind!r}")
    has_in = {v for _, v in arcs}
    arcs.extend((0, v) for v in range(1, n) if v not in has_in)
    return validate_dag(n, arcs, root=0)


def random_collection(seed: int, max_candidates: int = 12, ground: int | None = None) -> HereditaryCollection:
    """Random hereditary {2,3}-collection with at most ``max_candidates`` members.

    Each draw is a 3-set (which brings its three 2-subsets along) or a 2-set
    over a small ground set, so intersections are dense.
    """
    rng = XorShift64Star(seed)
    low = max(1, max_candidates // 2)
    target = low + rng.below(max_candidates - low + 1)
    ground = ground or 4 + rng.below(7)
    sets: list[tuple[str, tuple[int, ...]]] = []
    size = 0
    while size < target:
        three = target - size >= 4 and ground >= 3 and rng.below(2) == 0
        k = 3 if three else 2
        chosen: list[int] = []
        while len(chosen) < k:
            e = rng.below(ground)
            if e not in chosen:
                chosen.append(e)
        sets.append((f"v{len(sets)}", tuple(sorted(chosen))))
        size += 4 if three else 1
    return HereditaryCollection.close(sets)


# --- descriptors ------------------------------------------------------------

KINDS = ("random-layered", "random-forward", "fixture", "reduction")


@dataclass(frozen=True, order=True)
class InstanceDescriptor:
    """Everything needed to rebuild an instance bit-for-bit."""

    kind: str
    params: tuple[tuple[str, str], ...]
    seed: int = 0

    @classmethod
    def make(cls, kind: str, seed: int = 0, **params) -> InstanceDescriptor:
        if kind not in KINDS:
            raise ValueError(f"unknown instance kind {kind!r}")
        return cls(kind, tuple(sorted((k, str(v)) for k, v in params.items())), seed & MASK64)

    def param(self, key: str) -> str:
        try:
            return dict(self.params)[key]
        except KeyError:
            raise MalformedInput(f"{self.kind} instances need a {key!r} parameter") from None

    def __str__(self) -> str:
        body = ",".join(f"{k}={v}" for k, v in self.params)
        return f"{self.kind}[{body}]#{self.seed}"

    def build(self) -> RootedDag | IntersectionGraph:
        if self.kind in ("random-forward", "random-layered"):
            return gen_random_dag(
                int(self.param("n")), Fraction(self.param("density")), self.seed, self.kind
            )
        if self.kind == "fixture":
            return fixture(self.param("name"))
        from arborleaf.oracles import random_3dm, reduce_3dm

        rng = XorShift64Star(self.seed)
        return reduce_3dm(random_3dm(int(self.param("q")), int(self.param("count")), rng))


# --- serialization ----------------------------------------------------------


def _sorted_elements(elements: Iterable) -> list:
    try:
        return sorted(elements)
    except TypeError:
        return sorted(elements, key=repr)


def dag_to_obj(dag: RootedDag) -> dict:
    obj: dict = {"n": dag.n, "root": dag.root, "arcs": [list(a) for a in dag.arcs]}
    if dag.labels is not None:
        obj["labels"] = list(dag.labels)
    return obj


def collection_to_obj(collection: HereditaryCollection, weights: Iterable[int] | None = None) -> dict:
    cands = collection.candidates
    rows = []
    for c in cands:
        row: dict = {"id": c.label, "set": _sorted_elements(c.elements)}
        if c.anchor is not None:
            row["anchor"] = c.anchor
        if c.parent is not None:
            row["parent"] = cands[c.parent].label
        rows.append(row)
    obj: dict = {"candidates": rows}
    if weights is not None:
        weights = list(weights)
        if weights != [c.weight for c in cands]:
            obj["weights"] = weights
    return obj


def serialize(instance: RootedDag | IntersectionGraph | HereditaryCollection, annotations: Mapping | None = None) -> str:
    if isinstance(instance, RootedDag):
        obj = dag_to_obj(instance)
    elif isinstance(instance, IntersectionGraph):
        obj = collection_to_obj(instance.collection, instance.weights)
    elif isinstance(instance, HereditaryCollection):
        obj = collection_to_obj(instance)
    else:
        raise TypeError(f"cannot serialize {type(instance).__name__}")
    if annotations:
        obj["annotations"] = dict(annotations)
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(exc.msg, exc.lineno, exc.colno) from exc


def _field(obj: Mapping, key: str, kind: type | tuple[type, ...]):
    if key not in obj:
        raise MalformedInput(f"missing field {key!r}")
    value = obj[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise MalformedInput(f"field {key!r} has the wrong type")
    return value


def dag_from_obj(obj: Mapping) -> RootedDag:
    n = _field(obj, "n", int)
    root = _field(obj, "root", int)
    arcs = _field(obj, "arcs", list)
    parsed = []
    for a in arcs:
        if not (isinstance(a, list) and len(a) == 2 and all(isinstance(x, int) for x in a)):
            raise MalformedInput(f"arc {a!r} is not a pair of integers")
        parsed.append((a[0], a[1]))
    labels = obj.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != n):
        raise MalformedInput("labels must be a list with one entry per node")
    return validate_dag(n, parsed, root=root, labels=labels)


def _element(e):
    if isinstance(e, (int, str)) and not isinstance(e, bool):
        return e
    raise MalformedInput(f"set element {e!r} must be an integer or a string")


def collection_from_obj(obj: Mapping) -> IntersectionGraph:
    rows = _field(obj, "candidates", list)
    ids = {}
    for i, row in enumerate(rows):
        if not isinstance(row, dict):
            raise MalformedInput(f"candidate #{i} is not an object")
        ids.setdefault(_field(row, "id", str), i)
    cands = []
    for row in rows:
        parent = row.get("parent")
        if parent is not None and parent not in ids:
            raise MalformedInput(f"unknown parent id {parent!r}")
        cands.append(
            Candidate(
                row["id"],
                frozenset(_element(e) for e in _field(row, "set", list)),
                anchor=row.get("anchor"),
                parent=None if parent is None else ids[parent],
            )
        )
    try:
        collection = HereditaryCollection(tuple(cands))
        return build_intersection_graph(collection, obj.get("weights"))
    except (InvalidCollection, ValueError) as exc:
        raise MalformedInput(str(exc)) from exc


def deserialize(text: str) -> RootedDag | IntersectionGraph:
    """Parse a DAG or collection document; schema errors raise MalformedInput."""
    obj = _load_json(text)
    if not isinstance(obj, dict):
        raise MalformedInput("top-level value must be an object", 1, 1)
    if "candidates" in obj:
        return collection_from_obj(obj)
    try:
        return dag_from_obj(obj)
    except ValueError as exc:
        raise MalformedInput(str(exc)) from exc


def annotations_of(text: str) -> dict:
    obj = _load_json(text)
    return dict(obj.get("annotations", {})) if isinstance(obj, dict) else {}


# --- fixtures ---------------------------------------------------------------

FIXTURES = ("fig2-dag", "fig8a", "fig8b", "fig9-dag", "fig12")


def _data_file(name: str) -> str:
    return resources.files("arborleaf").joinpath("data", name).read_text(encoding="utf-8")


def fixture_text(name: str) -> str:
    """Raw JSON of a fixture, verified against the committed checksum."""
    if name not in FIXTURES:
        raise UnknownFixture(name)
    text = _data_file(f"{name}.json")
    sums = json.loads(_data_file("checksums.json"))
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    if sums.get(f"{name}.json") != digest:
        raise MalformedInput(f"checksum mismatch for fixture {name}")
    return text


def fixture(name: str) -> RootedDag | IntersectionGraph:
    return deserialize(fixture_text(name))


def fixture_annotations(name: str) -> dict:
    return annotations_of(fixture_text(name))


# --- DOT export -------------------------------------------------------------


def _quote(s) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(instance: RootedDag | IntersectionGraph, annotations: Mapping | None = None) -> str:
    """DOT text with one line per node and one per edge.

    For a DAG, ``annotations["branching"]`` (a :class:`Branching` or arc list)
    is drawn bold. For an intersection graph, ``annotations["chosen"]`` (vertex
    indices or labels) is filled; edges carry their multiplicity.
    """
    annotations = annotations or {}
    lines: list[str] = []
    if isinstance(instance, RootedDag):
        bold = annotations.get("branching", ())
        if isinstance(bold, Branching):
            bold = bold.arcs
        bold = {tuple(a) for a in bold}
        lines.append("digraph arborescence {")
        for v in range(instance.n):
            shape = ', shape="doublecircle"' if v == instance.root else ""
            lines.append(f"  {v} [label={_quote(instance.label(v))}{shape}];")
        for u, v in instance.arcs:
            style = ' [style="bold", penwidth=2]' if (u, v) in bold else ""
            lines.append(f"  {u} -> {v}{style};")
    elif isinstance(instance, IntersectionGraph):
        chosen = set()
        for c in annotations.get("chosen", ()):
            chosen.add(instance.index(c) if isinstance(c, str) else c)
        lines.append("graph intersection {")
        for v in range(instance.n):
            elems = ",".join(map(str, _sorted_elements(instance.sets(v))))
            fill = ', style="filled", fillcolor="lightblue"' if v in chosen else ""
            lines.append(
                f"  {v} [label={_quote(f'{instance.label(v)} {{{elems}}} w={instance.weights[v]}')}{fill}];"
            )
        for u in range(instance.n):
            for v in range(u + 1, instance.n):
                if instance.adjacent(u, v):
                    lines.append(f"  {u} -- {v} [label={instance.multiplicity(u, v)}];")
    else:
        raise TypeError(f"cannot export {type(instance).__name__}")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- pipeline traces --------------------------------------------------------


def trace_to_obj(trace) -> dict:
    return {
        "dag": dag_to_obj(trace.dag),
        "solver": trace.solver,
        "f1": list(trace.f1.parent),
        "f2": list(trace.f2.parent),
        "f3": list(trace.f3.parent),
        "tree": list(trace.tree.parent),
        "chosen": [
            {"id": c.label, "set": sorted(c.elements), "anchor": c.anchor} for c in trace.chosen
        ],
        "metrics": vars(trace.metrics),
        "improvements": trace.improvements,
        "candidate_count": trace.candidate_count,
        "leaves": trace.leaves,
    }


def serialize_trace(trace) -> str:
    return json.dumps(trace_to_obj(trace), indent=1, sort_keys=True) + "\n"


def deserialize_trace(text: str):
    from arborleaf.pipeline import Metrics, PipelineTrace

    obj = _load_json(text)
    if not isinstance(obj, dict):
        raise MalformedInput("trace must be an object", 1, 1)
    try:
        dag = dag_from_obj(_field(obj, "dag", dict))
        forests = [Branching(dag, tuple(_field(obj, k, list))) for k in ("f1", "f2", "f3", "tree")]
        chosen = tuple(
            Candidate(row["id"], frozenset(row["set"]), anchor=row.get("anchor"))
            for row in _field(obj, "chosen", list)
        )
        return PipelineTrace(
            dag,
            _field(obj, "solver", str),
            *forests,
            chosen,
            Metrics(**_field(obj, "metrics", dict)),
            _field(obj, "improvements", int),
            _field(obj, "candidate_count", int),
        )
    except (ValueError, KeyError, TypeError) as exc:
        raise MalformedInput(f"bad trace: {exc}") from exc
