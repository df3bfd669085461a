"""End-to-end maximum-leaf arborescence via weighted independent sets.

1. greedily build a maximal 4-branching ``F1``;
2. collect the 2- and 3-expansions still applicable to ``F1`` as a weighted
   {2,3}-intersection graph and pick an independent set ``I`` with one of the
   local searches;
3. apply the weight-2 members of ``I`` (giving ``F2``), then the weight-1
   members (``F3``), and finish with trivial expansions.

The run keeps every intermediate branching so the leaf-count lower bound and
the optimum upper bound can be checked exactly with rationals.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction

from arborleaf.branching import apply_expansions, extract_candidates, greedy_expand
from arborleaf.clawgraph import (
    Candidate,
    HereditaryCollection,
    IndependentSet,
    IntersectionGraph,
    build_intersection_graph,
)
from arborleaf.errors import CertificateViolated
from arborleaf.graph import Branching, RootedDag, component_stats, is_t_branching, leaves
from arborleaf.wmis import square_imp, square_plus_imp


class Solver(enum.Enum):
    SQUARE_IMP = "squareimp"
    SQUARE_PLUS_IMP = "squareplus"

    @property
    def alpha(self) -> Fraction:
        """Proven approximation ratio of the independent-set local search."""
        return Fraction(3, 2) if self is Solver.SQUARE_IMP else Fraction(7, 5)

    @property
    def ratio(self) -> Fraction:
        """Proven ratio of the whole pipeline, ``max(4/3, alpha)``."""
        return max(Fraction(4, 3), self.alpha)

    def run(self, graph: IntersectionGraph, initial: Iterable[int] | None = None) -> IndependentSet:
        fn = square_imp if self is Solver.SQUARE_IMP else square_plus_imp
        return fn(graph, initial)


@dataclass(frozen=True)
class Metrics:
    n1: int
    k1: int
    n2: int
    k2: int
    n3: int
    k3: int


@dataclass(frozen=True)
class PipelineTrace:
    dag: RootedDag
    solver: str
    f1: Branching
    f2: Branching
    f3: Branching
    tree: Branching
    chosen: tuple[Candidate, ...]
    metrics: Metrics
    improvements: int = 0
    candidate_count: int = 0

    @property
    def leaves(self) -> int:
        return leaves(self.tree)


def complete_from(
    dag: RootedDag,
    f1: Branching,
    collection: HereditaryCollection,
    members: Iterable[int],
    solver: str,
    improvements: int = 0,
) -> PipelineTrace:
    """Apply a chosen independent set to ``F1`` and finish the arborescence."""
    chosen = [collection.candidates[i] for i in sorted(members)]
    heavy = [c for c in chosen if len(c.elements) == 3]
    light = [c for c in chosen if len(c.elements) == 2]
    f2 = apply_expansions(f1, heavy)
    f3 = apply_expansions(f2, light)
    tree = greedy_expand(dag, 1, f3)
    if not tree.is_spanning_arborescence():
        raise AssertionError(f"final branching has roots {tree.component_roots}")
    n1, k1 = component_stats(f1)
    n2, k2 = component_stats(f2)
    n3, k3 = component_stats(f3)
    return PipelineTrace(
        dag,
        solver,
        f1,
        f2,
        f3,
        tree,
        tuple(heavy + light),
        Metrics(n1, k1, n2, k2, n3, k3),
        improvements,
        len(collection),
    )


def maxleaves_12mis(
    dag: RootedDag,
    solver: Solver | str = Solver.SQUARE_PLUS_IMP,
    initial: Iterable[str] | None = None,
) -> tuple[Branching, PipelineTrace]:
    """Spanning arborescence with many leaves, plus the full run trace.

    ``initial`` optionally names candidates (by label) that seed the local
    search; the default starts from the empty set.
    """
    solver = Solver(solver)
    f1 = greedy_expand(dag, 4, Branching.empty(dag))
    collection = extract_candidates(dag, f1)
    graph = build_intersection_graph(collection)
    seed = [graph.index(lbl) for lbl in initial] if initial is not None else None
    found = solver.run(graph, seed)
    trace = complete_from(dag, f1, collection, found.members, solver.value, found.improvements)
    return trace.tree, trace


@dataclass
class CertificateReport:
    lower_bound: Fraction
    upper_bound: Fraction | None
    opt: int | None
    alpha: Fraction
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "lower_bound": str(self.lower_bound),
            "upper_bound": None if self.upper_bound is None else str(self.upper_bound),
            "opt": self.opt,
            "alpha": str(self.alpha),
            "checks": dict(self.checks),
        }


def check_certificates(
    trace: PipelineTrace,
    opt: int | None = None,
    alpha: Fraction | None = None,
    raise_on_failure: bool = True,
) -> CertificateReport:
    """Verify the bookkeeping inequalities of a run with exact arithmetic.

    Always checks the leaf-count lower bound, the monotone ``N_i - k_i``
    chain and the per-phase leaf losses; with ``opt`` also checks the upper
    bound on the optimum and ``opt <= max(4/3, alpha) * leaves(T)``.
    """
    if alpha is None:
        alpha = Solver(trace.solver).alpha
    m = trace.metrics
    d1, d2, d3 = m.n1 - m.k1, m.n2 - m.k2, m.n3 - m.k3
    n = trace.dag.n
    ell = trace.leaves
    lower = Fraction(d1, 12) + Fraction(d2, 6) + Fraction(d3, 2) + 1
    heavy = sum(1 for c in trace.chosen if len(c.elements) == 3)
    light = len(trace.chosen) - heavy
    checks = {
        "leaves(T) >= (N1-k1)/12 + (N2-k2)/6 + (N3-k3)/2 + 1": ell >= lower,
        "N1-k1 <= N2-k2 <= N3-k3": d1 <= d2 <= d3,
        "leaves(F1) >= n - (N1-k1)/4": leaves(trace.f1) >= n - Fraction(d1, 4),
        "leaves lost F1->F2 == (N2-k2)/3 - (N1-k1)/3 == #weight-2":
            leaves(trace.f1) - leaves(trace.f2) == Fraction(d2 - d1, 3) == heavy,
        "leaves lost F2->F3 == (N3-k3)/2 - (N2-k2)/2 == #weight-1":
            leaves(trace.f2) - leaves(trace.f3) == Fraction(d3 - d2, 2) == light,
        "F1 is a 4-branching, F2 and F3 are 2-branchings": is_t_branching(trace.f1, 4)
        and is_t_branching(trace.f2, 2)
        and is_t_branching(trace.f3, 2),
        "F1 <= F2 <= F3 <= T": trace.f2.contains(trace.f1)
        and trace.f3.contains(trace.f2)
        and trace.tree.contains(trace.f3),
        "T is a spanning arborescence": trace.tree.is_spanning_arborescence(),
    }
    upper = None
    if opt is not None:
        upper = (3 - 2 * alpha) / 3 * d1 + alpha / 6 * d2 + alpha / 2 * d3 + 1
        ratio = max(Fraction(4, 3), alpha)
        checks["opt <= ((3-2a)/3)(N1-k1) + (a/6)(N2-k2) + (a/2)(N3-k3) + 1"] = opt <= upper
        checks["opt <= max(4/3, a) * leaves(T)"] = opt <= ratio * ell
        checks["leaves(T) <= opt"] = ell <= opt
    report = CertificateReport(lower, upper, opt, alpha, checks)
    if raise_on_failure and not report.ok:
        failed = next(k for k, v in checks.items() if not v)
        raise CertificateViolated(
            failed,
            {"leaves": ell, "opt": opt, "alpha": alpha, "N1-k1": d1, "N2-k2": d2, "N3-k3": d3,
             "lower": lower, "upper": upper},
        )
    return report
