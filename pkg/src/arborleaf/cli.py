"""Command-line front end: ``arborleaf {solve,compare,verify,gen,reduce-3dm,export-dot}``.

Exit codes: 0 ok, 2 input error, 3 bound or certificate violation, 4 oracle
budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from arborleaf import oracles
from arborleaf.branching import extract_candidates
from arborleaf.clawgraph import IntersectionGraph, build_intersection_graph, verify_structure
from arborleaf.errors import ArborleafError, BudgetExceeded, CertificateViolated, MalformedInput
from arborleaf.graph import RootedDag
from arborleaf.instances import (
    FIXTURES,
    InstanceDescriptor,
    XorShift64Star,
    deserialize,
    export_dot,
    fixture,
    serialize,
    serialize_trace,
)
from arborleaf.pipeline import Solver, check_certificates, maxleaves_12mis

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VIOLATION = 3
EXIT_BUDGET = 4


def fmt_ratio(r: Fraction | None) -> str:
    if r is None:
        return "-"
    return f"{r.numerator}/{r.denominator} ({float(r):.6f})"


def load_instance(spec: str) -> RootedDag | IntersectionGraph:
    """A JSON file path, or a fixture name when no such file exists."""
    path = Path(spec)
    if not path.exists() and spec in FIXTURES:
        return fixture(spec)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedInput(f"cannot read {spec}: {exc.strerror}") from exc
    return deserialize(text)


# --- reports ----------------------------------------------------------------


@dataclass
class RunReport:
    instance: str
    solver: str
    value: int
    opt: int | None
    bound: Fraction
    certificates: dict = field(default_factory=dict)
    structure_ok: bool = True
    improvements: int = 0
    step_bound: int = 0
    wall_time: float | None = None

    @property
    def ratio(self) -> Fraction | None:
        if self.opt is None:
            return None
        # A zero-valued solution only arises on instances whose optimum is 0 too.
        return Fraction(self.opt, self.value) if self.value else Fraction(1 if self.opt == 0 else 10**9)

    @property
    def flagged(self) -> bool:
        r = self.ratio
        return (
            (r is not None and r > self.bound)
            or not all(self.certificates.values())
            or not self.structure_ok
            or self.improvements > self.step_bound
        )

    def as_dict(self) -> dict:
        r = self.ratio
        out = {
            "instance": self.instance,
            "solver": self.solver,
            "value": self.value,
            "opt": self.opt,
            "ratio": None if r is None else str(r),
            "ratio_decimal": None if r is None else f"{float(r):.6f}",
            "bound": str(self.bound),
            "certificates": self.certificates,
            "structure_ok": self.structure_ok,
            "improvements": self.improvements,
            "step_bound": self.step_bound,
            "flagged": self.flagged,
        }
        if self.wall_time is not None:
            out["wall_time"] = round(self.wall_time, 6)
        return out


def evaluate(
    name: str,
    instance: RootedDag | IntersectionGraph,
    solver: Solver,
    budget: int | None,
    with_oracle: bool = True,
    timing: bool = False,
) -> RunReport:
    """Run one solver on one instance and check everything checkable."""
    start = time.perf_counter()
    if isinstance(instance, RootedDag):
        _, trace = maxleaves_12mis(instance, solver)
        opt = oracles.exact_max_leaf(instance, budget)[0] if with_oracle else None
        certs = check_certificates(trace, opt, raise_on_failure=False).checks
        graph = build_intersection_graph(extract_candidates(instance, trace.f1))
        report = RunReport(
            name, solver.value, trace.leaves, opt, solver.ratio, certs,
            verify_structure(graph).ok, trace.improvements, 9 * graph.n,
        )
    else:
        found = solver.run(instance)
        opt = oracles.exact_wmis(instance, budget)[0] if with_oracle else None
        report = RunReport(
            name, solver.value, found.weight, opt, solver.alpha, {},
            verify_structure(instance).ok, found.improvements, 9 * instance.n,
        )
    if timing:
        report.wall_time = time.perf_counter() - start
    return report


# --- generator parameters ---------------------------------------------------


def parse_gen(spec: str) -> dict[str, list[str]]:
    """``n=3..12,density=0.2|0.4|0.7`` -> choices per parameter."""
    out: dict[str, list[str]] = {}
    for part in filter(None, (p.strip() for p in spec.split(","))):
        if "=" not in part:
            raise MalformedInput(f"generator parameter {part!r} lacks '='")
        key, value = (s.strip() for s in part.split("=", 1))
        if ".." in value:
            lo, hi = value.split("..", 1)
            try:
                out[key] = [str(i) for i in range(int(lo), int(hi) + 1)]
            except ValueError as exc:
                raise MalformedInput(f"bad range {value!r}") from exc
        else:
            out[key] = value.split("|")
        if not out[key]:
            raise MalformedInput(f"empty choice set for {key!r}")
    return out


def descriptors(kind: str, choices: dict[str, list[str]], count: int, seed: int) -> list[InstanceDescriptor]:
    rng = XorShift64Star(seed)
    out = []
    for _ in range(count):
        params = {k: v[rng.below(len(v))] if len(v) > 1 else v[0] for k, v in sorted(choices.items())}
        out.append(InstanceDescriptor.make(kind, rng.next_u64(), **params))
    return out


def _eval_descriptor(args: tuple) -> RunReport:
    desc, solver, budget, timing = args
    return evaluate(str(desc), desc.build(), solver, budget, timing=timing)


# --- subcommands ------------------------------------------------------------


def cmd_solve(args: argparse.Namespace) -> int:
    instance = load_instance(args.input)
    solver = Solver(args.solver)
    if isinstance(instance, RootedDag):
        tree, trace = maxleaves_12mis(instance, solver)
        check_certificates(trace)
        print(f"leaves: {trace.leaves}")
        if args.verbose:
            for u, v in tree.arcs:
                print(f"  {instance.label(u)} -> {instance.label(v)}")
        if args.trace:
            Path(args.trace).write_text(serialize_trace(trace), encoding="utf-8")
    else:
        found = solver.run(instance)
        print(f"weight: {found.weight}")
        print("members: " + " ".join(found.labels(instance)))
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    solver = Solver(args.solver)
    budget = args.oracle_budget
    if args.input_dir:
        paths = sorted(Path(args.input_dir).glob("*.json"))
        if args.count is not None:
            paths = paths[: args.count]
        jobs = [(p.name, load_instance(str(p))) for p in paths]
        reports = [evaluate(name, inst, solver, budget, timing=args.timing) for name, inst in jobs]
    else:
        descs = sorted(descriptors(args.kind, parse_gen(args.gen), args.count or 0, args.seed))
        work = [(d, solver, budget, args.timing) for d in descs]
        if args.workers > 1 and len(work) > 1:
            with ProcessPoolExecutor(args.workers) as pool:
                reports = list(pool.map(_eval_descriptor, work, chunksize=16))
        else:
            reports = [_eval_descriptor(w) for w in work]

    ratios = [r.ratio for r in reports if r.ratio is not None]
    worst = max(ratios) if ratios else None
    violations = sum(r.flagged for r in reports)
    if args.json:
        for r in reports:
            print(json.dumps(r.as_dict(), sort_keys=True))
        print(json.dumps({
            "aggregate": True,
            "count": len(reports),
            "max_ratio": None if worst is None else str(worst),
            "max_ratio_decimal": None if worst is None else f"{float(worst):.6f}",
            "bound": str(reports[0].bound if reports else solver.ratio),
            "violations": violations,
        }, sort_keys=True))
    else:
        width = max([len("instance")] + [len(r.instance) for r in reports])
        print(f"{'instance':<{width}}  {'ALG':>5}  {'OPT':>5}  ratio")
        for r in reports:
            mark = "  VIOLATION" if r.flagged else ""
            print(f"{r.instance:<{width}}  {r.value:>5}  {r.opt if r.opt is not None else '-':>5}  "
                  f"{fmt_ratio(r.ratio)}{mark}")
        print(f"max ratio {fmt_ratio(worst)}  bound {fmt_ratio(reports[0].bound if reports else solver.ratio)}"
              f"  instances {len(reports)}  violations {violations}")
    return EXIT_VIOLATION if violations else EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    instance = load_instance(args.input)
    if isinstance(instance, RootedDag):
        print(f"valid rooted dag: n={instance.n} arcs={len(instance.arcs)} root={instance.label(instance.root)}")
        return EXIT_OK
    report = verify_structure(instance)
    print(json.dumps(report.as_dict(), indent=1, sort_keys=True))
    return EXIT_OK if report.ok else EXIT_VIOLATION


def cmd_gen(args: argparse.Namespace) -> int:
    if args.kind in ("random-forward", "random-layered"):
        desc = InstanceDescriptor.make(args.kind, args.seed, n=args.n, density=args.density)
    elif args.kind == "reduction":
        desc = InstanceDescriptor.make(args.kind, args.seed, q=args.q, count=args.triples)
    else:
        desc = InstanceDescriptor.make(args.kind, args.seed, name=args.name)
    text = serialize(desc.build(), {"descriptor": str(desc)})
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_reduce_3dm(args: argparse.Namespace) -> int:
    try:
        text = Path(args.input).read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedInput(f"cannot read {args.input}: {exc.strerror}") from exc
    graph = oracles.reduce_3dm(oracles.parse_3dm(text))
    out = serialize(graph)
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return EXIT_OK


def cmd_export_dot(args: argparse.Namespace) -> int:
    instance = load_instance(args.input)
    annotations: dict = {}
    if args.solver:
        solver = Solver(args.solver)
        if isinstance(instance, RootedDag):
            annotations["branching"] = maxleaves_12mis(instance, solver)[0]
        else:
            annotations["chosen"] = sorted(solver.run(instance).members)
    sys.stdout.write(export_dot(instance, annotations))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arborleaf", description="Maximum-leaf spanning arborescences on rooted DAGs.")
    sub = parser.add_subparsers(dest="command", required=True)
    solvers = [s.value for s in Solver]

    p = sub.add_parser("solve", help="run the pipeline on a DAG (or the local search on a collection)")
    p.add_argument("input", help="JSON file or fixture name")
    p.add_argument("--solver", choices=solvers, default=Solver.SQUARE_PLUS_IMP.value)
    p.add_argument("--trace", help="write the run trace as JSON")
    p.add_argument("-v", "--verbose", action="store_true", help="print the arcs of T")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("compare", help="compare a solver against the exact oracle")
    p.add_argument("input_dir", nargs="?", help="directory of JSON instances (instead of --gen)")
    p.add_argument("--gen", default="n=10,density=0.3", help="e.g. n=3..12,density=0.2|0.4|0.7")
    p.add_argument("--kind", default="random-forward", choices=["random-forward", "random-layered", "reduction"])
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--solver", choices=solvers, default=Solver.SQUARE_PLUS_IMP.value)
    p.add_argument("--oracle-budget", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", action="store_true", help="one JSON object per line")
    p.add_argument("--timing", action="store_true", help="include wall time (reports stop being reproducible)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", help="validate a DAG or check collection structure")
    p.add_argument("input")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="write a descriptor-determined instance")
    p.add_argument("--kind", default="random-forward", choices=["random-forward", "random-layered", "reduction", "fixture"])
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--density", default="3/10")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--triples", type=int, default=4)
    p.add_argument("--name", default="fig2-dag")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("reduce-3dm", help="3D-matching text file to collection JSON")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reduce_3dm)

    p = sub.add_parser("export-dot", help="render an instance (optionally with a solution) as DOT")
    p.add_argument("input")
    p.add_argument("--solver", choices=solvers)
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv: list[str] | None = None) -> int:
    # Without --oracle-budget the oracles fall back to ARBORLEAF_ORACLE_BUDGET.
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CertificateViolated as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (MalformedInput, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ArborleafError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
