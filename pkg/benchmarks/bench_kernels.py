"""Compiled vs pure-Python kernels on inputs big enough to matter.

    python benchmarks/bench_kernels.py [--repeat 3] [--json]
"""

from __future__ import annotations

import argparse
import json
import statistics
import time

from arborleaf import _kernels_py
from arborleaf.clawgraph import Potential, build_intersection_graph
from arborleaf.instances import XorShift64Star, gen_random_dag, random_collection
from arborleaf.oracles import random_3dm, reduce_3dm

try:
    from arborleaf import _kernels as _compiled
except ImportError:
    _compiled = None


def max_leaf_case(n: int, seed: int):
    d = gen_random_dag(n, "1/2", seed, "random-layered")
    order = [v for v in d.topological_order if v != d.root]
    in_mask = [sum(1 << u for u in d.in_neighbors[v]) for v in range(d.n)]
    return lambda mod: mod.max_leaf_bnb(order, in_mask, d.n, 10**9)


def mwis_case(q: int, triples: int, seed: int):
    g = reduce_3dm(random_3dm(q, triples, XorShift64Star(seed)))
    return lambda mod: mod.mwis_bnb(g.neighbor_masks, g.weights, 10**9)


def claw_case(seeds: range):
    graphs = [build_intersection_graph(random_collection(s, 12)) for s in seeds]
    inputs = [(g.neighbor_masks, [Potential.W2_PLUS.of(w) for w in g.weights], 0) for g in graphs]

    def run(mod):
        return [mod.find_claw(nbr, pot, a) for nbr, pot, a in inputs]

    return run


CASES = {
    "max_leaf_bnb layered n=40": max_leaf_case(40, 2),
    "max_leaf_bnb layered n=60": max_leaf_case(60, 2),
    "mwis_bnb 3dm q=5 (48 vertices)": mwis_case(5, 12, 3),
    "mwis_bnb 3dm q=6 (60 vertices)": mwis_case(6, 15, 4),
    "find_claw x2000 (<=12 vertices)": claw_case(range(2000)),
}


def _same(a, b) -> bool:
    # search results must agree; node counts and containers may differ in type
    if isinstance(a, list):
        return all(_same(x, y) for x, y in zip(a, b)) and len(a) == len(b)
    if a is None or b is None:
        return a is b

    def core(r):
        return r[0], r[1] if isinstance(r[1], int) else list(r[1])

    return core(a) == core(b)


def timed(fn, mod, repeat: int) -> float:
    samples = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn(mod)
        samples.append(time.perf_counter() - start)
    return statistics.median(samples)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args()
    rows = []
    for name, fn in CASES.items():
        py = timed(fn, _kernels_py, args.repeat)
        cy = timed(fn, _compiled, args.repeat) if _compiled is not None else None
        if cy is not None and not _same(fn(_compiled), fn(_kernels_py)):
            raise AssertionError(f"kernels disagree on {name}")
        rows.append({"case": name, "python_s": py, "compiled_s": cy, "speedup": py / cy if cy else None})
    if args.json:
        for r in rows:
            print(json.dumps(r))
        return
    print(f"{'case':<34} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for r in rows:
        cy = f"{r['compiled_s']:.4f}" if r["compiled_s"] is not None else "n/a"
        sp = f"{r['speedup']:.1f}x" if r["speedup"] else "-"
        print(f"{r['case']:<34} {r['python_s']:>10.4f} {cy:>10} {sp:>8}")


if __name__ == "__main__":
    main()
