from __future__ import annotations

import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from arborleaf.clawgraph import HereditaryCollection, build_intersection_graph
from arborleaf.graph import validate_dag

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_LINES: list[str] = []


@st.composite
def rooted_dags(draw, min_n: int = 1, max_n: int = 9, shuffle: bool = True):
    """Random rooted DAGs; node ids are optionally permuted away from topological order."""
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    has_in = {v for _, v in chosen}
    arcs = chosen + [(0, v) for v in range(1, n) if v not in has_in]
    perm = draw(st.permutations(range(n))) if shuffle else list(range(n))
    return validate_dag(n, [(perm[u], perm[v]) for u, v in arcs], root=perm[0])


@st.composite
def collections(draw, max_sets: int = 5, ground: int = 7):
    sets = draw(
        st.lists(
            st.sets(st.integers(0, ground - 1), min_size=2, max_size=3), min_size=0, max_size=max_sets
        )
    )
    return HereditaryCollection.close((f"c{i}", s) for i, s in enumerate(sets))


@st.composite
def intersection_graphs(draw, max_sets: int = 5, ground: int = 7):
    return build_intersection_graph(draw(collections(max_sets, ground)))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
