import networkx as nx
import pytest
from conftest import rooted_dags
from hypothesis import given
from hypothesis import strategies as st

from arborleaf.errors import (
    ArcOutOfRange,
    CycleDetected,
    DuplicateArc,
    InvalidBranching,
    SelfLoop,
    UnreachableNode,
)
from arborleaf.graph import Branching, component_stats, is_t_branching, leaves, validate_dag


def star(k):
    return validate_dag(k + 1, [(0, v) for v in range(1, k + 1)])


def path(n):
    return validate_dag(n, [(i, i + 1) for i in range(n - 1)])


class TestValidate:
    def test_single_node(self):
        d = validate_dag(1, [], root=0)
        assert d.n == 1 and d.arcs == () and d.topological_order == (0,)

    def test_two_cycle(self):
        with pytest.raises(CycleDetected) as exc:
            validate_dag(2, [(0, 1), (1, 0)])
        assert sorted(exc.value.cycle) == [0, 1]

    def test_unreachable(self):
        with pytest.raises(UnreachableNode) as exc:
            validate_dag(3, [(0, 1)])
        assert exc.value.node == 2

    def test_self_loop(self):
        with pytest.raises(SelfLoop):
            validate_dag(2, [(0, 1), (1, 1)])

    def test_duplicate(self):
        with pytest.raises(DuplicateArc):
            validate_dag(2, [(0, 1), (0, 1)])

    def test_out_of_range(self):
        with pytest.raises(ArcOutOfRange):
            validate_dag(2, [(0, 2)])

    def test_arcs_sorted(self):
        d = validate_dag(4, [(2, 3), (0, 2), (0, 1), (1, 3)])
        assert d.arcs == ((0, 1), (0, 2), (1, 3), (2, 3))

    def test_cycle_not_through_root(self):
        with pytest.raises(CycleDetected) as exc:
            validate_dag(4, [(0, 1), (1, 2), (2, 3), (3, 1)])
        cyc = exc.value.cycle
        assert all((cyc[i], cyc[(i + 1) % len(cyc)]) in {(1, 2), (2, 3), (3, 1)} for i in range(len(cyc)))


@given(st.integers(2, 7), st.data())
def test_validate_agrees_with_networkx(n, data):
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    arcs = data.draw(st.lists(st.sampled_from(pairs), unique=True, max_size=12))
    g = nx.DiGraph()
    g.add_nodes_from(range(n))
    g.add_edges_from(arcs)
    expected = nx.is_directed_acyclic_graph(g) and len(nx.descendants(g, 0)) == n - 1
    try:
        validate_dag(n, arcs, root=0)
        ok = True
    except (CycleDetected, UnreachableNode):
        ok = False
    assert ok == expected


@given(rooted_dags())
def test_topological_order_is_valid(d):
    pos = {v: i for i, v in enumerate(d.topological_order)}
    assert sorted(pos) == list(range(d.n))
    assert all(pos[u] < pos[v] for u, v in d.arcs)
    assert d.topological_order[0] == d.root


class TestLeaves:
    def test_empty(self):
        assert leaves(Branching.empty(star(4))) == 5

    def test_single_arc(self):
        d = validate_dag(2, [(0, 1)])
        assert leaves(Branching.from_arcs(d, [(0, 1)])) == 1

    def test_star(self):
        d = star(4)
        assert leaves(Branching.from_arcs(d, d.arcs)) == 4


class TestTBranching:
    def test_star_t4(self):
        d = star(4)
        assert is_t_branching(Branching.from_arcs(d, d.arcs), 4)

    def test_path_t2(self):
        d = path(4)
        assert not is_t_branching(Branching.from_arcs(d, d.arcs), 2)

    @pytest.mark.parametrize("t", [1, 2, 5, 100])
    def test_empty_vacuous(self, t):
        assert is_t_branching(Branching.empty(path(3)), t)


class TestComponentStats:
    def test_empty(self):
        assert component_stats(Branching.empty(star(4))) == (0, 0)

    def test_single_arc(self):
        d = star(4)
        assert component_stats(Branching.from_arcs(d, [(0, 1)])) == (2, 1)

    def test_two_disjoint_arcs(self):
        d = validate_dag(6, [(0, 1), (0, 2), (2, 3), (0, 4), (4, 5)])
        assert component_stats(Branching.from_arcs(d, [(2, 3), (4, 5)])) == (4, 2)


class TestBranchingInvariants:
    def test_rejects_foreign_arc(self):
        with pytest.raises(InvalidBranching):
            Branching.from_arcs(path(3), [(0, 2)])

    def test_rejects_two_parents(self):
        d = validate_dag(3, [(0, 1), (0, 2), (1, 2)])
        with pytest.raises(InvalidBranching):
            Branching.from_arcs(d, [(0, 2), (1, 2)])

    def test_with_arcs_and_contains(self):
        d = star(3)
        b = Branching.from_arcs(d, [(0, 1)])
        c = b.with_arcs([(0, 2)])
        assert c.contains(b) and not b.contains(c)
        assert set(c.arcs) == {(0, 1), (0, 2)}


@given(rooted_dags(), st.data())
def test_branching_accounting(d, data):
    keep = {}
    for v in range(d.n):
        if d.in_neighbors[v] and data.draw(st.booleans()):
            keep[v] = data.draw(st.sampled_from(d.in_neighbors[v]))
    b = Branching(d, tuple(keep.get(v) for v in range(d.n)))
    internal = sum(1 for v in range(d.n) if b.out_degree(v) >= 1)
    assert leaves(b) == d.n - internal
    big_n, k = component_stats(b)
    assert 2 * k <= big_n <= d.n
    g = nx.Graph()
    g.add_nodes_from(range(d.n))
    g.add_edges_from(b.arcs)
    assert nx.number_connected_components(g) == d.n - big_n + k
    assert len(b.component_roots) == d.n - big_n + k


@given(rooted_dags())
def test_any_parent_function_spans(d):
    # one in-arc per non-root node always yields a spanning arborescence
    parent = tuple(d.in_neighbors[v][0] if v != d.root else None for v in range(d.n))
    assert Branching(d, parent).is_spanning_arborescence()
