import itertools

import pytest
from conftest import intersection_graphs, rooted_dags
from hypothesis import given

from arborleaf.clawgraph import HereditaryCollection, build_intersection_graph, verify_structure
from arborleaf.errors import BudgetExceeded, MalformedInput
from arborleaf.graph import leaves, validate_dag
from arborleaf.instances import XorShift64Star, fixture, gen_random_dag
from arborleaf.oracles import (
    ThreeDMInstance,
    brute_force_wmis,
    decide_3dm,
    exact_max_leaf,
    exact_max_leaf_by_arcs,
    exact_wmis,
    format_3dm,
    has_perfect_3dm,
    parse_3dm,
    random_3dm,
    reduce_3dm,
)


def naive_3dm(inst):
    # try every q-subset of triples; independent of the backtracking search
    for combo in itertools.combinations(inst.triples, inst.q):
        if all(len({t[i] for t in combo}) == inst.q for i in range(3)):
            return True
    return False


class TestMaxLeaf:
    @pytest.mark.parametrize("k", [1, 2, 5])
    def test_star(self, k):
        d = validate_dag(k + 1, [(0, v) for v in range(1, k + 1)])
        assert exact_max_leaf(d)[0] == k

    @pytest.mark.parametrize("n", [1, 2, 6])
    def test_path(self, n):
        d = validate_dag(n, [(i, i + 1) for i in range(n - 1)])
        assert exact_max_leaf(d)[0] == 1 == exact_max_leaf_by_arcs(d)

    def test_complete_forward(self):
        assert exact_max_leaf(gen_random_dag(5, 1, 0))[0] == 4

    @pytest.mark.parametrize("seed", range(50))
    def test_dual_oracle(self, seed):
        d = gen_random_dag(3 + seed % 8, ("1/5", "2/5", "7/10")[seed % 3], seed)
        opt, witness = exact_max_leaf(d)
        assert witness.is_spanning_arborescence() and leaves(witness) == opt
        assert exact_max_leaf_by_arcs(d) == opt

    def test_fixture_values(self):
        # parent-function B&B; fig2 is out of reach for the arc-subset recursion
        assert exact_max_leaf(fixture("fig2-dag"))[0] == 17
        d9 = fixture("fig9-dag")
        assert exact_max_leaf(d9)[0] == exact_max_leaf_by_arcs(d9) == 14

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            exact_max_leaf(gen_random_dag(30, "3/10", 1), budget=10)
        with pytest.raises(BudgetExceeded):
            exact_max_leaf_by_arcs(gen_random_dag(30, "3/10", 1), budget=10)

    def test_env_budget(self, monkeypatch):
        monkeypatch.setenv("ARBORLEAF_ORACLE_BUDGET", "5")
        with pytest.raises(BudgetExceeded):
            exact_max_leaf(gen_random_dag(20, "1/2", 3))


@given(rooted_dags(max_n=7))
def test_max_leaf_oracles_agree(d):
    opt, witness = exact_max_leaf(d)
    assert exact_max_leaf_by_arcs(d) == opt == leaves(witness)
    assert all(d.has_arc(u, v) for u, v in witness.arcs)


class TestWmis:
    def test_empty(self):
        g = build_intersection_graph(HereditaryCollection(()))
        opt, witness = exact_wmis(g)
        assert opt == 0 and witness.members == frozenset()

    def test_fixtures(self):
        assert exact_wmis(fixture("fig8a"))[0] == 3
        assert exact_wmis(fixture("fig8b"))[0] == 3
        opt, witness = exact_wmis(fixture("fig12"))
        assert opt == 7 and witness.weight == 7

    def test_budget(self):
        g = reduce_3dm(random_3dm(3, 8, XorShift64Star(1)))
        with pytest.raises(BudgetExceeded):
            exact_wmis(g, budget=2)


@given(intersection_graphs(max_sets=5))
def test_wmis_matches_brute_force(g):
    opt, witness = exact_wmis(g)
    assert opt == brute_force_wmis(g) == witness.weight
    assert g.is_independent(witness.members)


class TestThreeDM:
    def test_q1(self):
        inst = ThreeDMInstance(1, ((0, 0, 0),))
        g = reduce_3dm(inst)
        assert g.n == 4 and exact_wmis(g)[0] == 2
        assert decide_3dm(inst) and has_perfect_3dm(inst)

    def test_q2_perfect(self):
        inst = ThreeDMInstance(2, ((0, 0, 0), (1, 1, 1), (0, 1, 0)))
        assert exact_wmis(reduce_3dm(inst))[0] == 4 and decide_3dm(inst)

    def test_q2_disjoint(self):
        assert decide_3dm(ThreeDMInstance(2, ((0, 1, 0), (1, 0, 1))))

    def test_q2_shared_x(self):
        inst = ThreeDMInstance(2, ((0, 0, 0), (0, 1, 1), (0, 1, 0)))
        assert exact_wmis(reduce_3dm(inst))[0] < 4
        assert not decide_3dm(inst) and not has_perfect_3dm(inst)

    @pytest.mark.parametrize("seed", range(100))
    def test_q3_random(self, seed):
        inst = random_3dm(3, 3 + seed % 5, XorShift64Star(seed))
        assert decide_3dm(inst) == has_perfect_3dm(inst) == naive_3dm(inst)

    def test_reduction_structure(self):
        for seed in range(20):
            g = reduce_3dm(random_3dm(2 + seed % 2, 4, XorShift64Star(seed)))
            assert verify_structure(g).ok

    def test_format_roundtrip(self):
        inst = random_3dm(3, 5, XorShift64Star(9))
        assert parse_3dm(format_3dm(inst)) == inst

    def test_parse_comments(self):
        assert parse_3dm("# q\n2\n0 1 1  # a triple\n\n1 0 0\n").triples == ((0, 1, 1), (1, 0, 0))

    @pytest.mark.parametrize(
        "text,line,col",
        [("2\n0 x 1\n", 2, 3), ("2\n0 1\n", 2, 1), ("", 1, 1), ("1 2\n", 1, 1)],
    )
    def test_parse_errors(self, text, line, col):
        with pytest.raises(MalformedInput) as exc:
            parse_3dm(text)
        assert (exc.value.line, exc.value.column) == (line, col)

    def test_parse_out_of_range(self):
        with pytest.raises(MalformedInput):
            parse_3dm("2\n0 0 2\n")
