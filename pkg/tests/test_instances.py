import ctypes
import json
from fractions import Fraction

import pytest
from conftest import collections, rooted_dags
from hypothesis import given
from hypothesis import strategies as st

from arborleaf import instances
from arborleaf.clawgraph import build_intersection_graph, verify_structure
from arborleaf.errors import MalformedInput, UnknownFixture
from arborleaf.graph import Branching, validate_dag
from arborleaf.instances import (
    FIXTURES,
    InstanceDescriptor,
    XorShift64Star,
    deserialize,
    deserialize_trace,
    export_dot,
    fixture,
    fixture_annotations,
    gen_random_dag,
    random_collection,
    serialize,
    serialize_trace,
    splitmix64,
)
from arborleaf.oracles import exact_max_leaf, exact_wmis
from arborleaf.pipeline import maxleaves_12mis


def ctypes_xorshift(seed, count):
    # same update equations, with wraparound delegated to c_uint64
    x = ctypes.c_uint64(splitmix64(seed))
    out = []
    for _ in range(count):
        v = x.value
        v ^= v >> 12
        v = ctypes.c_uint64(v ^ ctypes.c_uint64(v << 25).value).value
        v ^= v >> 27
        x = ctypes.c_uint64(v)
        out.append(ctypes.c_uint64(v * 0x2545F4914F6CDD1D).value)
    return out


class TestPrng:
    def test_splitmix_reference(self):
        # published first output of splitmix64 seeded with 0
        assert splitmix64(0) == 0xE220A8397B1DCDAF

    @pytest.mark.parametrize("seed", [0, 1, 42, 2**64 - 1])
    def test_matches_second_implementation(self, seed):
        r = XorShift64Star(seed)
        assert [r.next_u64() for _ in range(50)] == ctypes_xorshift(seed, 50)

    def test_pinned_stream(self):
        r = XorShift64Star(0)
        assert [r.next_u64() for _ in range(3)] == [0x7BBCB40D550682D0, 0xDE7FE413D00CC9FD, 0xB3C638353C668C91]

    @given(st.integers(0, 2**64 - 1), st.integers(1, 1000))
    def test_below_range(self, seed, k):
        r = XorShift64Star(seed)
        assert all(0 <= r.below(k) < k for _ in range(20))

    def test_coin_extremes(self):
        r = XorShift64Star(3)
        assert all(r.coin(Fraction(1)) for _ in range(100))
        assert sum(r.coin(Fraction(1, 2)) for _ in range(2000)) in range(900, 1100)


class TestGenerators:
    def test_single_node(self):
        d = gen_random_dag(1, "1/2", 0)
        assert d.n == 1 and d.arcs == ()

    def test_complete(self):
        d = gen_random_dag(5, 1, 0)
        assert len(d.arcs) == 10 and exact_max_leaf(d)[0] == 4

    def test_seed_42(self):
        d = gen_random_dag(10, "3/10", 42)
        assert validate_dag(d.n, d.arcs, d.root) == d

    def test_float_density(self):
        assert gen_random_dag(8, 0.3, 5) == gen_random_dag(8, "3/10", 5)

    def test_bad_density(self):
        with pytest.raises(ValueError):
            gen_random_dag(4, 0, 1)
        with pytest.raises(ValueError):
            gen_random_dag(4, "3/2", 1)

    def test_layered_arcs_skip_no_layer(self):
        d = gen_random_dag(12, 1, 7, "random-layered")
        assert d.root == 0 and all(u < v for u, v in d.arcs)

    @given(st.integers(1, 14), st.sampled_from(["1/5", "2/5", "7/10", "1"]), st.integers(0, 2**64 - 1),
           st.sampled_from(["random-forward", "random-layered"]))
    def test_outputs_validate_and_repeat(self, n, density, seed, kind):
        d = gen_random_dag(n, density, seed, kind)
        assert d == gen_random_dag(n, density, seed, kind)
        assert validate_dag(d.n, d.arcs, d.root) == d

    @given(st.integers(0, 10**6), st.integers(2, 12))
    def test_random_collection(self, seed, cap):
        col = random_collection(seed, cap)
        assert 1 <= len(col) <= cap
        assert verify_structure(build_intersection_graph(col)).ok
        assert col == random_collection(seed, cap)


class TestDescriptor:
    def test_identical_descriptor_identical_instance(self):
        a = InstanceDescriptor.make("random-forward", 9, n=8, density="2/5")
        b = InstanceDescriptor.make("random-forward", 9, density="2/5", n=8)
        assert a == b and serialize(a.build()) == serialize(b.build())
        assert str(a) == "random-forward[density=2/5,n=8]#9"

    def test_kinds(self):
        assert InstanceDescriptor.make("fixture", name="fig12").build().n == 22
        g = InstanceDescriptor.make("reduction", 3, q=2, count=4).build()
        assert g.n == 16
        with pytest.raises(ValueError):
            InstanceDescriptor.make("nope")


class TestFixtures:
    def test_unknown(self):
        with pytest.raises(UnknownFixture):
            fixture("fig1")

    def test_fig8a(self):
        g = fixture("fig8a")
        heavy = [v for v in range(g.n) if g.weights[v] == 2]
        assert [g.label(v) for v in heavy] == ["v"]
        center = heavy[0]
        talons = [g.index(x) for x in "xyz"]
        shared = [g.sets(t) & g.sets(center) for t in talons]
        assert all(len(s) == 1 for s in shared) and len(set().union(*shared)) == 3
        assert g.is_independent(talons)

    def test_fig9(self):
        d = fixture("fig9-dag")
        assert d.label(d.root) == "i"
        assert sorted(d.label(v) for v in d.out_neighbors[d.root]) == list("abcdefgh")
        assert d.n == 20

    def test_fig12(self):
        g = fixture("fig12")
        ann = fixture_annotations("fig12")
        assert g.weight_of(g.index(x) for x in ann["preset"]) == 5
        assert exact_wmis(g)[0] == 7 == g.weight_of(g.index(x) for x in ann["optimum"])

    def test_checksum_guard(self, monkeypatch):
        real = instances._data_file
        monkeypatch.setattr(
            instances, "_data_file", lambda name: real(name) + (" " if name == "fig12.json" else "")
        )
        with pytest.raises(MalformedInput):
            fixture("fig12")

    @pytest.mark.parametrize("name", FIXTURES)
    def test_roundtrip(self, name):
        inst = fixture(name)
        again = deserialize(serialize(inst))
        assert again == inst
        if hasattr(inst, "labels"):
            assert again.labels == inst.labels


class TestSerialization:
    @given(rooted_dags(max_n=10))
    def test_dag_roundtrip(self, d):
        assert deserialize(serialize(d)) == d

    @given(collections(max_sets=6))
    def test_collection_roundtrip(self, col):
        g = build_intersection_graph(col)
        again = deserialize(serialize(g))
        assert again.collection == col and again.weights == g.weights

    def test_custom_weights_roundtrip(self):
        g = build_intersection_graph(random_collection(4), None)
        w = [3] * g.n
        g2 = build_intersection_graph(g.collection, w)
        assert deserialize(serialize(g2)).weights == tuple(w)

    def test_schema(self):
        obj = json.loads(serialize(validate_dag(2, [(0, 1)])))
        assert obj == {"n": 2, "root": 0, "arcs": [[0, 1]]}
        obj = json.loads(serialize(fixture("fig8b")))
        assert obj["candidates"][0] == {"id": "r1", "set": ["a", "b"]}

    def test_truncated(self):
        text = serialize(fixture("fig2-dag"))
        with pytest.raises(MalformedInput) as exc:
            deserialize(text[: len(text) // 2])
        assert exc.value.line is not None and exc.value.column is not None

    @pytest.mark.parametrize(
        "text",
        [
            "[1, 2]",
            '{"n": 2, "root": 0}',
            '{"n": "2", "root": 0, "arcs": []}',
            '{"n": 2, "root": 0, "arcs": [[0]]}',
            '{"n": 2, "root": 0, "arcs": [[0, 1], [1, 0]]}',
            '{"n": 0, "root": 0, "arcs": []}',
            '{"candidates": [{"id": "v", "set": ["a", "b", "c"]}]}',
            '{"candidates": [{"id": "v", "set": [[1], 2]}]}',
            '{"candidates": [{"set": [1, 2]}]}',
        ],
    )
    def test_malformed(self, text):
        with pytest.raises(MalformedInput):
            deserialize(text)

    def test_trace_roundtrip(self):
        _, trace = maxleaves_12mis(fixture("fig2-dag"))
        again = deserialize_trace(serialize_trace(trace))
        assert again == trace and again.leaves == 17

    def test_bad_trace(self):
        with pytest.raises(MalformedInput):
            deserialize_trace('{"dag": {"n": 1, "root": 0, "arcs": []}}')


class TestDot:
    def test_star(self):
        d = validate_dag(5, [(0, v) for v in range(1, 5)])
        text = export_dot(d)
        lines = text.strip().splitlines()
        assert sum("->" in ln for ln in lines) == 4
        assert sum("[label=" in ln and "->" not in ln for ln in lines) == 5

    def test_branching_bold(self):
        d = validate_dag(3, [(0, 1), (0, 2), (1, 2)])
        text = export_dot(d, {"branching": Branching.from_arcs(d, [(0, 1)])})
        assert '0 -> 1 [style="bold"' in text and "0 -> 2;" in text

    def test_chosen_filled(self):
        g = fixture("fig8a")
        text = export_dot(g, {"chosen": ["x", g.index("y")]})
        assert text.count("fillcolor") == 2
        assert text.count(" -- ") == sum(
            g.adjacent(u, v) for u in range(g.n) for v in range(u + 1, g.n)
        )
