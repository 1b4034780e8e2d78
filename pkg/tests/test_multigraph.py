import random

import networkx as nx
import pytest
from hypothesis import given, settings

from tworel.multigraph import (
    FamilySpec,
    GraphError,
    bundle_graph,
    contract_edge,
    cycle_graph,
    delete_edge,
    family_graph,
    from_edge_list,
    normal_key,
    path_graph,
    prune_irrelevant,
    subdivide,
    substitute_gadget,
    theta_graph,
)
from tworel.reliability import trel

from conftest import small_multigraphs


def c3():
    return from_edge_list("stc", [("s", "t"), ("t", "c"), ("c", "s")], "s", "t")


def double_edge():
    return from_edge_list("st", [("s", "t"), ("s", "t")], "s", "t")


class TestConstruction:
    def test_k2(self):
        g = from_edge_list("ab", [("a", "b")], "a", "b")
        assert g.order == 2 and g.size == 1

    def test_c4(self, c4_antipodal):
        assert c4_antipodal.order == 4 and c4_antipodal.size == 4
        assert all(c4_antipodal.degree(v) == 2 for v in "sabt")

    @pytest.mark.parametrize(
        "verts,pairs,s,t",
        [
            ("ab", [("a", "a")], "a", "b"),
            ("ab", [("a", "c")], "a", "b"),
            ("aab", [("a", "b")], "a", "b"),
            ("ab", [("a", "b")], "a", "a"),
            ("ab", [("a", "b")], "a", "z"),
        ],
    )
    def test_errors(self, verts, pairs, s, t):
        with pytest.raises(GraphError):
            from_edge_list(list(verts), pairs, s, t)

    def test_edge_ids(self):
        g = double_edge()
        assert [e[0] for e in g.edges] == ["e0", "e1"]
        with pytest.raises(GraphError):
            g.edge("e9")


class TestDelete:
    def test_c4(self, c4_antipodal):
        g = delete_edge(c4_antipodal, "e0")  # (s, a)
        assert g.order == 4 and g.degree("a") == 1
        assert sorted(map(sorted, g.endpoint_pairs())) == [["a", "t"], ["b", "s"], ["b", "t"]]

    def test_k2(self):
        g = delete_edge(from_edge_list("st", [("s", "t")], "s", "t"), "e0")
        assert g.size == 0 and not g.terminals_connected()

    def test_double(self):
        g = delete_edge(double_edge(), "e1")
        assert g.size == 1

    def test_unknown(self, c4_antipodal):
        with pytest.raises(GraphError):
            delete_edge(c4_antipodal, "nope")


class TestContract:
    def test_c3(self):
        res = contract_edge(c3(), "e0")
        assert res.terminals_merged
        assert res.graph.order == 2 and res.graph.size == 2

    def test_c4(self, c4_antipodal):
        res = contract_edge(c4_antipodal, "e0")
        assert not res.terminals_merged
        assert res.graph.order == 3 and res.graph.size == 3

    def test_loop_dropped(self):
        res = contract_edge(double_edge(), "e0")
        assert res.graph.order == 1 and res.graph.size == 0 and res.terminals_merged

    @given(small_multigraphs())
    def test_counts(self, g):
        for eid, _, _ in g.edges:
            res = contract_edge(g, eid)
            assert res.graph.order == g.order - 1
            assert all(u != v for _, u, v in res.graph.edges)


class TestSubdivide:
    def test_k2(self):
        g = subdivide(from_edge_list("st", [("s", "t")], "s", "t"), "e0", 3)
        assert g.order == 4 and g.size == 3
        assert trel(g) == trel(path_graph(3))

    def test_c3_to_c6(self):
        g = c3()
        for eid in ["e0", "e1", "e2"]:
            g = subdivide(g, eid, 2)
        assert g.order == 6 and g.size == 6
        assert nx.is_isomorphic(nx.Graph(g.to_networkx()), nx.cycle_graph(6))

    def test_identity(self, c4_antipodal):
        assert subdivide(c4_antipodal, "e2", 1) == c4_antipodal

    def test_errors(self, c4_antipodal):
        with pytest.raises(GraphError):
            subdivide(c4_antipodal, "e2", 0)
        with pytest.raises(GraphError):
            subdivide(c4_antipodal, "zz", 2)


class TestSubstitute:
    def test_k2_host(self, c4_adjacent):
        k2 = from_edge_list("xy", [("x", "y")], "x", "y")
        g = substitute_gadget(k2, c4_adjacent)
        assert g.order == 4 and g.size == 4
        assert trel(g) == trel(c4_adjacent)

    def test_c4_c4(self, c4_antipodal):
        g = substitute_gadget(c4_antipodal, c4_antipodal)
        assert g.order == 12 and g.size == 16

    def test_c3_bundle(self):
        g = substitute_gadget(c3(), bundle_graph(2))
        assert g.order == 3 and g.size == 6
        assert sorted(g.degree(v) for v in g.vertices) == [4, 4, 4]

    @given(small_multigraphs(max_edges=5), small_multigraphs(max_edges=4))
    def test_counts(self, g, h):
        out = substitute_gadget(g, h)
        assert out.order == g.order + g.size * (h.order - 2)
        assert out.size == g.size * h.size

    @given(small_multigraphs())
    def test_single_edge_gadget(self, g):
        k2 = from_edge_list("uv", [("u", "v")], "u", "v")
        out = substitute_gadget(g, k2)
        assert out.vertices == g.vertices
        assert sorted(map(sorted, out.endpoint_pairs())) == sorted(map(sorted, g.endpoint_pairs()))

    def test_degenerate(self, c4_antipodal):
        h = from_edge_list("uvw", [("u", "v")], "u", "w")
        with pytest.raises(GraphError):
            substitute_gadget(c4_antipodal, h)


class TestPrune:
    def test_pendant(self):
        g = from_edge_list("sbta", [("s", "b"), ("b", "t"), ("t", "a")], "s", "t")
        out = prune_irrelevant(g)
        assert out.size == 2 and "a" not in out.vertices

    def test_c4_unchanged(self, c4_antipodal):
        assert prune_irrelevant(c4_antipodal) == c4_antipodal

    def test_two_triangles(self):
        pairs = [("s", "t"), ("t", "c"), ("c", "s"), ("c", "x"), ("x", "y"), ("y", "c")]
        out = prune_irrelevant(from_edge_list("stcxy", pairs, "s", "t"))
        assert out.size == 3 and set(out.vertices) == {"s", "t", "c"}

    def test_disconnected(self):
        g = from_edge_list("stab", [("s", "a"), ("t", "b")], "s", "t")
        with pytest.raises(GraphError):
            prune_irrelevant(g)

    @settings(max_examples=60, deadline=None)
    @given(small_multigraphs(max_edges=8, max_vertices=6))
    def test_idempotent_and_reliability(self, g):
        if not g.terminals_connected():
            return
        once = prune_irrelevant(g)
        assert prune_irrelevant(once) == once
        assert trel(once) == trel(g)

    def test_matches_path_enumeration(self):
        rng = random.Random(5)
        for _ in range(40):
            gr = nx.gnm_random_graph(7, rng.randint(6, 12), seed=rng.randrange(10**6))
            if not nx.is_connected(gr):
                continue
            g = from_edge_list(gr.nodes, gr.edges, 0, 6)
            on_path = set()
            for path in nx.all_simple_paths(gr, 0, 6):
                on_path.update(frozenset(e) for e in zip(path, path[1:]))
            kept = {frozenset((u, v)) for _, u, v in prune_irrelevant(g).edges}
            assert kept == {frozenset(map(str, e)) for e in on_path}


class TestNormalKey:
    def test_order_independent(self, c4_antipodal):
        pairs = list(reversed(c4_antipodal.endpoint_pairs()))
        other = from_edge_list("tbas", pairs, "s", "t")
        assert normal_key(other) == normal_key(c4_antipodal)

    def test_terminals_matter(self, c4_antipodal, c4_adjacent):
        assert normal_key(c4_antipodal) != normal_key(c4_adjacent)

    def test_pendant_distinct(self):
        g = from_edge_list("sbta", [("s", "b"), ("b", "t"), ("t", "a")], "s", "t")
        assert normal_key(g) != normal_key(prune_irrelevant(g))


class TestFamilies:
    @pytest.mark.parametrize(
        "spec",
        [
            dict(family="cycle", n=2, k=1),
            dict(family="cycle", n=5, k=3),
            dict(family="theta", l=0, k=2),
            dict(family="bundle", m=0),
            dict(family="path", l=0),
            dict(family="wheel"),
        ],
    )
    def test_invalid(self, spec):
        with pytest.raises(GraphError):
            FamilySpec(**spec)

    def test_shapes(self):
        assert cycle_graph(6, 2).size == 6
        assert theta_graph(3, 4).order == 2 + 4 * 2
        assert bundle_graph(3).size == 3
        assert path_graph(4).order == 5
        assert family_graph(FamilySpec("cycle", n=5, k=2)).t == "2"
        assert FamilySpec("theta", l=2, k=3).label == "theta-l2-k3"
