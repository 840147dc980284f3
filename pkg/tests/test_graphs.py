import pytest

from thetacalc.errors import DomainError
from thetacalc.graphs import (
    CUT_CONVENTION_NOTE,
    DirectedModularGraph,
    EdgeData,
    VertexData,
    arithmetic_genus,
    contract_edge,
    cut_edge,
    flip_neg_to_pos,
    flip_pos_to_neg,
    glue,
    is_isomorphic,
    validate,
)
from oracles import random_graph, rng_for


def simple_graph():
    return DirectedModularGraph(
        vertices=(VertexData("v1", 1, 2), VertexData("v2", 2, 3)),
        edges=(EdgeData("e1", "v1", "v2"),),
        pos_markings=(),
        neg_markings=(),
    )


class TestValidate:
    def test_single_vertex_ok(self):
        g = DirectedModularGraph((VertexData("v", 0, 0),), (), (), ("v",))
        assert validate(g) == []

    def test_dangling_target(self):
        g = DirectedModularGraph(
            (VertexData("v", 0, 0),), (EdgeData("e", "v", "ghost"),), (), ()
        )
        assert any("dangling target" in p for p in validate(g))

    def test_two_vertices_markings_split(self):
        g = DirectedModularGraph(
            (VertexData("a", 0, 1), VertexData("b", 1, 0)),
            (EdgeData("e", "a", "b"),),
            ("a",),
            ("b",),
        )
        assert validate(g) == []

    def test_negative_genus_flagged(self):
        g = DirectedModularGraph((VertexData("v", -1, 0),), (), (), ())
        assert any("negative genus" in p for p in validate(g))


class TestArithmeticGenus:
    def test_single_vertex(self):
        g = DirectedModularGraph((VertexData("v", 3, 0),), (), (), ())
        assert arithmetic_genus(g) == 3

    def test_two_vertices_one_edge(self):
        assert arithmetic_genus(simple_graph()) == 3  # 3 + 1 - 2 + 1

    def test_loop(self):
        g = DirectedModularGraph((VertexData("v", 0, 0),), (EdgeData("e", "v", "v"),), (), ())
        assert arithmetic_genus(g) == 1

    def test_disconnected(self):
        g = DirectedModularGraph(
            (VertexData("a", 1, 0), VertexData("b", 2, 0)), (), (), ()
        )
        assert arithmetic_genus(g) == 1 + 2 - 2 + 2


class TestCut:
    def test_two_vertex_edge(self):
        out = cut_edge(simple_graph(), "e1")
        assert out.edges == ()
        assert out.pos_markings == ("v1",)
        assert out.neg_markings == ("v2",)
        assert out.vertices == simple_graph().vertices

    def test_loop(self):
        g = DirectedModularGraph((VertexData("v", 0, 0),), (EdgeData("e", "v", "v"),), (), ())
        out = cut_edge(g, "e")
        assert out.pos_markings == ("v",) and out.neg_markings == ("v",)

    def test_missing_edge(self):
        with pytest.raises(DomainError):
            cut_edge(simple_graph(), "nope")

    def test_valences_preserved_random(self):
        rng = rng_for("cut-valence")
        checked = 0
        for _ in range(400):
            g = random_graph(rng)
            if not g.edges:
                continue
            e = rng.choice(g.edges)
            out = cut_edge(g, e.id)
            assert out.valences() == g.valences()
            checked += 1
        assert checked > 200

    def test_convention_note_exists(self):
        assert "source" in CUT_CONVENTION_NOTE


class TestContract:
    def test_additive_case(self):
        out = contract_edge(simple_graph(), "e1")
        assert len(out.vertices) == 1
        v = out.vertices[0]
        assert (v.genus, v.degree) == (3, 5)

    def test_loop_case(self):
        g = DirectedModularGraph((VertexData("v", 1, 4),), (EdgeData("e", "v", "v"),), (), ())
        out = contract_edge(g, "e")
        assert out.vertices[0].genus == 2
        assert out.vertices[0].degree == 4

    def test_conservation_random(self):
        rng = rng_for("contract-conserve")
        checked = 0
        for _ in range(1000):
            g = random_graph(rng)
            if not g.edges:
                continue
            e = rng.choice(g.edges)
            out = contract_edge(g, e.id)
            assert arithmetic_genus(out) == arithmetic_genus(g)
            assert out.total_degree() == g.total_degree()
            assert validate(out) == []
            checked += 1
        assert checked > 500

    def test_markings_retargeted(self):
        g = DirectedModularGraph(
            (VertexData("a", 0, 0), VertexData("b", 0, 0)),
            (EdgeData("e", "a", "b"),),
            ("b",),
            ("b", "a"),
        )
        out = contract_edge(g, "e")
        assert out.pos_markings == ("a",)
        assert out.neg_markings == ("a", "a")

    def test_disjoint_edges_commute(self):
        rng = rng_for("contract-commute")
        checked = 0
        for _ in range(500):
            g = random_graph(rng)
            pairs = [
                (e1, e2)
                for i, e1 in enumerate(g.edges)
                for e2 in g.edges[i + 1 :]
                if {e1.source, e1.target}.isdisjoint({e2.source, e2.target})
            ]
            if not pairs:
                continue
            e1, e2 = rng.choice(pairs)
            ab = contract_edge(contract_edge(g, e1.id), e2.id)
            ba = contract_edge(contract_edge(g, e2.id), e1.id)
            assert is_isomorphic(ab, ba)
            checked += 1
        assert checked > 50


class TestGlue:
    def test_inverse_of_cut_random(self):
        rng = rng_for("glue-cut")
        checked = 0
        for _ in range(400):
            g = random_graph(rng)
            if not g.edges:
                continue
            e = rng.choice(g.edges)
            back = glue(cut_edge(g, e.id))
            assert is_isomorphic(back, g)
            assert arithmetic_genus(back) == arithmetic_genus(g)
            checked += 1
        assert checked > 200

    def test_recreates_loop(self):
        g = DirectedModularGraph((VertexData("v", 0, 0),), (EdgeData("e", "v", "v"),), (), ())
        back = glue(cut_edge(g, "e"))
        assert len(back.edges) == 1
        assert back.edges[0].source == "v" and back.edges[0].target == "v"

    def test_needs_markings(self):
        g = DirectedModularGraph((VertexData("v", 0, 0),), (), ("v",), ())
        with pytest.raises(DomainError):
            glue(g)


class TestFlips:
    def test_neg_to_pos_example(self):
        g = DirectedModularGraph((VertexData("v", 0, 0),), (), (), ("v",))
        out = flip_neg_to_pos(g)
        assert out.pos_markings == ("v",) and out.neg_markings == ()
        assert out.vertices[0].degree == -1

    def test_pos_to_neg_example(self):
        g = DirectedModularGraph((VertexData("v", 0, 5),), (), ("v",), ())
        out = flip_pos_to_neg(g)
        assert out.neg_markings == ("v",) and out.pos_markings == ()
        assert out.vertices[0].degree == 5

    def test_degree_changes_random(self):
        rng = rng_for("flips")
        neg_checked = pos_checked = 0
        for _ in range(400):
            g = random_graph(rng)
            if g.neg_markings:
                out = flip_neg_to_pos(g)
                assert out.total_degree() == g.total_degree() - 1
                counts = (len(out.neg_markings), len(out.pos_markings))
                assert counts == (len(g.neg_markings) - 1, len(g.pos_markings) + 1)
                neg_checked += 1
            if g.pos_markings:
                out = flip_pos_to_neg(g)
                assert out.total_degree() == g.total_degree()
                pos_checked += 1
        assert neg_checked > 100 and pos_checked > 100

    def test_flip_both_ways_nets_minus_one(self):
        g = DirectedModularGraph((VertexData("v", 0, 7),), (), (), ("v",))
        out = flip_pos_to_neg(flip_neg_to_pos(g))
        assert out.vertices[0].degree == 6
        assert out.neg_markings == ("v",) and out.pos_markings == ()

    def test_errors(self):
        g = DirectedModularGraph((VertexData("v", 0, 0),), (), (), ())
        with pytest.raises(DomainError):
            flip_neg_to_pos(g)
        with pytest.raises(DomainError):
            flip_pos_to_neg(g)


class TestJson:
    def test_roundtrip(self):
        rng = rng_for("graph-json")
        for _ in range(50):
            g = random_graph(rng)
            assert DirectedModularGraph.from_json(g.to_json()) == g

    def test_malformed(self):
        with pytest.raises(DomainError):
            DirectedModularGraph.from_json({"vertices": [{"id": "v"}]})
