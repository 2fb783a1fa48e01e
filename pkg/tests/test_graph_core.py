import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bdris.graph_core import (
    GraphError,
    OracleInfeasibleError,
    complete_bipartite_graph,
    complete_graph,
    connected_components,
    edge_count,
    forbidden_minor_oracle,
    graph_from_json,
    graph_to_json,
    is_acyclic,
    is_planar,
    make_graph,
    path_graph,
)

from conftest import assert_valid_witness, random_graph


@st.composite
def graphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return make_graph(n, chosen)


@st.composite
def forests(draw, max_n=30):
    n = draw(st.integers(1, max_n))
    edges = []
    for v in range(2, n + 1):
        parent = draw(st.integers(0, v - 1))  # 0 means start a new tree
        if parent:
            edges.append((parent, v))
    perm = draw(st.permutations(range(1, n + 1)))
    return make_graph(n, edges).relabel(perm)


class TestMakeGraph:
    def test_deduplicates_reversed_pairs(self):
        g = make_graph(4, [(1, 2), (2, 1)])
        assert g.edges == ((1, 2),)

    def test_k5(self):
        g = make_graph(5, itertools.combinations(range(1, 6), 2))
        assert edge_count(g) == 10
        assert g == complete_graph(5)

    def test_single_vertex(self):
        g = make_graph(1, [])
        assert g.n == 1 and edge_count(g) == 0

    @pytest.mark.parametrize("edges", [[(1, 1)], [(0, 1)], [(2, 5)], [(1, 2, 3)]])
    def test_rejects_bad_edges(self, edges):
        with pytest.raises(GraphError):
            make_graph(4, edges)

    def test_rejects_empty_vertex_set(self):
        with pytest.raises(GraphError):
            make_graph(0, [])

    def test_json_round_trip(self):
        g = make_graph(5, [(3, 1), (5, 4), (1, 2)])
        text = graph_to_json(g)
        assert text == '{"n": 5, "edges": [[1, 2], [1, 3], [4, 5]]}'
        assert graph_from_json(text) == g


@pytest.mark.parametrize(
    "g, expected", [(complete_graph(5), 10), (complete_graph(4), 6), (make_graph(7), 0)]
)
def test_edge_count(g, expected):
    assert edge_count(g) == expected


class TestIsPlanar:
    def test_k5(self):
        v = is_planar(complete_graph(5))
        assert not v.planar and v.witness.kind == "K5"
        assert_valid_witness(complete_graph(5), v.witness)

    def test_k4(self):
        v = is_planar(complete_graph(4))
        assert v.planar and v.witness is None

    def test_k33(self):
        g = complete_bipartite_graph(3, 3)
        v = is_planar(g)
        assert not v.planar and v.witness.kind == "K3,3"
        assert_valid_witness(g, v.witness)

    def test_petersen_witness_is_subdivision(self):
        outer = [(i, i % 5 + 1) for i in range(1, 6)]
        inner = [(5 + i, 5 + (i + 1) % 5 + 1) for i in range(5)]
        spokes = [(i, i + 5) for i in range(1, 6)]
        g = make_graph(10, outer + inner + spokes)
        v = is_planar(g)
        assert not v.planar
        # a subdivision witness: branch sets are single vertices
        assert all(len(s) == 1 for s in v.witness.branch_sets)

    @given(forests())
    def test_forests_are_planar(self, g):
        assert is_acyclic(g)
        assert is_planar(g).planar

    @given(graphs(max_n=12))
    def test_planar_graphs_respect_edge_bound(self, g):
        if g.n >= 3 and is_planar(g).planar:
            assert edge_count(g) <= 3 * g.n - 6

    @settings(max_examples=60)
    @given(graphs(max_n=9), st.randoms(use_true_random=False))
    def test_relabelling_invariance(self, g, rnd):
        perm = list(range(1, g.n + 1))
        rnd.shuffle(perm)
        assert is_planar(g).planar == is_planar(g.relabel(perm)).planar

    @settings(max_examples=60)
    @given(graphs(max_n=9))
    def test_verdict_only_mode_agrees(self, g):
        full, fast = is_planar(g), is_planar(g, witness=False)
        assert full.planar == fast.planar and fast.witness is None


class TestOracle:
    def test_k5_witness(self):
        v = forbidden_minor_oracle(complete_graph(5))
        assert not v.planar and v.witness.kind == "K5"
        assert [set(s) for s in v.witness.branch_sets] == [{1}, {2}, {3}, {4}, {5}]

    def test_k4(self):
        assert forbidden_minor_oracle(complete_graph(4)).planar

    def test_k33_witness(self):
        g = complete_bipartite_graph(3, 3)
        v = forbidden_minor_oracle(g)
        assert not v.planar and v.witness.kind == "K3,3"
        assert_valid_witness(g, v.witness)

    def test_needs_contraction(self):
        # K5 with every edge subdivided once: only a contracted minor is K5
        base = list(itertools.combinations(range(1, 6), 2))
        edges = []
        for k, (i, j) in enumerate(base, start=6):
            edges += [(i, k), (k, j)]
        g = make_graph(15, edges)
        v = forbidden_minor_oracle(g, max_vertices=15)
        assert not v.planar
        assert_valid_witness(g, v.witness)

    def test_size_limit(self):
        with pytest.raises(OracleInfeasibleError):
            forbidden_minor_oracle(path_graph(11))

    def test_random_graphs_agree_with_is_planar(self):
        rng = random.Random(1234)
        for _ in range(200):
            g = random_graph(rng, 8, rng.uniform(0.2, 0.7))
            fast, slow = is_planar(g), forbidden_minor_oracle(g)
            assert fast.planar == slow.planar, g
            if not slow.planar:
                assert_valid_witness(g, slow.witness)


class TestStructure:
    def test_path_is_acyclic(self):
        assert is_acyclic(path_graph(6))
        assert is_acyclic(path_graph(10))

    def test_triangle_has_cycle(self):
        assert not is_acyclic(complete_graph(3))

    def test_components_of_two_blocks(self):
        blocks = [e for s in (1, 5) for e in itertools.combinations(range(s, s + 4), 2)]
        assert connected_components(make_graph(8, blocks)) == [(1, 2, 3, 4), (5, 6, 7, 8)]

    def test_components_of_empty_graph(self):
        assert connected_components(make_graph(3)) == [(1,), (2,), (3,)]

    def test_components_of_k5(self):
        assert connected_components(complete_graph(5)) == [(1, 2, 3, 4, 5)]

    @given(graphs(max_n=10))
    def test_acyclic_implies_planar(self, g):
        if is_acyclic(g):
            assert is_planar(g).planar
            # a forest has n - (#components) edges
            assert edge_count(g) == g.n - len(connected_components(g))
