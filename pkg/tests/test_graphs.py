import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsketch.bits import BitString, hamming_distance
from qsketch.graphs import (
    EmbeddingError,
    Graph,
    GraphError,
    HypercubeEmbedding,
    aligned_labels,
    all_pairs_distances,
    classify,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    diameter,
    embed_graph,
    embed_l1,
    embed_partial_cube,
    hypercube_graph,
    is_bipartite,
    is_convex,
    is_l1_graph,
    is_partial_cube,
    path_graph,
    random_tree,
    rescale,
    rescale_set,
    semicube,
    theta_classes,
    verify_embedding,
)

from oracles import convex_brute, nx_distances, partial_cube_brute, semicube_members


def small_corpus():
    rng = np.random.default_rng(12)
    named = {
        "P5": path_graph(5),
        "C3": cycle_graph(3),
        "C5": cycle_graph(5),
        "C6": cycle_graph(6),
        "K4": complete_graph(4),
        "K5": complete_graph(5),
        "K23": complete_bipartite_graph(2, 3),
        "Q3": hypercube_graph(3),
    }
    for i in range(4):
        named[f"T{i}"] = random_tree(int(rng.integers(2, 13)), rng)
    return named


CORPUS = small_corpus()


def test_distance_examples():
    assert all_pairs_distances(path_graph(5))[0, 4] == 4
    assert all_pairs_distances(cycle_graph(6))[0, 3] == 3
    D = all_pairs_distances(hypercube_graph(4))
    assert (np.diag(D) == 0).all()
    assert diameter(complete_graph(4)) == 1
    assert diameter(path_graph(7)) == 6
    assert diameter(hypercube_graph(4)) == 4


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_distances_match_networkx(name):
    G = CORPUS[name]
    D = all_pairs_distances(G)
    ref = nx_distances(G)
    assert all(D[u, v] == ref[u][v] for u in range(G.vertex_count) for v in range(G.vertex_count))
    assert (D == D.T).all()
    n = G.vertex_count
    for a, b, c in itertools.product(range(n), repeat=3):
        assert D[a, c] <= D[a, b] + D[b, c]


def test_graph_validation():
    with pytest.raises(GraphError, match="disconnected"):
        Graph.from_edges(4, [(0, 1), (2, 3)])
    with pytest.raises(GraphError, match="self-loop"):
        Graph.from_edges(2, [(0, 0)])
    with pytest.raises(GraphError, match="duplicate"):
        Graph.from_edges(2, [(0, 1), (1, 0)])


def test_semicube_examples():
    K4 = complete_graph(4)
    assert semicube(K4, 0, 1).members == {0}
    assert semicube(path_graph(3), 0, 1).members == {0}
    K23 = complete_bipartite_graph(2, 3)  # u1,u2 = 0,1 ; v1,v2,v3 = 2,3,4
    assert semicube(K23, 0, 2).members == {0, 3, 4}
    with pytest.raises(GraphError):
        semicube(path_graph(3), 0, 2)


def test_convexity_examples():
    P3 = path_graph(3)
    assert is_convex(P3, {1})
    assert not is_convex(P3, {0, 2})
    assert not is_convex(complete_bipartite_graph(2, 3), {0, 3, 4})
    with pytest.raises(ValueError):
        is_convex(P3, set())


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_semicubes_and_convexity_match_oracle(name):
    G = CORPUS[name]
    for u, v in G.edges():
        for a, b in ((u, v), (v, u)):
            S = semicube(G, a, b).members
            assert S == semicube_members(G, a, b)
            assert a in S and b not in S
            assert is_convex(G, S) == convex_brute(G, S)
    assert is_partial_cube(G) == partial_cube_brute(G)


@given(st.integers(0, 2**32), st.integers(4, 9))
def test_random_subset_convexity_matches_oracle(seed, n):
    rng = np.random.default_rng(seed)
    H = nx.connected_watts_strogatz_graph(n, 2, 0.5, seed=int(seed % 1000))
    G = Graph.from_edges(n, list(H.edges()))
    S = {v for v in range(n) if rng.random() < 0.5} or {0}
    assert is_convex(G, S) == convex_brute(G, S)


@pytest.mark.parametrize(
    "G, pc, l1",
    [
        (path_graph(6), True, True),
        (cycle_graph(6), True, True),
        (cycle_graph(3), False, True),
        (complete_graph(4), False, True),
        (complete_bipartite_graph(2, 3), False, False),
        (hypercube_graph(4), True, True),
    ],
)
def test_recognition_examples(G, pc, l1):
    assert is_partial_cube(G) is pc
    assert is_l1_graph(G) is l1


def test_random_trees_are_partial_cubes():
    rng = np.random.default_rng(3)
    for n in (2, 7, 30, 120):
        T = random_tree(n, rng)
        assert T.edge_count() == n - 1 and is_partial_cube(T)


def test_rescale_examples():
    C3 = cycle_graph(3)
    assert rescale(C3, 1) is C3
    C6 = rescale(C3, 2)
    assert C6.vertex_count == 6 and sorted(len(nb) for nb in C6.adjacency) == [2] * 6
    assert nx.is_isomorphic(nx.Graph(C6.edges()), nx.cycle_graph(6))
    P4 = rescale(path_graph(2), 3)
    assert nx.is_isomorphic(nx.Graph(P4.edges()), nx.path_graph(4))
    with pytest.raises(ValueError):
        rescale(C3, 0)


@pytest.mark.parametrize("name", sorted(CORPUS))
@pytest.mark.parametrize("k", [2, 3])
def test_rescale_properties(name, k):
    G = CORPUS[name]
    H = rescale(G, k)
    assert H.vertex_count == G.vertex_count + (k - 1) * G.edge_count()
    D, DH = all_pairs_distances(G), all_pairs_distances(H)
    n = G.vertex_count
    assert (DH[:n, :n] == k * D).all()
    if k % 2 == 0:
        assert is_bipartite(H)


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_odd_cycles_become_bipartite(n):
    assert is_bipartite(rescale(cycle_graph(n), 2))


@pytest.mark.parametrize("name", sorted(CORPUS))
@pytest.mark.parametrize("k", [2, 3])
def test_convexity_preserved_under_rescaling(name, k):
    G = CORPUS[name]
    H = rescale(G, k)
    D, DH = all_pairs_distances(G), all_pairs_distances(H)
    for u, v in G.edges():
        for a, b in ((u, v), (v, u)):
            S = semicube(G, a, b, D).members
            assert is_convex(G, S, D) == is_convex(H, rescale_set(G, k, S), DH)


def test_subdivided_cube_semicube_differs_from_rescaled_set():
    # in Q3 the semicube of the first subdivision vertex also picks up midpoints
    # of the parallel edges and is not convex, so Q3's 2-subdivision is no partial cube
    G = hypercube_graph(3)
    H = rescale(G, 2)
    D, DH = all_pairs_distances(G), all_pairs_distances(H)
    a, b = G.edges()[0]
    S = semicube(G, a, b, D).members
    assert is_convex(G, S, D)
    assert is_convex(H, rescale_set(G, 2, S), DH)
    assert not is_convex(H, semicube(H, a, G.vertex_count, DH).members, DH)
    assert is_partial_cube(G) and not is_partial_cube(H)
    emb = embed_l1(G)
    assert emb.scale_k == 2 and emb.dimension == 6 and verify_embedding(G, emb)


def test_partial_cube_embedding_examples():
    emb = embed_partial_cube(path_graph(5))
    assert emb.scale_k == 1 and emb.dimension == 4
    assert [str(l) for l in emb.labels] == ["0000", "1000", "1100", "1110", "1111"]
    Q3 = embed_partial_cube(hypercube_graph(3))
    assert Q3.dimension == 3
    assert sorted(str(l) for l in Q3.labels) == sorted(format(i, "03b") for i in range(8))
    T = random_tree(7, np.random.default_rng(0))
    assert embed_partial_cube(T).dimension == 6
    assert all(len(c) == 1 for c in theta_classes(T))
    with pytest.raises(EmbeddingError):
        embed_partial_cube(cycle_graph(3))


def test_l1_embedding_examples():
    emb = embed_l1(cycle_graph(3))
    assert emb.scale_k == 2 and emb.dimension == 3
    assert all(hamming_distance(a, b) == 2 for a, b in itertools.combinations(emb.labels, 2))
    K4 = embed_l1(complete_graph(4))
    assert all(hamming_distance(a, b) == 2 for a, b in itertools.combinations(K4.labels, 2))
    C6 = embed_l1(cycle_graph(6))
    assert C6.scale_k == 2 and verify_embedding(cycle_graph(6), C6)
    with pytest.raises(EmbeddingError):
        embed_l1(complete_bipartite_graph(2, 3))


def test_l1_embedding_failure_is_diagnosed():
    # all semicubes of the octahedron are convex, yet its 2-subdivision is no partial cube
    octa = Graph.from_edges(6, [(i, j) for i in range(6) for j in range(i + 1, 6) if j != i + 3 or i >= 3])
    assert is_l1_graph(octa)
    with pytest.raises(EmbeddingError, match="2-subdivision"):
        embed_l1(octa)


def test_verify_embedding_examples():
    T = random_tree(9, np.random.default_rng(5))
    emb = embed_partial_cube(T)
    assert verify_embedding(T, emb)
    bad = list(emb.labels)
    bad[0] = bad[0].flip([0])
    assert not verify_embedding(T, HypercubeEmbedding(1, emb.dimension, tuple(bad)))
    single = Graph.from_edges(1, [])
    assert verify_embedding(single, HypercubeEmbedding(1, 1, (BitString.zeros(1),)))


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_embedding_pipeline_on_corpus(name):
    G = CORPUS[name]
    cls = classify(G)
    if cls == "neither":
        with pytest.raises(EmbeddingError):
            embed_graph(G)
        return
    emb = embed_graph(G)
    assert verify_embedding(G, emb)
    assert emb.scale_k == (1 if cls == "partial_cube" else 2)
    if cls == "partial_cube":
        assert is_l1_graph(G)
        assert verify_embedding(G, embed_l1(G))


@pytest.mark.parametrize("name", ["P5", "C3", "C6", "K4", "Q3", "T1"])
def test_semicube_membership_from_aligned_labels(name):
    G = CORPUS[name]
    emb = embed_graph(G)
    k = emb.scale_k
    for a, b in G.edges():
        for a_, b_ in ((a, b), (b, a)):
            labels = aligned_labels(emb, a_, b_)
            assert labels[a_].weight() == 0
            assert [labels[b_][i] for i in range(emb.dimension)] == [1] * k + [0] * (emb.dimension - k)
            members = semicube(G, a_, b_).members
            for v in range(G.vertex_count):
                assert (v in members) == all(labels[v][i] == 0 for i in range(k))
