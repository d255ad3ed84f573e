import numpy as np
import pytest

from qsketch.config import ProtocolConfig
from qsketch.distance import GraphDistanceLadder, run_dis_epsilon
from qsketch.graphs import cycle_graph, embed_graph, path_graph, random_tree
from qsketch.jl import jl_dimension


def test_same_vertex_gives_zero():
    G = path_graph(6)
    emb = embed_graph(G)
    for seed in range(5):
        r = run_dis_epsilon(G, emb, 2, 2, 0.5, master_seed=seed)
        assert r.estimate == 0 and r.succeeded


def test_path_endpoints():
    G = path_graph(9)
    emb = embed_graph(G)
    ests = [run_dis_epsilon(G, emb, 0, 8, 0.5, master_seed=s).estimate for s in range(30)]
    assert sum(4 <= e <= 12 for e in ests) >= 27


def test_triangle_adjacent_pair():
    G = cycle_graph(3)
    emb = embed_graph(G)
    assert emb.scale_k == 2
    ests = [run_dis_epsilon(G, emb, 0, 1, 0.5, master_seed=s).estimate for s in range(30)]
    assert sum(e == 1 for e in ests) >= 27


def test_ladder_uses_graph_units_and_jl_cost():
    G = random_tree(20, np.random.default_rng(2))
    emb = embed_graph(G)
    setup = GraphDistanceLadder(G, emb, 0.5, setup_seed=4)
    D = setup.dist.max()
    assert setup.values[-1] <= D < setup.values[-1] * 1.5
    assert setup.jl_dim == jl_dimension(20, 0.1)
    costs = setup.cost_report().steps
    assert not costs[0].jl and all(c.jl and c.dimension == setup.jl_dim for c in costs[1:])
    # threshold densities are set in Hamming units
    assert setup.steps[1].params.d == emb.scale_k * setup.values[1]


def test_jl_overlaps_close_to_exact():
    G = cycle_graph(6)
    emb = embed_graph(G)
    setup = GraphDistanceLadder(G, emb, 0.5, ProtocolConfig(), setup_seed=7)
    for s in range(1, len(setup.steps)):
        step = setup.steps[s]
        for v in range(6):
            for w in range(6):
                x, y = emb.labels[v], emb.labels[w]
                exact = 1 - step.sketch_distance(x, y) / step.length
                assert abs(setup.step_overlap(s, x, y) - exact) <= 4 * setup.eps_jl
        assert setup.jl_attempts[s] <= setup.config.jl_retries


def test_exact_failure_probability_small():
    G = path_graph(9)
    emb = embed_graph(G)
    setup = GraphDistanceLadder(G, emb, 0.5, setup_seed=1)
    assert setup.failure_probability(emb.labels[0], emb.labels[8], 8) <= 0.05


def test_rejects_single_vertex():
    from qsketch.graphs import Graph, HypercubeEmbedding
    from qsketch.bits import BitString

    G = Graph.from_edges(1, [])
    with pytest.raises(ValueError):
        GraphDistanceLadder(G, HypercubeEmbedding(1, 1, (BitString.zeros(1),)), 0.5)
