"""Approximate shortest-path distance between two vertices of an l1-graph.

Each party holds a vertex, maps it to its hypercube label and runs the
threshold ladder on the labels.  The ladder is indexed in graph units (stop
bound = diameter) while sketch densities use Hamming units (``scale_k``
times larger).  Threshold-step fingerprints are compressed by a JL map
verified on the sketches of all vertex labels; the equality step keeps
exact fingerprints.
"""

import numpy as np

from .config import DEFAULT_CONFIG
from .graphs import all_pairs_distances, diameter
from .jl import SpanJLMap, find_verified_map, jl_dimension
from .ladder import HammingLadder, ProtocolResult
from .seeding import derive_seed
from .sketch import StepCost
from .fingerprint import qubits_per_copy


class GraphDistanceLadder(HammingLadder):
    def __init__(self, graph, embedding, eps, config=DEFAULT_CONFIG, setup_seed=0, dist=None):
        if graph.vertex_count < 2:
            raise ValueError("distance protocol needs at least two vertices")
        if len(embedding.labels) != graph.vertex_count:
            raise ValueError("embedding does not label every vertex")
        self.graph = graph
        self.embedding = embedding
        self.dist = all_pairs_distances(graph) if dist is None else dist
        super().__init__(
            embedding.dimension, eps, config, setup_seed, scale=embedding.scale_k, stop_bound=diameter(graph, self.dist)
        )
        self.eps_jl = config.jl_eps if config.jl_eps is not None else eps / 5.0
        self.jl_dim = jl_dimension(graph.vertex_count, self.eps_jl, config.jl_constant)
        self._label_index = {lab.value: v for v, lab in enumerate(embedding.labels)}
        self._jl = {}
        self.jl_attempts = {}

    def jl_images(self, s):
        """Unit JL images of every vertex's step-``s`` fingerprint (built on first use)."""
        if s not in self._jl:
            step = self.steps[s]
            sketches = [step.matrix.matvec(lab) for lab in self.embedding.labels]
            N = step.length
            gram = np.array([[1.0 - (a.value ^ b.value).bit_count() / N for b in sketches] for a in sketches])
            seed = derive_seed(self.setup_seed, "jl", s)
            jl_map, attempts = find_verified_map(
                lambda t: SpanJLMap.build(gram, self.jl_dim, t, self.eps_jl), self.config.jl_retries, seed
            )
            self._jl[s] = jl_map.unit_images()
            self.jl_attempts[s] = attempts
        return self._jl[s]

    def vertex_of(self, label):
        return self._label_index[label.value]

    def step_overlap(self, s, x, y):
        if s == 0:
            return super().step_overlap(s, x, y)
        imgs = self.jl_images(s)
        ov = float(imgs[self.vertex_of(x)] @ imgs[self.vertex_of(y)])
        return min(1.0, max(-1.0, ov))

    def step_cost(self, s):
        if s == 0:
            return super().step_cost(s)
        step = self.steps[s]
        return StepCost(step.value, self.jl_dim, step.copies_k, qubits_per_copy(self.jl_dim, jl=True), True)


def run_dis_epsilon(graph, embedding, v, w, eps, config=DEFAULT_CONFIG, master_seed=0, setup=None):
    """Estimate ``d_G(v, w)`` to relative error ``eps`` from the endpoints' labels."""
    if setup is None:
        setup = GraphDistanceLadder(graph, embedding, eps, config, derive_seed(master_seed, "setup"))
    true = int(setup.dist[v, w])
    estimate, answers = setup.run(embedding.labels[v], embedding.labels[w], master_seed)
    return ProtocolResult(estimate, setup.cost_report(), eps, true, answers)


def dis_failure_probability(graph, embedding, v, w, eps, config=DEFAULT_CONFIG, setup_seed=0):
    setup = GraphDistanceLadder(graph, embedding, eps, config, setup_seed)
    return setup.failure_probability(embedding.labels[v], embedding.labels[w], int(setup.dist[v, w]))
