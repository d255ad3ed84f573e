"""Graph distances, semicubes, partial-cube / l1-graph recognition and embeddings.

Vertices are the integers ``0 .. n-1``; optional ``labels`` carry names.
The semicube of an edge ``(a, b)`` is ``G(a|b) = {x : d(x,a) < d(x,b)}``.
A connected graph is a partial cube iff it is bipartite and every semicube is
convex; it is reported as an l1-graph when every semicube is convex.
Embeddings are built from the Djokovic-Winkler relation and are always
checked pair by pair before being returned.
"""

from collections import deque
from dataclasses import dataclass

import numpy as np

from .bits import BitString, hamming_distance


class GraphError(ValueError):
    pass


class EmbeddingError(ValueError):
    """Raised when a graph has no embedding of the requested kind, or construction fails."""


@dataclass(frozen=True)
class Graph:
    adjacency: tuple
    labels: tuple = None

    @classmethod
    def from_edges(cls, n, edges, labels=None, require_connected=True):
        if n < 1:
            raise GraphError("graph needs at least one vertex")
        nbrs = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for {n} vertices")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if v in nbrs[u]:
                raise GraphError(f"duplicate edge ({u}, {v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n or len(set(labels)) != n:
                raise GraphError("labels must be unique, one per vertex")
        g = cls(tuple(tuple(sorted(s)) for s in nbrs), labels)
        if require_connected:
            unreached = g._unreached_from(0)
            if unreached:
                raise GraphError(f"graph is disconnected: vertex {unreached[0]} unreachable from vertex 0")
        return g

    @property
    def vertex_count(self):
        return len(self.adjacency)

    def edges(self):
        return [(u, v) for u, nb in enumerate(self.adjacency) for v in nb if u < v]

    def edge_count(self):
        return sum(len(nb) for nb in self.adjacency) // 2

    def name(self, v):
        return self.labels[v] if self.labels else str(v)

    def index(self, name):
        if self.labels:
            return self.labels.index(str(name))
        v = int(name)
        if not 0 <= v < self.vertex_count:
            raise GraphError(f"no vertex {name}")
        return v

    def _unreached_from(self, s):
        seen = bfs_distances(self, s) >= 0
        return [int(v) for v in np.flatnonzero(~seen)]


def path_graph(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    if n < 3:
        raise GraphError("cycles need at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n):
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def complete_bipartite_graph(a, b):
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def hypercube_graph(dim):
    n = 1 << dim
    return Graph.from_edges(n, [(v, v ^ (1 << i)) for v in range(n) for i in range(dim) if v < v ^ (1 << i)])


def random_tree(n, rng):
    """Uniform labelled tree on ``n`` vertices via a random Pruefer sequence."""
    if n <= 2:
        return path_graph(n)
    seq = [int(v) for v in rng.integers(0, n, size=n - 2)]
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    for v in seq:
        leaf = degree.index(1)
        edges.append((leaf, v))
        degree[leaf] -= 1
        degree[v] -= 1
    u, w = (i for i in range(n) if degree[i] == 1)
    edges.append((u, w))
    return Graph.from_edges(n, edges)


def bfs_distances(G, source):
    dist = np.full(G.vertex_count, -1, dtype=np.int64)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in G.adjacency[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def all_pairs_distances(G):
    """Matrix of shortest-path lengths; rejects disconnected graphs."""
    D = np.stack([bfs_distances(G, s) for s in range(G.vertex_count)])
    if (D < 0).any():
        u, v = np.argwhere(D < 0)[0]
        raise GraphError(f"graph is disconnected: no path from {u} to {v}")
    return D


def diameter(G, dist=None):
    dist = all_pairs_distances(G) if dist is None else dist
    return int(dist.max())


def is_bipartite(G):
    dist = bfs_distances(G, 0)
    return all((dist[u] - dist[v]) % 2 for u, v in G.edges())


@dataclass(frozen=True)
class Semicube:
    anchor_edge: tuple
    members: frozenset


def semicube(G, a, b, dist=None):
    if b not in G.adjacency[a]:
        raise GraphError(f"({a}, {b}) is not an edge")
    dist = all_pairs_distances(G) if dist is None else dist
    members = np.flatnonzero(dist[:, a] < dist[:, b])
    return Semicube((a, b), frozenset(int(v) for v in members))


def is_convex(G, S, dist=None):
    """True iff no vertex outside ``S`` lies on a shortest path between two members."""
    S = np.array(sorted(S), dtype=np.int64)
    if S.size == 0:
        raise ValueError("convexity is defined for nonempty sets")
    dist = all_pairs_distances(G) if dist is None else dist
    inside = np.zeros(G.vertex_count, dtype=bool)
    inside[S] = True
    out = np.flatnonzero(~inside)
    if out.size == 0:
        return True
    d = dist.astype(np.int32)
    to_out = d[np.ix_(S, out)]
    within = d[np.ix_(S, S)]
    # z lies between x and y iff d(x,z) + d(z,y) == d(x,y); scan x in chunks
    step = max(1, 2_000_000 // (S.size * out.size))
    for i in range(0, S.size, step):
        hit = to_out[i : i + step, None, :] + to_out[None, :, :] == within[i : i + step, :, None]
        if hit.any():
            return False
    return True


def _oriented_edges(G):
    for u, v in G.edges():
        yield u, v
        yield v, u


def semicubes_convex(G, dist=None):
    dist = all_pairs_distances(G) if dist is None else dist
    return all(is_convex(G, semicube(G, a, b, dist).members, dist) for a, b in _oriented_edges(G))


def is_partial_cube(G, dist=None):
    return is_bipartite(G) and semicubes_convex(G, dist)


def is_l1_graph(G, dist=None):
    return semicubes_convex(G, dist)


def rescale(G, k):
    """Subdivide every edge with ``k - 1`` new vertices.

    Original vertices keep their indices; the new vertices of the ``e``-th edge
    ``(u, v)`` (in :meth:`Graph.edges` order) are numbered
    ``|V| + e(k-1) + t`` for ``t = 0 .. k-2``, walking from ``u`` to ``v``.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k == 1:
        return G
    n = G.vertex_count
    edges, labels = [], list(G.labels) if G.labels else [str(v) for v in range(n)]
    for e, (u, v) in enumerate(G.edges()):
        chain = [u] + [n + e * (k - 1) + t for t in range(k - 1)] + [v]
        edges.extend(zip(chain, chain[1:]))
        labels.extend(f"{labels[u]}~{labels[v]}#{t + 1}" for t in range(k - 1))
    return Graph.from_edges(n + (k - 1) * G.edge_count(), edges, labels)


def rescale_set(G, k, S):
    """Image of a vertex set under :func:`rescale`: ``S`` plus new vertices on edges inside ``S``."""
    S = set(S)
    n = G.vertex_count
    out = set(S)
    for e, (u, v) in enumerate(G.edges()):
        if u in S and v in S:
            out.update(n + e * (k - 1) + t for t in range(k - 1))
    return out


@dataclass(frozen=True)
class HypercubeEmbedding:
    scale_k: int
    dimension: int
    labels: tuple

    def label(self, v):
        return self.labels[v]


def theta_classes(G, dist=None):
    """Edge classes of the Djokovic-Winkler relation.

    Edges ``(a,b)`` and ``(c,d)`` are related iff
    ``d(a,c) + d(b,d) != d(a,d) + d(b,c)``.  Raises :class:`EmbeddingError`
    if the relation is not transitive.
    """
    dist = all_pairs_distances(G) if dist is None else dist
    E = G.edges()
    a = np.array([e[0] for e in E])
    b = np.array([e[1] for e in E])
    rel = dist[np.ix_(a, a)] + dist[np.ix_(b, b)] != dist[np.ix_(a, b)] + dist[np.ix_(b, a)]
    cls = np.full(len(E), -1)
    classes = []
    for i in range(len(E)):
        if cls[i] >= 0:
            continue
        members = np.flatnonzero(rel[i])
        if (cls[members] >= 0).any() or not rel[np.ix_(members, members)].all():
            raise EmbeddingError(f"Djokovic-Winkler relation is not transitive at edge {E[i]}")
        cls[members] = len(classes)
        classes.append([E[j] for j in members])
    return classes


def _labels_from_classes(G, classes, dist):
    n = G.vertex_count
    cols = [dist[:, b] < dist[:, a] for a, b in (c[0] for c in classes)]
    bits = np.stack(cols, axis=1) if cols else np.zeros((n, 0), dtype=bool)
    return [BitString.from_bits(bits[v]) for v in range(n)]


def verify_embedding(G, emb, dist=None):
    """Exhaustive check that ``d_H(label(u), label(v)) == k * d_G(u, v)`` for all pairs."""
    if len(emb.labels) != G.vertex_count:
        return False
    dist = all_pairs_distances(G) if dist is None else dist
    for u in range(G.vertex_count):
        for v in range(u + 1, G.vertex_count):
            if hamming_distance(emb.labels[u], emb.labels[v]) != emb.scale_k * dist[u, v]:
                return False
    return True


def embed_partial_cube(G, dist=None):
    """Scale-1 isometric hypercube embedding, one coordinate per Theta class."""
    dist = all_pairs_distances(G) if dist is None else dist
    if not is_partial_cube(G, dist):
        raise EmbeddingError("graph is not a partial cube (not bipartite or a semicube is not convex)")
    classes = theta_classes(G, dist)
    emb = HypercubeEmbedding(1, len(classes), tuple(_labels_from_classes(G, classes, dist)))
    if not verify_embedding(G, emb, dist):
        raise EmbeddingError("Theta-class labelling failed verification")
    return emb


def _drop_constant_coordinates(labels):
    if not labels:
        return labels
    n = labels[0].length
    vary = 0
    for lab in labels[1:]:
        vary |= lab.value ^ labels[0].value
    keep = [i for i in range(n) if vary >> i & 1]
    return [BitString.from_bits([lab[i] for i in keep]) for lab in labels]


def double_embedding(emb):
    """Scale-``2k`` embedding obtained by repeating every coordinate."""
    labels = [BitString.concat([lab, lab]) for lab in emb.labels]
    return HypercubeEmbedding(2 * emb.scale_k, 2 * emb.dimension, tuple(labels))


def embed_l1(G, dist=None):
    """Scale-2 hypercube embedding.

    Built from the 2-subdivision of ``G`` when that is a partial cube.  Some
    partial cubes (e.g. ``Q3``) have subdivisions that are not, and for them the
    scale-1 labels are doubled instead.
    """
    dist = all_pairs_distances(G) if dist is None else dist
    if not is_l1_graph(G, dist):
        raise EmbeddingError("graph is not an l1-graph (a semicube is not convex)")
    H = rescale(G, 2)
    try:
        sub = embed_partial_cube(H)
    except EmbeddingError as exc:
        if is_bipartite(G):
            return double_embedding(embed_partial_cube(G, dist))
        raise EmbeddingError(f"2-subdivision is not a partial cube; no scale-2 embedding constructed ({exc})") from exc
    labels = _drop_constant_coordinates(list(sub.labels[: G.vertex_count]))
    emb = HypercubeEmbedding(2, labels[0].length, tuple(labels))
    if not verify_embedding(G, emb, dist):
        raise EmbeddingError("restricted labelling failed verification")
    return emb


def embed_graph(G, dist=None):
    """Scale-1 embedding for partial cubes, otherwise scale 2."""
    dist = all_pairs_distances(G) if dist is None else dist
    if is_partial_cube(G, dist):
        return embed_partial_cube(G, dist)
    return embed_l1(G, dist)


def classify(G, dist=None):
    """``"partial_cube"``, ``"l1_graph"`` or ``"neither"``."""
    dist = all_pairs_distances(G) if dist is None else dist
    if not semicubes_convex(G, dist):
        return "neither"
    return "partial_cube" if is_bipartite(G) else "l1_graph"


def aligned_labels(emb, a, b):
    """Labels translated so ``a`` is all-zero and permuted so ``b`` is ``1^k 0^(n-k)``."""
    shift = emb.labels[a].value
    diff = emb.labels[a].value ^ emb.labels[b].value
    order = [i for i in range(emb.dimension) if diff >> i & 1]
    order += [i for i in range(emb.dimension) if not diff >> i & 1]
    out = []
    for lab in emb.labels:
        v = lab.value ^ shift
        out.append(BitString.from_bits([v >> i & 1 for i in order]))
    return out
