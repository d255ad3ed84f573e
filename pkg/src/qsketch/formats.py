"""Text formats for graphs, quantized vectors and embeddings.

Graphs: an edge list (one ``u v`` pair of 0-based integers per line) or a
JSON adjacency document ``{"vertex": ["neighbor", ...], ...}``.
Vectors: header ``dim d bits k scale M`` then one real per line.
Embeddings: header ``scale k dimension m`` then ``name bits`` per vertex.
Blank lines and ``#`` comments are ignored in the text formats.
"""

import json
from pathlib import Path

from .bits import BitString
from .graphs import Graph, GraphError, HypercubeEmbedding
from .l1 import QuantizedVector


class FormatError(ValueError):
    pass


def _content_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_edge_list(text):
    edges = []
    for lineno, line in _content_lines(text):
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError(f"line {lineno}: vertices must be integers") from None
        if u < 0 or v < 0:
            raise FormatError(f"line {lineno}: vertices must be non-negative")
        edges.append((u, v))
    if not edges:
        raise FormatError("edge list is empty")
    n = 1 + max(max(e) for e in edges)
    return Graph.from_edges(n, edges)


def parse_adjacency(doc):
    if isinstance(doc, str):
        doc = json.loads(doc)
    if not isinstance(doc, dict) or not doc:
        raise FormatError("adjacency document must be a nonempty JSON object")
    names = [str(k) for k in doc]
    index = {name: i for i, name in enumerate(names)}
    pairs = set()
    for name, nbrs in doc.items():
        if not isinstance(nbrs, list):
            raise FormatError(f"neighbors of {name!r} must be a list")
        nbrs = [str(x) for x in nbrs]
        if len(set(nbrs)) != len(nbrs):
            raise FormatError(f"duplicate edge in the neighbor list of {name!r}")
        for other in nbrs:
            if other not in index:
                raise FormatError(f"unknown vertex {other!r} in the neighbor list of {name!r}")
            if other == str(name):
                raise FormatError(f"self-loop at {name!r}")
            pairs.add(frozenset((index[str(name)], index[other])))
    return Graph.from_edges(len(names), [tuple(sorted(p)) for p in pairs], labels=names)


def parse_graph(text):
    try:
        if text.lstrip().startswith("{"):
            return parse_adjacency(text)
        return parse_edge_list(text)
    except GraphError as exc:
        raise FormatError(str(exc)) from None


def load_graph(path):
    return parse_graph(Path(path).read_text())


def parse_vector(text):
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError("vector file is empty")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 6 or parts[0::2] != ["dim", "bits", "scale"]:
        raise FormatError(f"line {lineno}: expected header 'dim d bits k scale M'")
    try:
        d, k = int(parts[1]), int(parts[3])
    except ValueError:
        raise FormatError("dim and bits must be integers") from None
    entries = [line for _, line in lines[1:]]
    if len(entries) != d:
        raise FormatError(f"header declares {d} entries, found {len(entries)}")
    try:
        return QuantizedVector(tuple(entries), k, parts[5])
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def load_vector(path):
    return parse_vector(Path(path).read_text())


def format_vector(x):
    lines = [f"dim {x.dim} bits {x.bits_k} scale {x.scale_M}"]
    lines += [str(z) for z in x.entries]
    return "\n".join(lines) + "\n"


def format_embedding(graph, emb):
    lines = [f"scale {emb.scale_k} dimension {emb.dimension}"]
    lines += [f"{graph.name(v)} {emb.labels[v]}" for v in range(graph.vertex_count)]
    return "\n".join(lines) + "\n"


def write_embedding(path, graph, emb):
    Path(path).write_text(format_embedding(graph, emb))


def parse_embedding(text):
    """Returns ``(names, HypercubeEmbedding)``."""
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError("embedding file is empty")
    parts = lines[0][1].split()
    if len(parts) != 4 or parts[0::2] != ["scale", "dimension"]:
        raise FormatError("expected header 'scale k dimension m'")
    k, m = int(parts[1]), int(parts[3])
    names, labels = [], []
    for lineno, line in lines[1:]:
        fields = line.split()
        if len(fields) != 2 or len(fields[1]) != m:
            raise FormatError(f"line {lineno}: expected 'name bits' with {m} bits")
        names.append(fields[0])
        labels.append(BitString.from_str(fields[1]))
    return names, HypercubeEmbedding(k, m, tuple(labels))
