"""Seeded experiment runs and line-delimited JSON reports.

A report is one JSON object per line: ``{"type": "record", ...}`` entries in
trial order followed by a single ``{"type": "summary", ...}``.  The wall-clock
time appears only in the summary's ``timestamp`` field, so two runs with the
same configuration differ only there.  Trial ``i`` draws its randomness from
``derive_seed(master_seed, "trial", i)``.
"""

import json
import math
from dataclasses import asdict, dataclass, fields
from datetime import datetime, timezone
from pathlib import Path

import jsonschema
import numpy as np

from .bits import BitString
from .bounds import OracleMode, correctness_table
from .config import ProtocolConfig
from .distance import GraphDistanceLadder, run_dis_epsilon
from .formats import format_embedding, load_graph, load_vector
from .graphs import all_pairs_distances, classify, diameter, embed_graph, path_graph, verify_embedding
from .l1 import L1Ladder, max_bits, run_l1_epsilon
from .ladder import HammingLadder, plan_cost, run_ham_epsilon
from .seeding import derive_rng, derive_seed

PROTOCOLS = ("hamming", "graph", "l1", "recognize", "embed", "reduce-gt", "bench")


@dataclass(frozen=True)
class ExperimentConfig:
    protocol: str
    eps: float = 0.5
    trials: int = 1
    master_seed: int = 0
    total_fail: float = 0.05
    matrix_fail: float = 1e-3
    jl_constant: float = 24.0
    output_path: str = None
    # protocol inputs
    n: int = 256
    planted_distance: int = None
    graph: str = None
    source: str = None
    target: str = None
    vectors: tuple = None
    bits: int = 6
    oracle: str = "all"
    bench_protocol: str = "hamming"
    sizes: tuple = (256, 1024, 4096, 16384)

    def __post_init__(self):
        if self.protocol not in PROTOCOLS:
            raise ValueError(f"unknown protocol {self.protocol!r}; choose from {', '.join(PROTOCOLS)}")
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 <= self.master_seed < 1 << 64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        self.protocol_config()

    def protocol_config(self):
        return ProtocolConfig(total_fail=self.total_fail, matrix_fail=self.matrix_fail, jl_constant=self.jl_constant)

    def to_dict(self):
        d = asdict(self)
        for key in ("vectors", "sizes"):
            if d[key] is not None:
                d[key] = list(d[key])
        return d

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]


_NUM = {"type": "number"}
_NUM_OR_NULL = {"type": ["number", "null"]}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "qsketch report line",
    "oneOf": [
        {
            "type": "object",
            "required": ["type", "trial"],
            "properties": {
                "type": {"const": "record"},
                "trial": {"type": "integer", "minimum": 0},
                "seed": {"type": "integer"},
                "estimate": _NUM,
                "true_distance": _NUM_OR_NULL,
                "succeeded": {"type": ["boolean", "null"]},
                "relative_error": _NUM_OR_NULL,
                "failure_probability": _NUM_OR_NULL,
            },
        },
        {
            "type": "object",
            "required": ["type", "protocol", "config", "timestamp"],
            "properties": {
                "type": {"const": "summary"},
                "protocol": {"enum": list(PROTOCOLS)},
                "config": {"type": "object"},
                "timestamp": {"type": "string"},
                "trials": {"type": "integer"},
                "success_rate": _NUM_OR_NULL,
                "cost": {
                    "type": ["object", "null"],
                    "required": ["qubits_total", "copies_total", "swap_tests_total"],
                },
            },
        },
    ],
}


def validate_line(obj):
    jsonschema.validate(obj, REPORT_SCHEMA)


def _result_record(trial, seed, result, failure_probability=None):
    rec = {"type": "record", "trial": trial, "seed": seed}
    rec.update(result.to_dict())
    rec.pop("cost", None)
    if failure_probability is not None:
        rec["failure_probability"] = failure_probability
    return rec


def _planted_pair(n, distance, rng):
    x = BitString.random(n, rng)
    flips = rng.choice(n, size=distance, replace=False)
    return x, x.flip(int(i) for i in flips)


def _run_hamming(cfg):
    pc = cfg.protocol_config()
    setup = HammingLadder(cfg.n, cfg.eps, pc, derive_seed(cfg.master_seed, "setup"))
    records = []
    for t in range(cfg.trials):
        seed = derive_seed(cfg.master_seed, "trial", t)
        rng = derive_rng(seed, "input")
        D = cfg.planted_distance if cfg.planted_distance is not None else int(rng.integers(0, cfg.n + 1))
        if not 0 <= D <= cfg.n:
            raise ValueError(f"planted distance must lie in [0, {cfg.n}]")
        x, y = _planted_pair(cfg.n, D, rng)
        res = run_ham_epsilon(x, y, cfg.eps, pc, seed, setup)
        records.append(_result_record(t, seed, res, setup.failure_probability(x, y, D)))
    return records, setup.cost_report(), {}


def _vertex(G, name, what):
    if name is None:
        raise ValueError(f"graph protocol needs a {what} vertex")
    return G.index(name)


def _run_graph(cfg):
    G = load_graph(cfg.graph)
    dist = all_pairs_distances(G)
    emb = embed_graph(G, dist)
    v, w = _vertex(G, cfg.source, "source"), _vertex(G, cfg.target, "target")
    pc = cfg.protocol_config()
    records, cost = [], None
    for t in range(cfg.trials):
        seed = derive_seed(cfg.master_seed, "trial", t)
        setup = GraphDistanceLadder(G, emb, cfg.eps, pc, derive_seed(seed, "setup"), dist)
        res = run_dis_epsilon(G, emb, v, w, cfg.eps, pc, seed, setup)
        fp = setup.failure_probability(emb.labels[v], emb.labels[w], int(dist[v, w]))
        records.append(_result_record(t, seed, res, fp))
        cost = res.cost
    extra = {"embedding": {"scale": emb.scale_k, "dimension": emb.dimension}, "jl_dimension": setup.jl_dim}
    return records, cost, extra


def _run_l1(cfg):
    if not cfg.vectors or len(cfg.vectors) != 2:
        raise ValueError("l1 protocol needs two vector files")
    x, y = (load_vector(p) for p in cfg.vectors)
    pc = cfg.protocol_config()
    setup = L1Ladder(x.dim, x.bits_k, cfg.eps, pc, derive_seed(cfg.master_seed, "setup"))
    records = []
    for t in range(cfg.trials):
        seed = derive_seed(cfg.master_seed, "trial", t)
        records.append(_result_record(t, seed, run_l1_epsilon(x, y, cfg.eps, pc, seed, setup)))
    return records, setup.cost_report(), {}


def _run_recognize(cfg):
    G = load_graph(cfg.graph)
    dist = all_pairs_distances(G)
    rec = {
        "type": "record",
        "trial": 0,
        "vertices": G.vertex_count,
        "edges": G.edge_count(),
        "diameter": diameter(G, dist),
        "class": classify(G, dist),
    }
    return [rec], None, {}


def _run_embed(cfg):
    G = load_graph(cfg.graph)
    dist = all_pairs_distances(G)
    emb = embed_graph(G, dist)
    text = format_embedding(G, emb)
    rec = {
        "type": "record",
        "trial": 0,
        "scale": emb.scale_k,
        "dimension": emb.dimension,
        "verified": verify_embedding(G, emb, dist),
        "embedding": text,
    }
    return [rec], None, {}


def _run_reduce_gt(cfg):
    modes = list(OracleMode) if cfg.oracle == "all" else [OracleMode(cfg.oracle)]
    rows = correctness_table(cfg.bits, cfg.eps, modes, seed=cfg.master_seed)
    records = [{"type": "record", "trial": i, **row} for i, row in enumerate(rows)]
    return records, None, {}


def bench_shape(n):
    """``(log2 n)^2 log2 log2 n``, the predicted growth of the Hamming protocol's qubit cost."""
    lg = math.log2(n)
    return lg * lg * math.log2(lg)


def _bench_cost(cfg, size):
    pc = cfg.protocol_config()
    if cfg.bench_protocol == "hamming":
        return plan_cost(size, cfg.eps, pc)
    if cfg.bench_protocol == "graph":
        G = path_graph(size)
        return GraphDistanceLadder(G, embed_graph(G), cfg.eps, pc).cost_report()
    if cfg.bench_protocol == "l1":
        k = min(cfg.bits, max_bits(size, pc))
        return L1Ladder(size, k, cfg.eps, pc).cost_report()
    raise ValueError(f"cannot bench protocol {cfg.bench_protocol!r}")


def _run_bench(cfg):
    records = []
    for i, size in enumerate(cfg.sizes):
        cost = _bench_cost(cfg, int(size))
        rec = {"type": "record", "trial": i, "size": int(size), "steps": len(cost.steps)}
        rec.update({k: v for k, v in cost.to_dict().items() if k != "steps"})
        if cfg.bench_protocol == "hamming":
            rec["shape"] = bench_shape(int(size))
        records.append(rec)
    extra = {}
    if cfg.bench_protocol == "hamming":
        fit = fit_shape_constant([r["size"] for r in records], [r["qubits_total"] for r in records])
        extra["shape_fit"] = fit
    return records, None, extra


def fit_shape_constant(sizes, costs):
    """Least-squares fit of ``log cost = log C + log shape(n)``; reports per-point ratios."""
    shapes = np.array([bench_shape(n) for n in sizes])
    ratios = np.asarray(costs, dtype=float) / shapes
    C = float(np.exp(np.mean(np.log(ratios))))
    dev = [float(r / C) for r in ratios]
    return {"constant": C, "ratio_to_fit": dev, "max_deviation": float(max(max(dev), 1 / min(dev)))}


_RUNNERS = {
    "hamming": _run_hamming,
    "graph": _run_graph,
    "l1": _run_l1,
    "recognize": _run_recognize,
    "embed": _run_embed,
    "reduce-gt": _run_reduce_gt,
    "bench": _run_bench,
}


def build_report(cfg, timestamp=None):
    """Run the experiment and return the list of report lines (dicts)."""
    records, cost, extra = _RUNNERS[cfg.protocol](cfg)
    outcomes = [r["succeeded"] for r in records if r.get("succeeded") is not None]
    summary = {
        "type": "summary",
        "protocol": cfg.protocol,
        "config": cfg.to_dict(),
        "trials": len(records),
        "success_rate": sum(outcomes) / len(outcomes) if outcomes else None,
        "cost": cost.to_dict() if cost is not None else None,
        "timestamp": timestamp or datetime.now(timezone.utc).isoformat(),
    }
    summary.update(extra)
    lines = sorted(records, key=lambda r: r["trial"]) + [summary]
    for line in lines:
        validate_line(line)
    return lines


def dump_report(lines):
    return "".join(json.dumps(line, sort_keys=True) + "\n" for line in lines)


def run_experiment(cfg, timestamp=None):
    """Run ``cfg``; writes the report to ``cfg.output_path`` if set and returns its text."""
    text = dump_report(build_report(cfg, timestamp))
    if cfg.output_path:
        Path(cfg.output_path).write_text(text)
    return text


def strip_timestamp(text):
    lines = [json.loads(line) for line in text.splitlines()]
    for line in lines:
        line.pop("timestamp", None)
    return lines
