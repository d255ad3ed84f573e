"""Command-line front end: ``qsketch <subcommand> [options]``.

Settings resolve in order: built-in defaults, ``QSKETCH_SEED`` for the
master seed, a ``key = value`` config file (``--config``), then flags.
"""

import argparse
import json
import os
import sys

from .bounds import OracleMode
from .experiment import REPORT_SCHEMA, ExperimentConfig, run_experiment

SEED_ENV = "QSKETCH_SEED"

_INT = {"trials", "master_seed", "n", "planted_distance", "bits"}
_FLOAT = {"eps", "total_fail", "matrix_fail", "jl_constant"}
_LIST = {"vectors": str, "sizes": int}


def _coerce(key, value):
    if key in _INT:
        return int(value, 0) if isinstance(value, str) else int(value)
    if key in _FLOAT:
        return float(value)
    if key in _LIST:
        items = value.replace(",", " ").split() if isinstance(value, str) else value
        return tuple(_LIST[key](x) for x in items)
    return value


def read_config_file(path):
    out = {}
    known = set(ExperimentConfig.field_names())
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key == "seed":
                key = "master_seed"
            if key not in known:
                raise ValueError(f"{path}:{lineno}: unknown setting {key!r}")
            out[key] = _coerce(key, value)
    return out


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value settings file")
    common.add_argument("--seed", dest="master_seed", help=f"master seed (default ${SEED_ENV} or 0)")
    common.add_argument("--eps", type=float)
    common.add_argument("--trials", type=int)
    common.add_argument("--total-fail", type=float)
    common.add_argument("--matrix-fail", type=float)
    common.add_argument("--jl-constant", type=float)
    common.add_argument("--report", dest="output_path", help="report file (default: stdout)")

    p = argparse.ArgumentParser(prog="qsketch", description="Sketch-and-fingerprint distance protocol simulator")
    sub = p.add_subparsers(dest="protocol", required=True)

    h = sub.add_parser("hamming", parents=[common], help="Hamming distance of random planted pairs")
    h.add_argument("--n", type=int)
    h.add_argument("--planted-distance", type=int)

    g = sub.add_parser("graph", parents=[common], help="shortest-path distance in an l1-graph")
    g.add_argument("--graph", required=True)
    g.add_argument("--source", required=True)
    g.add_argument("--target", required=True)

    v = sub.add_parser("l1", parents=[common], help="l1 distance of two quantized vectors")
    v.add_argument("--vectors", nargs=2, metavar=("FILE_A", "FILE_B"), required=True)

    r = sub.add_parser("recognize", parents=[common], help="classify a graph as partial cube / l1-graph")
    r.add_argument("--graph", required=True)

    e = sub.add_parser("embed", parents=[common], help="hypercube embedding of an l1-graph")
    e.add_argument("--graph", required=True)
    e.add_argument("--out", dest="embedding_out", help="write the embedding (header + labels) here")

    gt = sub.add_parser("reduce-gt", parents=[common], help="greater-than via an approximate difference oracle")
    gt.add_argument("--bits", type=int)
    gt.add_argument("--oracle", choices=["all"] + [m.value for m in OracleMode])

    b = sub.add_parser("bench", parents=[common], help="qubit-cost table over input sizes")
    b.add_argument("--protocol", dest="bench_protocol", choices=["hamming", "graph", "l1"])
    b.add_argument("--sizes", help="comma-separated sizes")

    sub.add_parser("schema", help="print the report JSON schema")
    return p


def resolve_config(args):
    settings = {"protocol": args.protocol}
    if os.environ.get(SEED_ENV):
        settings["master_seed"] = int(os.environ[SEED_ENV], 0)
    if args.config:
        settings.update(read_config_file(args.config))
    for key in ExperimentConfig.field_names():
        value = getattr(args, key, None)
        if value is not None and key != "protocol":
            settings[key] = _coerce(key, value)
    settings["protocol"] = args.protocol
    return ExperimentConfig(**settings)


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.protocol == "schema":
        print(json.dumps(REPORT_SCHEMA, indent=2))
        return 0
    try:
        cfg = resolve_config(args)
        if args.protocol == "embed" and args.embedding_out:
            text = run_experiment(cfg)
            record = json.loads(text.splitlines()[0])
            with open(args.embedding_out, "w") as fh:
                fh.write(record["embedding"])
        else:
            text = run_experiment(cfg)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"qsketch: error: {exc}", file=sys.stderr)
        return 2
    if not cfg.output_path:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
