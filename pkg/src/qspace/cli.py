"""Command-line driver: build, mutate, measure, experiment, export.

Exit codes: 0 success, 1 runtime or measurement error, 2 configuration error.
``QSPACE_SEED`` supplies the default seed when none is given.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .complex import LatticeComplex
from .dynamics import ExpansionParams, auto_pairs, hubble_experiment, light_distance
from .errors import ConfigurationError, QSpaceError
from .observables import curvature, entropy_witnesses
from .replay import build_from, load_json, resolve_edge, resolve_vertex, run_replay
from .schemas import validate
from .spectral import (
    DEFAULT_WINDOW,
    ReattachmentParams,
    WalkGraph,
    reattach,
    return_probability,
    spectral_dimension,
)

EXIT_OK, EXIT_RUNTIME, EXIT_CONFIG = 0, 1, 2


# ------------------------------------------------------------------ output


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _document(kind: str, config: dict, result: dict) -> dict:
    doc = {"tool": "qspace", "version": __version__, "kind": kind, "config": config, "result": result}
    validate("results", doc)
    return doc


def _csv(config: dict, header: list[str], rows) -> str:
    buf = io.StringIO()
    buf.write(f"# qspace {__version__}\n")
    buf.write("# config: " + json.dumps(config, sort_keys=True, separators=(",", ":")) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def default_seed() -> int:
    raw = os.environ.get("QSPACE_SEED")
    if raw is None or raw == "":
        return 0
    try:
        seed = int(raw)
    except ValueError:
        seed = -1
    if seed < 0:
        raise ConfigurationError(f"must be a non-negative integer, got {raw!r}", path="QSPACE_SEED")
    return seed


# ----------------------------------------------------------------- inputs


def _load_complex(path: str) -> tuple[LatticeComplex, dict]:
    """Read a complex file or a replay file; returns the complex and the raw document."""
    doc = load_json(path)
    if isinstance(doc, dict) and "operations" in doc:
        return run_replay(doc), doc
    validate("complex", doc)
    return LatticeComplex.from_dict(doc), doc


def _vertex_ref(text: str):
    """``12`` is a vertex id, ``0,0,1`` a coordinate label."""
    parts = text.split(",")
    try:
        vals = [int(p) for p in parts]
    except ValueError:
        raise ConfigurationError(f"bad vertex reference {text!r}") from None
    return vals[0] if len(vals) == 1 and "," not in text else vals


def _edge_ref(text: str):
    """``7`` is an edge id, ``0,0:1,0`` an edge given by its endpoints."""
    if ":" in text:
        u, v = text.split(":", 1)
        return {"u": _vertex_ref(u), "v": _vertex_ref(v)}
    try:
        return int(text)
    except ValueError:
        raise ConfigurationError(f"bad edge reference {text!r}") from None


# --------------------------------------------------------------- commands


def cmd_build(args) -> int:
    seed = default_seed() if args.seed is None else args.seed
    K = build_from({"system": args.system, "extent": args.extent, "rng_seed": seed})
    _write(K.to_json() + "\n", args.out)
    return EXIT_OK


def cmd_mutate(args) -> int:
    doc = load_json(args.replay)
    K = None
    if args.complex is not None:
        K, _ = _load_complex(args.complex)
    K = run_replay(doc, K)
    _write(K.to_json() + "\n", args.out)
    return EXIT_OK


def _measure_spec(args, doc: dict) -> dict:
    if args.observable is None:
        spec = doc.get("measure") if isinstance(doc, dict) else None
        if spec is None:
            raise ConfigurationError("no observable given and the input has no measure block", path="--observable")
        return spec
    if args.observable == "curvature":
        if None in (args.base, args.x, args.y, args.z):
            raise ConfigurationError("curvature needs --base, --x, --y and --z", path="--observable")
        return {"observable": "curvature", "base": _vertex_ref(args.base), "x": args.x, "y": args.y, "z": args.z}
    if args.observable == "entropy":
        return {"observable": "entropy", "edges": [_edge_ref(e) for e in args.edge or []]}
    if args.u is None or args.v is None:
        raise ConfigurationError("distance needs --u and --v", path="--observable")
    return {
        "observable": "distance",
        "u": _vertex_ref(args.u),
        "v": _vertex_ref(args.v),
        "include_cell_edges": not args.no_cell_edges,
    }


def measure(K: LatticeComplex, spec: dict) -> dict:
    kind = spec["observable"]
    if kind == "curvature":
        base = resolve_vertex(K, spec["base"])
        return curvature(K, base, spec["x"], spec["y"], spec["z"]).to_dict()
    if kind == "entropy":
        edges = [resolve_edge(K, e) for e in spec["edges"]]
        w = entropy_witnesses(K, edges)
        return {"S": -len(w), "witnesses": w}
    u, v = resolve_vertex(K, spec["u"]), resolve_vertex(K, spec["v"])
    return {"distance": light_distance(K, u, v, spec.get("include_cell_edges", True))}


def cmd_measure(args) -> int:
    K, doc = _load_complex(args.input)
    spec = _measure_spec(args, doc)
    config = {
        "input_sha256": hashlib.sha256(Path(args.input).read_bytes()).hexdigest(),
        "measure": spec,
    }
    _write(_dump(_document(spec["observable"], config, measure(K, spec))), args.out)
    return EXIT_OK


def _seeds(cfg: dict) -> list[int]:
    return list(cfg["seeds"]) if "seeds" in cfg else [default_seed()]


def run_hubble(cfg: dict) -> tuple[str, dict]:
    p = float(cfg.get("p", 0.5))
    steps = int(cfg.get("steps", 8))
    window = int(cfg.get("window", 4))
    schedule = tuple(cfg["schedule"]) if "schedule" in cfg else None
    cells = bool(cfg.get("include_cell_edges", True))
    if "auto_pairs" in cfg and cfg["auto_pairs"]["max_D"] < cfg["auto_pairs"]["min_D"]:
        raise ConfigurationError("max_D must be at least min_D", path="$.auto_pairs.max_D")
    rows, per_seed = [], []
    for seed in _seeds(cfg):
        K = build_from({"system": cfg["system"], "extent": cfg["extent"], "rng_seed": seed})
        if "pairs" in cfg:
            pairs = [(resolve_vertex(K, a), resolve_vertex(K, b)) for a, b in cfg["pairs"]]
        else:
            ap = cfg["auto_pairs"]
            pairs = auto_pairs(K, ap["count"], ap["min_D"], ap["max_D"])
        params = ExpansionParams(p, steps, seed, window, schedule)
        fit = hubble_experiment(K, pairs, params, np.random.default_rng(seed), cells)
        for (step, j), (D, v) in zip(fit.sample_keys, fit.samples):
            rows.append([seed, step, j, repr(D), repr(v)])
        per_seed.append({"seed": seed, "H0": fit.H0, "r_squared": fit.r_squared, "samples": len(fit.samples)})
    result = {
        "H0": float(np.mean([s["H0"] for s in per_seed])),
        "r_squared": float(np.mean([s["r_squared"] for s in per_seed])),
        "per_seed": per_seed,
    }
    return _csv(cfg, ["seed", "step", "pair_id", "D", "v"], rows), result


def run_spectral(cfg: dict) -> tuple[str, dict]:
    walkers = int(cfg.get("walkers", 100_000))
    window = (int(cfg.get("t_min", DEFAULT_WINDOW[0])), int(cfg.get("t_max", DEFAULT_WINDOW[1])))
    if window[1] <= window[0]:
        raise ConfigurationError("t_max must exceed t_min", path="$.t_max")
    seeds = _seeds(cfg)
    series, per_seed = [], []
    for seed in seeds:
        K = build_from({"system": cfg["system"], "extent": cfg["extent"], "rng_seed": seed})
        origin = resolve_vertex(K, cfg.get("origin", 0))
        reattach_rng, walk_rng = (np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(2))
        fired = 0
        if "reattach" in cfg:
            ra = cfg["reattach"]
            params = ReattachmentParams(ra["lambda"], ra["base_rate"], seed, remove_local=ra.get("remove_local", False))
            fired = reattach(K, params, reattach_rng).fired
        graph = WalkGraph(K, tadpoles=cfg.get("tadpole_moves", True))
        P = return_probability(graph, origin, window[1], walkers, walk_rng)
        series.append(P)
        est = spectral_dimension(P, window, walkers)
        per_seed.append({"seed": seed, "d_s": est.d_s, "stderr": est.stderr, "reattachments": fired})
    P = np.mean(series, axis=0)
    n = walkers * len(seeds)
    err = np.sqrt(P * (1.0 - P) / n)
    est = spectral_dimension(P, window, n)
    rows = [[t, repr(float(P[t])), repr(float(err[t]))] for t in range(len(P))]
    result = {**est.to_dict(), "seeds": seeds, "per_seed": per_seed}
    return _csv(cfg, ["t", "P", "stderr"], rows), result


def cmd_experiment(args) -> int:
    cfg = load_json(args.config)
    validate("config", cfg)
    csv_text, result = (run_hubble if cfg["experiment"] == "hubble" else run_spectral)(cfg)
    prefix = args.out or str(Path(args.config).with_suffix(""))
    Path(prefix + ".csv").write_text(csv_text)
    Path(prefix + ".summary.json").write_text(_dump(_document(cfg["experiment"], cfg, result)))
    return EXIT_OK


def cmd_export(args) -> int:
    K, _ = _load_complex(args.input)
    text = K.to_dot() if args.format == "dot" else K.to_json(indent=2) + "\n"
    _write(text, args.out)
    return EXIT_OK


# ----------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qspace", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"qspace {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a lattice complex")
    b.add_argument("--system", required=True, help="a3, b3, c3, square, cubic or path")
    b.add_argument("--extent", type=int, required=True, help="graph radius (edge count for path)")
    b.add_argument("--seed", type=int, default=None)
    b.add_argument("--out")
    b.set_defaults(func=cmd_build)

    m = sub.add_parser("mutate", help="apply a replay of topology operations")
    m.add_argument("replay")
    m.add_argument("--complex", help="starting complex when the replay has no build block")
    m.add_argument("--out")
    m.set_defaults(func=cmd_mutate)

    ms = sub.add_parser("measure", help="curvature, entropy or distance on a complex or replay")
    ms.add_argument("input")
    ms.add_argument("--observable", choices=["curvature", "entropy", "distance"])
    ms.add_argument("--base", help="vertex id or comma-separated coordinates")
    ms.add_argument("--x", type=int)
    ms.add_argument("--y", type=int)
    ms.add_argument("--z", type=int)
    ms.add_argument("--edge", action="append", help="edge id or u:v coordinates; repeatable")
    ms.add_argument("--u")
    ms.add_argument("--v")
    ms.add_argument("--no-cell-edges", action="store_true")
    ms.add_argument("--out")
    ms.set_defaults(func=cmd_measure)

    e = sub.add_parser("experiment", help="run a hubble or spectral experiment config")
    e.add_argument("config")
    e.add_argument("--out", help="output prefix; writes PREFIX.csv and PREFIX.summary.json")
    e.set_defaults(func=cmd_experiment)

    x = sub.add_parser("export", help="export a complex as DOT or indented JSON")
    x.add_argument("input")
    x.add_argument("--format", choices=["dot", "json"], default="dot")
    x.add_argument("--out")
    x.set_defaults(func=cmd_export)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as err:
        print(f"qspace: config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except (QSpaceError, OSError) as err:
        print(f"qspace: error: {err}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
