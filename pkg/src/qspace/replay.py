"""Replay files: a build recipe plus a list of topology operations.

Vertices may be named by id or by embedding coordinates, and edges by id or
by their two endpoints, so replays stay readable when ids shift.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .complex import LatticeComplex
from .dynamics import ExpansionParams, step_halftime
from .errors import ConfigurationError
from .lattice import build_lattice, build_path
from .schemas import validate
from .topology import contract, decontract, split_edge

__all__ = ["build_from", "load_json", "resolve_edge", "resolve_vertex", "run_replay"]


def load_json(path: str | Path):
    """Parse a JSON file; syntax errors name the line and column."""
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigurationError(err.msg, path=f"{path}:{err.lineno}:{err.colno}") from err


def build_from(spec: dict) -> LatticeComplex:
    """Build from ``{system, extent, rng_seed}``; system ``path`` means an isolated path."""
    system = spec["system"]
    seed = int(spec.get("rng_seed", 0))
    if str(system).lower() == "path":
        return build_path(int(spec["extent"]), seed)
    return build_lattice(system, int(spec["extent"]), seed)


def resolve_vertex(complex: LatticeComplex, ref) -> int:
    """Current vertex for an id or a coordinate list."""
    if isinstance(ref, (list, tuple)):
        return complex.rep(complex.vertex_at(ref))
    complex.require_vertex(int(ref))
    return int(ref)


def resolve_edge(complex: LatticeComplex, ref) -> int:
    if isinstance(ref, dict):
        return complex.edge_between(resolve_vertex(complex, ref["u"]), resolve_vertex(complex, ref["v"]))
    complex.edge(int(ref))
    return int(ref)


def run_replay(doc: dict, complex: LatticeComplex | None = None) -> LatticeComplex:
    """Apply a replay document, building the complex first when it has a ``build`` block."""
    validate("replay", doc)
    if "build" in doc:
        if complex is not None:
            raise ConfigurationError("replay has a build block and a complex was also given", path="$.build")
        complex = build_from(doc["build"])
    elif complex is None:
        raise ConfigurationError("replay has no build block and no complex was given", path="$")
    for op in doc["operations"]:
        kind = op["op"]
        if kind == "contract":
            contract(complex, resolve_edge(complex, op["edge"]))
        elif kind == "decontract":
            decontract(complex)
        elif kind == "split":
            split_edge(complex, resolve_edge(complex, op["edge"]))
        else:
            seed = int(op.get("seed", 0))
            step_halftime(complex, ExpansionParams(float(op["p"]), 1, seed), np.random.default_rng(seed))
    return complex
