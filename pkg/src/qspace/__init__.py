"""Discrete quantum-space model on root-lattice 1-skeleta.

Build lattice complexes with tadpole registries, act on them with path words,
contract / decontract / split edges, and measure curvature, contraction
entropy, Hubble-law expansion and random-walk spectral dimension.
"""
from .complex import EdgeKind, EdgeStatus, LatticeComplex, TadpoleEntry, TadpoleRegistry
from .dynamics import ExpansionParams, HubbleFit, hubble_experiment, light_distance, step_halftime
from .errors import (
    ConfigurationError,
    ConstraintError,
    DeadEndError,
    DomainError,
    FitError,
    HolonomyUndefinedError,
    InsufficientStatisticsError,
    QSpaceError,
    StateError,
    UnknownEdgeError,
    UnknownVertexError,
    UnreachableError,
    WordSyntaxError,
)
from .lattice import build_lattice, build_path, neighbors, voronoi_cell
from .observables import HolonomyResult, curvature, entropy, entropy_witnesses
from .roots import RootSystem, SystemKind
from .spectral import (
    ReattachmentParams,
    SpectralEstimate,
    reattach,
    return_probability,
    spectral_dimension,
)
from .topology import contract, decontract, split_edge
from .words import Letter, Word, parse_word, walk

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "ConstraintError",
    "DeadEndError",
    "DomainError",
    "EdgeKind",
    "EdgeStatus",
    "ExpansionParams",
    "FitError",
    "HolonomyResult",
    "HolonomyUndefinedError",
    "HubbleFit",
    "InsufficientStatisticsError",
    "LatticeComplex",
    "Letter",
    "QSpaceError",
    "ReattachmentParams",
    "RootSystem",
    "SpectralEstimate",
    "StateError",
    "SystemKind",
    "TadpoleEntry",
    "TadpoleRegistry",
    "UnknownEdgeError",
    "UnknownVertexError",
    "UnreachableError",
    "Word",
    "WordSyntaxError",
    "build_lattice",
    "build_path",
    "contract",
    "curvature",
    "decontract",
    "entropy",
    "entropy_witnesses",
    "hubble_experiment",
    "light_distance",
    "neighbors",
    "parse_word",
    "reattach",
    "return_probability",
    "spectral_dimension",
    "split_edge",
    "step_halftime",
    "voronoi_cell",
    "walk",
]
