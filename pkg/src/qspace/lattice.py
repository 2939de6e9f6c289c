"""Finite portions of the root lattices, their adjacency and Voronoi duality."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.spatial import HalfspaceIntersection

from .complex import LatticeComplex
from .errors import ConfigurationError
from .roots import RootSystem, SystemKind, Vector

__all__ = [
    "RootSystem",
    "SystemKind",
    "VoronoiCellDescriptor",
    "build_lattice",
    "build_path",
    "lattice_ball",
    "neighbors",
    "voronoi_cell",
]


def _add(p: Vector, r: Vector) -> Vector:
    return tuple(a + b for a, b in zip(p, r))


def lattice_ball(system: RootSystem, radius: int) -> dict[Vector, int]:
    """Lattice points within ``radius`` root steps of the origin, with their depth."""
    origin = (0,) * system.dim
    depth = {origin: 0}
    layer = [origin]
    for d in range(1, radius + 1):
        nxt = []
        for p in layer:
            for r in system.roots:
                q = _add(p, r)
                if q not in depth:
                    depth[q] = d
                    nxt.append(q)
        layer = nxt
    return depth


def build_lattice(system: RootSystem | str, extent: int, rng_seed: int = 0) -> LatticeComplex:
    """Build the ball of graph radius ``extent`` around the origin.

    Vertex ids are assigned by (depth, coordinates), so the origin is vertex 0.
    Each vertex gets one tadpole (index 0, orientation +1); top-dimensional
    cells of the tiling that lie entirely inside the ball are recorded.
    """
    if not isinstance(system, RootSystem):
        system = RootSystem.from_name(system)
    if extent < 0:
        raise ConfigurationError(f"extent must be non-negative, got {extent}")
    depth = lattice_ball(system, extent)
    order = sorted(depth, key=lambda p: (depth[p], p))
    K = LatticeComplex(system, rng_seed)
    index = {p: K.add_vertex(p) for p in order}
    for p in order:
        for g, root in enumerate(system.generators, start=1):
            q = _add(p, root)
            if q in index:
                K.add_edge(index[p], index[q], g)
    roots = set(system.roots)
    for cell in _prototype_cells(system, index):
        skeleton = [
            (i, j)
            for i in range(len(cell))
            for j in range(i + 1, len(cell))
            if tuple(q - p for p, q in zip(cell[i], cell[j])) in roots
        ]
        K.add_cell((index[p] for p in cell), K.intern_cell_type(skeleton))
    return K


def build_path(n_edges: int, rng_seed: int = 0) -> LatticeComplex:
    """An isolated path of ``n_edges`` x1-edges (no cells), embedded on the square lattice."""
    if n_edges < 0:
        raise ConfigurationError(f"path length must be non-negative, got {n_edges}")
    K = LatticeComplex(RootSystem.of(SystemKind.SQUARE2D), rng_seed)
    ids = [K.add_vertex((i, 0)) for i in range(n_edges + 1)]
    for a, b in zip(ids, ids[1:]):
        K.add_edge(a, b, 1)
    return K


def _prototype_cells(system: RootSystem, index: dict[Vector, int]) -> list[tuple[Vector, ...]]:
    dim = system.dim
    corners = list(itertools.product((0, 1), repeat=dim))
    cells = []
    if system.kind in (SystemKind.SQUARE2D, SystemKind.CUBIC3D, SystemKind.B3):
        # Z^d: unit hypercubes anchored at their minimal corner
        for u in sorted(index):
            cell = tuple(_add(u, s) for s in corners)
            if all(p in index for p in cell):
                cells.append(cell)
        return cells
    # A3/C3 generate the fcc lattice: tetrahedral-octahedral honeycomb
    anchors = sorted({tuple(a - b for a, b in zip(p, s)) for p in index for s in corners})
    for u in anchors:
        tet = tuple(_add(u, s) for s in corners if sum(_add(u, s)) % 2 == 0)
        if all(p in index for p in tet):
            cells.append(tet)
    units = [tuple(1 if k == i else 0 for k in range(3)) for i in range(3)]
    centres = sorted({_add(p, e) for p in index for e in units + [tuple(-c for c in e) for e in units]})
    for c in centres:
        if sum(c) % 2 == 0:
            continue
        octa = tuple(_add(c, tuple(sgn * x for x in e)) for e in units for sgn in (1, -1))
        if all(p in index for p in octa):
            cells.append(octa)
    return cells


def neighbors(complex: LatticeComplex, v: int) -> list[tuple[int, int]]:
    """Live-edge adjacency of ``v`` as ``(neighbour, edge id)``, sorted by edge id."""
    complex.require_vertex(v)
    return sorted(((nb, eid) for eid, nb in complex.adjacency(v).items()), key=lambda t: t[1])


@dataclass(frozen=True)
class VoronoiCellDescriptor:
    face_count: int
    face_normals: tuple[Vector, ...]


def voronoi_cell(system: RootSystem | str, tol: float = 1e-9) -> VoronoiCellDescriptor:
    """Voronoi cell of the origin, from the bisectors of all points within two root steps."""
    if not isinstance(system, RootSystem):
        system = RootSystem.from_name(system)
    pts = [p for p, d in lattice_ball(system, 2).items() if d > 0]
    P = np.array(pts, dtype=float)
    # p.x - |p|^2/2 <= 0, in scipy's [A; b] layout (A x + b <= 0)
    halfspaces = np.hstack([P, -0.5 * (P**2).sum(axis=1, keepdims=True)])
    hs = HalfspaceIntersection(halfspaces, np.zeros(system.dim))
    V = hs.intersections
    normals = []
    for p, h in zip(pts, halfspaces):
        on = V[np.abs(V @ h[:-1] + h[-1]) < tol]
        if len(on) >= system.dim and np.linalg.matrix_rank(on[1:] - on[0], tol=1e-7) == system.dim - 1:
            normals.append(p)
    return VoronoiCellDescriptor(len(normals), tuple(sorted(normals)))
