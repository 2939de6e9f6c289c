import itertools

import numpy as np
import pytest

from qspace.errors import ConfigurationError, DomainError, UnknownVertexError
from qspace.lattice import build_lattice, build_path, lattice_ball, neighbors, voronoi_cell
from qspace.roots import RootSystem, SystemKind

COORDINATION = {"A3": 12, "B3": 18, "C3": 18, "Square2D": 4, "Cubic3D": 6}


@pytest.mark.parametrize("name,z", COORDINATION.items())
def test_interior_coordination(name, z):
    K = build_lattice(name, 2)
    assert len(neighbors(K, 0)) == z
    assert len(RootSystem.from_name(name).roots) == z


@pytest.mark.parametrize("name", COORDINATION)
def test_extent_zero_is_a_single_vertex(name):
    K = build_lattice(name, 0)
    assert K.num_vertices == 1
    assert K.num_live_edges == 0
    assert len(K.vertices[0].registry) == 1


def test_square_extent_one():
    K = build_lattice("square", 1)
    assert K.num_vertices == 5
    assert sorted(K.vertices[nb].coords for nb, _ in neighbors(K, 0)) == [(-1, 0), (0, -1), (0, 1), (1, 0)]


def test_ball_is_graph_radius():
    # square lattice: an L1 ball of radius r holds 2r^2 + 2r + 1 points
    for r in range(5):
        assert len(lattice_ball(RootSystem.of(SystemKind.SQUARE2D), r)) == 2 * r * r + 2 * r + 1


def test_vertex_ids_sorted_by_depth():
    K = build_lattice("a3", 2)
    depth = lattice_ball(K.system, 2)
    ds = [depth[K.vertices[v].coords] for v in K.vertex_ids()]
    assert ds == sorted(ds)
    assert K.vertices[0].coords == (0, 0, 0)


def test_edges_are_labelled_by_generator():
    K = build_lattice("c3", 2)
    for e in K.live_edges():
        cu, cv = K.vertices[e.u].coords, K.vertices[e.v].coords
        assert tuple(b - a for a, b in zip(cu, cv)) == K.system.root(e.generator, 1)


def test_every_vertex_gets_one_fresh_tadpole():
    K = build_lattice("b3", 2)
    for v in K.vertices.values():
        assert [(t.index, t.orientation) for t in v.registry] == [(0, 1)]
    assert not K.contraction_log


@pytest.mark.parametrize("name", ["a1a1a1", "A1+A2", "a1 b2", "A1+G2"])
def test_reducible_systems_rejected(name):
    with pytest.raises(ConfigurationError, match="reducible"):
        build_lattice(name, 1)


def test_unknown_system_and_bad_extent():
    with pytest.raises(ConfigurationError):
        build_lattice("e8", 1)
    with pytest.raises(ConfigurationError):
        build_lattice("cubic", -1)


def test_root_lookup_errors():
    R = RootSystem.of(SystemKind.CUBIC3D)
    assert R.root(2, -1) == (0, -1, 0)
    assert R.generator_of((0, 0, -1)) == (3, -1)
    assert R.generator_of((1, 1, 0)) is None
    with pytest.raises(DomainError):
        R.root(4)


def test_neighbors_unknown_vertex():
    K = build_lattice("square", 1)
    with pytest.raises(UnknownVertexError):
        neighbors(K, 99)


def test_path_builder():
    K = build_path(5)
    assert K.num_vertices == 6 and K.num_live_edges == 5
    assert not K.cells


def test_cells_match_the_tiling():
    K = build_lattice("cubic", 2)
    for cell in K.cells.values():
        pts = np.array([K.vertices[v].coords for v in cell])
        assert len(cell) == 8
        assert (pts.max(axis=0) - pts.min(axis=0) == 1).all()
    fcc = build_lattice("a3", 2)
    sizes = sorted({len(c) for c in fcc.cells.values()})
    assert sizes == [4, 6]


# ------------------------------------------------------------- Voronoi


def _lattice_points(name, radius):
    """Brute-force lattice membership: D3 for the fcc systems, Z^d otherwise."""
    dim = 2 if name == "Square2D" else 3
    pts = []
    for p in itertools.product(range(-radius, radius + 1), repeat=dim):
        if name in ("A3", "C3") and sum(p) % 2:
            continue
        pts.append(p)
    return np.array(pts)


def _relevant_vectors(name):
    """p is Voronoi-relevant iff 0 and p are the only lattice points nearest p/2."""
    pts = _lattice_points(name, 4)
    out = []
    for p in pts:
        if not p.any():
            continue
        d = ((pts - p / 2) ** 2).sum(axis=1)
        if np.isclose(d, d.min()).sum() == 2 and np.isclose(d[~pts.any(axis=1)][0], d.min()):
            out.append(tuple(int(c) for c in p))
    return sorted(out)


@pytest.mark.parametrize("name,faces", [("A3", 12), ("B3", 6), ("C3", 12), ("Square2D", 4), ("Cubic3D", 6)])
def test_voronoi_face_count(name, faces):
    cell = voronoi_cell(name)
    assert cell.face_count == faces
    assert sorted(cell.face_normals) == _relevant_vectors(name)
