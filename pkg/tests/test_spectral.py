import numpy as np
import pytest

from qspace.complex import EdgeKind
from qspace.errors import ConfigurationError, FitError, InsufficientStatisticsError, UnknownVertexError
from qspace.lattice import build_lattice, build_path
from qspace.spectral import (
    ReattachmentParams,
    WalkGraph,
    faces,
    occupation,
    reattach,
    refinement_experiment,
    return_probability,
    spectral_dimension,
)


def _within(p_hat, p, n, k=3.0):
    return abs(p_hat - p) <= k * np.sqrt(p * (1 - p) / n)


def test_p0_is_one_and_seeded():
    K = build_lattice("square", 5)
    P = return_probability(K, 0, 10, 500, np.random.default_rng(3))
    assert P[0] == 1.0
    assert (P == return_probability(K, 0, 10, 500, np.random.default_rng(3))).all()


def test_single_vertex_with_tadpole_never_moves():
    K = build_lattice("cubic", 0)
    assert (return_probability(K, 0, 20, 100) == 1.0).all()
    assert (return_probability(WalkGraph(K, tadpoles=False), 0, 5, 10) == 1.0).all()


def test_p2_exact_on_bare_cubic():
    K = build_lattice("cubic", 6)
    n = 200_000
    P = return_probability(WalkGraph(K, tadpoles=False), 0, 2, n, np.random.default_rng(0))
    assert _within(P[2], 1 / 6, n)


def test_p2_exact_on_lazy_cubic():
    # 6 edges plus one stay-put tadpole move: 1/49 (stay twice) + 6/49 (out and back)
    K = build_lattice("cubic", 6)
    n = 200_000
    P = return_probability(K, 0, 2, n, np.random.default_rng(1))
    assert _within(P[2], 1 / 7, n)


@pytest.mark.parametrize("name", ["square", "cubic"])
def test_odd_returns_vanish_on_bipartite_lattices(name):
    K = build_lattice(name, 8)
    P = return_probability(WalkGraph(K, tadpoles=False), 0, 15, 5000, np.random.default_rng(0))
    assert (P[1::2] == 0).all()


def test_occupation_sums_to_one():
    K = build_lattice("a3", 4)
    for t in (0, 1, 5, 12):
        occ = occupation(K, 0, t, 3000, np.random.default_rng(t))
        assert sum(occ.values()) == pytest.approx(1.0)
    assert occupation(K, 0, 0, 10) == {0: 1.0}


def test_walk_input_errors():
    K = build_lattice("square", 1)
    with pytest.raises(ConfigurationError):
        return_probability(K, 0, 4, 0)
    with pytest.raises(UnknownVertexError):
        return_probability(K, 42, 4, 10)


@pytest.mark.parametrize("power,d", [(1.0, 2.0), (1.5, 3.0), (2.0, 4.0)])
def test_synthetic_power_laws(power, d):
    t = np.arange(65, dtype=float)
    t[0] = 1
    est = spectral_dimension(t**-power)
    assert est.d_s == pytest.approx(d, abs=1e-12)
    assert est.stderr == pytest.approx(0, abs=1e-6)
    assert est.window == (8, 64)


def test_estimator_uses_even_times_only():
    t = np.arange(65, dtype=float)
    t[0] = 1
    P = t**-1.0
    P[1::2] = 0.0
    assert spectral_dimension(P).d_s == pytest.approx(2.0)


def test_estimator_errors():
    P = np.ones(65)
    P[20] = 0.0
    with pytest.raises(InsufficientStatisticsError):
        spectral_dimension(P)
    with pytest.raises(FitError):
        spectral_dimension(np.ones(10))
    with pytest.raises(FitError):
        spectral_dimension(np.ones(65), (8, 8))


def test_stderr_shrinks_like_root_two():
    K = build_lattice("square", 40)
    G = WalkGraph(K)
    ratios = []
    for s in range(6):
        small = [spectral_dimension(return_probability(G, 0, 64, 4000, np.random.default_rng([s, k]))).stderr for k in range(4)]
        large = [spectral_dimension(return_probability(G, 0, 64, 8000, np.random.default_rng([s, k, 1]))).stderr for k in range(4)]
        ratios.append(np.mean(small) / np.mean(large))
    assert np.mean(ratios) == pytest.approx(np.sqrt(2), rel=0.2)


# ------------------------------------------------------------- faces


def test_faces_square_and_fcc():
    sq = build_lattice("square", 2)
    assert len(faces(sq)) == 4
    for f in faces(sq):
        pts = np.array([sq.vertices[v].coords for v in f])
        assert (pts.max(axis=0) - pts.min(axis=0) == 1).all()
    fcc = build_lattice("a3", 1)
    # the 12 neighbours of the origin form a cuboctahedron: 24 edges on its surface, 24 triangles at the origin
    tri = faces(fcc)
    assert all(len(f) == 3 for f in tri)
    assert sum(1 for f in tri if 0 in f) == 24
    assert faces(build_path(3)) == []


# -------------------------------------------------------- reattachment


def test_reattach_zero_rate_is_identity():
    K = build_lattice("cubic", 4)
    before = K.to_json()
    rep = reattach(K, ReattachmentParams(2.0, 0.0, seed=1))
    assert int(rep) == 0 and K.to_json() == before


def test_reattach_tiny_lambda_never_fires():
    K = build_lattice("cubic", 4)
    before = K.to_json()
    rep = reattach(K, ReattachmentParams(1e-6, 0.5, seed=1))
    assert rep.fired == 0 and K.to_json() == before
    assert len(rep.distances) == len(faces(build_lattice("cubic", 4)))


def test_reattach_count_matches_expectation_sum():
    K = build_lattice("cubic", 5)
    params = ReattachmentParams(2.0, 0.3, seed=4)
    rep = reattach(K, params)
    ps = np.array([params.probability(k) for k in rep.distances])
    assert abs(rep.fired - ps.sum()) <= 4 * np.sqrt((ps * (1 - ps)).sum())
    assert all(k >= 0 for k in rep.distances)
    assert all(K.edges[e].kind is EdgeKind.SHORTCUT for e in rep.shortcuts)
    K.check()


def test_reattach_probability_law():
    params = ReattachmentParams(2.0, 0.4)
    assert params.probability(0) == 0.0
    assert params.probability(2) == pytest.approx(0.4 / np.e)
    assert params.reach == 6
    with pytest.raises(ConfigurationError):
        ReattachmentParams(0.0, 0.1)
    with pytest.raises(ConfigurationError):
        ReattachmentParams(1.0, 1.1)


def test_reattach_remove_local_drops_face_edges():
    K = build_lattice("square", 4)
    n = K.num_live_edges
    rep = reattach(K, ReattachmentParams(1.0, 1.0, seed=0, pairs=5, remove_local=True))
    assert rep.fired > 0
    assert K.num_live_edges < n + len(rep.shortcuts)
    K.check()


def test_refinement_experiment_runs():
    out = refinement_experiment(build_lattice("square", 6), 1, 1.0, 0.1, walkers=2000, window=(2, 8))
    assert len(out) == 2
    assert all(np.isfinite(e.d_s) for e in out)
