import itertools

import pytest

from qspace.errors import DomainError, HolonomyUndefinedError, StateError, UnreachableError
from qspace.lattice import build_lattice
from qspace.observables import curvature, entropy, entropy_witnesses, shortest_word
from qspace.topology import contract


def _edge(K, p, q):
    return K.edge_between(K.rep(K.vertex_at(p)), K.rep(K.vertex_at(q)))


def oracle_walk(start, steps, merged):
    """Coordinate-only walker: ``merged`` maps a coordinate to its merge class."""
    pos = start
    for delta in steps:
        pos = tuple(a + b for a, b in zip(pos, delta))
    return merged.get(pos, pos)


def test_single_contraction_holonomy_matches_coordinate_oracle(cubic3):
    K = cubic3
    a, b = (0, 0, 0), (1, 0, 0)
    contract(K, _edge(K, a, b))
    X, Y, Z = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    neg = lambda v: tuple(-c for c in v)
    merged = {a: a, b: a}
    # loop leaves from the absorbed constituent b, z-first leaves from a
    c_coords = oracle_walk(b, [X, Y, neg(X), neg(Y), Z], merged)
    d_coords = oracle_walk(a, [Z, X, Y, neg(X), neg(Y)], merged)
    assert c_coords == (1, 0, 1) and d_coords == (0, 0, 1)

    res = curvature(K, 0, 1, 2, 3)
    assert K.vertices[res.endpoint_first_then_z].coords == c_coords
    assert K.vertices[res.z_first_then_endpoint].coords == d_coords
    assert res.length == 1
    assert str(res.connecting_path) == "x1'"
    assert res.to_dict() == {"c": res.endpoint_first_then_z, "d": res.z_first_then_endpoint, "path": "x1'", "length": 1}


def test_single_contraction_rule_swap_changes_the_answer():
    K = build_lattice("cubic", 4)
    contract(K, _edge(K, (0, 0, 0), (1, 0, 0)))
    flat = curvature(K, 0, 1, 2, 3, loop_start="absorbed", z_start="absorbed")
    assert flat.flat
    with pytest.raises(HolonomyUndefinedError):
        # the x-edge leaving a is the contracted one
        curvature(K, 0, 1, 2, 3, loop_start="survivor")


@pytest.mark.parametrize("name", ["square", "cubic", "a3"])
def test_flat_in_the_interior(name):
    K = build_lattice(name, 3)
    k = len(K.system.generators)
    for x, y, z in itertools.product(range(-k, k + 1), repeat=3):
        if 0 not in (x, y, z):
            assert curvature(K, 0, x, y, z).flat


def test_curvature_dead_end_reports_route():
    K = build_lattice("square", 1)
    with pytest.raises(HolonomyUndefinedError) as err:
        curvature(K, 0, 1, 2, 1)
    assert err.value.route == "loop-then-z"
    with pytest.raises(DomainError):
        curvature(K, 0, 0, 1, 2)


def test_shortest_word_ties_and_errors(square3):
    K = square3
    w = shortest_word(K, 0, K.vertex_at((1, 1)))
    assert len(w) == 2
    assert str(w) == str(shortest_word(K, 0, K.vertex_at((1, 1))))
    K2 = build_lattice("square", 0)
    K2.add_vertex((5, 5))
    with pytest.raises(UnreachableError):
        shortest_word(K2, 0, 1)


def test_entropy_worked_values(square3):
    K = square3
    o, e1, e2 = (0, 0), (1, 0), (2, 0)
    assert entropy(K, []) == 0
    assert entropy(K, [_edge(K, o, e1)]) == -6
    assert entropy(K, [_edge(K, o, e1), _edge(K, e1, e2)]) == -8
    assert entropy(K, [_edge(K, o, e1), _edge(K, o, (0, 1))]) == -7


def test_entropy_not_additive():
    K = build_lattice("square", 6)
    far = [_edge(K, (-3, 0), (-2, 0)), _edge(K, (2, 0), (3, 0))]
    assert entropy(K, far) == -12


def test_entropy_witnesses_exclude_endpoints(square3):
    K = square3
    e = _edge(K, (0, 0), (1, 0))
    w = entropy_witnesses(K, [e])
    assert 0 not in w and K.vertex_at((1, 0)) not in w
    assert len(w) == 6


def test_entropy_rejects_inadmissible_sets(square3):
    K = square3
    cycle = [
        _edge(K, (0, 0), (1, 0)),
        _edge(K, (1, 0), (1, 1)),
        _edge(K, (0, 1), (1, 1)),
        _edge(K, (0, 0), (0, 1)),
    ]
    with pytest.raises(DomainError):
        entropy(K, cycle)
    contract(K, cycle[0])
    with pytest.raises(DomainError):
        entropy(K, [cycle[0]])
