import numpy as np
import pytest

from qspace.errors import ConstraintError, DeadEndError, DomainError, WordSyntaxError
from qspace.lattice import build_lattice
from qspace.roots import RootSystem, SystemKind
from qspace.topology import contract
from qspace.words import (
    S,
    Word,
    cyclic_equal,
    displacement,
    parse_word,
    reduce,
    rotation_charge,
    t,
    validate_fermionic,
    walk,
    x,
)

CUBIC = RootSystem.of(SystemKind.CUBIC3D)


def W(text):
    return parse_word(text)


@pytest.mark.parametrize(
    "text",
    ["", "x1", "x1'", "x3@2 x1@1'", "S S' t t'", "cyc: x1 x2'", "cyc:", "x12 S t' x1@10"],
)
def test_parse_print_roundtrip(text):
    assert str(W(text)) == text


def test_parse_accepts_either_inverse_position():
    assert W("x1'@2") == W("x1@2'") == Word([x(1, -1, 2)])


@pytest.mark.parametrize("bad", ["y1", "x0", "x1''", "S@1", "x", "x1@", "x1'@2'"])
def test_parse_rejects(bad):
    with pytest.raises(WordSyntaxError):
        W(bad)


def test_reduce_examples():
    assert reduce(W("x1 x1'")) == Word()
    assert reduce(W("x1 x2 x2' S")) == W("x1 S")
    assert reduce(W("cyc: x1' x2 x1")) == W("cyc: x2")
    assert reduce(W("x1 x1@1'")) == W("x1 x1@1'")


def test_rotation_charge_examples():
    assert rotation_charge(Word()) == 0
    assert rotation_charge(W("S S S'")) == 2
    assert rotation_charge(W("t t")) == rotation_charge(W("S")) == 2


def test_displacement_examples():
    assert not displacement(W("S"), CUBIC).any()
    assert displacement(W("x1"), CUBIC).tolist() == [1, 0, 0]
    assert displacement(W("x1@1 x1@1"), CUBIC).tolist() == [1, 0, 0]
    with pytest.raises(DomainError):
        displacement(W("x4"), CUBIC)


def test_cyclic_equal_examples():
    assert cyclic_equal(W("cyc: x1 x2"), W("cyc: x2 x1"))
    assert not cyclic_equal(W("cyc: x1"), W("cyc: x1'"))
    assert cyclic_equal(W("cyc: x1 x1' x2"), W("cyc: x2"))
    with pytest.raises(DomainError):
        cyclic_equal(W("x1"), W("cyc: x1"))


def test_inverse_and_rotate():
    w = W("x1 S x2'")
    assert w.inverse() == W("x2 S' x1'")
    assert reduce(w + w.inverse()) == Word()
    assert W("cyc: x1 x2 x3").rotate(1) == W("cyc: x2 x3 x1")


def test_walk_examples(cubic3):
    K = cubic3
    end, _ = walk(K, 0, W("x1 x1'"))
    assert end == 0
    end, st = walk(K, 0, W("x1 x2"))
    assert K.vertices[end].coords == (1, 1, 0)
    assert st.trail == [0, K.vertex_at((1, 0, 0)), end]


def test_walk_tadpoles_do_not_move(cubic3):
    end, st = walk(cubic3, 0, W("S S S'"))
    assert end == 0
    assert validate_fermionic(st)
    assert [idx for _, idx, _ in st.rotations] == [0, 1, 2]
    assert [sgn for _, _, sgn in st.rotations] == [1, 1, -1]


def test_fermionic_rule(square3):
    _, st = walk(square3, 0, W("x1 x1'"))
    assert validate_fermionic(st)
    with pytest.raises(ConstraintError):
        walk(square3, 0, W("x1 x2 x2' x1' x1"))
    _, st = walk(square3, 0, W("x1 x2 x2' x1' x1"), strict=False)
    assert not validate_fermionic(st)


def test_walk_dead_end_and_refined_letters():
    K = build_lattice("square", 1)
    with pytest.raises(DeadEndError) as err:
        walk(K, 0, W("x1 x1"))
    assert err.value.position == 1
    with pytest.raises(DomainError):
        walk(K, 0, W("x1@1"))


def test_walk_resolution_depends_on_constituent(cubic3):
    K = cubic3
    b = K.vertex_at((1, 0, 0))
    contract(K, K.edge_between(0, b))
    from_a, _ = walk(K, 0, W("x3"), constituent=0)
    from_b, _ = walk(K, 0, W("x3"), constituent=b)
    assert K.vertices[from_a].coords == (0, 0, 1)
    assert K.vertices[from_b].coords == (1, 0, 1)
    assert K.edge_between(from_a, from_b) is not None
    with pytest.raises(DomainError):
        walk(K, 0, W("x3"), constituent=5)
