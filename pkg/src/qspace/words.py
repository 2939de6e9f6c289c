"""Path words over the alphabet of spatial generators, tadpoles and half-rotations.

Text format: whitespace-separated tokens ``x1 x1' S S' t t'``.  A trailing
apostrophe marks the inverse, ``@n`` a refinement level (``x1@2`` is a step
of formal length 1/4), and a leading ``cyc:`` marks a closed contour.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .complex import LatticeComplex
from .errors import ConstraintError, DeadEndError, DomainError, WordSyntaxError
from .roots import RootSystem

__all__ = [
    "Letter",
    "LetterKind",
    "Word",
    "WalkState",
    "S",
    "t",
    "x",
    "cyclic_equal",
    "displacement",
    "parse_word",
    "reduce",
    "rotation_charge",
    "validate_fermionic",
    "walk",
]


class LetterKind(enum.Enum):
    SPATIAL = "x"
    TADPOLE = "S"
    HALF_ROTATION = "t"


@dataclass(frozen=True)
class Letter:
    kind: LetterKind
    sign: int = 1
    generator: int = 0
    level: int = 0

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")
        if self.kind is LetterKind.SPATIAL:
            if self.generator < 1:
                raise ValueError("spatial letters need a generator index >= 1")
            if self.level < 0:
                raise ValueError("refinement level must be >= 0")
        elif self.generator or self.level:
            raise ValueError(f"{self.kind.value} letters carry no generator or level")

    @property
    def inverse(self) -> Letter:
        return Letter(self.kind, -self.sign, self.generator, self.level)

    def cancels(self, other: Letter) -> bool:
        return (
            self.kind is other.kind
            and self.generator == other.generator
            and self.level == other.level
            and self.sign == -other.sign
        )

    def __str__(self) -> str:
        if self.kind is LetterKind.SPATIAL:
            tok = f"x{self.generator}"
            if self.level:
                tok += f"@{self.level}"
        else:
            tok = self.kind.value
        return tok + ("'" if self.sign < 0 else "")


def x(generator: int, sign: int = 1, level: int = 0) -> Letter:
    return Letter(LetterKind.SPATIAL, sign, generator, level)


def S(sign: int = 1) -> Letter:
    return Letter(LetterKind.TADPOLE, sign)


def t(sign: int = 1) -> Letter:
    return Letter(LetterKind.HALF_ROTATION, sign)


_TOKEN = re.compile(r"^(?:x(?P<gen>[1-9]\d*)|(?P<sym>[St]))(?P<i1>')?(?:@(?P<lvl>\d+))?(?P<i2>')?$")


@dataclass(frozen=True)
class Word:
    letters: tuple[Letter, ...] = ()
    cyclic: bool = False

    def __init__(self, letters: Iterable[Letter] = (), cyclic: bool = False):
        object.__setattr__(self, "letters", tuple(letters))
        object.__setattr__(self, "cyclic", bool(cyclic))

    @classmethod
    def parse(cls, text: str) -> Word:
        return parse_word(text)

    def __str__(self) -> str:
        body = " ".join(str(l) for l in self.letters)
        if self.cyclic:
            return "cyc:" + (" " + body if body else "")
        return body

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __add__(self, other: Word) -> Word:
        return Word(self.letters + other.letters, self.cyclic)

    def inverse(self) -> Word:
        return Word((l.inverse for l in reversed(self.letters)), self.cyclic)

    def rotate(self, k: int) -> Word:
        n = len(self.letters)
        if n == 0:
            return self
        k %= n
        return Word(self.letters[k:] + self.letters[:k], self.cyclic)

    def rotations(self) -> list[Word]:
        return [self.rotate(k) for k in range(max(1, len(self.letters)))]


def parse_word(text: str) -> Word:
    s = text.strip()
    cyclic = s.startswith("cyc:")
    if cyclic:
        s = s[4:]
    letters = []
    for tok in s.split():
        m = _TOKEN.match(tok)
        if m is None or (m["i1"] and m["i2"]):
            raise WordSyntaxError(f"bad token {tok!r} in word {text!r}")
        sign = -1 if (m["i1"] or m["i2"]) else 1
        if m["gen"]:
            letters.append(x(int(m["gen"]), sign, int(m["lvl"] or 0)))
        else:
            if m["lvl"] is not None:
                raise WordSyntaxError(f"refinement level on non-spatial token {tok!r}")
            letters.append(Letter(LetterKind(m["sym"]), sign))
    return Word(letters, cyclic)


def reduce(w: Word) -> Word:
    """Free reduction; cyclic words are also reduced across the seam."""
    stack: list[Letter] = []
    for l in w.letters:
        if stack and stack[-1].cancels(l):
            stack.pop()
        else:
            stack.append(l)
    if w.cyclic:
        i, j = 0, len(stack) - 1
        while i < j and stack[i].cancels(stack[j]):
            i += 1
            j -= 1
        stack = stack[i : j + 1]
    return Word(stack, w.cyclic)


def rotation_charge(w: Word) -> int:
    """Net rotation in half-turn units: 2 per tadpole letter, 1 per half-rotation."""
    q = 0
    for l in w.letters:
        if l.kind is LetterKind.TADPOLE:
            q += 2 * l.sign
        elif l.kind is LetterKind.HALF_ROTATION:
            q += l.sign
    return q


def displacement(w: Word, system: RootSystem) -> np.ndarray:
    """Vector sum of the spatial letters, each scaled by ``2**-level``."""
    total = [Fraction(0)] * system.dim
    for l in w.letters:
        if l.kind is LetterKind.SPATIAL:
            root = system.root(l.generator, l.sign)
            scale = Fraction(1, 2**l.level)
            total = [a + scale * r for a, r in zip(total, root)]
    return np.array([float(c) for c in total])


def cyclic_equal(w1: Word, w2: Word) -> bool:
    if not (w1.cyclic and w2.cyclic):
        raise DomainError("cyclic_equal compares closed contours only")
    a, b = reduce(w1), reduce(w2)
    if len(a) != len(b):
        return False
    return any(r.letters == b.letters for r in a.rotations())


@dataclass
class WalkState:
    current_vertex: int
    occupied_constituent: int
    traversed_directed_edges: list[tuple[int, int]] = field(default_factory=list)
    rotations: list[tuple[int, int | None, int]] = field(default_factory=list)
    trail: list[int] = field(default_factory=list)

    def copy(self) -> WalkState:
        return WalkState(
            self.current_vertex,
            self.occupied_constituent,
            list(self.traversed_directed_edges),
            list(self.rotations),
            list(self.trail),
        )


def validate_fermionic(state: WalkState) -> bool:
    """True iff no spatial edge was traversed twice in the same direction."""
    seen = state.traversed_directed_edges
    return len(set(seen)) == len(seen)


def _step(complex: LatticeComplex, state: WalkState, letter: Letter, pos: int) -> int:
    c = state.occupied_constituent
    best = None
    for eid in complex.adjacency(state.current_vertex):
        e = complex.edges[eid]
        if e.generator != letter.generator:
            continue
        if (e.u if letter.sign > 0 else e.v) == c and (best is None or eid < best):
            best = eid
    if best is None:
        raise DeadEndError(
            f"no live edge {letter} leaves vertex {c} (current vertex {state.current_vertex})",
            state=state,
            position=pos,
        )
    return best


def walk(
    complex: LatticeComplex,
    start: int,
    w: Word | Sequence[Letter] | str,
    strict: bool = True,
    constituent: int | None = None,
) -> tuple[int, WalkState]:
    """Apply the letters of ``w`` left to right starting at ``start``.

    ``constituent`` picks which original vertex of a merged ``start`` the
    walker occupies (default: ``start`` itself).  Spatial letters follow the
    live edge with that generator leaving the occupied constituent; tadpole
    letters consume the lowest registry index not yet used by this walk at
    the current vertex.  In strict mode a repeated directed edge raises
    :class:`ConstraintError`.
    """
    if isinstance(w, str):
        w = parse_word(w)
    letters = w.letters if isinstance(w, Word) else tuple(w)
    complex.require_vertex(start)
    if constituent is None:
        constituent = start
    elif complex.rep(constituent) != start:
        raise DomainError(f"vertex {constituent} is not a constituent of {start}")
    state = WalkState(start, constituent, trail=[start])
    seen: set[tuple[int, int]] = set()
    used: dict[int, set[int]] = {}
    for pos, letter in enumerate(letters):
        if letter.kind is LetterKind.SPATIAL:
            if letter.level:
                raise DomainError(f"refined letter {letter} cannot act on a fixed complex")
            eid = _step(complex, state, letter, pos)
            key = (eid, letter.sign)
            state.traversed_directed_edges.append(key)
            if key in seen and strict:
                raise ConstraintError(
                    f"edge {eid} walked twice in direction {letter.sign:+d}", state=state
                )
            seen.add(key)
            e = complex.edges[eid]
            nxt = e.v if letter.sign > 0 else e.u
            state.occupied_constituent = nxt
            state.current_vertex = complex.rep(nxt)
            state.trail.append(state.current_vertex)
        elif letter.kind is LetterKind.TADPOLE:
            v = state.current_vertex
            taken = used.setdefault(v, set())
            free = [i for i in complex.vertices[v].registry.indices if i not in taken]
            idx = free[0] if free else max(taken | set(complex.vertices[v].registry.indices) | {-1}) + 1
            taken.add(idx)
            state.rotations.append((v, idx, letter.sign))
        else:
            state.rotations.append((state.current_vertex, None, letter.sign))
    return state.current_vertex, state
