"""Root systems that generate the supported lattices.

Each system carries its full root set (closed under negation) and the
generators: one representative per +/- pair, labelled ``x1 .. xk``.  A
spatial letter ``x_i`` moves along ``+generators[i-1]`` and its inverse along
the negated root, so the coordination number equals ``len(roots)``.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

from .errors import ConfigurationError, DomainError

Vector = tuple[int, ...]


class SystemKind(str, enum.Enum):
    A3 = "A3"
    B3 = "B3"
    C3 = "C3"
    SQUARE2D = "Square2D"
    CUBIC3D = "Cubic3D"


_ALIASES = {
    "a3": SystemKind.A3,
    "b3": SystemKind.B3,
    "c3": SystemKind.C3,
    "square": SystemKind.SQUARE2D,
    "square2d": SystemKind.SQUARE2D,
    "cubic": SystemKind.CUBIC3D,
    "cubic3d": SystemKind.CUBIC3D,
}

# Names of the reducible rank-3 systems, normalised (lower case, no separators).
_REDUCIBLE = {
    "a1a1a1": "A1+A1+A1",
    "a1a2": "A1+A2",
    "a2a1": "A1+A2",
    "a1b2": "A1+B2",
    "b2a1": "A1+B2",
    "a1g2": "A1+G2",
    "g2a1": "A1+G2",
}


def _unit(i: int, dim: int, scale: int = 1) -> Vector:
    return tuple(scale if k == i else 0 for k in range(dim))


def _pair_roots(dim: int) -> list[Vector]:
    out = []
    for i, j in itertools.combinations(range(dim), 2):
        for sj in (1, -1):
            v = [0] * dim
            v[i], v[j] = 1, sj
            out.append(tuple(v))
    return out


def _generators(kind: SystemKind) -> list[Vector]:
    if kind is SystemKind.SQUARE2D:
        return [_unit(i, 2) for i in range(2)]
    if kind is SystemKind.CUBIC3D:
        return [_unit(i, 3) for i in range(3)]
    if kind is SystemKind.A3:
        return _pair_roots(3)
    if kind is SystemKind.B3:
        return [_unit(i, 3) for i in range(3)] + _pair_roots(3)
    if kind is SystemKind.C3:
        return [_unit(i, 3, 2) for i in range(3)] + _pair_roots(3)
    raise ConfigurationError(f"unsupported root system {kind!r}")


@dataclass(frozen=True)
class RootSystem:
    kind: SystemKind
    generators: tuple[Vector, ...]

    @classmethod
    def of(cls, kind: SystemKind | str) -> RootSystem:
        if isinstance(kind, SystemKind):
            return cls(kind, tuple(_generators(kind)))
        return cls.from_name(kind)

    @classmethod
    def from_name(cls, name: str) -> RootSystem:
        key = "".join(ch for ch in str(name).lower() if ch.isalnum())
        if key in _REDUCIBLE:
            raise ConfigurationError(
                f"reducible root system {_REDUCIBLE[key]} is not supported; "
                "only irreducible systems (A3, B3, C3) and the Square2D/Cubic3D "
                "reference lattices can build a complex"
            )
        for kind in SystemKind:
            if key == kind.value.lower():
                return cls.of(kind)
        if key in _ALIASES:
            return cls.of(_ALIASES[key])
        raise ConfigurationError(f"unknown root system {name!r}")

    @property
    def dim(self) -> int:
        return len(self.generators[0])

    @property
    def rank(self) -> int:
        """Number of generators (half the root count)."""
        return len(self.generators)

    @property
    def roots(self) -> tuple[Vector, ...]:
        neg = tuple(tuple(-c for c in g) for g in self.generators)
        return self.generators + neg

    @property
    def generator_labels(self) -> tuple[str, ...]:
        return tuple(f"x{i + 1}" for i in range(self.rank))

    def root(self, generator: int, sign: int = 1) -> Vector:
        """Root vector of ``x_generator`` (1-based) raised to ``sign``."""
        if not 1 <= generator <= self.rank:
            raise DomainError(
                f"generator x{generator} out of range for {self.kind.value} "
                f"(x1..x{self.rank})"
            )
        g = self.generators[generator - 1]
        return g if sign > 0 else tuple(-c for c in g)

    def generator_of(self, delta: Vector) -> tuple[int, int] | None:
        """Return ``(generator, sign)`` with ``root(generator, sign) == delta``."""
        return _lookup(self).get(tuple(delta))


_LOOKUPS: dict[SystemKind, dict[Vector, tuple[int, int]]] = {}


def _lookup(system: RootSystem) -> dict[Vector, tuple[int, int]]:
    table = _LOOKUPS.get(system.kind)
    if table is None:
        table = {}
        for i, g in enumerate(system.generators, start=1):
            table[g] = (i, 1)
            table[tuple(-c for c in g)] = (i, -1)
        _LOOKUPS[system.kind] = table
    return table
