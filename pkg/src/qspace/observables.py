"""Quantum curvature (holonomy of a commutator loop) and contraction entropy."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .complex import EdgeStatus, LatticeComplex
from .errors import DeadEndError, DomainError, HolonomyUndefinedError, UnreachableError
from .words import Word, walk, x

__all__ = ["HolonomyResult", "curvature", "entropy", "entropy_witnesses", "shortest_word"]


@dataclass(frozen=True)
class HolonomyResult:
    endpoint_first_then_z: int
    z_first_then_endpoint: int
    connecting_path: Word

    @property
    def length(self) -> int:
        return len(self.connecting_path)

    @property
    def flat(self) -> bool:
        return self.length == 0

    def to_dict(self) -> dict:
        return {
            "c": self.endpoint_first_then_z,
            "d": self.z_first_then_endpoint,
            "path": str(self.connecting_path),
            "length": self.length,
        }


def _letter(g: int):
    if g == 0:
        raise DomainError("generator index 0 is not a letter")
    return x(abs(g), 1 if g > 0 else -1)


def _resolve(complex: LatticeComplex, base: int, rule) -> int:
    if isinstance(rule, int):
        return rule
    if rule == "survivor":
        return base
    if rule == "absorbed":
        for rec in reversed(complex.contraction_log):
            if rec.survivor == base:
                return rec.absorbed
        return base
    raise DomainError(f"unknown constituent rule {rule!r}")


def shortest_word(complex: LatticeComplex, src: int, dst: int) -> Word:
    """Shortest live labelled path from ``src`` to ``dst`` as a word.

    Among shortest paths the lexicographically smallest sequence of edge ids
    is returned.  Unlabelled (cell/shortcut) edges and tadpoles are skipped.
    """
    if src == dst:
        return Word()
    dist = {dst: 0}
    q = deque([dst])
    while q and src not in dist:
        v = q.popleft()
        for eid, nb in complex.adjacency(v).items():
            if nb not in dist and complex.edges[eid].generator is not None:
                dist[nb] = dist[v] + 1
                q.append(nb)
    if src not in dist:
        raise UnreachableError(f"no labelled path from {src} to {dst}")
    letters = []
    v = src
    while v != dst:
        eid, nb = min(
            (eid, nb)
            for eid, nb in complex.adjacency(v).items()
            if dist.get(nb) == dist[v] - 1 and complex.edges[eid].generator is not None
        )
        e = complex.edges[eid]
        letters.append(x(e.generator, 1 if complex.rep(e.u) == v else -1))
        v = nb
    return Word(letters)


def curvature(
    complex: LatticeComplex,
    base: int,
    x_gen: int,
    y_gen: int,
    z_gen: int,
    loop_start="absorbed",
    z_start="survivor",
) -> HolonomyResult:
    """Value ``R_base(x, y) z`` of the curvature operator.

    Walks ``x y x^-1 y^-1 z`` and ``z x y x^-1 y^-1`` from ``base`` and returns
    the shortest path between their endpoints.  Generators are 1-based; a
    negative index means the inverse letter.  At a merged ``base`` the loop
    route starts on the constituent absorbed by the latest contraction into
    ``base`` and the z-first route on ``base`` itself; both rules accept
    ``"absorbed"``, ``"survivor"`` or an explicit original vertex id.
    """
    complex.require_vertex(base)
    X, Y, Z = _letter(x_gen), _letter(y_gen), _letter(z_gen)
    loop = [X, Y, X.inverse, Y.inverse]
    routes = (
        ("loop-then-z", loop + [Z], _resolve(complex, base, loop_start)),
        ("z-then-loop", [Z] + loop, _resolve(complex, base, z_start)),
    )
    ends = []
    for name, letters, start in routes:
        try:
            end, _ = walk(complex, base, Word(letters), strict=False, constituent=start)
        except DeadEndError as err:
            raise HolonomyUndefinedError(
                f"{name} route dead-ends: {err}", route=name, partial=err.state, position=err.position
            ) from err
        ends.append(end)
    c, d = ends
    return HolonomyResult(c, d, shortest_word(complex, c, d))


def _contraction_endpoints(complex: LatticeComplex, contraction_set: Iterable[int]) -> set[int]:
    parent: dict[int, int] = {}

    def find(v):
        while parent.get(v, v) != v:
            v = parent[v]
        return v

    ends = set()
    for eid in sorted(set(contraction_set)):
        e = complex.edge(eid)
        if e.status is EdgeStatus.CONTRACTED:
            raise DomainError(f"edge {eid} is already contracted")
        a, b = complex.endpoints(eid)
        ra, rb = find(a), find(b)
        if ra == rb:
            raise DomainError(f"edge {eid} would be a tadpole after the other contractions in the set")
        parent[ra] = rb
        ends.update((a, b))
    return ends


def entropy_witnesses(complex: LatticeComplex, contraction_set: Iterable[int]) -> list[int]:
    """Vertices off the contracting edges that neighbour one of their endpoints."""
    ends = _contraction_endpoints(complex, contraction_set)
    out = set()
    for v in ends:
        for nb in complex.adjacency(v).values():
            if nb not in ends:
                out.add(nb)
    return sorted(out)


def entropy(complex: LatticeComplex, contraction_set: Iterable[int]) -> int:
    """Minus the number of distinct outside neighbours of the merging endpoints."""
    return -len(entropy_witnesses(complex, contraction_set))
