"""Contraction, decontraction and edge splitting with exact tadpole bookkeeping."""
from __future__ import annotations

from .complex import (
    ContractionRecord,
    EdgeKind,
    EdgeStatus,
    LatticeComplex,
    RegistrySplit,
    TadpoleEntry,
    TadpoleRegistry,
)
from .errors import DomainError, StateError

__all__ = ["contract", "decontract", "split_edge", "round_up_endpoint"]


def contract(complex: LatticeComplex, edge: int) -> ContractionRecord:
    """Merge the endpoints of ``edge``; the lower vertex id survives.

    The contracted edge itself leaves no tadpole.  Every other live edge that
    joined the same two vertices becomes a spatial tadpole at the survivor.
    The two tadpole registries are concatenated survivor-first; the absorbed
    entries are re-indexed past the survivor's last index so the merged list
    stays strictly increasing.
    """
    e = complex.edge(edge)
    if e.status is EdgeStatus.CONTRACTED:
        raise StateError(f"edge {edge} is already contracted")
    ru, rv = complex.endpoints(edge)
    if ru == rv:
        raise DomainError(f"edge {edge} is a tadpole and cannot be contracted")
    s, a = min(ru, rv), max(ru, rv)
    sv, av = complex.vertices[s], complex.vertices[a]

    s_entries, a_entries = sv.registry.entries, av.registry.entries
    offset = 0
    if s_entries and a_entries:
        offset = max(0, s_entries[-1].index + 1 - a_entries[0].index)
    # absorbed entries are all tagged ``a``; survivor entries never are, so
    # decontraction can route on the tag alone even after splits move entries
    tagged_s = [t.index for t in s_entries if t.provenance is None]
    tagged_a = [t.index for t in a_entries if t.provenance is None]
    retag_s = [(t.index, t.provenance) for t in s_entries if t.provenance == a]
    retag_a = [(t.index, t.provenance) for t in a_entries if t.provenance not in (None, a)]
    merged = [
        TadpoleEntry(t.index, t.orientation, s if t.provenance in (None, a) else t.provenance)
        for t in s_entries
    ] + [TadpoleEntry(t.index + offset, t.orientation, a) for t in a_entries]
    split = RegistrySplit(len(s_entries), offset, tagged_s, tagged_a, retag_s, retag_a)
    absorbed_members = complex.constituents(a)

    forced = complex._merge_adjacency(s, a, edge)
    sv.registry = TadpoleRegistry(merged)
    av.registry = TadpoleRegistry()
    av.merged_into = s
    e.status = EdgeStatus.CONTRACTED
    rec = ContractionRecord(edge, s, a, split, forced, absorbed_members)
    complex.contraction_log.append(rec)
    return rec


def decontract(complex: LatticeComplex, record: ContractionRecord | None = None) -> None:
    """Undo a contraction (the most recent one when ``record`` is None).

    The log is a stack per merged vertex: a record can only be undone when no
    later record involves its survivor or its absorbed vertex.
    """
    log = complex.contraction_log
    if not log:
        raise StateError("contraction log is empty")
    if record is None:
        pos = len(log) - 1
    else:
        pos = next((i for i, r in enumerate(log) if r is record or r == record), None)
        if pos is None:
            raise StateError("record is not in the contraction log")
    rec = log[pos]
    touched = {rec.survivor, rec.absorbed}
    for later in log[pos + 1 :]:
        if touched & {later.survivor, later.absorbed}:
            raise StateError(
                f"out-of-order decontraction: edge {later.contracted_edge} was contracted "
                f"later at vertex {later.survivor} and must be undone first"
            )
    s, a = rec.survivor, rec.absorbed
    sv, av = complex.vertices[s], complex.vertices[a]
    split = rec.registry_split
    keep, back = [], []
    for t in sv.registry:
        (back if t.provenance == a else keep).append(t)

    def untag(t, idx, tagged, retagged):
        if idx in tagged:
            return TadpoleEntry(idx, t.orientation)
        return TadpoleEntry(idx, t.orientation, retagged.get(idx, t.provenance))

    tagged_s, retag_s = set(split.tagged_survivor), dict(split.retagged_survivor)
    tagged_a, retag_a = set(split.tagged_absorbed), dict(split.retagged_absorbed)
    sv.registry = TadpoleRegistry([untag(t, t.index, tagged_s, retag_s) for t in keep])
    av.registry = TadpoleRegistry([untag(t, t.index - split.offset, tagged_a, retag_a) for t in back])
    av.merged_into = None
    complex._split_adjacency(s, a, rec.absorbed_members, rec.contracted_edge)
    complex.edges[rec.contracted_edge].status = EdgeStatus.LIVE
    del log[pos]


def round_up_endpoint(complex: LatticeComplex, edge: int) -> int:
    """Endpoint that plays ``n`` in the round-up ``[n - 1/2, n + 1/2) -> n``: the lower id."""
    return min(complex.endpoints(edge))


def split_edge(complex: LatticeComplex, edge: int, rng=None) -> int:
    """Insert a midpoint into ``edge`` and return its id.

    The edge is replaced by two edges with the same generator and orientation.
    The midpoint is joined once to every vertex of every cell whose skeleton
    contains the edge, receives a fresh tadpole (index 0), and takes over the upper
    ``len // 2`` registry entries of the round-up endpoint.  Each incident cell
    is replaced by its two halves (one endpoint swapped for the midpoint in
    place, so the halves keep the cell's skeleton type).
    ``rng`` is accepted for interface symmetry; the operation is deterministic.
    """
    e = complex.edge(edge)
    if e.status is EdgeStatus.CONTRACTED:
        raise DomainError(f"edge {edge} is contracted and cannot split")
    ru, rv = complex.endpoints(edge)
    if ru == rv:
        raise DomainError(f"edge {edge} is a tadpole and cannot split")

    cells = complex.cells_containing(ru, rv)
    far: dict[int, int] = {}
    for cid in cells:
        for x in complex.cells[cid]:
            r = complex.rep(x)
            if r not in (ru, rv) and r not in far:
                far[r] = x

    n = round_up_endpoint(complex, edge)
    nv = complex.vertices[n]
    keep = len(nv.registry) - len(nv.registry) // 2
    moved = nv.registry.entries[keep:]
    nv.registry = TadpoleRegistry(nv.registry.entries[:keep])
    fresh = TadpoleEntry(0 if not moved or moved[0].index > 0 else moved[0].index - 1, 1)
    m = complex.add_vertex(None, TadpoleRegistry([fresh] + moved))

    u, v, g, kind = e.u, e.v, e.generator, e.kind
    complex.remove_edge(edge)
    complex.add_edge(u, m, g, kind)
    complex.add_edge(m, v, g, kind)
    for r in sorted(far):
        complex.add_edge(m, far[r], None, EdgeKind.CELL)

    for cid in cells:
        cell, ctype = complex.remove_cell(cid)
        for drop in (rv, ru):
            complex.add_cell([m if complex.rep(x) == drop else x for x in cell], ctype)
    return m
