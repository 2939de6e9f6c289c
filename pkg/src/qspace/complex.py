"""The mutable 1-skeleton shared by every other module.

Vertex and edge identities are never reused.  Edges always store their
*original* endpoints; after contractions the current vertex holding an
original endpoint is found with :meth:`LatticeComplex.rep`.  An edge whose
two endpoints resolve to the same current vertex is a spatial tadpole.
"""
from __future__ import annotations

import copy
import enum
import json
from dataclasses import dataclass, field
from typing import Iterator

from .errors import StateError, UnknownEdgeError, UnknownVertexError
from .roots import RootSystem

FORMAT_VERSION = 1


class EdgeStatus(str, enum.Enum):
    LIVE = "live"
    CONTRACTED = "contracted"


class EdgeKind(str, enum.Enum):
    LATTICE = "lattice"  # carries a generator label
    CELL = "cell"  # midpoint-to-cell-vertex edge created by splitting
    SHORTCUT = "shortcut"  # face reattachment


@dataclass
class TadpoleEntry:
    index: int
    orientation: int
    provenance: int | None = None

    def to_dict(self) -> dict:
        d = {"index": self.index, "orientation": self.orientation}
        if self.provenance is not None:
            d["provenance"] = self.provenance
        return d


@dataclass
class TadpoleRegistry:
    """Ordered, integer-indexed tadpoles at one vertex (finite materialized prefix)."""

    entries: list[TadpoleEntry] = field(default_factory=list)

    @classmethod
    def fresh(cls) -> TadpoleRegistry:
        return cls([TadpoleEntry(0, 1)])

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[TadpoleEntry]:
        return iter(self.entries)

    @property
    def indices(self) -> list[int]:
        return [e.index for e in self.entries]

    def orientations(self) -> list[int]:
        return [e.orientation for e in self.entries]

    def is_ordered(self) -> bool:
        idx = self.indices
        return all(a < b for a, b in zip(idx, idx[1:]))


@dataclass
class Vertex:
    id: int
    coords: tuple[int, ...] | None
    registry: TadpoleRegistry
    merged_into: int | None = None


@dataclass
class Edge:
    id: int
    u: int
    v: int
    generator: int | None
    status: EdgeStatus = EdgeStatus.LIVE
    kind: EdgeKind = EdgeKind.LATTICE

    @property
    def live(self) -> bool:
        return self.status is EdgeStatus.LIVE


@dataclass
class RegistrySplit:
    """How two registries were concatenated by a contraction.

    ``survivor_count`` entries of the survivor come first; the absorbed
    entries follow with their indices shifted by ``offset``.  ``tagged_*``
    list the (pre-merge) indices whose provenance tag was added by this merge;
    ``retagged_*`` hold ``(index, old tag)`` for entries whose existing tag was
    overwritten, so every absorbed entry carries the absorbed vertex's id.
    """

    survivor_count: int
    offset: int
    tagged_survivor: list[int]
    tagged_absorbed: list[int]
    retagged_survivor: list[tuple[int, int]] = field(default_factory=list)
    retagged_absorbed: list[tuple[int, int]] = field(default_factory=list)


@dataclass
class ContractionRecord:
    contracted_edge: int
    survivor: int
    absorbed: int
    registry_split: RegistrySplit
    forced_tadpoles: list[int]
    absorbed_members: list[int]

    def to_dict(self) -> dict:
        return {
            "contracted_edge": self.contracted_edge,
            "survivor": self.survivor,
            "absorbed": self.absorbed,
            "registry_split": {
                "survivor_count": self.registry_split.survivor_count,
                "offset": self.registry_split.offset,
                "tagged_survivor": list(self.registry_split.tagged_survivor),
                "tagged_absorbed": list(self.registry_split.tagged_absorbed),
                "retagged_survivor": [list(p) for p in self.registry_split.retagged_survivor],
                "retagged_absorbed": [list(p) for p in self.registry_split.retagged_absorbed],
            },
            "forced_tadpoles": list(self.forced_tadpoles),
            "absorbed_members": list(self.absorbed_members),
        }

    @classmethod
    def from_dict(cls, d: dict) -> ContractionRecord:
        rs = d["registry_split"]
        return cls(
            contracted_edge=d["contracted_edge"],
            survivor=d["survivor"],
            absorbed=d["absorbed"],
            registry_split=RegistrySplit(
                rs["survivor_count"],
                rs["offset"],
                list(rs["tagged_survivor"]),
                list(rs["tagged_absorbed"]),
                [tuple(p) for p in rs.get("retagged_survivor", [])],
                [tuple(p) for p in rs.get("retagged_absorbed", [])],
            ),
            forced_tadpoles=list(d["forced_tadpoles"]),
            absorbed_members=list(d["absorbed_members"]),
        )


class LatticeComplex:
    """Vertices, edges, adjacency, tadpole registries and contraction history."""

    def __init__(self, system: RootSystem, rng_seed: int = 0):
        self.system = system
        self.rng_seed = rng_seed
        self.vertices: dict[int, Vertex] = {}
        self.edges: dict[int, Edge] = {}
        # cell id -> vertices in a fixed position order; the cell's type lists
        # the position pairs forming its edge skeleton
        self.cells: dict[int, tuple[int, ...]] = {}
        self.cell_type: dict[int, int] = {}
        self.cell_types: list[tuple[tuple[int, int], ...]] = []
        self._type_index: dict[tuple[tuple[int, int], ...], int] = {}
        self.contraction_log: list[ContractionRecord] = []
        # current vertex -> {edge id: neighbouring current vertex}
        self._adj: dict[int, dict[int, int]] = {}
        # original vertex -> current vertex; current vertex -> originals
        self._rep: dict[int, int] = {}
        self._members: dict[int, set[int]] = {}
        self._cells_of: dict[int, set[int]] = {}
        self._next_vertex = 0
        self._next_edge = 0
        self._next_cell = 0
        self._live = 0

    # ------------------------------------------------------------------ build

    def add_vertex(
        self, coords: tuple[int, ...] | None = None, registry: TadpoleRegistry | None = None
    ) -> int:
        vid = self._next_vertex
        self._next_vertex += 1
        reg = TadpoleRegistry.fresh() if registry is None else registry
        self.vertices[vid] = Vertex(vid, None if coords is None else tuple(coords), reg)
        self._adj[vid] = {}
        self._rep[vid] = vid
        self._members[vid] = {vid}
        return vid

    def add_edge(
        self,
        u: int,
        v: int,
        generator: int | None = None,
        kind: EdgeKind = EdgeKind.LATTICE,
    ) -> int:
        """Add a live edge between original vertices ``u`` and ``v`` (``u`` is the tail)."""
        for x in (u, v):
            if x not in self.vertices:
                raise UnknownVertexError(f"vertex {x} does not exist")
        eid = self._next_edge
        self._next_edge += 1
        self.edges[eid] = Edge(eid, u, v, generator, EdgeStatus.LIVE, EdgeKind(kind))
        ru, rv = self._rep[u], self._rep[v]
        self._adj[ru][eid] = rv
        self._adj[rv][eid] = ru
        self._live += 1
        return eid

    def remove_edge(self, eid: int) -> Edge:
        e = self.edge(eid)
        if not e.live:
            raise StateError(f"edge {eid} is contracted and cannot be removed")
        ru, rv = self._rep[e.u], self._rep[e.v]
        del self._adj[ru][eid]
        self._adj[rv].pop(eid, None)
        del self.edges[eid]
        self._live -= 1
        return e

    def intern_cell_type(self, skeleton) -> int:
        key = tuple(sorted((min(i, j), max(i, j)) for i, j in skeleton))
        if key not in self._type_index:
            self._type_index[key] = len(self.cell_types)
            self.cell_types.append(key)
        return self._type_index[key]

    def add_cell(self, vertices, cell_type: int | None = None) -> int:
        """Record a cell; without a type every vertex pair belongs to its skeleton."""
        cell = tuple(vertices)
        if cell_type is None:
            cell_type = self.intern_cell_type(
                (i, j) for i in range(len(cell)) for j in range(i + 1, len(cell))
            )
        cid = self._next_cell
        self._next_cell += 1
        self.cells[cid] = cell
        self.cell_type[cid] = cell_type
        for x in cell:
            self._cells_of.setdefault(x, set()).add(cid)
        return cid

    def remove_cell(self, cid: int) -> tuple[tuple[int, ...], int]:
        cell = self.cells.pop(cid)
        for x in cell:
            self._cells_of[x].discard(cid)
        return cell, self.cell_type.pop(cid)

    # ---------------------------------------------------------------- queries

    def has_vertex(self, v: int) -> bool:
        return v in self._adj

    def require_vertex(self, v: int) -> None:
        if v not in self._adj:
            if v in self.vertices:
                raise UnknownVertexError(
                    f"vertex {v} was merged into {self._rep[v]} and is not current"
                )
            raise UnknownVertexError(f"vertex {v} does not exist")

    def edge(self, eid: int) -> Edge:
        try:
            return self.edges[eid]
        except KeyError:
            raise UnknownEdgeError(f"edge {eid} does not exist") from None

    def rep(self, x: int) -> int:
        """Current vertex that holds the original vertex ``x``."""
        try:
            return self._rep[x]
        except KeyError:
            raise UnknownVertexError(f"vertex {x} does not exist") from None

    def constituents(self, v: int) -> list[int]:
        self.require_vertex(v)
        return sorted(self._members[v])

    def vertex_ids(self) -> list[int]:
        """Current (non-absorbed) vertices, sorted."""
        return sorted(self._adj)

    @property
    def num_vertices(self) -> int:
        return len(self._adj)

    @property
    def num_live_edges(self) -> int:
        return self._live

    def adjacency(self, v: int) -> dict[int, int]:
        """Raw ``{edge id: neighbour}`` map of current vertex ``v`` (do not mutate)."""
        return self._adj[v]

    def endpoints(self, eid: int) -> tuple[int, int]:
        """Current vertices at the tail and head of an edge."""
        e = self.edge(eid)
        return self._rep[e.u], self._rep[e.v]

    def is_tadpole(self, eid: int) -> bool:
        ru, rv = self.endpoints(eid)
        return ru == rv

    def live_edges(self) -> Iterator[Edge]:
        for eid in sorted(self.edges):
            e = self.edges[eid]
            if e.live:
                yield e

    def tadpole_count(self) -> int:
        """Total number of registry tadpoles over all vertices."""
        return sum(len(v.registry) for v in self.vertices.values())

    def cells_containing(self, a: int, b: int) -> list[int]:
        """Ids of cells with a skeleton edge joining current vertices ``a`` and ``b``."""
        cand: set[int] = set()
        for x in self._members[a]:
            cand |= self._cells_of.get(x, set())
        want = {a, b}
        out = []
        for cid in sorted(cand):
            reps = [self._rep[x] for x in self.cells[cid]]
            if any({reps[i], reps[j]} == want for i, j in self.cell_types[self.cell_type[cid]]):
                out.append(cid)
        return out

    def coords_index(self) -> dict[tuple[int, ...], int]:
        """Map embedding coordinates to current vertex ids (unmerged vertices only)."""
        return {
            v.coords: v.id
            for v in self.vertices.values()
            if v.coords is not None and v.merged_into is None
        }

    def vertex_at(self, coords) -> int:
        """Original vertex with the given embedding label."""
        key = tuple(coords)
        for v in self.vertices.values():
            if v.coords == key:
                return v.id
        raise UnknownVertexError(f"no vertex at coordinates {list(key)}")

    def edge_between(self, u: int, v: int) -> int:
        """Id of the live edge joining current vertices ``u`` and ``v`` (lowest id)."""
        self.require_vertex(u)
        self.require_vertex(v)
        hits = sorted(eid for eid, nb in self._adj[u].items() if nb == v)
        if not hits:
            raise UnknownEdgeError(f"no live edge between {u} and {v}")
        return hits[0]

    # ----------------------------------------------------- internal mutation

    def _merge_adjacency(self, s: int, a: int, eid: int) -> list[int]:
        """Fold current vertex ``a`` into ``s`` after removing edge ``eid``."""
        del self._adj[s][eid]
        del self._adj[a][eid]
        forced = sorted(x for x, nb in self._adj[a].items() if nb == s)
        adj_s = self._adj[s]
        for x, nb in self._adj.pop(a).items():
            if nb == s or nb == a:
                adj_s[x] = s
            else:
                adj_s[x] = nb
                self._adj[nb][x] = s
        members = self._members.pop(a)
        for x in members:
            self._rep[x] = s
        self._members[s] |= members
        self._live -= 1
        return forced

    def _split_adjacency(self, s: int, a: int, absorbed_members, eid: int) -> None:
        """Inverse of :meth:`_merge_adjacency`."""
        members = set(absorbed_members)
        self._members[s] -= members
        self._members[a] = members
        for x in members:
            self._rep[x] = a
        old = self._adj[s]
        self._adj[s] = {}
        self._adj[a] = {}
        for x in old:
            e = self.edges[x]
            ru, rv = self._rep[e.u], self._rep[e.v]
            self._adj[ru][x] = rv
            self._adj[rv][x] = ru
        e = self.edges[eid]
        ru, rv = self._rep[e.u], self._rep[e.v]
        self._adj[ru][eid] = rv
        self._adj[rv][eid] = ru
        self._live += 1

    # ---------------------------------------------------------- validation

    def check(self) -> None:
        """Full-structure validator; raises :class:`StateError` on any inconsistency."""
        expected: dict[int, dict[int, int]] = {v: {} for v in self._adj}
        logged = [r.contracted_edge for r in self.contraction_log]
        if len(set(logged)) != len(logged):
            raise StateError("an edge appears twice in the contraction log")
        for e in self.edges.values():
            if e.live:
                ru, rv = self._rep[e.u], self._rep[e.v]
                if ru not in expected or rv not in expected:
                    raise StateError(f"edge {e.id} touches a non-current vertex")
                expected[ru][e.id] = rv
                expected[rv][e.id] = ru
            elif e.id not in logged:
                raise StateError(f"contracted edge {e.id} missing from the log")
        for eid in logged:
            if self.edges[eid].live:
                raise StateError(f"logged edge {eid} is live")
        if expected != self._adj:
            raise StateError("adjacency is inconsistent with the edge multiset")
        for v, nbrs in self._adj.items():
            for eid, nb in nbrs.items():
                if self._adj[nb].get(eid) != v:
                    raise StateError(f"adjacency not symmetric at edge {eid}")
        if sum(len(n) for n in self._adj.values()) != 2 * self._live - sum(
            1 for e in self.edges.values() if e.live and self._rep[e.u] == self._rep[e.v]
        ):
            raise StateError("live edge counter is off")
        for vid, vx in self.vertices.items():
            root = vid
            while self.vertices[root].merged_into is not None:
                root = self.vertices[root].merged_into
            if self._rep[vid] != root:
                raise StateError(f"representative of {vid} is stale")
            if not vx.registry.is_ordered():
                raise StateError(f"registry of {vid} is not strictly increasing")
            if vx.merged_into is not None and len(vx.registry):
                raise StateError(f"absorbed vertex {vid} still owns tadpoles")

    # -------------------------------------------------------- serialization

    def to_dict(self) -> dict:
        verts = []
        for vid in sorted(self.vertices):
            v = self.vertices[vid]
            d = {
                "id": vid,
                "coords": None if v.coords is None else list(v.coords),
                "tadpoles": [t.to_dict() for t in v.registry],
            }
            if v.merged_into is not None:
                d["merged_into"] = v.merged_into
            verts.append(d)
        edges = [
            {
                "id": e.id,
                "u": e.u,
                "v": e.v,
                "generator": e.generator,
                "status": e.status.value,
                "kind": e.kind.value,
            }
            for e in (self.edges[k] for k in sorted(self.edges))
        ]
        return {
            "version": FORMAT_VERSION,
            "system": self.system.kind.value,
            "rng_seed": self.rng_seed,
            "vertices": verts,
            "edges": edges,
            "cell_types": [[list(p) for p in t] for t in self.cell_types],
            "cells": [
                {"id": cid, "vertices": list(self.cells[cid]), "type": self.cell_type[cid]}
                for cid in sorted(self.cells)
            ],
            "contraction_log": [r.to_dict() for r in self.contraction_log],
            "counters": {
                "vertex": self._next_vertex,
                "edge": self._next_edge,
                "cell": self._next_cell,
            },
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent, separators=None if indent else (",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> LatticeComplex:
        if data.get("version") != FORMAT_VERSION:
            raise StateError(f"unsupported complex format version {data.get('version')!r}")
        K = cls(RootSystem.from_name(data["system"]), int(data.get("rng_seed", 0)))
        for d in data["vertices"]:
            vid = d["id"]
            reg = TadpoleRegistry(
                [TadpoleEntry(t["index"], t["orientation"], t.get("provenance")) for t in d["tadpoles"]]
            )
            coords = None if d["coords"] is None else tuple(d["coords"])
            K.vertices[vid] = Vertex(vid, coords, reg, d.get("merged_into"))
        for vid in K.vertices:
            root = vid
            while K.vertices[root].merged_into is not None:
                root = K.vertices[root].merged_into
            K._rep[vid] = root
            K._members.setdefault(root, set()).add(vid)
        for vid in K.vertices:
            if K.vertices[vid].merged_into is None:
                K._adj[vid] = {}
        for d in data["edges"]:
            e = Edge(d["id"], d["u"], d["v"], d["generator"], EdgeStatus(d["status"]), EdgeKind(d.get("kind", "lattice")))
            K.edges[e.id] = e
            if e.live:
                ru, rv = K._rep[e.u], K._rep[e.v]
                K._adj[ru][e.id] = rv
                K._adj[rv][e.id] = ru
                K._live += 1
        for t in data.get("cell_types", []):
            K.intern_cell_type(tuple(p) for p in t)
        for c in data.get("cells", []):
            K.cells[c["id"]] = tuple(c["vertices"])
            K.cell_type[c["id"]] = c["type"]
            for x in c["vertices"]:
                K._cells_of.setdefault(x, set()).add(c["id"])
        K.contraction_log = [ContractionRecord.from_dict(r) for r in data.get("contraction_log", [])]
        counters = data.get("counters", {})
        K._next_vertex = counters.get("vertex", max(K.vertices, default=-1) + 1)
        K._next_edge = counters.get("edge", max(K.edges, default=-1) + 1)
        K._next_cell = counters.get("cell", max(K.cells, default=-1) + 1)
        return K

    @classmethod
    def from_json(cls, text: str) -> LatticeComplex:
        return cls.from_dict(json.loads(text))

    def copy(self) -> LatticeComplex:
        return copy.deepcopy(self)

    def to_dot(self) -> str:
        """Graphviz rendering of the live 1-skeleton."""
        lines = ["graph qspace {"]
        for vid in self.vertex_ids():
            v = self.vertices[vid]
            label = str(vid) if v.coords is None else ",".join(map(str, v.coords))
            n = len(v.registry)
            if n != 1:
                label += f" ({n} tadpoles)"
            lines.append(f'  v{vid} [label="{label}"];')
        for e in self.live_edges():
            ru, rv = self._rep[e.u], self._rep[e.v]
            attrs = f'label="x{e.generator}"' if e.generator is not None else f"style=dashed"
            lines.append(f"  v{ru} -- v{rv} [{attrs}];")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return (
            f"LatticeComplex({self.system.kind.value}, vertices={self.num_vertices}, "
            f"live_edges={self.num_live_edges}, contractions={len(self.contraction_log)})"
        )
