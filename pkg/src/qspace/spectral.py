"""Spectral dimension from random-walk return probabilities, and face reattachment."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra
from scipy.stats import linregress

from .complex import EdgeKind, LatticeComplex
from .errors import ConfigurationError, FitError, InsufficientStatisticsError, UnknownVertexError

__all__ = [
    "ReattachmentParams",
    "ReattachmentReport",
    "SpectralEstimate",
    "WalkGraph",
    "faces",
    "occupation",
    "reattach",
    "refinement_experiment",
    "return_probability",
    "spectral_dimension",
]

DEFAULT_WINDOW = (8, 64)
_BLOCK = 256


# ----------------------------------------------------------------- faces


def faces(complex: LatticeComplex) -> list[tuple[int, ...]]:
    """2-faces as minimal chordless cycles: triangles if any exist, else chordless squares.

    Faces are returned as sorted vertex tuples, in sorted order.
    """
    nbrs = {
        v: {nb for nb in complex.adjacency(v).values() if nb != v} for v in complex.vertex_ids()
    }
    tris = set()
    for u, nu in nbrs.items():
        for v in nu:
            if v > u:
                for w in nu & nbrs[v]:
                    if w > v:
                        tris.add((u, v, w))
    if tris:
        return sorted(tris)
    squares = set()
    for a, na in nbrs.items():
        around = sorted(na)
        for i, b in enumerate(around):
            for d in around[i + 1 :]:
                if d in nbrs[b]:
                    continue
                for c in nbrs[b] & nbrs[d]:
                    if c != a and c not in na:
                        squares.add(tuple(sorted((a, b, c, d))))
    return sorted(squares)


@dataclass(frozen=True)
class ReattachmentParams:
    """``lam`` is the hop distance over which the reattachment probability drops by e.

    Each of ``pairs`` samples picks a face uniformly, then a partner face
    uniformly among faces within ``horizon`` hops (default ``ceil(3 lam)``),
    and fires with probability ``base_rate * exp(-k / lam)``; pairs at
    distance 0 (touching faces, including the face itself) never fire.
    """

    lam: float
    base_rate: float
    seed: int = 0
    pairs: int | None = None
    horizon: int | None = None
    remove_local: bool = False

    def __post_init__(self):
        if not self.lam > 0:
            raise ConfigurationError(f"lambda must be positive, got {self.lam}")
        if not 0.0 <= self.base_rate <= 1.0:
            raise ConfigurationError(f"base_rate must lie in [0, 1], got {self.base_rate}")

    @property
    def reach(self) -> int:
        if self.horizon is not None:
            return int(self.horizon)
        return max(1, math.ceil(3 * self.lam))

    def probability(self, k: int) -> float:
        if k <= 0:
            return 0.0
        return self.base_rate * math.exp(-k / self.lam)


@dataclass
class ReattachmentReport:
    fired: int
    distances: list[int] = field(default_factory=list)
    shortcuts: list[int] = field(default_factory=list)

    def expected(self, params: ReattachmentParams) -> float:
        return sum(params.probability(k) for k in self.distances)

    def __int__(self) -> int:
        return self.fired


def _snapshot_graph(complex: LatticeComplex):
    ids = complex.vertex_ids()
    index = {v: i for i, v in enumerate(ids)}
    rows, cols = [], []
    for v in ids:
        for nb in complex.adjacency(v).values():
            if nb != v:
                rows.append(index[v])
                cols.append(index[nb])
    n = len(ids)
    G = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    return G, index


def reattach(complex: LatticeComplex, params: ReattachmentParams, rng=None) -> ReattachmentReport:
    """Glue sampled face pairs with shortcut edges; returns the firing report.

    Faces and hop distances are taken from the complex as it is on entry.
    Shortcuts join the paired faces' vertices matched in sorted-id order.
    ``int(report)`` is the number of reattachments that fired.
    """
    rng = np.random.default_rng(params.seed) if rng is None else rng
    F = faces(complex)
    report = ReattachmentReport(0)
    if not F or params.base_rate == 0.0:
        return report
    G, index = _snapshot_graph(complex)
    FI = np.array([[index[v] for v in f] for f in F])
    # vertex -> incident faces, padded with -1
    counts = np.bincount(FI.ravel(), minlength=G.shape[0])
    VF = np.full((G.shape[0], max(1, counts.max())), -1, dtype=np.int64)
    fill = np.zeros(G.shape[0], dtype=np.int64)
    for fi, f in enumerate(FI):
        for v in f:
            VF[v, fill[v]] = fi
            fill[v] += 1
    n = params.pairs if params.pairs is not None else len(F)
    limit = params.reach + 0.5
    for lo in range(0, n, _BLOCK):
        picks = rng.integers(len(F), size=min(_BLOCK, n - lo))
        sources = np.unique(FI[picks])
        D = dijkstra(G, directed=False, indices=sources, unweighted=True, limit=limit)
        rows = np.searchsorted(sources, FI[picks])
        for i, r in zip(picks, rows):
            dmin = np.minimum.reduce(D[r])
            ball = np.flatnonzero(np.isfinite(dmin))
            cands = np.unique(VF[ball])
            cands = cands[cands >= 0]
            k_c = np.minimum.reduce(dmin[FI[cands]], axis=1)
            pick = int(rng.integers(len(cands)))
            j, k = int(cands[pick]), int(k_c[pick])
            report.distances.append(k)
            if rng.random() < params.probability(k):
                report.fired += 1
                if params.remove_local:
                    _remove_face_edges(complex, F[i])
                for u, w in zip(F[i], F[j]):
                    if complex.has_vertex(u) and complex.has_vertex(w) and u != w:
                        report.shortcuts.append(complex.add_edge(u, w, None, EdgeKind.SHORTCUT))
    return report


def _remove_face_edges(complex: LatticeComplex, face) -> None:
    members = set(face)
    for v in face:
        if not complex.has_vertex(v):
            continue
        for eid, nb in list(complex.adjacency(v).items()):
            e = complex.edges.get(eid)
            if e is not None and e.live and nb in members and nb != v:
                complex.remove_edge(eid)


# ---------------------------------------------------------------- walkers


class WalkGraph:
    """CSR snapshot of the live adjacency; a tadpole is a move that stays put.

    With ``tadpoles=True`` every registry entry adds one stay-put move, so
    the chain is lazy.  ``tadpoles=False`` walks the bare 1-skeleton, where
    only forced (edge) tadpoles stay put.
    """

    def __init__(self, complex: LatticeComplex, tadpoles: bool = True):
        self.ids = np.array(complex.vertex_ids(), dtype=np.int64)
        index = {int(v): i for i, v in enumerate(self.ids)}
        indptr = [0]
        targets = []
        for i, v in enumerate(self.ids):
            adj = complex.adjacency(int(v))
            targets.extend(index[adj[eid]] for eid in sorted(adj))
            if tadpoles:
                targets.extend([i] * len(complex.vertices[int(v)].registry))
            indptr.append(len(targets))
        self.index = index
        self.indptr = np.array(indptr, dtype=np.int64)
        self.targets = np.array(targets, dtype=np.int64)
        self.degree = np.diff(self.indptr)

    def step(self, pos: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        deg = self.degree[pos]
        idx = self.indptr[pos] + (rng.random(pos.shape[0]) * deg).astype(np.int64)
        stuck = deg == 0
        if stuck.any():
            if not len(self.targets):
                return pos
            idx[stuck] = 0
            return np.where(stuck, pos, self.targets[idx])
        return self.targets[idx]


def _start(graph: WalkGraph, origin: int, walkers: int) -> np.ndarray:
    if walkers < 1:
        raise ConfigurationError(f"need at least one walker, got {walkers}")
    if origin not in graph.index:
        raise UnknownVertexError(f"vertex {origin} is not a current vertex")
    return np.full(walkers, graph.index[origin], dtype=np.int64)


def return_probability(
    complex: LatticeComplex | WalkGraph, origin: int, t_max: int, walkers: int, rng=None
) -> np.ndarray:
    """Fraction of ``walkers`` simple random walkers at ``origin`` after each step 0..t_max."""
    graph = complex if isinstance(complex, WalkGraph) else WalkGraph(complex)
    rng = np.random.default_rng(0) if rng is None else rng
    pos = _start(graph, origin, walkers)
    home = graph.index[origin]
    P = np.empty(t_max + 1)
    P[0] = 1.0
    for t in range(1, t_max + 1):
        pos = graph.step(pos, rng)
        P[t] = np.count_nonzero(pos == home) / walkers
    return P


def occupation(
    complex: LatticeComplex | WalkGraph, origin: int, t: int, walkers: int, rng=None
) -> dict[int, float]:
    """Empirical distribution of walker positions after ``t`` steps."""
    graph = complex if isinstance(complex, WalkGraph) else WalkGraph(complex)
    rng = np.random.default_rng(0) if rng is None else rng
    pos = _start(graph, origin, walkers)
    for _ in range(t):
        pos = graph.step(pos, rng)
    counts = np.bincount(pos, minlength=len(graph.ids))
    return {int(graph.ids[i]): c / walkers for i, c in enumerate(counts) if c}


@dataclass(frozen=True)
class SpectralEstimate:
    d_s: float
    stderr: float
    window: tuple[int, int]
    samples: int

    def to_dict(self) -> dict:
        return {
            "d_s": self.d_s,
            "stderr": self.stderr,
            "window": list(self.window),
            "samples": self.samples,
        }


def spectral_dimension(P, window=DEFAULT_WINDOW, samples: int = 0) -> SpectralEstimate:
    """``-2`` times the log-log slope of ``P(t)`` over the even ``t`` in ``window``."""
    t_min, t_max = int(window[0]), int(window[1])
    if t_min < 1 or t_max <= t_min:
        raise FitError(f"window must satisfy 1 <= t_min < t_max, got {window}")
    P = np.asarray(P, dtype=float)
    if t_max >= len(P):
        raise FitError(f"series has {len(P)} points, window needs t up to {t_max}")
    ts = np.arange(t_min + t_min % 2, t_max + 1, 2)
    if len(ts) < 3:
        raise FitError(f"window {window} holds fewer than three even times")
    vals = P[ts]
    if np.any(vals <= 0):
        bad = ts[vals <= 0].tolist()
        raise InsufficientStatisticsError(f"zero return probability at t = {bad}")
    fit = linregress(np.log(ts), np.log(vals))
    return SpectralEstimate(-2.0 * fit.slope, 2.0 * fit.stderr, (t_min, t_max), samples)


def refinement_experiment(
    complex: LatticeComplex,
    levels: int,
    lam: float,
    base_rate: float,
    walkers: int,
    window=DEFAULT_WINDOW,
    seed: int = 0,
    origin: int = 0,
) -> list[SpectralEstimate]:
    """Bisect every edge ``levels`` times, reattaching at a fixed effective distance.

    At refinement level ``n`` edges are ``2**n`` times finer, so the
    reattachment scale in hops is ``lam * 2**n``.  Returns one estimate per
    level, starting with the unrefined complex.
    """
    from .dynamics import ExpansionParams, step_halftime

    rng = np.random.default_rng(seed)
    K = complex.copy()
    out = []
    for n in range(levels + 1):
        if n:
            step_halftime(K, ExpansionParams(1.0, 1, seed), rng)
        reattach(K, ReattachmentParams(lam * 2**n, base_rate, seed), rng)
        P = return_probability(K, origin, window[1], walkers, rng)
        out.append(spectral_dimension(P, window, walkers))
    return out
