"""Stochastic edge splitting (expansion) and Hubble-law measurement.

Time advances in half-time steps.  In each step every live, non-tadpole edge
that existed at the start of the step splits independently with the step's
probability.  Distances are hop counts over live edges: one hop is one tick
of the light automaton.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .complex import EdgeKind, EdgeStatus, LatticeComplex
from .errors import ConfigurationError, FitError, UnreachableError
from .topology import split_edge

__all__ = [
    "ExpansionParams",
    "HubbleFit",
    "auto_pairs",
    "fit_through_origin",
    "hubble_experiment",
    "light_distance",
    "splittable_edges",
    "step_halftime",
]


@dataclass(frozen=True)
class ExpansionParams:
    split_probability: float = 0.5
    steps: int = 8
    seed: int = 0
    window: int = 4
    schedule: tuple[float, ...] | None = None

    def __post_init__(self):
        probs = [self.split_probability] + list(self.schedule or ())
        for p in probs:
            if not 0.0 <= p <= 1.0:
                raise ConfigurationError(f"split probability must lie in [0, 1], got {p}")
        if self.steps < 0:
            raise ConfigurationError(f"steps must be non-negative, got {self.steps}")
        if self.window < 1:
            raise ConfigurationError(f"window must be at least 1, got {self.window}")
        if self.schedule is not None and len(self.schedule) < self.steps:
            raise ConfigurationError(
                f"schedule has {len(self.schedule)} entries but {self.steps} steps were requested"
            )

    def probability_at(self, step: int) -> float:
        if self.schedule is not None:
            return float(self.schedule[step])
        return self.split_probability


def splittable_edges(complex: LatticeComplex) -> list[int]:
    """Live, non-tadpole edges in id order (contracted edges are never candidates)."""
    out = []
    for eid in sorted(complex.edges):
        e = complex.edges[eid]
        if e.status is EdgeStatus.LIVE and complex.rep(e.u) != complex.rep(e.v):
            out.append(eid)
    return out


def step_halftime(
    complex: LatticeComplex, params: ExpansionParams | float, rng=None, step: int = 0
) -> int:
    """Run one half-time step; returns how many edges split."""
    if not isinstance(params, ExpansionParams):
        params = ExpansionParams(float(params), 1)
    rng = np.random.default_rng(params.seed) if rng is None else rng
    p = params.probability_at(step)
    candidates = splittable_edges(complex)
    if not candidates:
        return 0
    draws = rng.random(len(candidates))
    chosen = [eid for eid, r in zip(candidates, draws) if r < p]
    for eid in chosen:
        split_edge(complex, eid)
    return len(chosen)


def light_distance(
    complex: LatticeComplex, u: int, v: int, include_cell_edges: bool = True
) -> int:
    """Hop count between current vertices ``u`` and ``v`` over live edges."""
    complex.require_vertex(u)
    complex.require_vertex(v)
    if u == v:
        return 0
    dist = {u: 0}
    q = deque([u])
    edges = complex.edges
    while q:
        w = q.popleft()
        dw = dist[w] + 1
        for eid, nb in complex.adjacency(w).items():
            if nb in dist:
                continue
            if not include_cell_edges and edges[eid].kind is EdgeKind.CELL:
                continue
            if nb == v:
                return dw
            dist[nb] = dw
            q.append(nb)
    raise UnreachableError(f"vertex {v} is not reachable from {u}")


def _distances_from(complex: LatticeComplex, src: int) -> dict[int, int]:
    dist = {src: 0}
    q = deque([src])
    while q:
        w = q.popleft()
        for nb in complex.adjacency(w).values():
            if nb not in dist:
                dist[nb] = dist[w] + 1
                q.append(nb)
    return dist


def auto_pairs(
    complex: LatticeComplex, count: int, min_D: int, max_D: int, centre: int | None = None
) -> list[tuple[int, int]]:
    """Pairs ``(centre, w)`` whose initial distances are spread evenly over ``[min_D, max_D]``.

    For each target distance the lowest-id vertex at exactly that distance is used.
    """
    if count < 1 or min_D < 1 or max_D < min_D:
        raise ConfigurationError(f"bad auto_pairs request count={count} D=[{min_D}, {max_D}]")
    centre = complex.vertex_ids()[0] if centre is None else centre
    dist = _distances_from(complex, centre)
    by_d: dict[int, int] = {}
    for w in sorted(dist):
        by_d.setdefault(dist[w], w)
    targets = sorted({int(round(d)) for d in np.linspace(min_D, max_D, count)})
    missing = [d for d in targets if d not in by_d]
    if missing:
        raise ConfigurationError(f"no vertex at distance {missing} from vertex {centre}")
    return [(centre, by_d[d]) for d in targets]


def fit_through_origin(D, v) -> tuple[float, float]:
    """Zero-intercept least squares ``v = H0 D``; returns ``(H0, r^2)``.

    ``r^2`` is the uncentred coefficient ``1 - SS_res / sum(v^2)``, the usual
    choice for a model without an offset; it lies in [0, 1].
    """
    D = np.asarray(D, dtype=float)
    v = np.asarray(v, dtype=float)
    sdd = float(D @ D)
    if sdd == 0.0:
        raise FitError("all distances are zero")
    H0 = float(D @ v) / sdd
    ss_tot = float(v @ v)
    res = v - H0 * D
    ss_res = float(res @ res)
    if ss_tot == 0.0:
        return H0, 1.0 if ss_res == 0.0 else 0.0
    return H0, max(0.0, 1.0 - ss_res / ss_tot)


@dataclass
class HubbleFit:
    H0: float
    r_squared: float
    samples: list[tuple[float, float]]
    sample_keys: list[tuple[int, int]] = field(default_factory=list)  # (step, pair id)
    distances: np.ndarray | None = None  # shape (steps + 1, pairs)
    splits: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"H0": self.H0, "r_squared": self.r_squared, "samples": len(self.samples)}


def hubble_experiment(
    complex: LatticeComplex,
    pairs: Sequence[tuple[int, int]],
    params: ExpansionParams,
    rng=None,
    include_cell_edges: bool = True,
) -> HubbleFit:
    """Expand ``complex`` in place and fit recession rate against distance.

    For every pair and every step ``t >= window`` one sample is taken:
    ``D`` is the mean distance over steps ``t - window .. t - 1`` and ``v`` the
    mean per-step increment over the same steps, ``(D(t) - D(t - window)) / window``.
    """
    pairs = [tuple(p) for p in pairs]
    if len(pairs) < 3:
        raise FitError(f"need at least 3 pairs, got {len(pairs)}")
    rng = np.random.default_rng(params.seed) if rng is None else rng
    d0 = [light_distance(complex, a, b, include_cell_edges) for a, b in pairs]
    if len(set(d0)) < 3:
        raise FitError(f"pairs span only {len(set(d0))} distinct initial distances, need 3")
    if params.steps < params.window:
        raise FitError(f"steps ({params.steps}) must be at least the window ({params.window})")
    series = [d0]
    splits = []
    for step in range(params.steps):
        splits.append(step_halftime(complex, params, rng, step))
        series.append([light_distance(complex, a, b, include_cell_edges) for a, b in pairs])
    D = np.array(series, dtype=np.int64)
    w = params.window
    samples, keys = [], []
    for t in range(w, params.steps + 1):
        for j in range(len(pairs)):
            mean_d = D[t - w : t, j].sum() / w
            vel = (D[t, j] - D[t - w, j]) / w
            samples.append((float(mean_d), float(vel)))
            keys.append((t, j))
    H0, r2 = fit_through_origin([s[0] for s in samples], [s[1] for s in samples])
    return HubbleFit(H0, r2, samples, keys, D, splits)
