"""Degree, harmonic closeness, betweenness, and eigenvector centralities.

All operations are pure functions over the immutable graph. Closeness
and betweenness distances are unweighted hop counts by default: edge
weights encode interaction frequency, not cost. A weighted mode
(distance = 1/weight, Dijkstra) exists behind a flag.

Exact all-pairs traversal is O(n(n+m)); above ``EXACT_NODE_LIMIT`` nodes
the auto mode switches to seeded pivot sampling with
``k = max(256, n // 100)`` and rescales by n/k. Per-pivot contributions
are accumulated in fixed ascending-pivot order inside fixed-size chunks,
so results do not depend on the worker count.
"""

from __future__ import annotations

import heapq
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import rng as _rng
from .errors import InvalidParameter, ZeroMatrix
from .graph import DEGREE_MODES, INFO_FLOW, DirectedGraph
from .scores import ScoreVector

EXACT_NODE_LIMIT = 20_000
_SOURCE_CHUNK = 64


def default_sample_size(n: int) -> int:
    return max(256, n // 100)


@dataclass
class PowerIterationConfig:
    """Stopping rule for power-iteration methods (L1 change threshold)."""

    tolerance: float = 1e-10
    max_iterations: int = 100

    def __post_init__(self):
        if not self.tolerance > 0:
            raise InvalidParameter("tolerance must be positive")
        if self.max_iterations < 1:
            raise InvalidParameter("max_iterations must be >= 1")


# -- shared traversal kernels ---------------------------------------------

def _frontier_edges(ptr, adj, frontier):
    """All (src, dst) pairs leaving the frontier nodes, vectorised."""
    starts = ptr[frontier]
    counts = ptr[frontier + 1] - starts
    total = int(counts.sum())
    if total == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    esrc = np.repeat(frontier, counts)
    offsets = np.repeat(np.cumsum(counts) - counts, counts)
    idx = np.arange(total, dtype=np.int64) - offsets + np.repeat(starts, counts)
    return esrc, adj[idx]


def bfs_distances(ptr, adj, source: int, n: int) -> np.ndarray:
    """Hop counts from source over the given adjacency; -1 = unreachable."""
    dist = np.full(n, -1, dtype=np.int64)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    level = 0
    while frontier.size:
        level += 1
        _, edst = _frontier_edges(ptr, adj, frontier)
        if edst.size == 0:
            break
        fresh = edst[dist[edst] < 0]
        if fresh.size == 0:
            break
        dist[fresh] = level
        frontier = np.unique(fresh)
    return dist


def _dijkstra_distances(ptr, adj, w, source: int, n: int) -> np.ndarray:
    """Weighted distances with cost 1/weight; inf = unreachable."""
    dist = np.full(n, np.inf)
    dist[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for i in range(ptr[u], ptr[u + 1]):
            v = adj[i]
            nd = d + 1.0 / w[i]
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def _chunked(items: np.ndarray, size: int):
    return [items[i:i + size] for i in range(0, len(items), size)]


def _accumulate_over_sources(sources, per_chunk, n, workers=1):
    """Sum per-chunk float arrays in fixed chunk order (worker-count invariant)."""
    chunks = _chunked(np.asarray(sources, dtype=np.int64), _SOURCE_CHUNK)
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            partials = list(ex.map(per_chunk, chunks))
    else:
        partials = [per_chunk(c) for c in chunks]
    total = np.zeros(n)
    for p in partials:
        total += p
    return total


def _resolve_sampling(n, mode, sample_size, op):
    """Map (mode, sample_size) to the pivot count, or None for exact."""
    if mode == "auto":
        mode = "exact" if n <= EXACT_NODE_LIMIT else "sampled"
    if mode == "exact":
        return None
    if mode != "sampled":
        raise InvalidParameter(f"{op}: mode must be exact, sampled, or auto")
    k = default_sample_size(n) if sample_size is None else int(sample_size)
    if k < 1 or k > n:
        raise InvalidParameter(f"{op}: sample size must be in 1..{n}, got {k}")
    return k


def _pick_pivots(n, k, seed):
    pivots = _rng.stream(seed).choice(n, size=k, replace=False)
    pivots.sort()
    return pivots.astype(np.int64)


# -- degree ----------------------------------------------------------------

def degree_centrality(g: DirectedGraph, mode: str = "total") -> ScoreVector:
    """Raw distinct-neighbour degree as a score; not normalised."""
    if mode not in DEGREE_MODES:
        raise InvalidParameter(f"degree mode must be one of {DEGREE_MODES}")
    if mode == "in":
        scores = g.in_degrees().astype(np.float64)
    elif mode == "out":
        scores = g.out_degrees().astype(np.float64)
    else:
        scores = (g.in_degrees() + g.out_degrees()).astype(np.float64)
    return ScoreVector(metric=f"degree_{mode}", labels=g.labels, scores=scores,
                       params={"mode": mode})


# -- harmonic closeness ------------------------------------------------------

def closeness_centrality(g: DirectedGraph, mode: str = "auto",
                         sample_size: int | None = None, seed: int = 0,
                         weighted: bool = False, workers: int = 1) -> ScoreVector:
    """Harmonic closeness: sum of reciprocal outgoing distances.

    Unreachable targets contribute zero, so disconnected graphs are
    fine and isolated nodes score 0. Sampled mode estimates the sum
    from k seeded target pivots (reverse traversals) rescaled by n/k.
    Supply ``g.transpose()`` to measure reachability-to instead.
    """
    n = g.n
    k = _resolve_sampling(n, mode, sample_size, "closeness")
    params = {"weighted": weighted,
              "mode": "exact" if k is None else "sampled"}

    if k is None:
        def per_chunk(chunk):
            out = np.zeros(n)
            for v in chunk:
                if weighted:
                    d = _dijkstra_distances(g.out_ptr, g.out_dst, g.out_w, int(v), n)
                    reach = np.isfinite(d) & (d > 0)
                else:
                    d = bfs_distances(g.out_ptr, g.out_dst, int(v), n)
                    reach = d > 0
                out[v] = (1.0 / d[reach]).sum()
            return out

        scores = _accumulate_over_sources(np.arange(n), per_chunk, n, workers)
    else:
        params.update({"sample_size": k, "seed": seed})
        pivots = _pick_pivots(n, k, seed)

        def per_chunk(chunk):
            out = np.zeros(n)
            for p in chunk:
                # reverse traversal from the pivot: d(v, p) for every v
                if weighted:
                    d = _dijkstra_distances(g.in_ptr, g.in_src, g.in_w, int(p), n)
                    reach = np.isfinite(d) & (d > 0)
                else:
                    d = bfs_distances(g.in_ptr, g.in_src, int(p), n)
                    reach = d > 0
                out[reach] += 1.0 / d[reach]
            return out

        scores = _accumulate_over_sources(pivots, per_chunk, n, workers)
        scores *= n / k

    return ScoreVector(metric="closeness", labels=g.labels, scores=scores,
                       params=params)


# -- betweenness (Brandes) ---------------------------------------------------

def _brandes_from_source(g: DirectedGraph, s: int) -> np.ndarray:
    """Source dependencies delta_s(.) on unweighted shortest paths."""
    n = g.n
    dist = np.full(n, -1, dtype=np.int64)
    dist[s] = 0
    sigma = np.zeros(n)
    sigma[s] = 1.0
    frontier = np.array([s], dtype=np.int64)
    level = 0
    tiers = []
    while frontier.size:
        level += 1
        esrc, edst = _frontier_edges(g.out_ptr, g.out_dst, frontier)
        if edst.size == 0:
            break
        fresh = edst[dist[edst] < 0]
        if fresh.size:
            dist[fresh] = level
        on_tier = dist[edst] == level
        t_src, t_dst = esrc[on_tier], edst[on_tier]
        if t_src.size:
            sigma += np.bincount(t_dst, weights=sigma[t_src], minlength=n)
            tiers.append((t_src, t_dst))
        frontier = np.unique(fresh) if fresh.size else fresh
    delta = np.zeros(n)
    for t_src, t_dst in reversed(tiers):
        share = sigma[t_src] / sigma[t_dst] * (1.0 + delta[t_dst])
        delta += np.bincount(t_src, weights=share, minlength=n)
    delta[s] = 0.0
    return delta


def betweenness_centrality(g: DirectedGraph, mode: str = "auto",
                           sample_size: int | None = None, seed: int = 0,
                           workers: int = 1) -> ScoreVector:
    """Freeman betweenness over ordered pairs, unnormalised.

    Exact mode runs Brandes accumulation from every source; sampled mode
    uses k seeded source pivots rescaled by n/k. With k = n the pivot
    set is every source in ascending order, so sampled output matches
    exact bit for bit.
    """
    n = g.n
    k = _resolve_sampling(n, mode, sample_size, "betweenness")
    params = {"mode": "exact" if k is None else "sampled"}

    def per_chunk(chunk):
        out = np.zeros(n)
        for v in chunk:
            out += _brandes_from_source(g, int(v))
        return out

    if k is None:
        scores = _accumulate_over_sources(np.arange(n), per_chunk, n, workers)
    else:
        params.update({"sample_size": k, "seed": seed})
        pivots = _pick_pivots(n, k, seed)
        scores = _accumulate_over_sources(pivots, per_chunk, n, workers)
        scores *= n / k

    return ScoreVector(metric="betweenness", labels=g.labels, scores=scores,
                       params=params)


# -- eigenvector -------------------------------------------------------------

def eigenvector_centrality(g: DirectedGraph,
                           cfg: PowerIterationConfig | None = None,
                           reverse: bool | None = None) -> ScoreVector:
    """Dominant-eigenvector scores by power iteration, L2-normalised each step.

    The iteration runs on the endorsement orientation (status flows from
    in-edges there), so resharing confers influence; ``reverse`` forces
    the transpose of the stored graph (True) or the stored orientation
    as-is (False). Non-convergence is not an error: the last iterate is
    returned with ``converged=False`` in params. Graphs that are not
    strongly connected are allowed; the result is the dominant-subspace
    projection reachable from the uniform start, and a params note marks
    the degenerate case where the iterate collapses to zero.
    """
    if g.num_edges == 0:
        raise ZeroMatrix("eigenvector centrality needs at least one edge")
    cfg = cfg or PowerIterationConfig()
    if reverse is None:
        reverse = g.direction == INFO_FLOW
    n = g.n
    esrc, edst, ew = g.edge_arrays()

    def matvec(x):
        if reverse:
            # in-edges of the transpose are the stored out-edges
            return np.bincount(esrc, weights=ew * x[edst], minlength=n)
        return np.bincount(edst, weights=ew * x[esrc], minlength=n)

    x = np.full(n, 1.0 / np.sqrt(n))
    params = {"tolerance": cfg.tolerance, "max_iterations": cfg.max_iterations,
              "reverse": reverse, "converged": False}
    iterations = 0
    eigenvalue = 0.0
    for _ in range(cfg.max_iterations):
        y = matvec(x)
        norm = float(np.linalg.norm(y))
        if norm == 0.0:
            # nilpotent direction: iterate collapsed to zero, keep last x
            params["note"] = "iterate collapsed to zero (nilpotent adjacency)"
            break
        y /= norm
        iterations += 1
        eigenvalue = norm
        change = float(np.abs(y - x).sum())
        x = y
        if change < cfg.tolerance:
            params["converged"] = True
            break
    params["eigenvalue"] = eigenvalue
    return ScoreVector(metric="eigenvector", labels=g.labels, scores=x,
                       params=params, iterations_run=iterations)
