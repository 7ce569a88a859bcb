"""Spread models and node-removal intervention experiments.

Two spread models ship: deterministic reachability (nodes reachable from
the seed set along the info-flow direction) and the one-shot independent
cascade, estimated by Monte Carlo. Cascade trials draw from
counter-based streams keyed by (seed, trial index), so a result never
depends on trial ordering or parallel scheduling, and baseline/treated
runs of an experiment share the same stream structure for variance
pairing.

Node identity in this module is the node *label*: removal sets come from
rankings and must survive the id re-densification that node removal
performs.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Mapping

import numpy as np

from . import rng as _rng
from .errors import DegenerateBaseline, InvalidParameter
from .graph import DirectedGraph
from .ranking import RankingTable
from .scores import NOVEL_METRICS, TRADITIONAL_METRICS
from .traditional import _frontier_edges

MODELS = ("independent_cascade", "reachability")
STRATEGIES = ("traditional_union", "combined_union", "single", "random")

_TRIAL_CHUNK = 256


@dataclass
class CascadeConfig:
    """Spread model choice plus the misinformation originator set."""

    seeds: tuple[str, ...]
    model: str = "independent_cascade"
    p: float = 0.1
    trials: int = 1000
    seed: int = 0
    weight_scaled: bool = False

    def __post_init__(self):
        if self.model not in MODELS:
            raise InvalidParameter(f"model must be one of {MODELS}")
        if not self.seeds:
            raise InvalidParameter("seed set must be non-empty")
        self.seeds = tuple(sorted(set(self.seeds)))
        if self.model == "independent_cascade":
            if not 0.0 < self.p <= 1.0:
                raise InvalidParameter("activation probability must be in (0, 1]")
            if self.trials < 1:
                raise InvalidParameter("trials must be >= 1")

    def to_dict(self) -> dict:
        d = {"model": self.model, "seeds": list(self.seeds)}
        if self.model == "independent_cascade":
            d.update({"p": self.p, "trials": self.trials, "seed": self.seed,
                      "weight_scaled": self.weight_scaled})
        return d


@dataclass
class InterventionResult:
    """Baseline vs treated spread volumes for one removal experiment."""

    baseline_volume: float
    treated_volume: float
    removed: tuple[str, ...]
    reduction_pct: float
    model: dict

    def to_dict(self) -> dict:
        return {"baseline_volume": self.baseline_volume,
                "treated_volume": self.treated_volume,
                "removed": list(self.removed),
                "reduction_pct": self.reduction_pct,
                "model": self.model,
                "trials": self.model.get("trials"),
                "seed": self.model.get("seed")}


def _seed_ids(g: DirectedGraph, labels: Iterable[str]) -> np.ndarray:
    ids = np.array(sorted(g.id_of(lab) for lab in labels), dtype=np.int64)
    return ids


def _reachable_count(g: DirectedGraph, seed_ids: np.ndarray) -> int:
    seen = np.zeros(g.n, dtype=bool)
    seen[seed_ids] = True
    frontier = seed_ids
    while frontier.size:
        _, edst = _frontier_edges(g.out_ptr, g.out_dst, frontier)
        fresh = edst[~seen[edst]]
        if fresh.size == 0:
            break
        frontier = np.unique(fresh)
        seen[frontier] = True
    return int(seen.sum())


def _cascade_trial(g: DirectedGraph, seed_ids: np.ndarray, p: float,
                   weight_scaled: bool, rng: np.random.Generator) -> int:
    """One independent-cascade realisation; returns the activated count.

    Each edge gets at most one activation attempt (when its source
    activates), which makes the expectation identical to reachability
    over a live-edge graph with per-edge probability p, or
    1 - (1-p)**w when weight-scaled.
    """
    active = np.zeros(g.n, dtype=bool)
    active[seed_ids] = True
    frontier = seed_ids
    while frontier.size:
        starts = g.out_ptr[frontier]
        counts = g.out_ptr[frontier + 1] - starts
        total = int(counts.sum())
        if total == 0:
            break
        offsets = np.repeat(np.cumsum(counts) - counts, counts)
        idx = np.arange(total, dtype=np.int64) - offsets + np.repeat(starts, counts)
        edst = g.out_dst[idx]
        open_edge = ~active[edst]
        edst = edst[open_edge]
        if edst.size == 0:
            break
        if weight_scaled:
            ew = g.out_w[idx][open_edge]
            prob = 1.0 - (1.0 - p) ** ew
        else:
            prob = p
        hits = edst[rng.random(edst.size) < prob]
        if hits.size == 0:
            break
        frontier = np.unique(hits)
        active[frontier] = True
    return int(active.sum())


def spread_volume(g: DirectedGraph, cfg: CascadeConfig,
                  workers: int = 1) -> float:
    """Expected infected count from the seed set under the chosen model."""
    seed_ids = _seed_ids(g, cfg.seeds)
    if cfg.model == "reachability":
        return float(_reachable_count(g, seed_ids))

    def run_range(span):
        t0, t1 = span
        out = np.empty(t1 - t0)
        for t in range(t0, t1):
            rng = _rng.trial_stream(cfg.seed, t)
            out[t - t0] = _cascade_trial(g, seed_ids, cfg.p, cfg.weight_scaled, rng)
        return out

    spans = [(t, min(t + _TRIAL_CHUNK, cfg.trials))
             for t in range(0, cfg.trials, _TRIAL_CHUNK)]
    if workers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            chunks = list(ex.map(run_range, spans))
    else:
        chunks = [run_range(s) for s in spans]
    counts = np.concatenate(chunks)
    return float(counts.mean())


def intervention_experiment(g: DirectedGraph, removal: Iterable[str],
                            cfg: CascadeConfig,
                            workers: int = 1) -> InterventionResult:
    """Baseline spread on g vs spread after removing the given nodes.

    Removed seeds are treated as neutralised originators: they are
    dropped from the treated run's seed set. Baseline and treated runs
    reuse the same per-trial streams.
    """
    removal = sorted(set(removal))
    for label in removal:
        g.id_of(label)  # raises InvalidNode for unknown labels
    baseline = spread_volume(g, cfg, workers=workers)
    if baseline == 0.0:
        raise DegenerateBaseline("baseline spread volume is zero")

    surviving = tuple(s for s in cfg.seeds if s not in set(removal))
    if not surviving:
        treated = 0.0
    else:
        treated_graph, _ = g.remove_nodes([g.id_of(lab) for lab in removal])
        treated = spread_volume(treated_graph, replace(cfg, seeds=surviving),
                                workers=workers)
    reduction = 100.0 * (baseline - treated) / baseline
    return InterventionResult(baseline_volume=baseline, treated_volume=treated,
                              removed=tuple(removal), reduction_pct=reduction,
                              model=cfg.to_dict())


def _merged_order(tables: list[RankingTable], k: int | None) -> tuple[list[str], int]:
    """Nodes ordered by best rank across the tables, then label.

    Returns the full ordering over every ranked node plus the size of
    the natural union (nodes whose best rank is within k).
    """
    best: dict[str, int] = {}
    for table in tables:
        for rank, label, _ in table.entries:
            if label not in best or rank < best[label]:
                best[label] = rank
    ordered = sorted(best, key=lambda lab: (best[lab], lab))
    depth = max(t.k for t in tables) if k is None else k
    natural = sum(1 for lab in ordered if best[lab] <= depth)
    return ordered, natural


def _seeded_draw(pool, size, seed):
    if seed is None:
        raise InvalidParameter("a seed is required for random draws")
    pool = sorted(pool)
    if size > len(pool):
        raise InvalidParameter(f"cannot draw {size} of {len(pool)} nodes")
    picks = _rng.stream(seed).choice(len(pool), size=size, replace=False)
    return {pool[i] for i in picks}


def metric_removal_set(rankings: Mapping[str, RankingTable], strategy: str,
                       metric: str | None = None, k: int | None = None,
                       budget: int | None = None,
                       universe: Iterable[str] | None = None,
                       seed: int | None = None) -> frozenset[str]:
    """Node labels to remove under a selection strategy.

    ``traditional_union`` unions the traditional metrics' top-k sets and
    ``combined_union`` adds the novel metrics' sets. ``random`` draws
    ``budget`` (or ``k``) labels uniformly without replacement from
    ``universe``, seeded.

    ``budget`` makes strategies comparable at equal total size: a set
    larger than the budget is truncated along the merged best-rank
    order; a smaller one is padded with seeded neutral filler drawn
    uniformly from the rest of ``universe``, so the comparison isolates
    what the metric picks contribute over spending slots blindly.
    """
    if strategy not in STRATEGIES:
        raise InvalidParameter(f"strategy must be one of {STRATEGIES}")

    if strategy == "random":
        size = budget if budget is not None else k
        if size is None or size < 1:
            raise InvalidParameter("random strategy needs a positive budget or k")
        if universe is None:
            raise InvalidParameter("random strategy needs the node universe")
        return frozenset(_seeded_draw(set(universe), size, seed))

    if strategy == "single":
        if metric is None or metric not in rankings:
            raise InvalidParameter(f"unknown metric {metric!r}")
        tables = [rankings[metric]]
    elif strategy == "traditional_union":
        tables = [rankings[m] for m in sorted(rankings) if m in TRADITIONAL_METRICS]
    else:
        tables = [rankings[m] for m in sorted(rankings)
                  if m in TRADITIONAL_METRICS or m in NOVEL_METRICS]
    if not tables:
        raise InvalidParameter(f"no rankings available for strategy {strategy!r}")

    ordered, natural = _merged_order(tables, k)
    chosen = set(ordered[:natural])
    if budget is None or budget == natural:
        return frozenset(chosen)
    if budget < natural:
        return frozenset(ordered[:budget])
    if universe is None:
        raise InvalidParameter("padding to a budget needs the node universe")
    filler = _seeded_draw(set(universe) - chosen, budget - natural, seed)
    return frozenset(chosen | filler)
