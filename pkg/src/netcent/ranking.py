"""Top-k extraction, cross-metric set algebra, and proxy rank correlation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import (DegenerateBaseline, InsufficientData, InvalidParameter,
                     UndefinedCorrelation)
from .novel import NodeAttributes
from .scores import ScoreVector


@dataclass
class RankingTable:
    """Ordered top-k list: entries are (rank, node label, score)."""

    metric: str
    k: int
    entries: list[tuple[int, str, float]]

    def labels(self, depth: int | None = None) -> list[str]:
        rows = self.entries if depth is None else self.entries[:depth]
        return [label for _, label, _ in rows]

    def label_set(self, depth: int | None = None) -> frozenset[str]:
        return frozenset(self.labels(depth))

    def to_dict(self) -> dict:
        return {"metric": self.metric, "k": self.k,
                "entries": [{"rank": r, "node": lab, "score": s}
                            for r, lab, s in self.entries]}


def top_k(scores: ScoreVector, k: int) -> RankingTable:
    """Deterministic top-k: descending score, ties broken by ascending label."""
    if k < 1:
        raise InvalidParameter(f"k must be >= 1, got {k}")
    order = scores.ordering()[:min(k, scores.n)]
    entries = [(rank, scores.labels[i], float(scores.scores[i]))
               for rank, i in enumerate(order, start=1)]
    return RankingTable(metric=scores.metric, k=k, entries=entries)


@dataclass
class OverlapRegion:
    """One exclusive cell of the Venn partition over metric top-k sets."""

    metrics: tuple[str, ...]
    nodes: tuple[str, ...]

    @property
    def count(self) -> int:
        return len(self.nodes)


@dataclass
class OverlapReport:
    metrics: tuple[str, ...]
    regions: list[OverlapRegion]
    union_traditional: tuple[str, ...]
    union_all: tuple[str, ...]
    coverage_gain_pct: float

    def region_counts(self) -> dict[frozenset, int]:
        return {frozenset(r.metrics): r.count for r in self.regions}

    def to_dict(self) -> dict:
        return {
            "regions": [{"metrics": list(r.metrics), "nodes": list(r.nodes),
                         "count": r.count} for r in self.regions],
            "union_traditional": list(self.union_traditional),
            "union_all": list(self.union_all),
            "coverage_gain_pct": self.coverage_gain_pct,
        }


def overlap_report(rankings: Mapping[str, RankingTable],
                   traditional: Iterable[str]) -> OverlapReport:
    """Exact Venn partition of the top-k node sets plus coverage gain.

    Every node in the union is assigned to exactly one region keyed by
    the precise subset of metrics whose list contains it, so regions are
    pairwise disjoint and reunite to the full union. Coverage gain is
    the percentage growth of the union over the traditional-only union.
    """
    if len(rankings) < 2:
        raise InvalidParameter("overlap needs at least two rankings")
    traditional = frozenset(traditional)
    missing = traditional - set(rankings)
    if missing:
        raise InvalidParameter(f"traditional metrics not present: {sorted(missing)}")

    metric_ids = tuple(sorted(rankings))
    sets = {m: rankings[m].label_set() for m in metric_ids}
    union_all = frozenset().union(*sets.values())
    union_trad = frozenset().union(*(sets[m] for m in traditional)) \
        if traditional else frozenset()
    if not union_trad:
        raise DegenerateBaseline("traditional union is empty")

    cells: dict[tuple[str, ...], list[str]] = {}
    for node in union_all:
        signature = tuple(m for m in metric_ids if node in sets[m])
        cells.setdefault(signature, []).append(node)

    regions = [OverlapRegion(metrics=sig, nodes=tuple(sorted(nodes)))
               for sig, nodes in sorted(cells.items())]
    gain = 100.0 * (len(union_all) - len(union_trad)) / len(union_trad)
    return OverlapReport(metrics=metric_ids, regions=regions,
                         union_traditional=tuple(sorted(union_trad)),
                         union_all=tuple(sorted(union_all)),
                         coverage_gain_pct=gain)


@dataclass
class CorrelationResult:
    metric: str
    proxy: str
    rho: float
    n_effective: int

    def to_dict(self) -> dict:
        return {"metric": self.metric, "proxy": self.proxy, "rho": self.rho,
                "n_effective": self.n_effective}


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks with tied values sharing their average rank."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values))
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def rank_correlation(scores: ScoreVector, attrs: NodeAttributes,
                     proxy: str) -> CorrelationResult:
    """Spearman rho between a metric and a proxy attribute.

    Only nodes carrying the proxy contribute. Ties get average ranks.
    """
    column = attrs.column(proxy)
    xs, ys = [], []
    for label, value in zip(scores.labels, scores.scores):
        if label in column:
            xs.append(float(value))
            ys.append(column[label])
    if len(xs) < 3:
        raise InsufficientData(
            f"need >= 3 nodes with attribute {proxy!r}, found {len(xs)}")
    x = np.asarray(xs)
    y = np.asarray(ys)
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise UndefinedCorrelation(f"zero variance in scores or {proxy!r}")
    rx = _average_ranks(x)
    ry = _average_ranks(y)
    rx -= rx.mean()
    ry -= ry.mean()
    rho = float((rx * ry).sum() / np.sqrt((rx * rx).sum() * (ry * ry).sum()))
    return CorrelationResult(metric=scores.metric, proxy=proxy, rho=rho,
                             n_effective=len(xs))
