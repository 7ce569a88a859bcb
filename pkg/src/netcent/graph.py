"""Directed interaction graph: construction and structural operations.

The graph is immutable after construction and stored in compressed
adjacency form in both orientations, so transposition is O(1) and in-
and out-neighbour queries are array slices. Node ids are dense 0..n-1
assigned in sorted-label order, which makes construction deterministic
regardless of record order.

Two edge-direction conventions are supported for interaction data:

* ``info_flow``   -- edge author -> resharer (information travels)
* ``endorsement`` -- edge resharer -> author (credit/influence accrues)

The canonical stored direction is whatever the builder was told; metrics
that need the opposite orientation work on :meth:`DirectedGraph.transpose`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyInput, InvalidNode, InvalidParameter, ParseError

log = logging.getLogger(__name__)

INFO_FLOW = "info_flow"
ENDORSEMENT = "endorsement"
DIRECTIONS = (INFO_FLOW, ENDORSEMENT)

INTERACTION_KINDS = ("retweet", "mention", "reply", "share", "other")

DEGREE_MODES = ("in", "out", "total")


@dataclass(frozen=True)
class InteractionRecord:
    """One actor->target interaction (retweet, mention, ...) from raw data.

    ``timestamp`` is retained for future temporal slicing but unused by
    the v1 metrics. ``weight`` defaults to 1 so plain interaction counts
    aggregate into edge weights.
    """

    actor: str
    target: str
    kind: str = "other"
    timestamp: float | None = None
    weight: float = 1.0


def _as_kind(raw: str) -> str:
    k = raw.strip().lower()
    return k if k in INTERACTION_KINDS else "other"


def _aggregate_edges(src, dst, w):
    """Sort edge triplets by (src, dst) and sum weights of duplicates."""
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    w = np.asarray(w, dtype=np.float64)
    if src.size == 0:
        return src, dst, w
    order = np.lexsort((dst, src))
    src, dst, w = src[order], dst[order], w[order]
    new_edge = np.empty(src.size, dtype=bool)
    new_edge[0] = True
    np.logical_or(src[1:] != src[:-1], dst[1:] != dst[:-1], out=new_edge[1:])
    starts = np.flatnonzero(new_edge)
    agg_w = np.add.reduceat(w, starts)
    return src[starts], dst[starts], agg_w


def _csr_from_sorted(src, dst, w, n):
    """CSR pointers for edges already sorted by src; rows keep dst order."""
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=ptr[1:])
    return ptr, dst.copy(), w.copy()


class DirectedGraph:
    """Immutable weighted digraph with dense ids and dual CSR adjacency."""

    __slots__ = (
        "n", "labels", "direction", "self_loops_dropped",
        "out_ptr", "out_dst", "out_w",
        "in_ptr", "in_src", "in_w",
        "_label_to_id",
    )

    def __init__(self, labels: Sequence[str], src, dst, weights,
                 direction: str = INFO_FLOW, self_loops_dropped: int = 0,
                 _swap=None):
        if direction not in DIRECTIONS:
            raise InvalidParameter(f"unknown direction {direction!r}")
        self.n = len(labels)
        self.labels = tuple(labels)
        self.direction = direction
        self.self_loops_dropped = int(self_loops_dropped)
        self._label_to_id = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._label_to_id) != self.n:
            raise InvalidParameter("node labels must be unique")

        if _swap is not None:
            # Internal fast path for transpose(): reuse the existing arrays.
            (self.out_ptr, self.out_dst, self.out_w,
             self.in_ptr, self.in_src, self.in_w) = _swap
            return

        src, dst, w = _aggregate_edges(src, dst, weights)
        if src.size and (src.min() < 0 or max(src.max(), dst.max()) >= self.n):
            raise InvalidNode("edge endpoint outside node range")
        if np.any(w <= 0):
            raise InvalidParameter("edge weights must be positive")
        if np.any(src == dst):
            raise InvalidParameter("self-loops must be dropped before construction")

        self.out_ptr, self.out_dst, self.out_w = _csr_from_sorted(src, dst, w, self.n)
        order = np.lexsort((src, dst))
        self.in_ptr, self.in_src, self.in_w = _csr_from_sorted(
            dst[order], src[order], w[order], self.n)
        for arr in (self.out_ptr, self.out_dst, self.out_w,
                    self.in_ptr, self.in_src, self.in_w):
            arr.setflags(write=False)

    # -- basic queries -------------------------------------------------

    @property
    def num_edges(self) -> int:
        return int(self.out_dst.size)

    def id_of(self, label: str) -> int:
        try:
            return self._label_to_id[label]
        except KeyError:
            raise InvalidNode(f"unknown node label {label!r}") from None

    def label_of(self, v: int) -> str:
        self._check_node(v)
        return self.labels[v]

    def _check_node(self, v: int):
        if not 0 <= int(v) < self.n:
            raise InvalidNode(f"node id {v} out of range 0..{self.n - 1}")

    def out_neighbors(self, v: int) -> np.ndarray:
        self._check_node(v)
        return self.out_dst[self.out_ptr[v]:self.out_ptr[v + 1]]

    def in_neighbors(self, v: int) -> np.ndarray:
        self._check_node(v)
        return self.in_src[self.in_ptr[v]:self.in_ptr[v + 1]]

    def out_degrees(self) -> np.ndarray:
        return np.diff(self.out_ptr)

    def in_degrees(self) -> np.ndarray:
        return np.diff(self.in_ptr)

    def degree(self, v: int, mode: str = "total") -> int:
        """Distinct-neighbour degree; weights are ignored."""
        self._check_node(v)
        if mode not in DEGREE_MODES:
            raise InvalidParameter(f"degree mode must be one of {DEGREE_MODES}")
        out_d = int(self.out_ptr[v + 1] - self.out_ptr[v])
        in_d = int(self.in_ptr[v + 1] - self.in_ptr[v])
        if mode == "out":
            return out_d
        if mode == "in":
            return in_d
        return in_d + out_d

    def edge_arrays(self):
        """Edges as (src, dst, weight) arrays sorted by (src, dst)."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.out_ptr))
        return src, self.out_dst, self.out_w

    # -- structural operations ------------------------------------------

    def transpose(self) -> "DirectedGraph":
        """Reversed graph sharing this graph's arrays; O(1)."""
        flipped = ENDORSEMENT if self.direction == INFO_FLOW else INFO_FLOW
        return DirectedGraph(
            self.labels, None, None, None,
            direction=flipped, self_loops_dropped=self.self_loops_dropped,
            _swap=(self.in_ptr, self.in_src, self.in_w,
                   self.out_ptr, self.out_dst, self.out_w),
        )

    def remove_nodes(self, victims: Iterable[int]):
        """Drop the victim ids and every incident edge.

        Returns (graph, old_to_new) where old_to_new maps surviving old
        ids to their re-densified ids. Labels are preserved.
        """
        victim_set = set()
        for v in victims:
            self._check_node(v)
            victim_set.add(int(v))
        keep = np.ones(self.n, dtype=bool)
        keep[list(victim_set)] = False
        new_ids = np.cumsum(keep) - 1
        old_to_new = {old: int(new_ids[old]) for old in range(self.n) if keep[old]}

        src, dst, w = self.edge_arrays()
        mask = keep[src] & keep[dst]
        g = DirectedGraph(
            [lab for lab, k in zip(self.labels, keep) if k],
            new_ids[src[mask]], new_ids[dst[mask]], w[mask],
            direction=self.direction,
            self_loops_dropped=self.self_loops_dropped,
        )
        return g, old_to_new

    def __eq__(self, other):
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return (self.labels == other.labels
                and self.direction == other.direction
                and np.array_equal(self.out_ptr, other.out_ptr)
                and np.array_equal(self.out_dst, other.out_dst)
                and np.array_equal(self.out_w, other.out_w))

    def __hash__(self):
        return hash((self.labels, self.direction, self.num_edges))

    def __repr__(self):
        return (f"DirectedGraph(n={self.n}, m={self.num_edges}, "
                f"direction={self.direction!r})")


# -- builders ------------------------------------------------------------

def from_edges(edges, direction: str = INFO_FLOW,
               extra_labels: Iterable[str] = ()) -> DirectedGraph:
    """Build from (src_label, dst_label[, weight]) triples.

    Parallel edges aggregate by summed weight; self-loops are dropped
    with a counted warning. Labels mentioned only in ``extra_labels``
    become isolated nodes.
    """
    labels = set(extra_labels)
    cleaned = []
    dropped = 0
    for e in edges:
        if len(e) == 2:
            s, d, w = e[0], e[1], 1.0
        else:
            s, d, w = e[0], e[1], float(e[2])
        if w <= 0:
            raise InvalidParameter(f"edge ({s!r}, {d!r}) has non-positive weight {w}")
        labels.add(s)
        labels.add(d)
        if s == d:
            dropped += 1
            continue
        cleaned.append((s, d, w))
    if not labels:
        raise EmptyInput("no edges and no nodes")
    if dropped:
        log.warning("dropped %d self-loop edge(s)", dropped)

    ordered = sorted(labels)
    idx = {lab: i for i, lab in enumerate(ordered)}
    src = np.fromiter((idx[s] for s, _, _ in cleaned), dtype=np.int64, count=len(cleaned))
    dst = np.fromiter((idx[d] for _, d, _ in cleaned), dtype=np.int64, count=len(cleaned))
    w = np.fromiter((x for _, _, x in cleaned), dtype=np.float64, count=len(cleaned))
    return DirectedGraph(ordered, src, dst, w, direction=direction,
                         self_loops_dropped=dropped)


def build_graph(records: Sequence[InteractionRecord],
                convention: str = INFO_FLOW) -> DirectedGraph:
    """Build the canonical graph from interaction records.

    ``info_flow`` orients each record target -> actor (author to
    resharer); ``endorsement`` orients actor -> target. Duplicate pairs
    aggregate into the edge weight; actor == target records are counted
    and dropped but still contribute the node.
    """
    if convention not in DIRECTIONS:
        raise InvalidParameter(f"unknown direction convention {convention!r}")
    if not records:
        raise EmptyInput("no interaction records")
    edges = []
    labels = set()
    for i, rec in enumerate(records, start=1):
        if not rec.actor or not rec.target:
            raise ParseError("record missing actor or target", line=i)
        if rec.weight is None or rec.weight <= 0:
            raise ParseError(f"record weight must be positive, got {rec.weight}", line=i)
        labels.add(rec.actor)
        labels.add(rec.target)
        if convention == ENDORSEMENT:
            edges.append((rec.actor, rec.target, rec.weight))
        else:
            edges.append((rec.target, rec.actor, rec.weight))
    return from_edges(edges, direction=convention, extra_labels=labels)


# -- operation-style free functions (thin wrappers over the methods) ------

def transpose(g: DirectedGraph) -> DirectedGraph:
    return g.transpose()


def remove_nodes(g: DirectedGraph, victims: Iterable[int]):
    return g.remove_nodes(victims)


def degree(g: DirectedGraph, v: int, mode: str = "total") -> int:
    return g.degree(v, mode)
