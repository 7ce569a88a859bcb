"""Seeded synthetic digraph generators for experiments and benchmarks."""

from __future__ import annotations

import numpy as np

from . import rng as _rng
from .errors import InvalidParameter
from .graph import INFO_FLOW, DirectedGraph


def _labels(n: int) -> list[str]:
    # zero-padded so sorted-label order equals numeric order
    width = len(str(n - 1))
    return [f"{i:0{width}d}" for i in range(n)]


def preferential_attachment(n: int, m: int, seed: int,
                            direction: str = INFO_FLOW) -> DirectedGraph:
    """Scale-free digraph: each arriving node attaches m edges.

    Attachment targets mix uniform choice with degree-proportional
    choice (the repeated-endpoints pool), and each edge's orientation is
    a fair coin, so hubs grow both in- and out-degree. Mean out-degree
    approaches m. Deterministic for a given seed.
    """
    if n < 2 or m < 1:
        raise InvalidParameter("need n >= 2 and m >= 1")
    rng = _rng.stream(seed)
    labels = _labels(n)
    src: list[int] = []
    dst: list[int] = []
    pool: list[int] = [0]
    for v in range(1, n):
        want = min(m, v)
        targets: set[int] = set()
        attempts = 0
        while len(targets) < want and attempts < 20 * want:
            attempts += 1
            if rng.random() < 0.5:
                targets.add(int(rng.integers(0, v)))
            else:
                targets.add(pool[int(rng.integers(0, len(pool)))])
        for t in sorted(targets):
            if rng.random() < 0.5:
                src.append(v)
                dst.append(t)
            else:
                src.append(t)
                dst.append(v)
            pool.append(t)
        pool.append(v)
    weights = np.ones(len(src))
    return DirectedGraph(labels, np.array(src, dtype=np.int64),
                         np.array(dst, dtype=np.int64), weights,
                         direction=direction)


def random_digraph(n: int, m: int, seed: int,
                   direction: str = INFO_FLOW) -> DirectedGraph:
    """Uniform random digraph with ~m edges (self-loops and duplicates dropped)."""
    if n < 1 or m < 0:
        raise InvalidParameter("need n >= 1 and m >= 0")
    rng = _rng.stream(seed)
    src = rng.integers(0, n, size=m)
    dst = rng.integers(0, n, size=m)
    keep = src != dst
    pairs = np.unique(np.stack([src[keep], dst[keep]], axis=1), axis=0)
    return DirectedGraph(_labels(n), pairs[:, 0], pairs[:, 1],
                         np.ones(len(pairs)), direction=direction)
