"""Exhaustive small-graph enumeration, one representative per isomorphism
class, plus the brute-force twin used to validate it."""
from __future__ import annotations

from itertools import combinations
from typing import Iterator

from .config import DEFAULT_ORDER_CAP
from .errors import CapExceeded
from .graphs import Graph


def enumerate_graphs(n: int, order_cap: int | None = None) -> Iterator[Graph]:
    """Stream every isomorphism class on n vertices exactly once.

    Levels ascend by edge count; each level is produced by single-edge
    augmentation of the previous one, deduplicated by canonical form (every
    graph with m+1 edges is an edge-deleted graph plus one edge, so the sweep
    is complete).  Within a level, output is sorted by canonical label.
    """
    cap = DEFAULT_ORDER_CAP if order_cap is None else order_cap
    if n < 0:
        raise ValueError("order must be non-negative")
    if n > cap:
        raise CapExceeded(f"order {n} exceeds order cap {cap}")
    g0 = Graph.edgeless(n)
    level = {g0.canonical_label: g0}
    while level:
        for key in sorted(level):
            yield level[key]
        nxt: dict[str, Graph] = {}
        for g in level.values():
            for u, v in g.non_edges():
                h = g.add_edge(u, v)
                k = h.canonical_label
                if k not in nxt:
                    nxt[k] = h
        level = nxt


def graphs_upto(bound: int, start: int = 1,
                order_cap: int | None = None) -> Iterator[Graph]:
    """All isomorphism classes with start <= order <= bound."""
    for n in range(start, bound + 1):
        yield from enumerate_graphs(n, order_cap=order_cap)


def all_graphs_brute(n: int) -> list[Graph]:
    """Independent oracle: reduce all 2^C(n,2) edge sets by canonical form.

    Exponential; callers keep n small.
    """
    pairs = list(combinations(range(n), 2))
    seen: dict[str, Graph] = {}
    for mask in range(1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if (mask >> i) & 1]
        g = Graph.from_edges(n, edges)
        seen.setdefault(g.canonical_label, g)
    return sorted(seen.values(), key=lambda g: (g.edge_count(), g.canonical_label))
