"""Canonical labelling by partition refinement and individualization.

The canonical form of a graph is the graph6 string of its relabelling under
the best leaf of an individualization-refinement search tree.  Equal forms
iff isomorphic; the form is deterministic and independent of the input
labelling.

The search refines an ordered partition to equitability (every vertex in a
cell has the same number of neighbours in every cell), then branches on the
vertices of the first non-singleton cell.  Automorphisms discovered when two
leaves produce identical relabelled adjacency are used to skip branches that
are equivalent under the stabilizer of the current prefix; this keeps highly
symmetric graphs (edgeless, complete multipartite) from exploding into
factorial many leaves.  Correctness does not depend on the pruning being
tight, only on pruned branches being genuine automorphic images.
"""
from __future__ import annotations

from .graphs import Graph, mask_of, to_graph6


def _refine(rows: tuple[int, ...], cells: list[list[int]]) -> list[list[int]]:
    """Refine an ordered partition to equitability.

    Cells are repeatedly split by the vector of neighbour counts into every
    current cell; new sub-cells are ordered by that vector, which is a
    label-independent ordering.
    """
    while True:
        masks = [mask_of(c) for c in cells]
        out: list[list[int]] = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            groups: dict[tuple[int, ...], list[int]] = {}
            for v in cell:
                sig = tuple((rows[v] & m).bit_count() for m in masks)
                groups.setdefault(sig, []).append(v)
            if len(groups) == 1:
                out.append(cell)
            else:
                changed = True
                for sig in sorted(groups):
                    out.append(sorted(groups[sig]))
        if not changed:
            return out
        cells = out


def _orbit_reaches(auts: list[tuple[int, ...]], prefix: list[int], v: int,
                   tried: list[int]) -> bool:
    """Does the group generated by the prefix-fixing automorphisms map v to an
    already-tried vertex?  Generators alone suffice: each permutation's
    inverse is one of its powers."""
    fixing = [a for a in auts if all(a[p] == p for p in prefix)]
    if not fixing:
        return False
    tset = set(tried)
    seen = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for a in fixing:
            y = a[x]
            if y not in seen:
                if y in tset:
                    return True
                seen.add(y)
                stack.append(y)
    return False


def _search_best_order(g: Graph) -> tuple[int, ...]:
    """Vertex order whose relabelled adjacency rows are lexicographically
    maximal over the pruned search tree (hence over all orders)."""
    n = g.n
    rows = g.rows
    best_key: tuple[int, ...] | None = None
    best_order: tuple[int, ...] | None = None
    auts: list[tuple[int, ...]] = []

    by_degree: dict[int, list[int]] = {}
    for v in range(n):
        by_degree.setdefault(rows[v].bit_count(), []).append(v)
    initial = [sorted(by_degree[d]) for d in sorted(by_degree)]

    def record_leaf(order: list[int]) -> None:
        nonlocal best_key, best_order
        pos = [0] * n
        for i, v in enumerate(order):
            pos[v] = i
        key_rows = []
        for v in order:
            r = rows[v]
            nr = 0
            u = 0
            while r:
                if r & 1:
                    nr |= 1 << pos[u]
                r >>= 1
                u += 1
            key_rows.append(nr)
        key = tuple(key_rows)
        if best_key is None or key > best_key:
            best_key = key
            best_order = tuple(order)
        elif key == best_key and best_order is not None:
            sigma = [0] * n
            for i in range(n):
                sigma[best_order[i]] = order[i]
            auts.append(tuple(sigma))

    def descend(cells: list[list[int]], prefix: list[int]) -> None:
        cells = _refine(rows, cells)
        target_idx = -1
        for i, c in enumerate(cells):
            if len(c) > 1:
                target_idx = i
                break
        if target_idx < 0:
            record_leaf([c[0] for c in cells])
            return
        target = cells[target_idx]
        tried: list[int] = []
        for v in target:
            if tried and _orbit_reaches(auts, prefix, v, tried):
                continue
            tried.append(v)
            rest = [u for u in target if u != v]
            descend(
                cells[:target_idx] + [[v], rest] + cells[target_idx + 1 :],
                prefix + [v],
            )

    descend(initial, [])
    assert best_order is not None
    return best_order


def canonical_perm(g: Graph) -> tuple[int, ...]:
    """Relabelling perm (old -> new) onto the canonical form."""
    if g.n == 0:
        return ()
    order = _search_best_order(g)
    perm = [0] * g.n
    for new, old in enumerate(order):
        perm[old] = new
    return tuple(perm)


def canonical_graph(g: Graph) -> Graph:
    if g.n == 0:
        return g
    return g.relabel(canonical_perm(g))


def canonical_form(g: Graph) -> str:
    """Deterministic isomorphism-invariant label: graph6 of the canonical
    relabelling."""
    return to_graph6(canonical_graph(g))
