"""The exponential core: generalized-colouring partitions and star joins.

find_partition / enumerate_partitions assign vertices to parts by
backtracking (highest degree first, tie broken by index, parts tried in
order), pruning a partial part as soon as it leaves its factor property.
The prune is sound only for induced-hereditary factors, so it is applied
only when the factor's induced-heredity is certain by construction; other
factors are checked at complete assignments.

A star join of blocks is the set of graphs between their disjoint union and
their join.  Expansion streams one element per cross-edge bitmask in
ascending mask order; consumers stop early.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .config import DEFAULT_CROSS_CAP
from .errors import CapExceeded, PreconditionError
from .graphs import Graph, bits_of, join as graph_join, disjoint_union
from .properties import Property, member


@dataclass(frozen=True)
class Labeling:
    """Ordered vertex partition of a host graph; empty parts permitted
    (operations needing nonempty parts filter or validate themselves)."""

    host: Graph
    parts: tuple[frozenset[int], ...]

    def __post_init__(self):
        seen: set[int] = set()
        total = 0
        for part in self.parts:
            for v in part:
                if not (0 <= v < self.host.n):
                    raise ValueError(f"vertex {v} outside host")
            total += len(part)
            seen.update(part)
        if total != len(seen) or len(seen) != self.host.n:
            raise ValueError("parts must be disjoint and cover the host")

    def nonempty_parts(self) -> tuple[frozenset[int], ...]:
        return tuple(p for p in self.parts if p)

    def unordered(self) -> frozenset[frozenset[int]]:
        return frozenset(p for p in self.parts if p)

    def as_lists(self) -> list[list[int]]:
        return [sorted(p) for p in self.parts]

    def restricted(self, vertices: frozenset[int]) -> tuple[frozenset[int], ...]:
        """Nonempty intersections with a vertex subset, in part order."""
        out = []
        for p in self.parts:
            q = p & vertices
            if q:
                out.append(q)
        return tuple(out)


def _part_ok(prop: Property, g: Graph, old_mask: int, v: int) -> bool:
    """Does part old_mask + v still lie in prop?  Incremental fast paths for
    the cheap builtin kinds; anything else checks the induced subgraph."""
    kind = prop.kind
    nbrs = g.rows[v] & old_mask
    if kind == "edgeless":
        return nbrs == 0
    if kind == "complete":
        return nbrs == old_mask
    if kind == "maxdegree":
        if nbrs.bit_count() > prop.k:
            return False
        new_mask = old_mask | (1 << v)
        m = nbrs
        while m:
            u_bit = m & (-m)
            m ^= u_bit
            if (g.rows[u_bit.bit_length() - 1] & new_mask).bit_count() > prop.k:
                return False
        return True
    return member(prop, g.subgraph(bits_of(old_mask | (1 << v))))


def _search(g: Graph, props: Sequence[Property]) -> Iterator[Labeling]:
    n_parts = len(props)
    if n_parts == 0:
        if g.n == 0:
            yield Labeling(g, ())
        return
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    prune = [p.certain.induced_hereditary is True for p in props]
    full_check = [not pr for pr in prune]
    masks = [0] * n_parts

    def rec(depth: int) -> Iterator[Labeling]:
        if depth == g.n:
            for i in range(n_parts):
                if full_check[i] and not member(props[i], g.subgraph(bits_of(masks[i]))):
                    return
            yield Labeling(g, tuple(frozenset(bits_of(m)) for m in masks))
            return
        v = order[depth]
        for i in range(n_parts):
            if prune[i] and not _part_ok(props[i], g, masks[i], v):
                continue
            masks[i] |= 1 << v
            yield from rec(depth + 1)
            masks[i] &= ~(1 << v)

    yield from rec(0)


def find_partition(g: Graph, props: Sequence[Property]) -> Labeling | None:
    """One ordered partition with the i-th induced part in props[i], or None.

    This is the decision procedure behind product membership.
    """
    for lab in _search(g, props):
        return lab
    return None


def enumerate_partitions(g: Graph, props: Sequence[Property]) -> Iterator[Labeling]:
    """All ordered satisfying labelings, each exactly once, in deterministic
    order."""
    yield from _search(g, props)


def partition_uniqueness(g: Graph, props: Sequence[Property]
                         ) -> tuple[str, list[Labeling]]:
    """('none'|'unique'|'multiple', sample labelings).

    Uniqueness compares unordered partitions: every satisfying labeling must
    induce the same set of nonempty parts.
    """
    seen: dict[frozenset[frozenset[int]], Labeling] = {}
    for lab in enumerate_partitions(g, props):
        key = lab.unordered()
        if key not in seen:
            seen[key] = lab
            if len(seen) > 1:
                return "multiple", list(seen.values())
    if not seen:
        return "none", []
    return "unique", list(seen.values())


def is_uniquely_partitionable(g: Graph, props: Sequence[Property]) -> bool:
    """True iff every satisfying labeling induces one and the same unordered
    partition (false both for none and for several)."""
    status, _ = partition_uniqueness(g, props)
    return status == "unique"


# -- star joins -----------------------------------------------------------------


@dataclass(frozen=True)
class StarJoinElement:
    """A graph between the disjoint union and the join of its blocks, with
    the block structure retained.  blocks[i] lists the element's vertices for
    block i, positionally aligned with the source block's vertex order."""

    graph: Graph
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for blk in self.blocks:
            for v in blk:
                if not (0 <= v < self.graph.n) or v in seen:
                    raise ValueError("blocks must be disjoint vertex lists")
                seen.add(v)

    def block_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(b) for b in self.blocks)

    def verify_blocks(self, sources: Sequence[Graph]) -> bool:
        """Within-block edges must equal the source graphs' edges exactly."""
        if len(sources) != len(self.blocks):
            return False
        for src, blk in zip(sources, self.blocks):
            if src.n != len(blk):
                return False
            for i in range(src.n):
                for j in range(i + 1, src.n):
                    if src.has_edge(i, j) != self.graph.has_edge(blk[i], blk[j]):
                        return False
        return True


def _cross_pairs(blocks: Sequence[Graph]) -> tuple[list[tuple[int, int]], list[tuple[int, ...]]]:
    offsets = []
    off = 0
    for b in blocks:
        offsets.append(tuple(range(off, off + b.n)))
        off += b.n
    pairs = []
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            for a in offsets[i]:
                for c in offsets[j]:
                    pairs.append((a, c))
    return pairs, offsets


def star_join_expand(blocks: Sequence[Graph], cross_cap: int | None = None
                     ) -> Iterator[StarJoinElement]:
    """Stream every graph between the disjoint union and the join of the
    blocks: one element per cross-edge bitmask, masks ascending (the disjoint
    union first, the join last)."""
    cap = DEFAULT_CROSS_CAP if cross_cap is None else cross_cap
    base = disjoint_union(blocks)
    pairs, offsets = _cross_pairs(blocks)
    if len(pairs) > cap:
        raise CapExceeded(
            f"star join has {len(pairs)} cross pairs, cap is {cap}"
        )
    block_tuples = tuple(offsets)
    for mask in range(1 << len(pairs)):
        rows = list(base.rows)
        m = mask
        idx = 0
        while m:
            if m & 1:
                a, c = pairs[idx]
                rows[a] |= 1 << c
                rows[c] |= 1 << a
            m >>= 1
            idx += 1
        yield StarJoinElement(Graph(base.n, rows), block_tuples)


def star_join_classes(blocks: Sequence[Graph], cross_cap: int | None = None
                      ) -> list[StarJoinElement]:
    """Deduplicating wrapper: one element per isomorphism class, first
    expansion representative kept."""
    seen: dict[str, StarJoinElement] = {}
    for el in star_join_expand(blocks, cross_cap):
        seen.setdefault(el.graph.canonical_label, el)
    return list(seen.values())


def star_join_subset_of(
    blocks: Sequence[Graph],
    prop: Property,
    cross_cap: int | None = None,
    force_expand: bool = False,
) -> tuple[bool, StarJoinElement | None]:
    """Is every element of the star join a member?  On failure, also return
    a non-member witness.

    For properties whose heredity is certain the verdict collapses to one
    membership test of the join (every element is its subgraph, and the join
    itself is an element); the witness is still searched in expansion order
    so that it is the first failing element, falling back to the join when
    the expansion is over the cross cap.
    """
    cap = DEFAULT_CROSS_CAP if cross_cap is None else cross_cap
    pairs, offsets = _cross_pairs(blocks)
    if prop.certain.hereditary is True and not force_expand:
        top = graph_join(blocks)
        if member(prop, top):
            return True, None
        if len(pairs) <= cap:
            for el in star_join_expand(blocks, cap):
                if not member(prop, el.graph):
                    return False, el
        return False, StarJoinElement(top, tuple(offsets))
    for el in star_join_expand(blocks, cap):
        if not member(prop, el.graph):
            return False, el
    return True, None


def copies_element(base: Graph, s: int) -> StarJoinElement:
    """The disjoint union of s copies of a graph, as a star-join element."""
    g = disjoint_union([base] * s)
    blocks = tuple(tuple(range(c * base.n, (c + 1) * base.n)) for c in range(s))
    return StarJoinElement(g, blocks)


def extend_labeling(element: StarJoinElement, d0: Labeling) -> Labeling:
    """Extension of a base labeling to an element whose blocks are copies of
    the base host: part j collects, in every copy, the vertices positionally
    matching the base part j."""
    n = d0.host.n
    for blk in element.blocks:
        if len(blk) != n:
            raise PreconditionError("blocks are not copies of the base host")
    parts = []
    for base_part in d0.parts:
        part = set()
        for blk in element.blocks:
            for v in base_part:
                part.add(blk[v])
        parts.append(frozenset(part))
    return Labeling(element.graph, tuple(parts))
