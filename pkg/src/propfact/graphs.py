"""Finite simple unlabelled graphs on bitset adjacency rows.

A Graph keeps a concrete labelling 0..n-1 (vertex partitions elsewhere refer
to these labels) but compares and hashes by canonical form, so equality is
isomorphism-invariant.  All operations are pure; instances are immutable and
safe to share.
"""
from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from . import _kernels
from .config import MAX_VERTICES
from .errors import InputFormatError


class Graph:
    """Simple graph: order n and a tuple of adjacency bitrows."""

    __slots__ = ("n", "rows", "_canon", "_hash")

    def __init__(self, n: int, rows: Sequence[int]):
        if n < 0 or n > MAX_VERTICES:
            raise ValueError(f"order must be in 0..{MAX_VERTICES}, got {n}")
        if len(rows) != n:
            raise ValueError("row count must equal order")
        full = (1 << n) - 1
        for v, row in enumerate(rows):
            if row & (1 << v):
                raise ValueError(f"self-loop at vertex {v}")
            if row & ~full:
                raise ValueError(f"row {v} mentions vertices >= {n}")
        for v in range(n):
            for u in range(v):
                if ((rows[v] >> u) & 1) != ((rows[u] >> v) & 1):
                    raise ValueError(f"adjacency not symmetric at {u},{v}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", tuple(rows))
        object.__setattr__(self, "_canon", None)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError("self-loop")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return Graph(n, rows)

    @staticmethod
    def edgeless(n: int) -> "Graph":
        return Graph(n, [0] * n)

    @staticmethod
    def complete(n: int) -> "Graph":
        full = (1 << n) - 1
        return Graph(n, [full ^ (1 << v) for v in range(n)])

    @staticmethod
    def path(n: int) -> "Graph":
        return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @staticmethod
    def cycle(n: int) -> "Graph":
        if n < 3:
            raise ValueError("cycle needs at least 3 vertices")
        return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    # -- basic accessors ------------------------------------------------------

    def edges(self) -> Iterator[tuple[int, int]]:
        for v in range(self.n):
            row = self.rows[v] >> (v + 1)
            u = v + 1
            while row:
                if row & 1:
                    yield (v, u)
                row >>= 1
                u += 1

    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.rows[u] >> v) & 1)

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def vertices(self) -> range:
        return range(self.n)

    # -- derived graphs -------------------------------------------------------

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """New graph where old vertex v becomes perm[v]."""
        rows = [0] * self.n
        for v in range(self.n):
            row = self.rows[v]
            nv = perm[v]
            u = 0
            r = row
            while r:
                if r & 1:
                    rows[nv] |= 1 << perm[u]
                r >>= 1
                u += 1
        return Graph(self.n, rows)

    def subgraph(self, vertices: Iterable[int]) -> "Graph":
        """Induced subgraph; kept vertices are relabelled in ascending order."""
        vs = sorted(set(vertices))
        index = {v: i for i, v in enumerate(vs)}
        rows = [0] * len(vs)
        for i, v in enumerate(vs):
            for j, u in enumerate(vs):
                if i != j and self.has_edge(v, u):
                    rows[i] |= 1 << j
        return Graph(len(vs), rows)

    def add_edge(self, u: int, v: int) -> "Graph":
        if u == v or self.has_edge(u, v):
            raise ValueError("edge already present or loop")
        rows = list(self.rows)
        rows[u] |= 1 << v
        rows[v] |= 1 << u
        return Graph(self.n, rows)

    def add_vertex(self, neighbors: int) -> "Graph":
        """Extend by one vertex whose neighborhood is the given bitmask."""
        if neighbors & ~((1 << self.n) - 1):
            raise ValueError("neighborhood mentions unknown vertices")
        rows = list(self.rows)
        for v in range(self.n):
            if (neighbors >> v) & 1:
                rows[v] |= 1 << self.n
        rows.append(neighbors)
        return Graph(self.n + 1, rows)

    def non_edges(self) -> Iterator[tuple[int, int]]:
        for v in range(self.n):
            for u in range(v + 1, self.n):
                if not self.has_edge(v, u):
                    yield (v, u)

    # -- isomorphism-invariant identity --------------------------------------

    @property
    def canonical_label(self) -> str:
        label = self._canon
        if label is None:
            from .canon import canonical_form

            label = canonical_form(self)
            object.__setattr__(self, "_canon", label)
        return label

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        if self.n != other.n or self.edge_count() != other.edge_count():
            return False
        return self.canonical_label == other.canonical_label

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(self.canonical_label)
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        return f"Graph({self.n}, edges={list(self.edges())})"


# -- the join/union/complement calculus ---------------------------------------


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, [(~r & full) ^ (1 << v) for v, r in enumerate(g.rows)])


def disjoint_union(parts: Sequence[Graph]) -> Graph:
    rows: list[int] = []
    offset = 0
    for p in parts:
        rows.extend(r << offset for r in p.rows)
        offset += p.n
    return Graph(offset, rows)


def join(parts: Sequence[Graph]) -> Graph:
    if not parts:
        raise ValueError("join of an empty list")
    base = disjoint_union(parts)
    n = base.n
    full = (1 << n) - 1
    rows = list(base.rows)
    offset = 0
    for p in parts:
        block = ((1 << p.n) - 1) << offset
        other = full & ~block
        for v in range(offset, offset + p.n):
            rows[v] |= other
        offset += p.n
    return Graph(n, rows)


def graph_union(a: Graph, b: Graph) -> Graph:
    """Edge union of two graphs on the same vertex count."""
    if a.n != b.n:
        raise ValueError("orders differ")
    return Graph(a.n, [ra | rb for ra, rb in zip(a.rows, b.rows)])


def components(g: Graph) -> list[list[int]]:
    """Connected components, each sorted, ordered by smallest vertex."""
    seen = 0
    out = []
    for s in range(g.n):
        if (seen >> s) & 1:
            continue
        comp = 1 << s
        frontier = 1 << s
        while frontier:
            nxt = 0
            f = frontier
            v = 0
            while f:
                if f & 1:
                    nxt |= g.rows[v]
                f >>= 1
                v += 1
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        out.append([v for v in range(g.n) if (comp >> v) & 1])
    return out


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(components(g)) == 1


# -- containment --------------------------------------------------------------


def _degree_sorted(g: Graph) -> Graph:
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    perm = [0] * g.n
    for new, old in enumerate(order):
        perm[old] = new
    return g.relabel(perm)


def contains_subgraph(host: Graph, pattern: Graph) -> bool:
    """True iff some injection of the pattern's vertices into the host
    preserves edges."""
    if pattern.n > host.n or pattern.edge_count() > host.edge_count():
        return False
    p = _degree_sorted(pattern)
    return _kernels.injection_exists(host.rows, p.rows, induced=False)


def contains_induced(host: Graph, pattern: Graph) -> bool:
    """True iff some injection preserves both edges and non-edges."""
    if pattern.n > host.n or pattern.edge_count() > host.edge_count():
        return False
    host_non = host.n * (host.n - 1) // 2 - host.edge_count()
    pat_non = pattern.n * (pattern.n - 1) // 2 - pattern.edge_count()
    if pat_non > host_non:
        return False
    p = _degree_sorted(pattern)
    return _kernels.injection_exists(host.rows, p.rows, induced=True)


def induced_embeddings(host: Graph, pattern: Graph) -> Iterator[tuple[int, ...]]:
    """All induced embeddings as tuples mapping pattern vertex -> host vertex.

    Plain backtracking in vertex order; used by the lemma checkers, which
    need the embeddings themselves rather than a yes/no answer.
    """
    if pattern.n > host.n:
        return
    image: list[int] = []
    used = 0

    def rec(d: int) -> Iterator[tuple[int, ...]]:
        nonlocal used
        if d == pattern.n:
            yield tuple(image)
            return
        for w in range(host.n):
            if (used >> w) & 1:
                continue
            ok = True
            for i in range(d):
                if pattern.has_edge(d, i) != host.has_edge(w, image[i]):
                    ok = False
                    break
            if ok:
                image.append(w)
                used |= 1 << w
                yield from rec(d + 1)
                image.pop()
                used &= ~(1 << w)

    yield from rec(0)


# -- graph6 and adjacency-list text formats -----------------------------------


def to_graph6(g: Graph) -> str:
    """Encode in graph6: size bytes, then upper-triangle column-order bits
    packed big-endian into 6-bit groups offset by 63."""
    n = g.n
    if n <= 62:
        out = [chr(n + 63)]
    elif n <= 258047:
        out = [chr(126), chr((n >> 12) + 63), chr(((n >> 6) & 63) + 63), chr((n & 63) + 63)]
    else:
        raise ValueError("order too large for this encoder")
    bits = []
    for col in range(1, n):
        for row in range(col):
            bits.append(1 if g.has_edge(row, col) else 0)
    while len(bits) % 6:
        bits.append(0)
    for i in range(0, len(bits), 6):
        val = 0
        for b in bits[i : i + 6]:
            val = (val << 1) | b
        out.append(chr(val + 63))
    return "".join(out)


def from_graph6(text: str) -> Graph:
    """Decode a graph6 string (optional '>>graph6<<' header tolerated)."""
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<") :].strip()
    if not s:
        raise InputFormatError("empty graph6 string")
    data = [ord(c) - 63 for c in s]
    if any(d < 0 or d > 63 for d in data):
        raise InputFormatError(f"invalid graph6 character in {s!r}")
    if data[0] <= 62:
        n = data[0]
        body = data[1:]
    else:
        if len(data) < 4 or data[1] > 62:
            raise InputFormatError("bad graph6 size prefix")
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        body = data[4:]
    need = (n * (n - 1) // 2 + 5) // 6
    if len(body) != need:
        raise InputFormatError(
            f"graph6 body length {len(body)} != expected {need} for order {n}"
        )
    if n > MAX_VERTICES:
        raise InputFormatError(f"graph6 order {n} exceeds supported {MAX_VERTICES}")
    bits = []
    for d in body:
        for k in range(5, -1, -1):
            bits.append((d >> k) & 1)
    rows = [0] * n
    idx = 0
    for col in range(1, n):
        for row in range(col):
            if bits[idx]:
                rows[row] |= 1 << col
                rows[col] |= 1 << row
            idx += 1
    return Graph(n, rows)


def to_adjacency_text(g: Graph) -> str:
    """Fallback plain-text format: order line, then one 'u v' line per edge."""
    lines = [str(g.n)]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def from_adjacency_text(text: str) -> Graph:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise InputFormatError("empty adjacency text")
    try:
        n = int(lines[0])
    except ValueError as e:
        raise InputFormatError("first line must be the order") from e
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise InputFormatError(f"bad edge line: {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as e:
            raise InputFormatError(f"bad edge line: {ln!r}") from e
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise InputFormatError(f"edge {u},{v} out of range for order {n}")
        edges.append((u, v))
    try:
        return Graph.from_edges(n, edges)
    except ValueError as e:
        raise InputFormatError(str(e)) from e


# -- vertex sets ---------------------------------------------------------------


def vertex_set(g: Graph, members: Iterable[int]) -> frozenset[int]:
    """Validated vertex subset of g (the Labeling/blocks carrier type)."""
    s = frozenset(members)
    for v in s:
        if not (0 <= v < g.n):
            raise ValueError(f"vertex {v} outside 0..{g.n - 1}")
    return s


def mask_of(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def bits_of(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out
