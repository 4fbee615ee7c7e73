"""Constructions of uniquely decomposable graphs.

Three layers, each producing multi-copy graphs over a base member G with a
fixed decomposition d0:

  * the arrow graph over two copies (construction_one): cross edges force
    any decomposition that respects d0 on the source copy to respect it on
    the target copy too, uniformly;
  * the exclusion graph over m*k copies (construction_two): cross edges
    copied from a failing star-join element make it impossible for a
    decomposition to restrict to a chosen bad decomposition on every copy;
  * the iterated pipeline (build_g_star): one exclusion stage per bad
    decomposition, wrapped in two arrow copies, yielding a graph whose
    decompositions must respect d0 uniformly.

Outputs carry machine-checkable structure; membership of every constructed
graph is verified by a direct membership call, independent of the
construction's own reasoning.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iter_product
from typing import Sequence

from .config import (
    DEFAULT_GSTAR_ORDER_CAP,
    DEFAULT_K_CAP,
    DEFAULT_K_MAX,
)
from .decomposition import (
    dc,
    dc_estimate,
    dec_estimate,
    decomposition_condition,
    first_escape_extension,
    is_strict,
    p_decomposability,
    p_decompositions,
    respects,
    restrict_to_block,
)
from .errors import CapExceeded, FlagInconsistency, PreconditionError
from .graphs import (
    Graph,
    contains_induced,
    contains_subgraph,
    join,
    to_graph6,
)
from .partition import (
    Labeling,
    StarJoinElement,
    copies_element,
    enumerate_partitions,
    extend_labeling,
    star_join_expand,
    star_join_subset_of,
)
from .properties import PRODUCT, Property, member


def _require_nonempty_parts(d: Labeling, what: str) -> None:
    if any(not p for p in d.parts):
        raise PreconditionError(f"{what} must have nonempty parts")


def _require_same_host(g: Graph, d: Labeling, what: str) -> None:
    if d.host.n != g.n or d.host.rows != g.rows:
        raise PreconditionError(f"{what} does not live on the given graph")


# -- construction 1: the arrow graph -------------------------------------------


@dataclass(frozen=True)
class ConstructionOneResult:
    element: StarJoinElement          # two copies: (source, target)
    witness_escape: Graph             # non-member one-vertex extension of G
    cone_neighborhood: frozenset[int]  # its new vertex's neighbors in G
    zy_sets: tuple[frozenset[int], ...]  # neighborhood sliced by d0's parts


def arrow_cross_edges(
    n: int,
    d0_parts: Sequence[frozenset[int]],
    zy_sets: Sequence[frozenset[int]],
) -> list[tuple[int, int]]:
    """Cross pairs (source-copy vertex, target-copy vertex) of the arrow
    pattern: every vertex of part x in the target is joined to the sliced
    neighborhood of every other part y in the source."""
    out = []
    for y, zy in enumerate(zy_sets):
        for x, ux in enumerate(d0_parts):
            if x == y:
                continue
            for a in zy:
                for b in ux:
                    out.append((a, b))
    return out


def construction_one(g: Graph, d0: Labeling, prop: Property) -> ConstructionOneResult:
    """Two copies of g with arrow cross edges; membership verified directly."""
    _require_same_host(g, d0, "d0")
    _require_nonempty_parts(d0, "d0")
    if not member(prop, g):
        raise PreconditionError("base graph is not a member")
    escape = first_escape_extension(g, prop)
    if escape is None:
        raise FlagInconsistency(
            "no one-vertex extension leaves the property; the base graph is "
            "not strict"
        )
    nz = frozenset(v for v in range(g.n) if escape.has_edge(g.n, v))
    zy = tuple(u & nz for u in d0.parts)
    n = g.n
    rows = [0] * (2 * n)
    for v in range(n):
        rows[v] = g.rows[v]
        rows[n + v] = g.rows[v] << n
    for a, b in arrow_cross_edges(n, d0.parts, zy):
        rows[a] |= 1 << (n + b)
        rows[n + b] |= 1 << a
    h = Graph(2 * n, rows)
    element = StarJoinElement(h, (tuple(range(n)), tuple(range(n, 2 * n))))
    if not member(prop, h):
        raise PreconditionError(
            "arrow graph is not a member; the supplied labeling is not a "
            "valid decomposition"
        )
    return ConstructionOneResult(element, escape, nz, zy)


# -- construction 2: the exclusion graph ----------------------------------------


@dataclass(frozen=True)
class ConstructionTwoResult:
    element: StarJoinElement          # m * k_t copies of the base
    bad_decomposition: Labeling
    k_t: int
    witness_blowup: Graph             # the star-join element outside the property
    aij_sets: tuple[tuple[frozenset[int], ...], ...]


def copy_cross_pattern(element: StarJoinElement, a: int, b: int
                       ) -> list[tuple[int, int]]:
    """Base-vertex pairs (u, v) with an edge between copies a and b."""
    blk_a = element.blocks[a]
    blk_b = element.blocks[b]
    out = []
    for u in range(len(blk_a)):
        for v in range(len(blk_b)):
            if element.graph.has_edge(blk_a[u], blk_b[v]):
                out.append((u, v))
    return out


def construction_two(
    g: Graph,
    d0: Labeling,
    dt: Labeling,
    prop: Property,
    k_cap: int = DEFAULT_K_CAP,
    cross_cap: int | None = None,
) -> ConstructionTwoResult:
    """m copies of the k_t-fold base, cross-wired by a failing blow-up.

    k_t is the least blow-up (up to k_cap) whose star join over the overlap
    cells of d0 and dt escapes the property; the escaping element supplies
    the cross edges between copy x's part-x vertices and copy y's part-y
    vertices.
    """
    _require_same_host(g, d0, "d0")
    _require_same_host(g, dt, "dt")
    _require_nonempty_parts(d0, "d0")
    _require_nonempty_parts(dt, "dt")
    if respects(dt, d0):
        raise PreconditionError(
            "the decomposition to exclude respects the base decomposition; "
            "nothing to build"
        )
    m = len(d0.parts)
    nt = len(dt.parts)
    aij = tuple(
        tuple(d0.parts[i] & dt.parts[j] for j in range(nt)) for i in range(m)
    )
    cells = [
        (i, j, tuple(sorted(aij[i][j])))
        for i in range(m)
        for j in range(nt)
        if aij[i][j]
    ]
    assert len(cells) >= nt + 1, "non-respecting overlap must have > nt cells"

    k_t = 0
    witness: StarJoinElement | None = None
    for k in range(1, k_cap + 1):
        blocks = [disjoint_union([g.subgraph(cell)] * k) for _, _, cell in cells]
        ok, wit = star_join_subset_of(blocks, prop, cross_cap)
        if not ok:
            k_t = k
            witness = wit
            break
    if witness is None:
        raise CapExceeded(
            f"every blow-up up to k={k_cap} keeps the overlap star join inside "
            "the property; no exclusion witness found"
        )

    # vertex (x, c, w): copy c of the base inside super-copy x
    n = g.n
    total = m * k_t * n
    rows = [0] * total

    def gv(x: int, c: int, w: int) -> int:
        return (x * k_t + c) * n + w

    for x in range(m):
        for c in range(k_t):
            off = (x * k_t + c) * n
            for v in range(n):
                rows[off + v] |= g.rows[v] << off

    # witness vertex -> (d0-part index, base copy index, base vertex)
    flat: list[tuple[int, int, int]] = []
    for (i, _, cell), blk in zip(cells, witness.blocks):
        size = len(cell)
        for pos in range(len(blk)):
            flat_entry = (i, pos // size, cell[pos % size])
            flat.append(flat_entry)
    wg = witness.graph
    order_map: list[int] = []
    for blk in witness.blocks:
        order_map.extend(blk)
    for a_idx in range(len(order_map)):
        for b_idx in range(a_idx + 1, len(order_map)):
            if not wg.has_edge(order_map[a_idx], order_map[b_idx]):
                continue
            xi, ci, wi = flat[a_idx]
            xj, cj, wj = flat[b_idx]
            if xi == xj:
                continue
            u = gv(xi, ci, wi)
            v = gv(xj, cj, wj)
            rows[u] |= 1 << v
            rows[v] |= 1 << u

    h = Graph(total, rows)
    copies = tuple(
        tuple(range(c * n, (c + 1) * n)) for c in range(m * k_t)
    )
    element = StarJoinElement(h, copies)
    if not member(prop, h):
        raise PreconditionError(
            "exclusion graph is not a member; the supplied labelings are not "
            "valid decompositions"
        )
    return ConstructionTwoResult(element, dt, k_t, witness.graph, aij)


# -- the iterated pipeline -------------------------------------------------------


@dataclass
class UPGCertificate:
    base: Graph
    d0: Labeling
    element: StarJoinElement
    stage_log: list[dict] = field(default_factory=list)
    uniqueness_verified: bool = False
    parts_count: int = 0
    outcome: str = "unverified"  # unique | multiple | none | unverified | aborted


def _verify_uniqueness(cert: UPGCertificate, prop: Property, n: int,
                       k_max: int) -> None:
    """Exhaustively enumerate n-part decompositions of the result and compare
    with the extension of d0."""
    element = cert.element
    found = []
    for lab in p_decompositions(element.graph, prop, n, k_max):
        found.append(lab.unordered())
        if len(found) > 1:
            break
    if not found:
        cert.outcome = "none"
        return
    if len(found) > 1:
        cert.outcome = "multiple"
        return
    expected = extend_labeling(element, cert.d0).unordered()
    if found[0] == expected:
        cert.outcome = "unique"
        cert.uniqueness_verified = True
    else:
        cert.outcome = "multiple"


def build_g_star(
    g: Graph,
    d0: Labeling,
    prop: Property,
    n: int,
    k_cap: int = DEFAULT_K_CAP,
    order_cap: int = DEFAULT_GSTAR_ORDER_CAP,
    k_max: int = DEFAULT_K_MAX,
    cross_cap: int | None = None,
    verify_cap: int = 12,
) -> UPGCertificate:
    """Iterated exclusion stages plus the arrow wrap.

    Requires a strict base with decomposability n (at k_max) and a valid
    decomposition d0.  When no n-part decomposition violates d0 the base
    itself is returned; otherwise one exclusion stage is built per violating
    decomposition, each multiplying the order, and the pipeline aborts
    cleanly (partial stage log) once order_cap is exceeded.  The final graph
    gains two arrow copies.  Uniqueness of the resulting decomposition is
    verified exhaustively when the result is small enough (<= verify_cap
    vertices), otherwise left unverified.
    """
    _require_same_host(g, d0, "d0")
    _require_nonempty_parts(d0, "d0")
    if not member(prop, g):
        raise PreconditionError("base graph is not a member")
    if not is_strict(g, prop, "induced"):
        raise PreconditionError("base graph is not strict")
    dec_g, _ = p_decomposability(g, prop, k_max=k_max)
    if dec_g != n:
        raise PreconditionError(
            f"base decomposability is {dec_g}, not the requested {n}"
        )
    if not decomposition_condition(g, [tuple(sorted(p)) for p in d0.parts],
                                   prop, k_max):
        raise PreconditionError("d0 is not a valid decomposition at k_max")

    bad = [
        lab for lab in p_decompositions(g, prop, n, k_max)
        if not respects(lab, d0)
    ]
    cert = UPGCertificate(base=g, d0=d0,
                          element=copies_element(g, 1), parts_count=n)
    cert.stage_log.append(
        {"stage": "enumerate", "violating_decompositions": len(bad)}
    )
    if not bad:
        cert.stage_log.append({"stage": "identity", "note": "base returned as-is"})
        if g.n <= verify_cap:
            _verify_uniqueness(cert, prop, n, k_max)
        return cert

    first = construction_two(g, d0, bad[0], prop, k_cap, cross_cap)
    current = first.element
    cert.stage_log.append(
        {
            "stage": "exclude",
            "index": 1,
            "k": first.k_t,
            "order": current.graph.n,
            "excluded": [sorted(sorted(p) for p in bad[0].parts)],
        }
    )

    for ell in range(2, len(bad) + 1):
        ct = construction_two(g, d0, bad[ell - 1], prop, k_cap, cross_cap)
        mk = len(ct.element.blocks)
        new_order = mk * current.graph.n
        if new_order > order_cap:
            cert.element = current
            cert.outcome = "aborted"
            cert.stage_log.append(
                {
                    "stage": "abort",
                    "index": ell,
                    "needed_order": new_order,
                    "order_cap": order_cap,
                }
            )
            return cert
        big_n = current.graph.n
        rows = [0] * new_order
        for blkidx in range(mk):
            off = blkidx * big_n
            for v in range(big_n):
                rows[off + v] |= current.graph.rows[v] << off
        for a in range(mk):
            for b in range(mk):
                if a == b:
                    continue
                pattern = copy_cross_pattern(ct.element, a, b)
                if not pattern:
                    continue
                for cp_a in current.blocks:
                    for cp_b in current.blocks:
                        for u, v in pattern:
                            x = a * big_n + cp_a[u]
                            y = b * big_n + cp_b[v]
                            rows[x] |= 1 << y
                            rows[y] |= 1 << x
        copies = tuple(
            tuple(blkidx * big_n + x for x in cp)
            for blkidx in range(mk)
            for cp in current.blocks
        )
        current = StarJoinElement(Graph(new_order, rows), copies)
        if not member(prop, current.graph):
            raise FlagInconsistency("iterated stage left the property")
        cert.stage_log.append(
            {
                "stage": "exclude",
                "index": ell,
                "k": ct.k_t,
                "order": current.graph.n,
            }
        )

    # arrow wrap: two extra copies, cross edges in a cycle of arrows
    s = len(current.blocks)
    n_base = g.n
    big_n = current.graph.n
    new_order = big_n + 2 * n_base
    if new_order > order_cap:
        cert.element = current
        cert.outcome = "aborted"
        cert.stage_log.append(
            {
                "stage": "abort",
                "index": "wrap",
                "needed_order": new_order,
                "order_cap": order_cap,
            }
        )
        return cert
    escape = first_escape_extension(g, prop)
    if escape is None:
        raise FlagInconsistency("base graph stopped being strict")
    nz = frozenset(v for v in range(n_base) if escape.has_edge(n_base, v))
    zy = tuple(u & nz for u in d0.parts)
    rows = [0] * new_order
    for v in range(big_n):
        rows[v] = current.graph.rows[v]
    head = tuple(range(big_n, big_n + n_base))
    tail = tuple(range(big_n + n_base, big_n + 2 * n_base))
    for v in range(n_base):
        for u in range(n_base):
            if g.has_edge(v, u):
                rows[head[v]] |= 1 << head[u]
                rows[tail[v]] |= 1 << tail[u]

    def arrow(src: tuple[int, ...], dst: tuple[int, ...]) -> None:
        for y, z in enumerate(zy):
            for x, ux in enumerate(d0.parts):
                if x == y:
                    continue
                for a in z:
                    for b in ux:
                        rows[src[a]] |= 1 << dst[b]
                        rows[dst[b]] |= 1 << src[a]

    for cp in current.blocks:
        arrow(head, cp)   # head copy points at every interior copy
        arrow(cp, tail)   # every interior copy points at the tail copy
    arrow(tail, head)

    copies = (head,) + current.blocks + (tail,)
    star = StarJoinElement(Graph(new_order, rows), copies)
    if not member(prop, star.graph):
        raise FlagInconsistency("arrow wrap left the property")
    cert.element = star
    cert.stage_log.append(
        {"stage": "wrap", "copies": len(copies), "order": new_order}
    )
    if new_order <= verify_cap:
        _verify_uniqueness(cert, prop, n, k_max)
    return cert


# -- corollary-level operations ---------------------------------------------------


def respecting_decomposition(
    g: Graph,
    d0: Labeling,
    prop: Property,
    k_max: int = DEFAULT_K_MAX,
    k_cap: int = DEFAULT_K_CAP,
    order_cap: int = DEFAULT_GSTAR_ORDER_CAP,
    verify_cap: int = 12,
) -> Labeling:
    """A decomposition of g with dec_P(g) parts that respects d0, obtained by
    decomposing the pipeline output and restricting to the first copy."""
    n, _ = p_decomposability(g, prop, k_max=k_max)
    cert = build_g_star(g, d0, prop, n, k_cap=k_cap, order_cap=order_cap,
                        k_max=k_max, verify_cap=verify_cap)
    if cert.outcome == "aborted":
        raise CapExceeded("construction exceeded the order cap")
    found = None
    for lab in p_decompositions(cert.element.graph, prop, n, k_max):
        found = lab
        break
    if found is None:
        raise FlagInconsistency("pipeline output has no decomposition")
    restricted = restrict_to_block(found, cert.element, 0, g)
    if not respects(restricted, d0):
        raise FlagInconsistency(
            "restricted decomposition does not respect the base decomposition"
        )
    return restricted


@dataclass(frozen=True)
class GroupingMap:
    """Partition of fine-part indices, one group per coarse part."""

    groups: tuple[frozenset[int], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for grp in self.groups:
            if not grp:
                raise ValueError("groups must be nonempty")
            if grp & seen:
                raise ValueError("groups must be disjoint")
            seen.update(grp)
        if seen != set(range(len(seen))):
            raise ValueError("groups must cover 0..n-1")


def group_to_factor_partition(
    g: Graph,
    d0: Labeling,
    factors: Sequence[Property],
) -> tuple[Labeling, GroupingMap]:
    """A factor partition of g refined by d0: part j of the result lies in
    factors[j] and inside a single part of d0; the grouping records which
    fine parts make up each coarse part (inducing the grouped factorization
    of the product)."""
    _require_same_host(g, d0, "d0")
    _require_nonempty_parts(d0, "d0")
    if len(factors) > g.n:
        raise PreconditionError("more factors than vertices")
    for lab in enumerate_partitions(g, factors):
        if any(not p for p in lab.parts):
            continue
        if respects(lab, d0):
            groups = tuple(
                frozenset(
                    j for j, part in enumerate(lab.parts) if part <= d0.parts[i]
                )
                for i in range(len(d0.parts))
            )
            return lab, GroupingMap(groups)
    raise PreconditionError(
        "no factor partition respecting the decomposition exists within the "
        "search space (inconsistency signal)"
    )


# -- generating-set sampling -------------------------------------------------------


@dataclass(frozen=True)
class GeneratingSample:
    graph: Graph
    blocks: tuple[tuple[int, ...], ...]


def generating_set_sample(
    factors: Sequence[Property],
    pins: Sequence[Graph],
    mode: str,
    budget: int,
    k_max: int = DEFAULT_K_MAX,
    max_results: int = 20,
    cross_cap: int | None = None,
) -> list[GeneratingSample]:
    """Finite sample of the pinned generating-set construction.

    hereditary-join mode: join factor-strict indecomposable members
    containing the pins, complete to maximal members in all possible ways,
    keep those whose ind-part count equals the product's estimate.

    induced-starjoin mode: expand the star join of strict indecomposable
    members containing the pins, keep the strict elements whose
    decomposability equals the product's estimate.

    An empty sample within the budget is a reportable outcome, not an error.
    """
    from .enumeration import graphs_upto

    if len(factors) != len(pins):
        raise PreconditionError("one pin per factor required")
    for f, pin in zip(factors, pins):
        if not member(f, pin):
            raise PreconditionError("pin is not a member of its factor")
    prod = PRODUCT(*factors)
    samples: dict[str, GeneratingSample] = {}

    if mode == "hereditary-join":
        target = dc_estimate(prod, budget)
        cands: list[list[Graph]] = []
        for f, pin in zip(factors, pins):
            cands.append(
                [
                    h
                    for h in graphs_upto(budget, order_cap=budget)
                    if member(f, h)
                    and dc(h) == 1
                    and contains_subgraph(h, pin)
                    and is_strict(h, f, "hereditary")
                ]
            )
        for combo in iter_product(*cands):
            if sum(h.n for h in combo) > budget:
                continue
            base = join(list(combo))
            blocks = []
            off = 0
            for h in combo:
                blocks.append(tuple(range(off, off + h.n)))
                off += h.n
            seen: set[str] = set()
            stack = [base]
            while stack and len(samples) < max_results:
                cur = stack.pop()
                key = cur.canonical_label
                if key in seen:
                    continue
                seen.add(key)
                addable = [
                    (u, v) for u, v in cur.non_edges()
                    if member(prod, cur.add_edge(u, v))
                ]
                if not addable:
                    if dc(cur) == target:
                        samples.setdefault(
                            key, GeneratingSample(cur, tuple(blocks))
                        )
                else:
                    for u, v in addable:
                        stack.append(cur.add_edge(u, v))
            if len(samples) >= max_results:
                break
        return list(samples.values())

    if mode == "induced-starjoin":
        target = dec_estimate(prod, budget, k_max)
        cands = []
        for f, pin in zip(factors, pins):
            cands.append(
                [
                    h
                    for h in graphs_upto(budget, order_cap=budget)
                    if member(f, h)
                    and contains_induced(h, pin)
                    and is_strict(h, f, "induced")
                    and p_decomposability(h, f, k_max=k_max)[0] == 1
                ]
            )
        for combo in iter_product(*cands):
            if sum(h.n for h in combo) > budget:
                continue
            for el in star_join_expand(list(combo), cross_cap):
                if not member(prod, el.graph):
                    continue
                if not is_strict(el.graph, prod, "induced"):
                    continue
                if p_decomposability(el.graph, prod, k_max=k_max)[0] != target:
                    continue
                samples.setdefault(
                    el.graph.canonical_label, GeneratingSample(el.graph, el.blocks)
                )
                if len(samples) >= max_results:
                    break
            if len(samples) >= max_results:
                break
        return list(samples.values())

    raise ValueError("mode must be 'hereditary-join' or 'induced-starjoin'")
