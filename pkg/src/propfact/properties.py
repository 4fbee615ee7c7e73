"""Finite, evaluable graph properties.

A Property is an expression tree: builtin predicate leaves, forbidden- or
generated-set leaves over explicit graph lists, and product nodes (a graph
is in a product iff its vertex set splits into parts lying in the factors).
Membership is deterministic and isomorphism-invariant; product membership
delegates to the partition engine and is memoized by canonical form.

Closure behaviour (hereditary / induced-hereditary / additive / compositive)
is tracked two ways: flags that are *certain* by construction (e.g. a
forbidden-subgraph family is hereditary no matter what), and empirical
verification at a stated order bound for everything else (check_closure).
Operations that rely on a flag accept either a certain flag or a
verified-at-bound check; nothing silently assumes closure.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Any, Iterable, Sequence

from .certificates import (
    INCONCLUSIVE,
    REFUTED,
    VERIFIED,
    Certificate,
    graph_witness,
)
from .config import DEFAULT_BOUND, DEFAULT_ORDER_CAP
from .errors import CapExceeded, InputFormatError, PreconditionError
from .graphs import (
    Graph,
    components,
    contains_induced,
    contains_subgraph,
    disjoint_union,
    from_graph6,
    is_connected,
    to_graph6,
)

VALID_KINDS = (
    "edgeless",
    "kcolorable",
    "maxdegree",
    "forest",
    "complete",
    "subgraphof",
    "forbidden",
    "forbidden_induced",
    "generated",
    "product",
)

GENERATED_MODES = ("subgraph-closed", "induced-closed")

# closure flag names, in report order
FLAG_NAMES = ("hereditary", "induced_hereditary", "additive", "compositive")


@dataclass(frozen=True)
class CertainFlags:
    """Closure facts guaranteed by the expression shape (True) or unknown
    (None).  Nothing is ever marked certainly-False; refutation is the job of
    check_closure."""

    hereditary: bool | None
    induced_hereditary: bool | None
    additive: bool | None
    compositive: bool | None


class Property:
    """Immutable property expression node."""

    __slots__ = ("kind", "k", "graphs", "mode", "factors", "name", "_key", "_certain")

    def __init__(
        self,
        kind: str,
        *,
        k: int = 0,
        graphs: Sequence[Graph] = (),
        mode: str = "",
        factors: Sequence["Property"] = (),
        name: str = "",
    ):
        if kind not in VALID_KINDS:
            raise ValueError(f"unknown property kind {kind!r}")
        if kind == "generated" and mode not in GENERATED_MODES:
            raise ValueError(f"generated mode must be one of {GENERATED_MODES}")
        if kind == "generated" and not graphs:
            raise ValueError("generated property needs a nonempty seed list")
        if kind == "product" and len(factors) < 1:
            raise ValueError("product needs at least one factor")
        if kind == "subgraphof" and len(graphs) != 1:
            raise ValueError("subgraphof takes exactly one graph")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "graphs", tuple(graphs))
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "factors", tuple(factors))
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "_key", None)
        object.__setattr__(self, "_certain", None)

    def __setattr__(self, name, value):
        raise AttributeError("Property is immutable")

    @property
    def key(self) -> str:
        """Stable structural key; embedded graphs appear in canonical form,
        so the key is invariant under relabelling the seed graphs."""
        key = self._key
        if key is None:
            if self.kind == "kcolorable":
                key = f"kcolorable({self.k})"
            elif self.kind == "maxdegree":
                key = f"maxdegree({self.k})"
            elif self.kind in ("edgeless", "forest", "complete"):
                key = self.kind
            elif self.kind == "subgraphof":
                key = f"subgraphof({self.graphs[0].canonical_label})"
            elif self.kind in ("forbidden", "forbidden_induced"):
                gs = ",".join(sorted(g.canonical_label for g in self.graphs))
                key = f"{self.kind}[{gs}]"
            elif self.kind == "generated":
                gs = ",".join(sorted(g.canonical_label for g in self.graphs))
                key = f"generated:{self.mode}[{gs}]"
            else:
                key = "product(" + ",".join(f.key for f in self.factors) + ")"
            object.__setattr__(self, "_key", key)
        return key

    @property
    def certain(self) -> CertainFlags:
        c = self._certain
        if c is None:
            c = _certain_flags(self)
            object.__setattr__(self, "_certain", c)
        return c

    def display_name(self) -> str:
        return self.name or self.key

    def __eq__(self, other):
        if not isinstance(other, Property):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Property<{self.display_name()}>"


def _certain_flags(p: Property) -> CertainFlags:
    k = p.kind
    if k in ("edgeless", "kcolorable", "maxdegree", "forest"):
        return CertainFlags(True, True, True, True)
    if k == "complete":
        return CertainFlags(None, True, None, True)
    if k == "subgraphof":
        return CertainFlags(True, True, None, True)
    if k == "forbidden":
        conn = all(is_connected(g) for g in p.graphs)
        return CertainFlags(True, True, True if conn else None, True if conn else None)
    if k == "forbidden_induced":
        conn = all(is_connected(g) for g in p.graphs)
        return CertainFlags(None, True, True if conn else None, True if conn else None)
    if k == "generated":
        single = len(p.graphs) == 1
        if p.mode == "subgraph-closed":
            return CertainFlags(True, True, None, True if single else None)
        return CertainFlags(None, True, None, True if single else None)
    # product: a closure property held by every factor is held by the product
    # (for compositive factors, the join of factor-level common supergraphs
    # is a common supergraph for the product)
    subs = [f.certain for f in p.factors]
    def conj(attr: str) -> bool | None:
        vals = [getattr(s, attr) for s in subs]
        return True if all(v is True for v in vals) else None
    return CertainFlags(conj("hereditary"), conj("induced_hereditary"),
                        conj("additive"), conj("compositive"))


# -- builtins -----------------------------------------------------------------


EDGELESS = Property("edgeless", name="edgeless")
FOREST = Property("forest", name="forest")
COMPLETE = Property("complete", name="complete")
UNIVERSAL = Property("forbidden", graphs=(), name="universal")


def K_COLORABLE(k: int) -> Property:
    if k < 1:
        raise ValueError("k must be positive")
    return Property("kcolorable", k=k, name=f"{k}-colorable")


def MAX_DEGREE(d: int) -> Property:
    if d < 0:
        raise ValueError("degree bound must be non-negative")
    return Property("maxdegree", k=d, name=f"max-degree-{d}")


def SUBGRAPH_OF(s: Graph) -> Property:
    return Property("subgraphof", graphs=(s,))


def FORBIDDEN_SUBGRAPHS(gs: Sequence[Graph]) -> Property:
    return Property("forbidden", graphs=tuple(gs))


def FORBIDDEN_INDUCED(gs: Sequence[Graph]) -> Property:
    return Property("forbidden_induced", graphs=tuple(gs))


def GENERATED_BY(gs: Sequence[Graph], mode: str) -> Property:
    return Property("generated", graphs=tuple(gs), mode=mode)


def generated_property(seeds: Sequence[Graph], mode: str) -> Property:
    """Smallest (induced-)hereditary property containing the seeds."""
    if not seeds:
        raise PreconditionError("seed list must be nonempty")
    return GENERATED_BY(seeds, mode)


def PRODUCT(*factors: Property) -> Property:
    if len(factors) == 1 and not isinstance(factors[0], Property):
        factors = tuple(factors[0])
    name = "@".join(f.display_name() for f in factors)
    return Property("product", factors=factors, name=name)


# -- membership ---------------------------------------------------------------

_MEMO: dict[tuple[str, str], bool] = {}
_MEMO_KINDS = ("product", "forbidden", "forbidden_induced", "generated", "subgraphof")


def clear_membership_memo() -> None:
    _MEMO.clear()


def _colorable(g: Graph, k: int) -> bool:
    n = g.n
    if k >= n:
        return True
    if k == 1:
        return g.edge_count() == 0
    if k == 2:
        # BFS two-colouring per component
        color = [-1] * n
        for s in range(n):
            if color[s] >= 0:
                continue
            color[s] = 0
            queue = [s]
            while queue:
                v = queue.pop()
                row = g.rows[v]
                u = 0
                while row:
                    if row & 1:
                        if color[u] < 0:
                            color[u] = 1 - color[v]
                            queue.append(u)
                        elif color[u] == color[v]:
                            return False
                    row >>= 1
                    u += 1
        return True
    # backtracking, highest-degree-first, colours used symmetrically
    order = sorted(range(n), key=lambda v: (-g.degree(v), v))
    color = [-1] * n

    def rec(i: int, used: int) -> bool:
        if i == n:
            return True
        v = order[i]
        for c in range(min(used + 1, k)):
            ok = True
            row = g.rows[v]
            u = 0
            while row:
                if row & 1 and color[u] == c:
                    ok = False
                    break
                row >>= 1
                u += 1
            if ok:
                color[v] = c
                if rec(i + 1, used + 1 if c == used else used):
                    return True
                color[v] = -1
        return False

    return rec(0, 0)


def member(p: Property, g: Graph) -> bool:
    """Is g in the property?  Deterministic and isomorphism-invariant."""
    kind = p.kind
    if kind == "edgeless":
        return g.edge_count() == 0
    if kind == "maxdegree":
        return all(g.degree(v) <= p.k for v in range(g.n))
    if kind == "complete":
        return g.edge_count() == g.n * (g.n - 1) // 2
    if kind == "forest":
        return g.edge_count() == g.n - len(components(g))
    if kind == "kcolorable":
        return _colorable(g, p.k)
    memo_key = None
    if kind in _MEMO_KINDS:
        memo_key = (p.key, g.canonical_label)
        hit = _MEMO.get(memo_key)
        if hit is not None:
            return hit
    if kind == "subgraphof":
        res = contains_subgraph(p.graphs[0], g)
    elif kind == "forbidden":
        res = not any(contains_subgraph(g, f) for f in p.graphs)
    elif kind == "forbidden_induced":
        res = not any(contains_induced(g, f) for f in p.graphs)
    elif kind == "generated":
        if p.mode == "subgraph-closed":
            res = any(contains_subgraph(seed, g) for seed in p.graphs)
        else:
            res = any(contains_induced(seed, g) for seed in p.graphs)
    else:  # product
        from .partition import find_partition

        res = find_partition(g, p.factors) is not None
    if memo_key is not None:
        _MEMO[memo_key] = res
    return res


# -- property-level scalars -----------------------------------------------------


def completeness(p: Property, order_cap: int | None = None) -> int:
    """Largest k with the complete graph on k vertices a member."""
    cap = DEFAULT_ORDER_CAP if order_cap is None else order_cap
    best = 0
    for k in range(1, cap + 1):
        if member(p, Graph.complete(k)):
            best = k
        else:
            return best
    raise CapExceeded(
        f"completeness of {p.display_name()} exceeds order cap {cap}"
    )


def min_forbidden_order(p: Property, order_cap: int | None = None) -> int:
    """Smallest order of a non-member."""
    from .enumeration import enumerate_graphs

    cap = DEFAULT_ORDER_CAP if order_cap is None else order_cap
    for n in range(1, cap + 1):
        for g in enumerate_graphs(n, order_cap=cap):
            if not member(p, g):
                return n
    raise CapExceeded(
        f"no non-member of {p.display_name()} within order cap {cap}"
    )


def nontrivial_at(p: Property, bound: int) -> bool:
    """Contains the one-vertex graph and misses some graph up to the bound."""
    from .enumeration import enumerate_graphs

    if not member(p, Graph.edgeless(1)):
        return False
    for n in range(1, bound + 1):
        for g in enumerate_graphs(n, order_cap=bound):
            if not member(p, g):
                return True
    return False


def filter_by_supergraph(
    gset: Sequence[Graph], pins: Graph | Sequence[Graph], mode: str
) -> list[Graph]:
    """Members of gset containing every pin under the mode's relation."""
    if isinstance(pins, Graph):
        pins = [pins]
    if mode == "subgraph":
        rel = contains_subgraph
    elif mode == "induced":
        rel = contains_induced
    else:
        raise ValueError("mode must be 'subgraph' or 'induced'")
    return [g for g in gset if all(rel(g, h) for h in pins)]


# -- closure verification -------------------------------------------------------


def check_closure(p: Property, bound: int | None = None) -> Certificate:
    """Exhaustively check all four closure conditions on members up to the
    bound.  Refutations carry counterexamples; for compositivity a missing
    witness within the bound is reported as such, not as an outright
    refutation."""
    from .enumeration import enumerate_graphs

    b = DEFAULT_BOUND if bound is None else bound
    members: list[Graph] = []
    for n in range(1, b + 1):
        members.extend(g for g in enumerate_graphs(n, order_cap=b) if member(p, g))

    results: dict[str, Any] = {}
    witnesses: list = []

    def refute(flag: str, pair: tuple[Graph, Graph], note: str) -> None:
        results[flag] = {"holds": False, "note": note}
        witnesses.append(
            {
                "flag": flag,
                "note": note,
                "graphs": [graph_witness(pair[0]), graph_witness(pair[1])],
            }
        )

    # hereditary: single vertex- and edge-deletions of members stay members
    ok = True
    for g in members:
        for v in range(g.n):
            h = g.subgraph([u for u in range(g.n) if u != v])
            if not member(p, h):
                refute("hereditary", (g, h), "vertex deletion leaves the set")
                ok = False
                break
        if ok:
            for u, v in g.edges():
                rows = list(g.rows)
                rows[u] &= ~(1 << v)
                rows[v] &= ~(1 << u)
                h = Graph(g.n, rows)
                if not member(p, h):
                    refute("hereditary", (g, h), "edge deletion leaves the set")
                    ok = False
                    break
        if not ok:
            break
    if ok:
        results["hereditary"] = {"holds": True}

    ok = True
    for g in members:
        for v in range(g.n):
            h = g.subgraph([u for u in range(g.n) if u != v])
            if not member(p, h):
                refute("induced_hereditary", (g, h), "vertex deletion leaves the set")
                ok = False
                break
        if not ok:
            break
    if ok:
        results["induced_hereditary"] = {"holds": True}

    ok = True
    for a, c in combinations_with_replacement(members, 2):
        if a.n + c.n > b:
            continue
        u = disjoint_union([a, c])
        if not member(p, u):
            refute("additive", (a, c), "disjoint union leaves the set")
            ok = False
            break
    if ok:
        results["additive"] = {"holds": True}

    ok = True
    half = [g for g in members if g.n <= b // 2]
    for a, c in combinations_with_replacement(half, 2):
        if not any(
            contains_subgraph(h, a) and contains_subgraph(h, c) for h in members
        ):
            results["compositive"] = {
                "holds": False,
                "note": "no common super-member within bound",
            }
            witnesses.append(
                {
                    "flag": "compositive",
                    "note": "no common super-member within bound",
                    "graphs": [graph_witness(a), graph_witness(c)],
                }
            )
            ok = False
            break
    if ok:
        results["compositive"] = {"holds": True}

    all_hold = all(results[f]["holds"] for f in FLAG_NAMES)
    return Certificate(
        claim=f"closure:{p.key}",
        statement=f"closure conditions of {p.display_name()} on all members up to order {b}",
        verdict=VERIFIED if all_hold else REFUTED,
        bound=b,
        witnesses=witnesses,
        details={"flags": results, "member_classes": len(members)},
    )


_CLOSURE_CACHE: dict[tuple[str, int], dict[str, bool]] = {}


def verified_flags(p: Property, bound: int) -> dict[str, bool]:
    """Empirical closure results at the bound (cached)."""
    ck = (p.key, bound)
    hit = _CLOSURE_CACHE.get(ck)
    if hit is None:
        cert = check_closure(p, bound)
        hit = {f: cert.details["flags"][f]["holds"] for f in FLAG_NAMES}
        _CLOSURE_CACHE[ck] = hit
    return hit


def ensure_flag(p: Property, flag: str, bound: int) -> None:
    """Demand a closure flag: a certain flag passes outright, otherwise the
    empirical check at the bound must hold."""
    if flag not in FLAG_NAMES:
        raise ValueError(f"unknown flag {flag!r}")
    if getattr(p.certain, flag) is True:
        return
    if not verified_flags(p, bound)[flag]:
        raise PreconditionError(
            f"{p.display_name()} is not {flag} (refuted at bound {bound})"
        )


# -- property specification files ----------------------------------------------


def property_from_dict(d: dict) -> Property:
    if not isinstance(d, dict) or "kind" not in d:
        raise InputFormatError("property node must be an object with a 'kind'")
    kind = d["kind"]
    if kind not in VALID_KINDS:
        raise InputFormatError(f"unknown property kind {kind!r}")
    try:
        if kind == "edgeless":
            return EDGELESS
        if kind == "forest":
            return FOREST
        if kind == "complete":
            return COMPLETE
        if kind == "kcolorable":
            return K_COLORABLE(int(d["k"]))
        if kind == "maxdegree":
            return MAX_DEGREE(int(d["d"]))
        if kind == "subgraphof":
            return SUBGRAPH_OF(from_graph6(d["graph"]))
        if kind == "forbidden":
            return FORBIDDEN_SUBGRAPHS([from_graph6(s) for s in d.get("graphs", [])])
        if kind == "forbidden_induced":
            return FORBIDDEN_INDUCED([from_graph6(s) for s in d.get("graphs", [])])
        if kind == "generated":
            return GENERATED_BY([from_graph6(s) for s in d["graphs"]], d["mode"])
        return PRODUCT(*[property_from_dict(f) for f in d["factors"]])
    except (KeyError, TypeError, ValueError) as e:
        raise InputFormatError(f"bad property node for kind {kind!r}: {e}") from e


def property_to_dict(p: Property) -> dict:
    if p.kind == "kcolorable":
        return {"kind": "kcolorable", "k": p.k}
    if p.kind == "maxdegree":
        return {"kind": "maxdegree", "d": p.k}
    if p.kind in ("edgeless", "forest", "complete"):
        return {"kind": p.kind}
    if p.kind == "subgraphof":
        return {"kind": "subgraphof", "graph": to_graph6(p.graphs[0])}
    if p.kind in ("forbidden", "forbidden_induced"):
        return {"kind": p.kind, "graphs": [to_graph6(g) for g in p.graphs]}
    if p.kind == "generated":
        return {"kind": "generated", "graphs": [to_graph6(g) for g in p.graphs],
                "mode": p.mode}
    return {"kind": "product", "factors": [property_to_dict(f) for f in p.factors]}


def load_property_file(path: str) -> Property:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as e:
        raise InputFormatError(f"cannot read property file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise InputFormatError(f"property file {path} is not valid JSON: {e}") from e
    return property_from_dict(data)
