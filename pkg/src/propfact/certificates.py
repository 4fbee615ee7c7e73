"""Bounded-order verification records.

A Certificate never claims more than its bound: verdicts are
"verified-at-bound", "refuted" (with a concrete counterexample), or
"inconclusive".  Serialized form is stable across runs (runtime is kept on
the object but excluded from reports unless asked for).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .graphs import Graph, to_graph6

VERIFIED = "verified-at-bound"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"

SCHEMA_VERSION = 1


def graph_witness(g: Graph) -> dict[str, Any]:
    """Stable JSON shape for a graph witness: graph6 plus order."""
    return {"graph6": to_graph6(g), "order": g.n}


def labeling_witness(parts) -> list[list[int]]:
    """Vertex partition as sorted lists, ordered by smallest member."""
    out = [sorted(p) for p in parts]
    return sorted(out, key=lambda p: (len(p) == 0, p))


@dataclass
class Certificate:
    claim: str
    statement: str
    verdict: str
    bound: int | None = None
    k_max: int | None = None
    anchor: str = ""
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    runtime_s: float | None = None

    def __post_init__(self) -> None:
        if self.verdict not in (VERIFIED, REFUTED, INCONCLUSIVE):
            raise ValueError(f"bad verdict {self.verdict!r}")
        if self.verdict == REFUTED and not self.witnesses:
            raise ValueError("refuted certificates must carry a counterexample")

    @property
    def ok(self) -> bool:
        return self.verdict != REFUTED

    def to_dict(self, include_runtime: bool = False) -> dict[str, Any]:
        d: dict[str, Any] = {
            "schema": SCHEMA_VERSION,
            "claim": self.claim,
            "statement": self.statement,
            "anchor": self.anchor or self.claim,
            "verdict": self.verdict,
            "bound": self.bound,
            "k_max": self.k_max,
            "witnesses": self.witnesses,
            "details": self.details,
        }
        if include_runtime:
            d["runtime_s"] = self.runtime_s
        return d
