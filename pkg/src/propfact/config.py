"""Default bounds and the run configuration carried by the CLI.

All quantities over infinite properties are computed as bounded-order
certificates; these are the default bounds.
"""
from __future__ import annotations

from dataclasses import dataclass

# Hard representation limit: adjacency bitrows are signed 64-bit in the
# compiled kernels, so vertex indices must stay below 62.
MAX_VERTICES = 62

DEFAULT_ORDER_CAP = 10   # largest order enumerate_graphs will accept
DEFAULT_BOUND = 6        # bounded-order certificate default
DEFAULT_K_MAX = 2        # blow-up factor checked for decomposition conditions
DEFAULT_K_CAP = 3        # search ceiling for the exclusion-construction k
DEFAULT_GSTAR_ORDER_CAP = 60   # abort threshold for the iterated construction
DEFAULT_CROSS_CAP = 20   # max cross pairs expanded when streaming a star join


@dataclass(frozen=True)
class RunConfig:
    """Bounds and output options for one CLI invocation."""

    order_cap: int = DEFAULT_ORDER_CAP
    bound: int = DEFAULT_BOUND
    k_max: int = DEFAULT_K_MAX
    k_cap: int = DEFAULT_K_CAP
    parallelism: int = 1
    output_format: str = "json"  # "json" | "text"

    def __post_init__(self) -> None:
        if self.bound > self.order_cap:
            raise ValueError("bound must not exceed order_cap")
        if self.order_cap > MAX_VERTICES:
            raise ValueError(f"order_cap must be <= {MAX_VERTICES}")
        if self.output_format not in ("json", "text"):
            raise ValueError("output format must be 'json' or 'text'")
