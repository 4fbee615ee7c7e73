"""Hot containment kernels: subgraph / induced-subgraph injection search.

Adjacency travels as int64 bitrows (bit u of row v set iff uv is an edge),
so everything here is branchy integer work on at most 62-bit masks.  The
same source function is used twice:

  * compiled with numba @njit (default when numba imports cleanly), and
  * interpreted as-is, the pure-Python fallback.

Set PROPFACT_PURE_PYTHON=1 before import to force the fallback.  Backend
choice never changes results, only speed; benchmarks/bench_kernels.py
compares the two.
"""
from __future__ import annotations

import os

import numpy as np

FORCE_PYTHON = os.environ.get("PROPFACT_PURE_PYTHON", "") not in ("", "0")

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAVE_NUMBA = False

    def njit(*args, **kwargs):  # type: ignore[misc]
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


def _injection_impl(h_rows, g_rows, n_h, n_g, induced):
    # Backtracking over injections V(g) -> V(h), mapping pattern vertices in
    # row order (callers pre-sort by descending degree).  rem[d] holds the
    # untried candidate images at depth d; used has the ancestors' images.
    if n_g == 0:
        return True
    if n_g > n_h:
        return False
    full = (1 << n_h) - 1
    rem = np.zeros(n_g, dtype=np.int64)
    image = np.zeros(n_g, dtype=np.int64)
    used = 0
    depth = 0
    rem[0] = full
    while depth >= 0:
        c = rem[depth]
        if c == 0:
            depth -= 1
            if depth >= 0:
                used &= ~(1 << image[depth])
            continue
        v = c & (-c)
        rem[depth] = c ^ v
        vi = 0
        while (v >> vi) & 1 == 0:
            vi += 1
        image[depth] = vi
        if depth + 1 == n_g:
            return True
        used |= v
        depth += 1
        # admissible images for the next pattern vertex, given the partial map
        m = full & ~used
        grow = g_rows[depth]
        for i in range(depth):
            if (grow >> i) & 1:
                m &= h_rows[image[i]]
            elif induced:
                m &= ~h_rows[image[i]]
        rem[depth] = m
    return False


_injection_njit = njit(cache=True)(_injection_impl) if HAVE_NUMBA else None


def injection_exists(h_rows, g_rows, induced: bool) -> bool:
    """True iff the pattern (g_rows) injects into the host (h_rows).

    Edge-preserving always; non-edge-preserving too when induced is set.
    Rows are sequences of int bitmasks; host/pattern order is their length.
    """
    n_h = len(h_rows)
    n_g = len(g_rows)
    h = np.asarray(h_rows, dtype=np.int64) if n_h else np.zeros(1, dtype=np.int64)
    g = np.asarray(g_rows, dtype=np.int64) if n_g else np.zeros(1, dtype=np.int64)
    if _injection_njit is not None and not FORCE_PYTHON:
        return bool(_injection_njit(h, g, n_h, n_g, induced))
    return bool(_injection_impl(h, g, n_h, n_g, induced))


def injection_exists_python(h_rows, g_rows, induced: bool) -> bool:
    """Pure-Python twin of injection_exists, for tests and benchmarks."""
    n_h = len(h_rows)
    n_g = len(g_rows)
    h = np.asarray(h_rows, dtype=np.int64) if n_h else np.zeros(1, dtype=np.int64)
    g = np.asarray(g_rows, dtype=np.int64) if n_g else np.zeros(1, dtype=np.int64)
    return bool(_injection_impl(h, g, n_h, n_g, induced))


def injection_exists_numba(h_rows, g_rows, induced: bool):
    """Compiled twin, or None when the numba backend is unavailable."""
    if _injection_njit is None:
        return None
    n_h = len(h_rows)
    n_g = len(g_rows)
    h = np.asarray(h_rows, dtype=np.int64) if n_h else np.zeros(1, dtype=np.int64)
    g = np.asarray(g_rows, dtype=np.int64) if n_g else np.zeros(1, dtype=np.int64)
    return bool(_injection_njit(h, g, n_h, n_g, induced))


def active_backend() -> str:
    """Name of the backend injection_exists dispatches to."""
    if _injection_njit is not None and not FORCE_PYTHON:
        return "numba"
    return "python"
