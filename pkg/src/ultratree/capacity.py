"""Capacity fences for the exponential-cost operations.

Each fence has a built-in ceiling. The environment variable
``ULTRATREE_MAX_N`` may lower every fence (never raise one), so batch
runs can cap work globally.
"""

from __future__ import annotations

import os

from .errors import TooLarge

ENV_VAR = "ULTRATREE_MAX_N"

ENUMERATION_FENCE = 10     # weak-similarity class enumeration
SUBSET_SCAN_FENCE = 20     # scans over all 2^n subsets
ALL_SUBSETS_SPHERES_FENCE = 8   # per-class all-subset sphere campaigns
TREE_SEARCH_FENCE = 6      # exhaustive labeled-tree realizability search


def fence_limit(default: int) -> int:
    raw = os.environ.get(ENV_VAR)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        return default
    return min(default, value)


def require_within(what: str, n: int, default: int) -> None:
    limit = fence_limit(default)
    if n > limit:
        raise TooLarge(what, n, limit)
