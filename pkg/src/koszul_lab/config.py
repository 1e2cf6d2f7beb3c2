"""Budget configuration.

A single integer budget (CLI ``--budget`` or env ``KOSZUL_LAB_BUDGET``)
caps every enumeration; finer-grained caps can be set on the dataclass
directly.  Exceeding a cap always raises ``BudgetExceededError``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_ENUMERATION_CAP = 1_000_000
DEFAULT_REALIZE_DIM_CAP = 200_000
DEFAULT_GRAPH_VERTEX_CAP = 10_000
DEFAULT_BASIS_DIM_CAP = 4

ENV_VAR = "KOSZUL_LAB_BUDGET"


@dataclass(frozen=True)
class Budget:
    """Hard caps for the enumeration kernels.

    max_enumeration  -- subspace / basis enumeration item count
    max_realize_dim  -- working dimension (dims[n] * generators) in realize
    graph_vertex_cap -- vertices per confluence graph
    basis_dim_cap    -- largest d for which unordered bases are enumerated
    """

    max_enumeration: int = DEFAULT_ENUMERATION_CAP
    max_realize_dim: int = DEFAULT_REALIZE_DIM_CAP
    graph_vertex_cap: int = DEFAULT_GRAPH_VERTEX_CAP
    basis_dim_cap: int = DEFAULT_BASIS_DIM_CAP

    @staticmethod
    def from_int(cap: int) -> "Budget":
        return Budget(max_enumeration=cap)

    @staticmethod
    def from_env() -> "Budget":
        raw = os.environ.get(ENV_VAR)
        if raw is None:
            return Budget()
        try:
            return Budget.from_int(int(raw))
        except ValueError:
            raise ValueError(f"{ENV_VAR} must be an integer, got {raw!r}")


DEFAULT_BUDGET = Budget()
