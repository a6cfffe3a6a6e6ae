"""Default budgets, overridable through environment variables."""

from __future__ import annotations

import os

NODE_BUDGET_ENV = "PETRIDETECT_NODE_BUDGET"
CYCLE_BUDGET_ENV = "PETRIDETECT_CYCLE_BUDGET"

_DEFAULT_NODE_BUDGET = 1_000_000
_DEFAULT_CYCLE_BUDGET = 100_000


def _from_env(name: str, fallback: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return fallback
    value = int(raw)
    if value <= 0:
        raise ValueError(f"{name} must be a positive integer, got {raw!r}")
    return value


def default_node_budget() -> int:
    return _from_env(NODE_BUDGET_ENV, _DEFAULT_NODE_BUDGET)


def default_cycle_budget() -> int:
    return _from_env(CYCLE_BUDGET_ENV, _DEFAULT_CYCLE_BUDGET)
