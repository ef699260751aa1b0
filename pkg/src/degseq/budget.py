"""Term-count resource budget shared by the polynomial engines.

Iterated compositions can blow up exponentially; every operation that can
grow a polynomial checks the active budget and raises BudgetExceeded instead
of silently thrashing.  Callers that can degrade gracefully (degree
iteration, ball enumeration, the CLI) catch it and return partial results
with an explicit truncation marker.
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from contextvars import ContextVar

DEFAULT_TERM_BUDGET = 5_000_000

_active: ContextVar[int | None] = ContextVar("degseq_term_budget", default=None)


class BudgetExceeded(Exception):
    """A computation would exceed the active resource budget."""

    def __init__(self, needed: int, cap: int, unit: str = "terms"):
        super().__init__(f"budget exceeded: would need {needed} {unit}, cap is {cap}")
        self.needed = needed
        self.cap = cap
        self.unit = unit


def current_budget() -> int:
    """Active term cap: context override > DEGSEQ_BUDGET env var > default."""
    override = _active.get()
    if override is not None:
        return override
    env = os.environ.get("DEGSEQ_BUDGET")
    if env is not None:
        value = int(env)
        if value <= 0:
            raise ValueError("DEGSEQ_BUDGET must be a positive integer")
        return value
    return DEFAULT_TERM_BUDGET


@contextmanager
def term_budget(cap: int):
    """Scope a term-count cap (overrides the environment within the block)."""
    if cap <= 0:
        raise ValueError("term budget must be positive")
    token = _active.set(cap)
    try:
        yield
    finally:
        _active.reset(token)


def check_terms(count: int) -> None:
    cap = current_budget()
    if count > cap:
        raise BudgetExceeded(count, cap)
