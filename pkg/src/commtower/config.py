"""Global resource settings.

The interval cap can be overridden with the ``COMMTOWER_INTERVAL_BUDGET``
environment variable; everything else is set in code or through the CLI.
"""
from __future__ import annotations

import os
import time
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from typing import Optional

from .errors import InvalidInput, TimeBudgetExceeded

ENV_INTERVAL_BUDGET = "COMMTOWER_INTERVAL_BUDGET"
DEFAULT_INTERVAL_CAP = 50_000_000


def _env_cap() -> int:
    raw = os.environ.get(ENV_INTERVAL_BUDGET)
    if raw is None:
        return DEFAULT_INTERVAL_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise InvalidInput(f"{ENV_INTERVAL_BUDGET} must be an integer, got {raw!r}") from exc
    if cap <= 0:
        raise InvalidInput(f"{ENV_INTERVAL_BUDGET} must be positive")
    return cap


@dataclass
class Settings:
    interval_cap: int = field(default_factory=_env_cap)
    # deepest dyadic partition used anywhere
    depth_cap: int = 40
    # total arcs a skyscraper construction may hold; this is a memory bound
    # well below interval_cap (roughly 100 bytes per arc while sweeping)
    tower_arc_budget: int = 4_000_000
    # branch-and-bound nodes per solver call
    node_budget: int = 2_000_000
    # wall-clock seconds per top-level call; None disables the check
    time_budget: Optional[float] = None
    _deadline: Optional[float] = field(default=None, repr=False)

    def validate(self):
        for name in ("interval_cap", "depth_cap", "node_budget", "tower_arc_budget"):
            if getattr(self, name) <= 0:
                raise InvalidInput(f"{name} must be positive")
        if self.time_budget is not None and self.time_budget <= 0:
            raise InvalidInput("time_budget must be positive")


settings = Settings()


@contextmanager
def limits(**overrides):
    """Temporarily override fields of the global settings."""
    global settings
    saved = settings
    new = replace(saved, **overrides)
    new.validate()
    if new.time_budget is not None:
        new._deadline = time.monotonic() + new.time_budget
    settings = new
    try:
        yield new
    finally:
        settings = saved


def current() -> Settings:
    return settings


def check_deadline(partial=None):
    s = settings
    if s._deadline is not None and time.monotonic() > s._deadline:
        raise TimeBudgetExceeded(f"time budget of {s.time_budget}s exceeded", partial)
