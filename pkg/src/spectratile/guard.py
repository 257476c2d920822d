"""Enumeration guard for operations that walk a whole group Z_m^d.

Searches and lifts enumerate up to m^d cells.  A guard caps that count so a
typo'd modulus fails fast instead of exhausting memory.  Precedence: explicit
argument, then the SPECTRATILE_GUARD environment variable, then the default.
"""

from __future__ import annotations

import os

DEFAULT_GUARD = 10_000_000
GUARD_ENV_VAR = "SPECTRATILE_GUARD"


class GuardExceeded(ValueError):
    """An operation would enumerate more cells than the guard allows."""


def resolve_guard(guard: int | None = None) -> int:
    if guard is not None:
        if guard < 1:
            raise ValueError(f"guard must be positive, got {guard}")
        return guard
    env = os.environ.get(GUARD_ENV_VAR)
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"{GUARD_ENV_VAR} must be an integer, got {env!r}") from None
        if value < 1:
            raise ValueError(f"{GUARD_ENV_VAR} must be positive, got {value}")
        return value
    return DEFAULT_GUARD


def check_guard(cells: int, guard: int | None = None) -> None:
    limit = resolve_guard(guard)
    if cells > limit:
        raise GuardExceeded(f"enumeration of {cells} cells exceeds the guard of {limit}")
