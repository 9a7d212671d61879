"""Exception hierarchy and the cell-budget guard.

Exit-code mapping used by the CLI: validation failures exit 2, budget
overruns exit 3, certificate failures exit 4.
"""

from __future__ import annotations

import os

DEFAULT_CELL_BUDGET = 1 << 22


class CuspforgeError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class ValidationError(CuspforgeError):
    """Malformed input: bad indices, broken invariants, failed preconditions."""

    exit_code = 2


class BudgetError(CuspforgeError):
    """An explicit construction would exceed the configured cell budget."""

    exit_code = 3


class CertificateError(CuspforgeError):
    """A certificate precondition failed (e.g. unverified filling)."""

    exit_code = 4


def cell_budget(override: int | None = None) -> int:
    """Resolve the cell cap: explicit argument, else CUSPFORGE_BUDGET, else default."""
    if override is not None:
        if override <= 0:
            raise ValidationError("cell budget must be positive")
        return override
    env = os.environ.get("CUSPFORGE_BUDGET")
    if env:
        try:
            value = int(env)
        except ValueError as exc:
            raise ValidationError(f"CUSPFORGE_BUDGET is not an integer: {env!r}") from exc
        if value <= 0:
            raise ValidationError("CUSPFORGE_BUDGET must be positive")
        return value
    return DEFAULT_CELL_BUDGET


def check_budget(n_cells: int, budget: int | None = None) -> None:
    cap = cell_budget(budget)
    if n_cells > cap:
        raise BudgetError(f"construction needs {n_cells} cells, budget is {cap}")
