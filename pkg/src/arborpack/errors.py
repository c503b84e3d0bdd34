from __future__ import annotations

import os

DEFAULT_MAX_N = 20
MAX_N_ENV = "ARBORPACK_MAX_N"


class ArborpackError(Exception):
    """Base class for all library errors."""


class ContractError(ArborpackError, ValueError):
    """An argument violates an operation's precondition."""


class LoopError(ContractError):
    """An arc or edge joins a vertex to itself; loops are not allowed."""


class SizeGuardError(ArborpackError, ValueError):
    """The instance is too large for exhaustive enumeration."""


class HypothesisError(ArborpackError, ValueError):
    """The packing hypothesis nu_f(D) > k + (d-1)/d does not hold."""

    def __init__(self, message: str, value=None, witness=None):
        super().__init__(message)
        self.value = value
        self.witness = witness


def max_n() -> int:
    """Vertex-count limit for exhaustive enumeration (env override allowed)."""
    raw = os.environ.get(MAX_N_ENV)
    if raw is None or raw == "":
        return DEFAULT_MAX_N
    try:
        return int(raw)
    except ValueError:
        raise ContractError(f"{MAX_N_ENV} must be an integer, got {raw!r}") from None


def guard_size(n: int, allow_large: bool = False, limit: int | None = None) -> None:
    if allow_large:
        return
    limit = max_n() if limit is None else limit
    if n > limit:
        raise SizeGuardError(
            f"n={n} exceeds the enumeration limit {limit}; "
            f"pass allow_large=True or set {MAX_N_ENV}"
        )
