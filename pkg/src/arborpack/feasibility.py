"""Subpartition conditions for packing spanning branchings and arborescences.

All checks scan every subpartition in canonical enumeration order and report
the first violated inequality, so results are reproducible.

Inequality tags follow the usual numbering of these conditions:

``(1)``  sum_X d^-(X) >= sum_X |P_I(X)| - sum_{i in I} (c_i - |U_i|)
         for branchings F_1..F_{k+1} with |R(F_i)| = c_i, R(F_i) >= U_i
``(2)``  sum_X d^-(X) >= k(|P| - 1)
``(3)``  sum_X d^-(X) >= k(|P| - 1) + #{X : X cap U = {}} - (c - |U|)
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .errors import ContractError, guard_size
from .graph import Digraph, from_mask, to_mask
from .partitions import as_lists, nu_f_digraph, subpartition_masks


@dataclass(frozen=True)
class BranchingSpec:
    """Target root count ``c`` and forced roots ``U`` of one branching."""

    c: int
    U: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "U", frozenset(self.U))
        if len(self.U) > self.c:
            raise ContractError(f"|U| = {len(self.U)} exceeds c = {self.c}")


@dataclass(frozen=True)
class Violation:
    inequality: str
    parts: tuple[frozenset[int], ...]
    I: tuple[int, ...]
    lhs: int
    rhs: int

    def to_json(self) -> dict:
        return {
            "inequality": self.inequality,
            "parts": as_lists(self.parts),
            "I": list(self.I),
            "lhs": self.lhs,
            "rhs": self.rhs,
        }


def _validate_specs(D: Digraph, specs: Sequence[BranchingSpec]) -> None:
    if not specs:
        raise ContractError("need at least one branching spec")
    for s in specs:
        if s.c > D.n:
            raise ContractError(f"c = {s.c} exceeds |V| = {D.n}")
        for v in s.U:
            if not 0 <= v < D.n:
                raise ContractError(f"root {v} outside 0..{D.n - 1}")


def check_pack_branching(
    D: Digraph, specs: Sequence[BranchingSpec], *, allow_large: bool = False
) -> Violation | None:
    """Return ``None`` iff arc-disjoint spanning branchings F_1..F_{k+1} with
    |R(F_i)| = c_i and R(F_i) containing U_i exist, else the first violation
    of inequality (1).

    ``I`` is reported 1-based; for each subpartition every nonempty I is tried
    in increasing bitmask order.
    """
    _validate_specs(D, specs)
    guard_size(D.n, allow_large)
    table = D.in_degree_table
    t = len(specs)
    umasks = [to_mask(s.U) for s in specs]
    slack = [s.c - len(s.U) for s in specs]
    for masks in subpartition_masks(D.n, 1):
        lhs = sum(table[m] for m in masks)
        # free[i] = number of parts missing U_i
        free = [sum(1 for m in masks if not m & u) for u in umasks]
        for imask in range(1, 1 << t):
            rhs = 0
            for i in range(t):
                if imask >> i & 1:
                    rhs += free[i] - slack[i]
            if lhs < rhs:
                I = tuple(i + 1 for i in range(t) if imask >> i & 1)
                return Violation("(1)", tuple(from_mask(m) for m in masks), I, lhs, rhs)
    return None


def check_k_plus_extra(
    D: Digraph, k: int, c: int, U: Iterable[int] = (), *, allow_large: bool = False
) -> Violation | None:
    """Conditions (2) and (3): k spanning arborescences plus a spanning
    branching with exactly ``c`` roots including ``U``.

    ``k = 0`` is accepted; then (2) is vacuous and only (3) is checked.
    """
    U = frozenset(U)
    if k < 0:
        raise ContractError("k must be non-negative")
    if len(U) > c:
        raise ContractError(f"|U| = {len(U)} exceeds c = {c}")
    if c > D.n:
        raise ContractError(f"c = {c} exceeds |V| = {D.n}")
    guard_size(D.n, allow_large)
    table = D.in_degree_table
    umask = to_mask(U)
    slack = c - len(U)
    I_trees = tuple(range(1, k + 1))
    for masks in subpartition_masks(D.n, 1):
        lhs = sum(table[m] for m in masks)
        base = k * (len(masks) - 1)
        if lhs < base:
            return Violation("(2)", tuple(from_mask(m) for m in masks), I_trees, lhs, base)
        rhs = base + sum(1 for m in masks if not m & umask) - slack
        if lhs < rhs:
            return Violation("(3)", tuple(from_mask(m) for m in masks), I_trees + (k + 1,), lhs, rhs)
    return None


def check_spanning_arborescences(D: Digraph, k: int, *, allow_large: bool = False) -> Violation | None:
    """``None`` iff nu_f(D) >= k; otherwise the minimizing subpartition,
    reported as a violation of (2)."""
    if k < 0:
        raise ContractError("k must be non-negative")
    if k == 0:
        return None
    best = nu_f_digraph(D, allow_large=allow_large)
    if best.value >= k:
        return None
    parts = best.witness
    lhs = sum(D.in_degree_mask(to_mask(p)) for p in parts)
    return Violation("(2)", parts, tuple(range(1, k + 1)), lhs, k * (len(parts) - 1))
