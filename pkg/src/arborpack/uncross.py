"""Uncrossing of set families by repeated (X, Y) -> (X | Y, X & Y).

Families are multisets, represented as lists of ``frozenset[int]``. Starting
from the multiset union of two subpartitions, properly intersecting pairs are
replaced until none remain. The distinct maximal members of the result form
``f3`` and the leftover copies form ``f4``; both are subpartitions and
``|F1| + |F2| = |f3| + |f4|``.
"""

from __future__ import annotations

import random
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .errors import ArborpackError, ContractError
from .graph import Digraph, to_mask
from .partitions import as_lists

Family = list  # list[frozenset[int]]


class SubmodularityError(ArborpackError, AssertionError):
    """A step increased the total in-degree, which submodularity forbids."""


def properly_intersecting(X: Iterable[int], Y: Iterable[int]) -> bool:
    X, Y = frozenset(X), frozenset(Y)
    return bool(X & Y) and bool(X - Y) and bool(Y - X)


def is_laminar(F: Iterable[Iterable[int]]) -> bool:
    F = [frozenset(x) for x in F]
    return not any(
        properly_intersecting(F[i], F[j]) for i in range(len(F)) for j in range(i + 1, len(F))
    )


def _key(x: frozenset[int]) -> tuple[int, ...]:
    return tuple(sorted(x))


def canonical_family(F: Iterable[Iterable[int]]) -> Family:
    return sorted((frozenset(x) for x in F), key=_key)


def pieo_step(F: Iterable[Iterable[int]], X: Iterable[int], Y: Iterable[int]) -> Family:
    """Remove one copy each of X and Y, add X | Y and X & Y."""
    F = [frozenset(x) for x in F]
    X, Y = frozenset(X), frozenset(Y)
    if not properly_intersecting(X, Y):
        raise ContractError("pair is not properly intersecting")
    counts = Counter(F)
    need = Counter([X, Y])
    if any(counts[s] < c for s, c in need.items()):
        raise ContractError("pair is not contained in the family")
    out = list(F)
    out.remove(X)
    out.remove(Y)
    out.extend([X | Y, X & Y])
    return canonical_family(out)


@dataclass(frozen=True)
class PieoTrace:
    initial: tuple[frozenset[int], ...]
    steps: tuple[tuple[tuple[frozenset[int], frozenset[int]], tuple[frozenset[int], frozenset[int]]], ...]
    final: tuple[frozenset[int], ...]
    f3: tuple[frozenset[int], ...]
    f4: tuple[frozenset[int], ...]

    def families(self) -> list[Family]:
        """Every intermediate family G_0, ..., G_n (canonically sorted)."""
        fam = canonical_family(self.initial)
        out = [fam]
        for (x, y), _ in self.steps:
            fam = pieo_step(fam, x, y)
            out.append(fam)
        return out

    def to_json(self) -> dict:
        return {
            "initial": as_lists(self.initial),
            "steps": [
                {"replaced": as_lists(old), "introduced": as_lists(new)} for old, new in self.steps
            ],
            "final": as_lists(self.final),
            "f3": as_lists(self.f3),
            "f4": as_lists(self.f4),
        }


def _check_subpartition(P: Sequence[Iterable[int]], name: str) -> list[frozenset[int]]:
    sets = [frozenset(x) for x in P]
    seen: set[int] = set()
    for s in sets:
        if not s:
            raise ContractError(f"{name} has an empty member")
        if seen & s:
            raise ContractError(f"{name} is not a subpartition (members overlap)")
        seen |= s
    return sets


def maximal_split(final: Sequence[frozenset[int]]) -> tuple[Family, Family]:
    """Distinct maximal members, and the multiset of everything else."""
    distinct = set(final)
    maximal = [x for x in distinct if not any(x < y for y in distinct)]
    f3 = canonical_family(maximal)
    rest = Counter(final)
    for x in f3:
        rest[x] -= 1
    f4 = canonical_family(x for x, c in rest.items() for _ in range(c))
    return f3, f4


def pieo_run(
    F1: Sequence[Iterable[int]],
    F2: Sequence[Iterable[int]],
    rng: random.Random | None = None,
) -> PieoTrace:
    """Uncross F1 + F2 until laminar.

    By default the lexicographically least properly intersecting pair of the
    canonically sorted family is replaced at each step; with ``rng`` a uniformly
    random properly intersecting pair is used instead.
    """
    F1 = _check_subpartition(F1, "F1")
    F2 = _check_subpartition(F2, "F2")
    fam = canonical_family(F1 + F2)
    initial = tuple(fam)
    steps = []
    while True:
        pairs = [
            (i, j)
            for i in range(len(fam))
            for j in range(i + 1, len(fam))
            if properly_intersecting(fam[i], fam[j])
        ]
        if not pairs:
            break
        i, j = pairs[0] if rng is None else rng.choice(pairs)
        X, Y = fam[i], fam[j]
        steps.append(((X, Y), (X | Y, X & Y)))
        fam = pieo_step(fam, X, Y)
    f3, f4 = maximal_split(fam)
    return PieoTrace(initial, tuple(steps), tuple(fam), tuple(f3), tuple(f4))


def family_in_degree(D: Digraph, F: Iterable[Iterable[int]]) -> int:
    return sum(D.in_degree_mask(to_mask(x)) for x in F)


def submodular_chain_check(D: Digraph, trace: PieoTrace) -> bool:
    """Walk the trace summing d^- over each family.

    Raises :class:`SubmodularityError` if the total ever increases; returns
    True iff every step kept it equal.
    """
    totals = [family_in_degree(D, fam) for fam in trace.families()]
    all_equal = True
    for before, after in zip(totals, totals[1:]):
        if after > before:
            raise SubmodularityError(f"in-degree total rose from {before} to {after}")
        if after < before:
            all_equal = False
    return all_equal
