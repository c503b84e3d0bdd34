"""Branchings, arborescences and a backtracking search for arc-disjoint
packings of spanning branchings with prescribed root constraints.

The search processes vertices in increasing order. At vertex ``v`` every slot
(one per branching) either makes ``v`` a root or picks one unused arc entering
``v``. A vertex gets at most one entering arc per slot, so each slot is a
branching as soon as it is acyclic; cycles are rejected the moment they close.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass, field

from .errors import ContractError
from .graph import Digraph


class InvalidBranching(ContractError):
    """An arc set is not a branching; ``reason`` says why."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


def branching_roots(D: Digraph, arcs: Iterable[int]) -> frozenset[int]:
    """Root set of the spanning branching with the given arcs.

    Raises :class:`InvalidBranching` on a vertex with two entering arcs or a
    directed cycle.
    """
    parent: dict[int, int] = {}
    for aid in arcs:
        a = D.arc(aid)
        if a.head in parent:
            raise InvalidBranching(f"vertex {a.head} has in-degree at least 2")
        parent[a.head] = a.tail
    for start in parent:
        seen = {start}
        v = start
        while v in parent:
            v = parent[v]
            if v in seen:
                raise InvalidBranching(f"directed cycle through vertex {v}")
            seen.add(v)
    return frozenset(v for v in range(D.n) if v not in parent)


def is_branching(D: Digraph, arcs: Iterable[int]) -> bool:
    try:
        branching_roots(D, arcs)
    except InvalidBranching:
        return False
    return True


def components(D: Digraph, arcs: Iterable[int]) -> dict[int, frozenset[int]]:
    """Vertex set of each component of a spanning branching, keyed by root."""
    parent = {}
    for aid in arcs:
        a = D.arc(aid)
        parent[a.head] = a.tail
    groups: dict[int, set[int]] = {}
    for v in range(D.n):
        r = v
        while r in parent:
            r = parent[r]
        groups.setdefault(r, set()).add(v)
    return {r: frozenset(vs) for r, vs in groups.items()}


def component_arc_counts(D: Digraph, arcs: Iterable[int]) -> dict[int, int]:
    return {r: len(vs) - 1 for r, vs in components(D, arcs).items()}


@dataclass(frozen=True)
class Branching:
    arcs: frozenset[int]
    roots: frozenset[int]

    @classmethod
    def of(cls, D: Digraph, arcs: Iterable[int]) -> Branching:
        arcs = frozenset(arcs)
        return cls(arcs, branching_roots(D, arcs))

    @property
    def root(self) -> int:
        if len(self.roots) != 1:
            raise ContractError("not an arborescence: root set has size %d" % len(self.roots))
        return next(iter(self.roots))

    def is_arborescence(self) -> bool:
        return len(self.roots) == 1

    def to_json(self, D: Digraph) -> dict:
        arcs = [D.arc(a).as_list() for a in sorted(self.arcs)]
        return {"roots": sorted(self.roots), "arcs": arcs}


@dataclass(frozen=True)
class Slot:
    """Root constraints for one branching in a packing search.

    ``forced`` vertices must be roots. ``root_first`` only affects which
    solution is found first.
    """

    min_roots: int = 1
    max_roots: int = 1
    forced: frozenset[int] = field(default_factory=frozenset)
    root_first: bool = True

    @classmethod
    def arborescence(cls) -> Slot:
        return cls(1, 1)

    @classmethod
    def exactly(cls, c: int, forced: Iterable[int] = ()) -> Slot:
        return cls(c, c, frozenset(forced), root_first=False)


_ROOT = -1


def pack_branchings(
    D: Digraph,
    slots: Sequence[Slot],
    accept: Callable[[list[frozenset[int]]], bool] | None = None,
    symmetric: Sequence[tuple[int, int]] = (),
    allowed: Iterable[int] | None = None,
) -> Iterator[list[frozenset[int]]]:
    """Yield arc-disjoint spanning branchings satisfying ``slots``.

    Each solution is a list of arc-id sets, one per slot. ``accept`` filters
    complete solutions. ``symmetric`` lists pairs ``(i, j)`` of interchangeable
    slots; only solutions where slot i's choice sequence is lexicographically
    at most slot j's are produced. ``allowed`` restricts the usable arcs.
    """
    n = D.n
    t = len(slots)
    if allowed is None:
        usable = [list(D.in_arcs[v]) for v in range(n)]
    else:
        allowed = frozenset(allowed)
        usable = [[a for a in D.in_arcs[v] if a.id in allowed] for v in range(n)]
    for s in slots:
        if s.min_roots > s.max_roots:
            raise ContractError("slot has min_roots > max_roots")
    forced_after = []  # forced_after[v][s]: forced roots of slot s among vertices >= v
    for v in range(n + 1):
        forced_after.append([sum(1 for u in s.forced if u >= v) for s in slots])
    avail_after = [0] * (n + 1)
    for v in range(n - 1, -1, -1):
        avail_after[v] = avail_after[v + 1] + len(usable[v])

    parent: list[list[int]] = [[-1] * n for _ in range(t)]
    chosen: list[list[int]] = [[] for _ in range(t)]
    arcs_of: list[list[int]] = [[] for _ in range(t)]
    roots = [0] * t
    used: set[int] = set()
    # tied[p] is True while the symmetric pair p has made equal choices so far
    tied = [True] * len(symmetric)
    sym_by_second: dict[int, list[int]] = {}
    for p, (i, j) in enumerate(symmetric):
        sym_by_second.setdefault(j, []).append(p)

    def closes_cycle(s: int, tail: int, v: int) -> bool:
        u = tail
        par = parent[s]
        while u != -1:
            if u == v:
                return True
            u = par[u]
        return False

    def feasible_rest(v: int) -> bool:
        # Counting bound for vertices v..n-1.
        remaining = n - v
        need = 0
        for s, slot in enumerate(slots):
            if roots[s] + forced_after[v][s] > slot.max_roots:
                return False
            if roots[s] + remaining < slot.min_roots:
                return False
            need += max(0, remaining - (slot.max_roots - roots[s]))
        return need <= avail_after[v]

    def options(s: int, v: int) -> list[int]:
        slot = slots[s]
        if v in slot.forced:
            return [_ROOT]
        arcs = [a.id for a in usable[v] if a.id not in used]
        can_root = roots[s] < slot.max_roots
        if not can_root:
            return arcs
        return [_ROOT] + arcs if slot.root_first else arcs + [_ROOT]

    def rec_vertex(v: int) -> Iterator[list[frozenset[int]]]:
        if v == n:
            if all(slots[s].min_roots <= roots[s] <= slots[s].max_roots for s in range(t)):
                sol = [frozenset(arcs_of[s]) for s in range(t)]
                if accept is None or accept(sol):
                    yield sol
            return
        if not feasible_rest(v):
            return
        yield from rec_slot(v, 0)

    def rec_slot(v: int, s: int) -> Iterator[list[frozenset[int]]]:
        if s == t:
            yield from rec_vertex(v + 1)
            return
        for choice in options(s, v):
            # symmetry: slot s must not choose smaller than its tied partner
            saved = []
            ok = True
            for p in sym_by_second.get(s, ()):
                if not tied[p]:
                    continue
                i, _ = symmetric[p]
                other = chosen[i][v]
                if choice < other:
                    ok = False
                    break
                if choice > other:
                    saved.append(p)
            if not ok:
                continue
            if choice == _ROOT:
                roots[s] += 1
            else:
                a = D.arc_by_id[choice]
                if closes_cycle(s, a.tail, v):
                    continue
                parent[s][v] = a.tail
                used.add(choice)
                arcs_of[s].append(choice)
            chosen[s].append(choice)
            for p in saved:
                tied[p] = False
            yield from rec_slot(v, s + 1)
            for p in saved:
                tied[p] = True
            chosen[s].pop()
            if choice == _ROOT:
                roots[s] -= 1
            else:
                parent[s][v] = -1
                used.discard(choice)
                arcs_of[s].pop()

    yield from rec_vertex(0)


def tree_symmetry(k: int) -> list[tuple[int, int]]:
    """Adjacent-pair symmetry breaking for k interchangeable arborescence slots."""
    return [(i, i + 1) for i in range(k - 1)]


def find_branching_packing(
    D: Digraph, specs: Sequence[tuple[int, Iterable[int]]]
) -> list[Branching] | None:
    """Exhaustive search for branchings F_i with |R(F_i)| = c_i, R(F_i) >= U_i.

    ``specs`` is a sequence of ``(c, U)`` pairs.
    """
    slots = [Slot(c, c, frozenset(U), root_first=(c == 1)) for c, U in specs]
    sol = next(pack_branchings(D, slots), None)
    if sol is None:
        return None
    return [Branching.of(D, arcs) for arcs in sol]


def find_k_plus_extra(
    D: Digraph, k: int, c: int, U: Iterable[int] = (), allowed: Iterable[int] | None = None
) -> tuple[list[Branching], Branching] | None:
    """k spanning arborescences plus a spanning c-branching whose roots contain U."""
    slots = [Slot.arborescence() for _ in range(k)] + [Slot.exactly(c, U)]
    sol = next(pack_branchings(D, slots, symmetric=tree_symmetry(k), allowed=allowed), None)
    if sol is None:
        return None
    trees = [Branching.of(D, arcs) for arcs in sol[:k]]
    return trees, Branching.of(D, sol[k])
