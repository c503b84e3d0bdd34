"""Subpartition enumeration and the exact ratios nu_f(D), nu_f(G), gamma_f(G).

A subpartition is a tuple of pairwise-disjoint nonempty vertex sets in
canonical form: each part is a ``frozenset``; parts are ordered by their least
element. Internally parts are bitmasks.

Everything is computed by exhaustive enumeration with ``Fraction`` arithmetic.
The number of subpartitions of an n-set is the Bell number B(n+1), so this is
practical up to roughly n = 12.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ContractError, guard_size
from .graph import Digraph, Graph, from_mask, to_mask

SubPartition = tuple  # tuple[frozenset[int], ...] in canonical order


def _gen_masks(n: int, min_parts: int, cover: bool) -> Iterator[tuple[int, ...]]:
    # Vertex v either joins an existing block, opens a new one, or (when not
    # covering) stays out. Blocks are therefore ordered by least element.
    blocks: list[int] = []

    def rec(v: int) -> Iterator[tuple[int, ...]]:
        if v == n:
            if len(blocks) >= min_parts and blocks:
                yield tuple(blocks)
            return
        # remaining vertices can open at most n - v new blocks
        if len(blocks) + (n - v) < min_parts:
            return
        bit = 1 << v
        if not cover:
            yield from rec(v + 1)
        for i in range(len(blocks)):
            blocks[i] |= bit
            yield from rec(v + 1)
            blocks[i] ^= bit
        blocks.append(bit)
        yield from rec(v + 1)
        blocks.pop()

    yield from rec(0)


@lru_cache(maxsize=64)
def subpartition_masks(n: int, min_parts: int = 1, cover: bool = False) -> tuple[tuple[int, ...], ...]:
    """All (sub)partitions of ``range(n)`` as tuples of bitmasks, cached."""
    return tuple(_gen_masks(n, min_parts, cover))


def enumerate_subpartitions(n: int, min_parts: int = 1) -> Iterator[SubPartition]:
    """Yield every subpartition of ``{0..n-1}`` with at least ``min_parts`` parts.

    Each is produced exactly once. The order is the canonical enumeration
    order used throughout the package (first-violation reporting etc.).
    """
    if n < 1:
        raise ContractError("n must be at least 1")
    for masks in _gen_masks(n, min_parts, cover=False):
        yield tuple(from_mask(m) for m in masks)


def enumerate_partitions(n: int, min_parts: int = 1) -> Iterator[SubPartition]:
    if n < 1:
        raise ContractError("n must be at least 1")
    for masks in _gen_masks(n, min_parts, cover=True):
        yield tuple(from_mask(m) for m in masks)


def canonical(parts: Sequence[object]) -> SubPartition:
    """Canonical form of a subpartition; rejects overlapping or empty parts."""
    sets = [frozenset(p) for p in parts]
    seen: set[int] = set()
    for s in sets:
        if not s:
            raise ContractError("subpartition parts must be nonempty")
        if seen & s:
            raise ContractError("subpartition parts must be pairwise disjoint")
        seen |= s
    return tuple(sorted(sets, key=min))


def sort_key(parts: Sequence[frozenset[int]]) -> tuple[tuple[int, ...], ...]:
    """Lexicographic key of a canonical subpartition."""
    return tuple(tuple(sorted(p)) for p in parts)


def _mask_key(masks: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(sorted(from_mask(m))) for m in masks)


def as_lists(parts: Sequence[frozenset[int]]) -> list[list[int]]:
    return [sorted(p) for p in parts]


@dataclass(frozen=True)
class RatioWitness:
    value: Fraction
    witness: SubPartition

    def to_json(self) -> dict:
        return {"value": fraction_str(self.value), "witness": as_lists(self.witness)}


def fraction_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _best(candidates, better) -> tuple[Fraction, tuple[int, ...]] | None:
    best_val = None
    best_masks = None
    best_key = None
    for val, masks in candidates:
        if best_val is None or better(val, best_val):
            best_val, best_masks, best_key = val, masks, None
        elif val == best_val:
            if best_key is None:
                best_key = _mask_key(best_masks)
            key = _mask_key(masks)
            if key < best_key:
                best_masks, best_key = masks, key
    if best_val is None:
        return None
    return best_val, best_masks


def subpartition_ratio(D: Digraph, parts: Sequence[object]) -> Fraction:
    """sum_{X in P} d^-(X) / (|P| - 1) for a single subpartition with |P| > 1."""
    parts = canonical(parts)
    if len(parts) < 2:
        raise ContractError("ratio needs at least two parts")
    total = sum(D.in_degree_mask(to_mask(p)) for p in parts)
    return Fraction(total, len(parts) - 1)


def nu_f_digraph(D: Digraph, *, allow_large: bool = False) -> RatioWitness:
    """Fractional packing number of a digraph, with the lexicographically
    least minimizing subpartition."""
    if D.n < 2:
        raise ContractError("nu_f is undefined for fewer than two vertices")
    guard_size(D.n, allow_large)
    table = D.in_degree_table

    def candidates():
        for masks in subpartition_masks(D.n, 2):
            yield Fraction(sum(table[m] for m in masks), len(masks) - 1), masks

    val, masks = _best(candidates(), lambda a, b: a < b)
    return RatioWitness(val, tuple(from_mask(m) for m in masks))


def _crossing_edges(G: Graph, masks: Sequence[int]) -> int:
    where = {}
    for i, m in enumerate(masks):
        for v in from_mask(m):
            where[v] = i
    return sum(1 for e in G.edges if where.get(e.u, -1) != where.get(e.v, -1))


def nu_f_graph(G: Graph, *, allow_large: bool = False) -> RatioWitness:
    """Nash-Williams--Tutte ratio: min over partitions with >= 2 parts of
    crossing edges / (parts - 1)."""
    if G.n < 2:
        raise ContractError("nu_f is undefined for fewer than two vertices")
    guard_size(G.n, allow_large)

    def candidates():
        for masks in subpartition_masks(G.n, 2, True):
            yield Fraction(_crossing_edges(G, masks), len(masks) - 1), masks

    val, masks = _best(candidates(), lambda a, b: a < b)
    return RatioWitness(val, tuple(from_mask(m) for m in masks))


def gamma_f(G: Graph | Digraph, *, allow_large: bool = False) -> RatioWitness:
    """Fractional arboricity max_{|X|>1} |E(X)| / (|X| - 1).

    A digraph is measured through its underlying multigraph. The witness is
    a one-part tuple ``(X,)``.
    """
    if isinstance(G, Digraph):
        G = G.underlying()
    if G.n < 2:
        raise ContractError("gamma_f is undefined for fewer than two vertices")
    guard_size(G.n, allow_large)

    def candidates():
        for mask in range(1, 1 << G.n):
            size = mask.bit_count()
            if size > 1:
                yield Fraction(G.inside_count_mask(mask), size - 1), (mask,)

    val, masks = _best(candidates(), lambda a, b: a > b)
    return RatioWitness(val, (from_mask(masks[0]),))


def hypothesis_threshold(k: int, d: int) -> Fraction:
    return k + Fraction(d - 1, d)


def hypothesis_holds(D: Digraph, k: int, d: int, *, allow_large: bool = False) -> bool:
    """Exact test of nu_f(D) > k + (d-1)/d."""
    if k < 0 or d < 1:
        raise ContractError("need k >= 0 and d >= 1")
    return nu_f_digraph(D, allow_large=allow_large).value > hypothesis_threshold(k, d)
