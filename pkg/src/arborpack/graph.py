"""Loop-free multi-digraphs and multigraphs.

Vertices are dense integers ``0..n-1``. Vertex sets are passed around as
``frozenset[int]`` at the public surface; hot loops work on integer bitmasks
(bit ``v`` set iff ``v`` is in the set), see :func:`to_mask` / :func:`from_mask`.

Graphs are immutable. Every "mutating" operation returns a new object and
leaves arc ids of untouched arcs unchanged.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
from functools import cached_property

from .errors import ContractError, LoopError

VertexSet = frozenset


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def from_mask(mask: int) -> frozenset[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return frozenset(out)


def mask_members(mask: int) -> list[int]:
    return sorted(from_mask(mask))


def _check_subset(n: int, vertices: Iterable[int]) -> frozenset[int]:
    vs = frozenset(vertices)
    for v in vs:
        if not isinstance(v, int) or v < 0 or v >= n:
            raise ContractError(f"vertex {v!r} is outside 0..{n - 1}")
    return vs


@dataclass(frozen=True)
class Arc:
    id: int
    tail: int
    head: int

    def as_list(self) -> list[int]:
        return [self.tail, self.head, self.id]


@dataclass(frozen=True)
class Digraph:
    """A loop-free multi-digraph with stable arc ids."""

    n: int
    arcs: tuple[Arc, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ContractError("vertex count must be non-negative")
        object.__setattr__(self, "arcs", tuple(self.arcs))
        seen = set()
        for a in self.arcs:
            if not (0 <= a.tail < self.n and 0 <= a.head < self.n):
                raise ContractError(f"arc {a} has an endpoint outside 0..{self.n - 1}")
            if a.tail == a.head:
                raise LoopError(f"arc {a.id} is a loop at vertex {a.tail}; loops are not allowed")
            if a.id in seen:
                raise ContractError(f"duplicate arc id {a.id}")
            seen.add(a.id)

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> Digraph:
        """Build a digraph whose arc ids are the positions of ``pairs``."""
        return cls(n, tuple(Arc(i, t, h) for i, (t, h) in enumerate(pairs)))

    @property
    def m(self) -> int:
        return len(self.arcs)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(range(self.n))

    @cached_property
    def arc_by_id(self) -> dict[int, Arc]:
        return {a.id: a for a in self.arcs}

    def arc(self, arc_id: int) -> Arc:
        try:
            return self.arc_by_id[arc_id]
        except KeyError:
            raise ContractError(f"unknown arc id {arc_id}") from None

    @cached_property
    def in_arcs(self) -> tuple[tuple[Arc, ...], ...]:
        """Arcs entering each vertex, sorted by id."""
        buckets: list[list[Arc]] = [[] for _ in range(self.n)]
        for a in sorted(self.arcs, key=lambda a: a.id):
            buckets[a.head].append(a)
        return tuple(tuple(b) for b in buckets)

    def in_degree_mask(self, mask: int) -> int:
        """Number of arcs with tail outside ``mask`` and head inside it."""
        count = 0
        for a in self.arcs:
            if (mask >> a.head) & 1 and not (mask >> a.tail) & 1:
                count += 1
        return count

    @cached_property
    def in_degree_table(self) -> list[int]:
        """``table[mask]`` is the set in-degree of ``mask``, for every mask.

        Memory is ``2**n`` ints; only used by exhaustive routines that are
        already exponential in ``n``.
        """
        full = 1 << self.n
        table = [0] * full
        for a in self.arcs:
            hb, tb = 1 << a.head, 1 << a.tail
            for mask in range(full):
                if mask & hb and not mask & tb:
                    table[mask] += 1
        return table

    def underlying(self) -> Graph:
        return Graph(self.n, tuple(Edge(a.id, a.tail, a.head) for a in self.arcs))


@dataclass(frozen=True)
class Edge:
    id: int
    u: int
    v: int


@dataclass(frozen=True)
class Graph:
    """A loop-free undirected multigraph."""

    n: int
    edges: tuple[Edge, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ContractError("vertex count must be non-negative")
        object.__setattr__(self, "edges", tuple(self.edges))
        seen = set()
        for e in self.edges:
            if not (0 <= e.u < self.n and 0 <= e.v < self.n):
                raise ContractError(f"edge {e} has an endpoint outside 0..{self.n - 1}")
            if e.u == e.v:
                raise LoopError(f"edge {e.id} is a loop at vertex {e.u}; loops are not allowed")
            if e.id in seen:
                raise ContractError(f"duplicate edge id {e.id}")
            seen.add(e.id)

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> Graph:
        return cls(n, tuple(Edge(i, u, v) for i, (u, v) in enumerate(pairs)))

    @property
    def m(self) -> int:
        return len(self.edges)

    def inside_count_mask(self, mask: int) -> int:
        """|E(X)|: edges with both ends in ``mask``."""
        return sum(1 for e in self.edges if (mask >> e.u) & 1 and (mask >> e.v) & 1)


def in_degree_set(D: Digraph, X: Iterable[int]) -> int:
    """Set in-degree d^-(X): arcs with tail outside X and head inside X."""
    return D.in_degree_mask(to_mask(_check_subset(D.n, X)))


@dataclass(frozen=True)
class Contraction:
    """Result of shrinking a vertex set W to a single vertex ``w``.

    ``vertex_map[v]`` is the new index of old vertex ``v`` (all of W map to
    ``w``); ``arc_map`` sends surviving old arc ids to new ids.
    """

    digraph: Digraph
    w: int
    vertex_map: tuple[int, ...]
    arc_map: dict[int, int]

    @cached_property
    def arc_origin(self) -> dict[int, int]:
        return {new: old for old, new in self.arc_map.items()}


def contract(D: Digraph, W: Iterable[int]) -> Contraction:
    """Delete arcs inside W, then merge W into one vertex.

    The merged vertex takes the position of ``min(W)``; the remaining vertices
    keep their relative order. Surviving arcs are renumbered densely in the
    order of their old ids.
    """
    W = _check_subset(D.n, W)
    if not W:
        raise ContractError("cannot contract an empty vertex set")
    w_old = min(W)
    vertex_map = []
    nxt = 0
    w_new = -1
    for v in range(D.n):
        if v in W:
            if v == w_old:
                w_new = nxt
                nxt += 1
            vertex_map.append(-1)
        else:
            vertex_map.append(nxt)
            nxt += 1
    vertex_map = [w_new if v in W else vertex_map[v] for v in range(D.n)]
    arcs = []
    arc_map = {}
    for a in sorted(D.arcs, key=lambda a: a.id):
        if a.tail in W and a.head in W:
            continue
        new_id = len(arcs)
        arc_map[a.id] = new_id
        arcs.append(Arc(new_id, vertex_map[a.tail], vertex_map[a.head]))
    return Contraction(Digraph(nxt, tuple(arcs)), w_new, tuple(vertex_map), arc_map)


def induced(D: Digraph, X: Iterable[int]) -> Digraph:
    """D[X] with vertices relabelled ``sorted(X)[i] -> i``; arc ids are kept."""
    X = _check_subset(D.n, X)
    if not X:
        raise ContractError("induced subgraph needs a nonempty vertex set")
    index = {v: i for i, v in enumerate(sorted(X))}
    arcs = tuple(
        Arc(a.id, index[a.tail], index[a.head])
        for a in D.arcs
        if a.tail in X and a.head in X
    )
    return Digraph(len(X), arcs)


def remove_arcs(D: Digraph, ids: Iterable[int]) -> Digraph:
    ids = set(ids)
    unknown = ids - D.arc_by_id.keys()
    if unknown:
        raise ContractError(f"unknown arc ids {sorted(unknown)}")
    return Digraph(D.n, tuple(a for a in D.arcs if a.id not in ids))


def add_arcs(D: Digraph, arcs: Iterable[Arc | tuple[int, int]]) -> Digraph:
    """Add arcs; bare ``(tail, head)`` pairs get fresh ids above the current max."""
    nxt = max((a.id for a in D.arcs), default=-1) + 1
    new = []
    for a in arcs:
        if not isinstance(a, Arc):
            t, h = a
            a = Arc(nxt, t, h)
            nxt += 1
        else:
            nxt = max(nxt, a.id + 1)
        new.append(a)
    return Digraph(D.n, D.arcs + tuple(new))
