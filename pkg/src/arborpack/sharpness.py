"""Extremal instances where nu_f(D) = k + (d-1)/d yet no packing exists.

Recipe for ``k >= d + 1 >= 2``: a multigraph G on d+1 vertices with
kd + d - 1 edges and gamma_f(G) < k + 1 splits into k+1 forests with k+2
components in total. Orienting each forest away from roots chosen so that
every vertex is a root somewhere gives a digraph whose only minimizing
subpartition is all singletons, with ratio exactly k + (d-1)/d, and which has
too few arcs for k spanning arborescences plus a spanning extra.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import ArborpackError, ContractError, guard_size
from .graph import Arc, Digraph, Graph
from .partitions import fraction_str, gamma_f, hypothesis_threshold, nu_f_digraph, subpartition_masks
from .solver import solve_exhaustive


class ConstructionError(ArborpackError):
    """The generator could not certify the instance it built."""


def _check_params(k: int, d: int) -> None:
    if not (d >= 1 and k >= d + 1):
        raise ContractError(f"need k >= d + 1 >= 2, got k={k}, d={d}")


def build_sharp_graph(k: int, d: int) -> Graph:
    """kd + d - 1 edges spread as evenly as possible over the vertex pairs of
    d + 1 vertices (earlier pairs in lexicographic order get the surplus)."""
    _check_params(k, d)
    n = d + 1
    pairs = list(combinations(range(n), 2))
    m = k * d + d - 1
    q, r = divmod(m, len(pairs))
    edges = []
    for idx, (u, v) in enumerate(pairs):
        edges.extend([(u, v)] * (q + (1 if idx < r else 0)))
    G = Graph.from_pairs(n, edges)
    gamma = gamma_f(G).value
    if not gamma < k + 1:
        raise ConstructionError(f"even distribution gives gamma_f = {fraction_str(gamma)} >= k+1 = {k + 1}")
    return G


def nash_williams_decompose(G: Graph, t: int, *, allow_large: bool = False) -> list[list[int]] | None:
    """Split the edges into ``t`` forests by backtracking, or None if impossible.

    Forests are interchangeable, so an edge may only open the first empty one.
    Returns lists of edge ids.
    """
    if t < 1:
        raise ContractError("need at least one forest")
    guard_size(G.n, allow_large, 8)
    edges = sorted(G.edges, key=lambda e: e.id)
    if len(edges) > t * max(G.n - 1, 0):
        return None
    # parent maps per forest; union-find without path compression so undo is a pop
    parent = [list(range(G.n)) for _ in range(t)]
    forests: list[list[int]] = [[] for _ in range(t)]

    def find(p: list[int], x: int) -> int:
        while p[x] != x:
            x = p[x]
        return x

    def rec(i: int, opened: int) -> bool:
        if i == len(edges):
            return True
        e = edges[i]
        for f in range(min(opened + 1, t)):
            p = parent[f]
            ru, rv = find(p, e.u), find(p, e.v)
            if ru == rv:
                continue
            p[ru] = rv
            forests[f].append(e.id)
            if rec(i + 1, max(opened, f + 1)):
                return True
            forests[f].pop()
            p[ru] = ru
        return False

    return [list(f) for f in forests] if rec(0, 0) else None


def _forest_components(G: Graph, edge_ids: Sequence[int]) -> list[list[int]]:
    adj: dict[int, list[int]] = {v: [] for v in range(G.n)}
    by_id = {e.id: e for e in G.edges}
    for eid in edge_ids:
        e = by_id[eid]
        adj[e.u].append(e.v)
        adj[e.v].append(e.u)
    seen: set[int] = set()
    comps = []
    for v in range(G.n):
        if v in seen:
            continue
        comp = []
        stack = [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def orient_to_branchings(G: Graph, forests: Sequence[Sequence[int]]) -> tuple[Digraph, list[frozenset[int]]]:
    """Orient every forest away from one root per component.

    Roots are picked greedily: forests in order, in each component the least
    vertex not yet a root of an earlier forest (else the least vertex).
    Edge ``e`` becomes arc ``e`` with the same id.
    """
    all_ids = sorted(e for f in forests for e in f)
    if all_ids != sorted(e.id for e in G.edges):
        raise ContractError("forests must partition the edge set")
    by_id = {e.id: e for e in G.edges}
    covered: set[int] = set()
    root_sets = []
    arcs = []
    for f in forests:
        adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(G.n)}
        for eid in f:
            e = by_id[eid]
            adj[e.u].append((e.v, eid))
            adj[e.v].append((e.u, eid))
        roots = set()
        for comp in _forest_components(G, f):
            fresh = [v for v in comp if v not in covered]
            root = fresh[0] if fresh else comp[0]
            roots.add(root)
            queue = deque([root])
            seen = {root}
            while queue:
                x = queue.popleft()
                for y, eid in sorted(adj[x]):
                    if y not in seen:
                        seen.add(y)
                        arcs.append(Arc(eid, x, y))
                        queue.append(y)
        covered |= roots
        root_sets.append(frozenset(roots))
    if covered != set(range(G.n)):
        raise ConstructionError("greedy root choice left vertices uncovered")
    arcs.sort(key=lambda a: a.id)
    return Digraph(G.n, tuple(arcs)), root_sets


@dataclass
class SharpInstance:
    k: int
    d: int
    G: Graph
    forests: list[list[int]]
    D: Digraph
    roots: list[frozenset[int]]

    @property
    def component_counts(self) -> list[int]:
        return [len(r) for r in self.roots]


def build_sharp_instance(k: int, d: int) -> SharpInstance:
    G = build_sharp_graph(k, d)
    forests = nash_williams_decompose(G, k + 1)
    if forests is None:
        raise ConstructionError("no decomposition into k+1 forests")
    D, roots = orient_to_branchings(G, forests)
    if sum(len(r) for r in roots) != k + 2:
        raise ConstructionError("component count differs from k+2")
    return SharpInstance(k, d, G, forests, D, roots)


@dataclass
class SharpReport:
    nu_f: Fraction
    expected: Fraction
    witness_is_singletons: bool
    unique_minimizer: bool
    no_packing: bool
    edge_bound_holds: bool  # |E(X)| <= (k+1)(|X|-1), equality only at |X| = 1
    indegree_bound_holds: bool  # sum_{v in S} d^-(v) >= (k+1)|S| - (k+2), equality only at S = V
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.nu_f == self.expected
            and self.witness_is_singletons
            and self.no_packing
            and self.edge_bound_holds
            and self.indegree_bound_holds
        )

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "nu_f": fraction_str(self.nu_f),
            "expected": fraction_str(self.expected),
            "witness_is_singletons": self.witness_is_singletons,
            "unique_minimizer": self.unique_minimizer,
            "no_packing": self.no_packing,
            "edge_bound_holds": self.edge_bound_holds,
            "indegree_bound_holds": self.indegree_bound_holds,
            "notes": self.notes,
        }


def edge_bound_cases(G: Graph, k: int) -> tuple[bool, list[frozenset[int]]]:
    """Check |E(X)| <= (k+1)(|X|-1) for all nonempty X; also return where it is tight."""
    ok = True
    tight = []
    for mask in range(1, 1 << G.n):
        size = mask.bit_count()
        lhs, rhs = G.inside_count_mask(mask), (k + 1) * (size - 1)
        if lhs > rhs:
            ok = False
        elif lhs == rhs:
            tight.append(frozenset(v for v in range(G.n) if mask >> v & 1))
    return ok, tight


def indegree_bound_cases(D: Digraph, k: int) -> tuple[bool, list[frozenset[int]]]:
    """Check sum_{v in S} d^-(v) >= (k+1)|S| - (k+2) for every S = union of a
    subpartition (i.e. every nonempty S); also return where it is tight."""
    indeg = [0] * D.n
    for a in D.arcs:
        indeg[a.head] += 1
    ok = True
    tight = []
    for mask in range(1, 1 << D.n):
        S = [v for v in range(D.n) if mask >> v & 1]
        lhs, rhs = sum(indeg[v] for v in S), (k + 1) * len(S) - (k + 2)
        if lhs < rhs:
            ok = False
        elif lhs == rhs:
            tight.append(frozenset(S))
    return ok, tight


def verify_sharp(D: Digraph, k: int, d: int, *, check_packing: bool = True) -> SharpReport:
    """Certify an extremal instance on d+1 vertices."""
    if D.n != d + 1:
        raise ContractError(f"expected {d + 1} vertices, got {D.n}")
    notes = []
    best = nu_f_digraph(D)
    expected = hypothesis_threshold(k, d)
    singletons = tuple(frozenset([v]) for v in range(D.n))
    witness_ok = best.witness == singletons
    table = D.in_degree_table
    minimizers = [
        masks for masks in subpartition_masks(D.n, 2)
        if Fraction(sum(table[m] for m in masks), len(masks) - 1) == best.value
    ]
    unique = len(minimizers) == 1
    if best.value != expected:
        notes.append(f"nu_f = {fraction_str(best.value)}, expected {fraction_str(expected)}")
    no_packing = True
    if check_packing:
        no_packing = solve_exhaustive(D, k, d, allow_large=True) is None
        if not no_packing:
            notes.append("a packing exists")
    G = D.underlying()
    e_ok, e_tight = edge_bound_cases(G, k)
    e_ok = e_ok and all(len(X) == 1 for X in e_tight)
    i_ok, i_tight = indegree_bound_cases(D, k)
    i_ok = i_ok and all(len(S) == D.n for S in i_tight)
    if not e_ok:
        notes.append("edge bound fails or is tight on a set with more than one vertex")
    if not i_ok:
        notes.append("in-degree bound fails or is tight on a proper subset")
    return SharpReport(best.value, expected, witness_ok, unique, no_packing, e_ok, i_ok, notes)
