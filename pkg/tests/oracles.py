"""Brute-force reference implementations used as test oracles.

Everything here works on plain ``(n, [(tail, head), ...])`` data and shares no
code with the library beyond the standard library, so agreement with the
library is meaningful.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction


def indegree(pairs, part) -> int:
    return sum(1 for t, h in pairs if h in part and t not in part)


def labelled_parts(labels) -> list[frozenset[int]]:
    """Label 0 means 'outside'; equal positive labels form one part."""
    groups: dict[int, set[int]] = {}
    for v, lab in enumerate(labels):
        if lab:
            groups.setdefault(lab, set()).add(v)
    return [frozenset(g) for g in groups.values()]


def brute_nu_f(n, pairs) -> Fraction:
    """min over subpartitions with >= 2 parts, by labelling every vertex."""
    best = None
    for labels in itertools.product(range(n + 1), repeat=n):
        parts = labelled_parts(labels)
        if len(parts) < 2:
            continue
        r = Fraction(sum(indegree(pairs, p) for p in parts), len(parts) - 1)
        if best is None or r < best:
            best = r
    return best


def brute_nu_f_graph(n, edges) -> Fraction:
    best = None
    for labels in itertools.product(range(1, n + 1), repeat=n):
        parts = labelled_parts(labels)
        if len(parts) < 2:
            continue
        where = {v: i for i, p in enumerate(parts) for v in p}
        cross = sum(1 for u, v in edges if where[u] != where[v])
        r = Fraction(cross, len(parts) - 1)
        if best is None or r < best:
            best = r
    return best


def brute_gamma(n, edges) -> Fraction:
    best = None
    for size in range(2, n + 1):
        for X in itertools.combinations(range(n), size):
            Xs = set(X)
            inside = sum(1 for u, v in edges if u in Xs and v in Xs)
            r = Fraction(inside, size - 1)
            if best is None or r > best:
                best = r
    return best


def branching_roots(n, arcs):
    """Roots of the branching formed by ``arcs`` (pairs) or None if not a branching."""
    parent = {}
    for t, h in arcs:
        if h in parent:
            return None
        parent[h] = t
    for v in range(n):
        seen = set()
        x = v
        while x in parent:
            if x in seen:
                return None
            seen.add(x)
            x = parent[x]
    return frozenset(v for v in range(n) if v not in parent)


def component_sizes(n, arcs) -> dict[int, int]:
    """root -> number of arcs in its component (arcs must form a branching)."""
    parent = {h: t for t, h in arcs}

    def root(v):
        while v in parent:
            v = parent[v]
        return v

    sizes = {v: 0 for v in range(n) if v not in parent}
    for _, h in arcs:
        sizes[root(h)] += 1
    return sizes


def realizable_root_tuples(n, pairs, t) -> set[tuple[frozenset[int], ...]]:
    """All (R(F_1), ..., R(F_t)) over arc-disjoint spanning branchings,
    by trying every assignment of arcs to {unused, 1..t}."""
    out = set()
    for assign in itertools.product(range(t + 1), repeat=len(pairs)):
        roots = []
        for i in range(1, t + 1):
            r = branching_roots(n, [pairs[j] for j, a in enumerate(assign) if a == i])
            if r is None:
                break
            roots.append(r)
        else:
            out.add(tuple(roots))
    return out


def packing_with_extra_exists(n, pairs, k, d) -> bool:
    """k spanning arborescences plus a branching F with |A(F)| > (d-1)(n-1)/d
    that is an arborescence or has a component with >= d arcs."""
    for assign in itertools.product(range(k + 2), repeat=len(pairs)):
        ok = True
        for i in range(1, k + 1):
            r = branching_roots(n, [pairs[j] for j, a in enumerate(assign) if a == i])
            if r is None or len(r) != 1:
                ok = False
                break
        if not ok:
            continue
        extra = [pairs[j] for j, a in enumerate(assign) if a == k + 1]
        r = branching_roots(n, extra)
        if r is None or d * len(extra) <= (d - 1) * (n - 1):
            continue
        if len(r) == 1 or max(component_sizes(n, extra).values()) >= d:
            return True
    return False


def canonical_digraph(n, pairs) -> tuple:
    best = None
    for perm in itertools.permutations(range(n)):
        key = tuple(sorted((perm[t], perm[h]) for t, h in pairs))
        if best is None or key < best:
            best = key
    return best


def noniso_multidigraphs(max_n, max_m):
    """Yield (n, pairs) for one representative of each isomorphism class of
    loopless multidigraphs with 1 <= n <= max_n and at most max_m arcs."""
    for n in range(1, max_n + 1):
        ordered = [(t, h) for t in range(n) for h in range(n) if t != h]
        seen = set()
        for m in range(max_m + 1):
            for pairs in itertools.combinations_with_replacement(ordered, m):
                key = canonical_digraph(n, pairs)
                if key in seen:
                    continue
                seen.add(key)
                yield n, list(key)


def spanning_trees(n, edges) -> list[frozenset[int]]:
    """All spanning trees as sets of edge indices."""
    out = []
    for combo in itertools.combinations(range(len(edges)), n - 1):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        ok = True
        for i in combo:
            a, b = find(edges[i][0]), find(edges[i][1])
            if a == b:
                ok = False
                break
            parent[a] = b
        if ok:
            out.append(frozenset(combo))
    return out


def disjoint_trees_exist(n, edges, k) -> bool:
    trees = spanning_trees(n, edges)

    def rec(start, used, left):
        if left == 0:
            return True
        for i in range(start, len(trees)):
            if not trees[i] & used and rec(i + 1, used | trees[i], left - 1):
                return True
        return False

    return rec(0, frozenset(), k)


def _relabel(labels) -> tuple[int, ...]:
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(x, len(seen)) for x in labels)


def forest_cover_exists(n, edges, t) -> bool:
    """Dynamic programming over per-forest component labelings."""
    start = tuple(tuple(range(n)) for _ in range(t))
    states = {start}
    for u, v in edges:
        nxt = set()
        for st in states:
            for i, comp in enumerate(st):
                if comp[u] == comp[v]:
                    continue
                old, new = comp[u], comp[v]
                merged = _relabel(new if x == old else x for x in comp)
                nst = tuple(sorted(st[:i] + (merged,) + st[i + 1:]))
                nxt.add(nst)
        states = nxt
        if not states:
            return False
    return True


def random_digraph(rng: random.Random, n: int, m: int) -> list[tuple[int, int]]:
    pairs = []
    for _ in range(m):
        t, h = rng.sample(range(n), 2)
        pairs.append((t, h))
    return pairs
