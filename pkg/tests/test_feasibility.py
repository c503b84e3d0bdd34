from __future__ import annotations

import random
from math import ceil

import pytest

from arborpack.errors import ContractError
from arborpack.feasibility import (
    BranchingSpec,
    check_k_plus_extra,
    check_pack_branching,
    check_spanning_arborescences,
)
from arborpack.graph import Digraph, add_arcs
from arborpack.partitions import hypothesis_holds

import oracles

TWO_CYCLE = Digraph.from_pairs(2, [(0, 1), (1, 0)])
THREE_CYCLE = Digraph.from_pairs(3, [(0, 1), (1, 2), (2, 0)])


def test_one_arborescence_in_two_cycle():
    assert check_pack_branching(TWO_CYCLE, [BranchingSpec(1, frozenset())]) is None


def test_arcless_pair_violates_condition_1():
    v = check_pack_branching(Digraph.from_pairs(2, []), [BranchingSpec(1, frozenset())])
    assert v.to_json() == {"inequality": "(1)", "parts": [[0], [1]], "I": [1], "lhs": 0, "rhs": 1}


def test_all_roots_always_feasible():
    D = Digraph.from_pairs(3, [(0, 1)])
    assert check_pack_branching(D, [BranchingSpec(3, frozenset({0, 1, 2}))]) is None


def test_spec_contract():
    with pytest.raises(ContractError):
        BranchingSpec(1, frozenset({0, 1}))
    with pytest.raises(ContractError):
        check_pack_branching(TWO_CYCLE, [BranchingSpec(3, frozenset())])
    with pytest.raises(ContractError):
        check_k_plus_extra(TWO_CYCLE, 1, 1, {0, 1})


def test_k_plus_extra_examples():
    assert check_k_plus_extra(TWO_CYCLE, 1, 1) is None
    v = check_k_plus_extra(Digraph.from_pairs(2, [(0, 1)]), 1, 1)
    assert (v.inequality, v.lhs, v.rhs) == ("(3)", 1, 2)
    assert [sorted(X) for X in v.parts] == [[0], [1]]
    assert check_k_plus_extra(THREE_CYCLE, 0, 3) is None


def test_spanning_arborescence_examples():
    assert check_spanning_arborescences(TWO_CYCLE, 2) is None
    v = check_spanning_arborescences(THREE_CYCLE, 2)
    assert (v.lhs, v.rhs) == (3, 4)
    assert check_spanning_arborescences(Digraph.from_pairs(3, []), 0) is None


def test_violation_inequality_really_fails():
    rng = random.Random(3)
    for _ in range(200):
        n = rng.randint(2, 5)
        D = Digraph.from_pairs(n, oracles.random_digraph(rng, n, rng.randint(0, 8)))
        k, c = rng.randint(0, 2), rng.randint(1, n)
        U = frozenset(rng.sample(range(n), rng.randint(0, c)))
        v = check_k_plus_extra(D, k, c, U)
        if v is not None:
            assert v.lhs < v.rhs
            assert v.lhs == sum(oracles.indegree([(a.tail, a.head) for a in D.arcs], X) for X in v.parts)


def test_adding_an_arc_keeps_feasibility():
    rng = random.Random(8)
    for _ in range(300):
        n = rng.randint(2, 5)
        D = Digraph.from_pairs(n, oracles.random_digraph(rng, n, rng.randint(0, 8)))
        k, c = rng.randint(0, 2), rng.randint(1, n)
        U = frozenset(rng.sample(range(n), rng.randint(0, c)))
        if check_k_plus_extra(D, k, c, U) is None:
            bigger = add_arcs(D, oracles.random_digraph(rng, n, 1))
            assert check_k_plus_extra(bigger, k, c, U) is None
        spec = [BranchingSpec(c, U)]
        if check_pack_branching(D, spec) is None:
            bigger = add_arcs(D, oracles.random_digraph(rng, n, 1))
            assert check_pack_branching(bigger, spec) is None


@pytest.mark.parametrize("k,d", [(0, 2), (1, 1), (1, 2), (2, 1), (2, 2)])
def test_hypothesis_implies_k_plus_extra_at_c(k, d):
    rng = random.Random(100 * k + d)
    seen = 0
    for _ in range(400):
        n = rng.randint(2, 6)
        D = Digraph.from_pairs(n, oracles.random_digraph(rng, n, rng.randint(0, 10)))
        if hypothesis_holds(D, k, d):
            seen += 1
            assert check_k_plus_extra(D, k, ceil((n - 1) / d)) is None
    assert seen > 0


def test_two_branchings_against_assignment_oracle():
    rng = random.Random(21)
    for _ in range(150):
        n = rng.randint(2, 4)
        pairs = oracles.random_digraph(rng, n, rng.randint(0, 6))
        D = Digraph.from_pairs(n, pairs)
        real = oracles.realizable_root_tuples(n, pairs, 2)
        for _ in range(5):
            specs = []
            for _ in range(2):
                c = rng.randint(1, n)
                specs.append(BranchingSpec(c, frozenset(rng.sample(range(n), rng.randint(0, c)))))
            want = any(all(len(r) == s.c and s.U <= r for r, s in zip(rt, specs)) for rt in real)
            assert (check_pack_branching(D, specs) is None) == want, (n, pairs, specs)
