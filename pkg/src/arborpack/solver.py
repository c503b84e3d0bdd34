"""Packings of k spanning arborescences plus one large branching.

Given ``nu_f(D) > k + (d-1)/d`` there are arc-disjoint spanning arborescences
T_1..T_k and a branching F with ``|A(F)| > (d-1)(|V|-1)/d`` such that F is a
spanning arborescence or has a component with at least ``d`` arcs.

Two constructions are offered:

* :func:`solve_exhaustive` searches arc assignments directly (ground truth at
  desk scale);
* :func:`solve_theorem7` in ``"proof-trace"`` mode follows the inductive
  argument: pick ``c = ceil((n-1)/d)``, get a c-branching packing, and either
  lower c, contract a vertex set carrying k+1 arborescences and recurse, move
  an arc between components to shrink the designated component, or conclude
  by counting. Each step is recorded in ``certificate.trace``.

:func:`verify_theorem7` checks any certificate independently of how it was made.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil

from .branchings import (
    Branching,
    InvalidBranching,
    Slot,
    branching_roots,
    component_arc_counts,
    components,
    find_k_plus_extra,
    pack_branchings,
    tree_symmetry,
)
from .errors import ArborpackError, ContractError, HypothesisError, guard_size
from .feasibility import check_k_plus_extra
from .graph import Arc, Digraph, contract, from_mask, remove_arcs, to_mask
from .partitions import fraction_str, hypothesis_threshold, nu_f_digraph, subpartition_masks

log = logging.getLogger(__name__)

EXHAUSTIVE_MAX_N = 8
EXHAUSTIVE_MAX_ARCS = 14


@dataclass
class PackingCertificate:
    k: int
    d: int
    trees: list[Branching]
    extra: Branching
    mode: str = "oracle"
    trace: list[dict] = field(default_factory=list)

    def to_json(self, D: Digraph) -> dict:
        out = {
            "k": self.k,
            "d": self.d,
            "trees": [
                {"root": t.root if len(t.roots) == 1 else sorted(t.roots),
                 "arcs": [D.arc(a).as_list() for a in sorted(t.arcs)]}
                for t in self.trees
            ],
            "extra": self.extra.to_json(D),
            "mode": self.mode,
        }
        if self.trace:
            out["trace"] = self.trace
        return out

    @classmethod
    def from_json(cls, D: Digraph, data: dict) -> PackingCertificate:
        """Load a certificate, checking every ``[tail, head, id]`` against D."""

        def arc_ids(rows) -> frozenset[int]:
            ids = []
            for row in rows:
                tail, head, aid = row
                a = D.arc(aid)
                if (a.tail, a.head) != (tail, head):
                    raise ContractError(
                        f"arc {aid} is {a.tail}->{a.head} in the graph, certificate says {tail}->{head}"
                    )
                ids.append(aid)
            if len(set(ids)) != len(ids):
                raise ContractError("an arc is listed twice within one branching")
            return frozenset(ids)

        try:
            trees = []
            for t in data["trees"]:
                root = t["root"]
                roots = frozenset(root) if isinstance(root, list) else frozenset([root])
                trees.append(Branching(arc_ids(t["arcs"]), roots))
            extra = Branching(arc_ids(data["extra"]["arcs"]), frozenset(data["extra"]["roots"]))
            return cls(int(data["k"]), int(data["d"]), trees, extra,
                       data.get("mode", "oracle"), list(data.get("trace", [])))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ContractError):
                raise
            raise ContractError(f"malformed certificate: {exc}") from None


@dataclass(frozen=True)
class VerificationReport:
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "failures": list(self.failures)}


def _min_extra_arcs(n: int, d: int) -> int:
    # least integer strictly above (d-1)(n-1)/d
    return (d - 1) * (n - 1) // d + 1


def verify_theorem7(D: Digraph, k: int, d: int, cert: PackingCertificate) -> VerificationReport:
    """Check a certificate clause by clause; never raises on bad certificates.

    (i) arc sets pairwise disjoint and present in D, (ii) each tree is a
    spanning arborescence, (iii) extra is a branching with the stated roots,
    (iv) |A(extra)| > (d-1)(n-1)/d, (v) extra is a spanning arborescence or has
    a component with at least d arcs.
    """
    fails = []
    if cert.k != k or len(cert.trees) != k:
        fails.append(f"(0) expected {k} trees, certificate has k={cert.k} and {len(cert.trees)} trees")
    if cert.d != d:
        fails.append(f"(0) certificate is for d={cert.d}, expected d={d}")

    seen: dict[int, int] = {}
    members = list(cert.trees) + [cert.extra]
    for idx, b in enumerate(members):
        for a in b.arcs:
            if a not in D.arc_by_id:
                fails.append(f"(i) arc id {a} does not exist")
            elif a in seen:
                fails.append(f"(i) arc {a} used by branchings {seen[a]} and {idx}")
            else:
                seen[a] = idx

    def roots_of(b: Branching) -> frozenset[int] | str:
        try:
            return branching_roots(D, [a for a in b.arcs if a in D.arc_by_id])
        except InvalidBranching as exc:
            return exc.reason

    for idx, t in enumerate(cert.trees):
        roots = roots_of(t)
        if isinstance(roots, str):
            fails.append(f"(ii) tree {idx} is not a branching: {roots}")
        elif len(roots) != 1:
            fails.append(f"(ii) tree {idx} is not a spanning arborescence ({len(roots)} roots)")
        elif roots != t.roots:
            fails.append(f"(ii) tree {idx} declares root {sorted(t.roots)}, actual {sorted(roots)}")

    roots = roots_of(cert.extra)
    if isinstance(roots, str):
        fails.append(f"(iii) extra is not a branching: {roots}")
    elif roots != cert.extra.roots:
        fails.append(f"(iii) extra declares roots {sorted(cert.extra.roots)}, actual {sorted(roots)}")

    bound = Fraction((d - 1) * (D.n - 1), d)
    size = len(cert.extra.arcs)
    if not size > bound:
        fails.append(f"(iv) extra has {size} arcs, needs more than {fraction_str(bound)}")

    if not isinstance(roots, str):
        spanning = len(roots) == 1
        known = [a for a in cert.extra.arcs if a in D.arc_by_id]
        biggest = max(component_arc_counts(D, known).values(), default=0)
        if not spanning and biggest < d:
            fails.append(f"(v) extra is not spanning and its largest component has {biggest} < {d} arcs")
    else:
        fails.append("(v) cannot evaluate components of a non-branching")
    return VerificationReport(tuple(fails))


def _extra_ok(D: Digraph, d: int, arcs: frozenset[int]) -> bool:
    counts = component_arc_counts(D, arcs)
    return len(counts) == 1 or max(counts.values()) >= d


def solve_exhaustive(D: Digraph, k: int, d: int, *, allow_large: bool = False) -> PackingCertificate | None:
    """Backtracking oracle: the first packing in canonical search order, or None."""
    if D.n < 2:
        raise ContractError("need at least two vertices")
    if k < 0 or d < 1:
        raise ContractError("need k >= 0 and d >= 1")
    guard_size(D.n, allow_large, EXHAUSTIVE_MAX_N)
    if not allow_large and D.m > EXHAUSTIVE_MAX_ARCS:
        raise ContractError(f"|A| = {D.m} exceeds the oracle bound {EXHAUSTIVE_MAX_ARCS}")
    min_arcs = _min_extra_arcs(D.n, d)
    extra_slot = Slot(1, D.n - min_arcs, root_first=False)
    slots = [Slot.arborescence() for _ in range(k)] + [extra_slot]
    sol = next(
        pack_branchings(D, slots, accept=lambda s: _extra_ok(D, d, s[k]), symmetric=tree_symmetry(k)),
        None,
    )
    if sol is None:
        return None
    trees = [Branching.of(D, arcs) for arcs in sol[:k]]
    return PackingCertificate(k, d, trees, Branching.of(D, sol[k]), mode="oracle")


def arborescence_packing(D: Digraph, k: int) -> list[Branching] | None:
    """k arc-disjoint spanning arborescences by exhaustive search, or None."""
    if k == 0:
        return []
    slots = [Slot.arborescence() for _ in range(k)]
    sol = next(pack_branchings(D, slots, symmetric=tree_symmetry(k)), None)
    return None if sol is None else [Branching.of(D, s) for s in sol]


def _enters(a: Arc, mask: int) -> bool:
    return bool((mask >> a.head) & 1) and not (mask >> a.tail) & 1


def equality_family(D: Digraph, k: int) -> list[tuple[int, ...]]:
    """Nonempty subpartitions (as bitmasks) with sum d^-(X) = k(|P| - 1)."""
    table = D.in_degree_table
    return [
        masks for masks in subpartition_masks(D.n, 1)
        if sum(table[m] for m in masks) == k * (len(masks) - 1)
    ]


def minimal_violating_set(
    D: Digraph, k: int, forbidden: Iterable[int], candidates: Iterable[int]
) -> frozenset[int] | None:
    """Inclusion-minimal X such that X belongs to a subpartition attaining
    equality in sum d^-(X) >= k(|P| - 1) in ``D - forbidden`` and some
    candidate arc enters X.

    Among minimal sets the smallest, then lexicographically least, is
    returned. ``None`` if no candidate arc enters any such X.
    """
    residual = remove_arcs(D, forbidden)
    cand = [D.arc(a) for a in candidates]
    best: tuple[int, tuple[int, ...]] | None = None
    for masks in equality_family(residual, k):
        for m in masks:
            if any(_enters(a, m) for a in cand):
                key = (m.bit_count(), tuple(sorted(from_mask(m))))
                if best is None or key < best:
                    best = key
    if best is None:
        return None
    return frozenset(best[1])


class _Divergence(ArborpackError):
    """The proof-following construction hit a state the argument rules out."""


@dataclass
class _Inner:
    """A spanning arborescence of D[W], optionally tied to the arc entering W
    at its root."""

    arcs: frozenset[int]
    entering: int | None = None


def _restrict(D: Digraph, arcs: Iterable[int], mask: int) -> frozenset[int]:
    return frozenset(a for a in arcs if (mask >> D.arc(a).tail) & 1 and (mask >> D.arc(a).head) & 1)


def _check_inner(D: Digraph, W: frozenset[int], inner: _Inner) -> None:
    if len(inner.arcs) != len(W) - 1:
        raise _Divergence("restricted structure is not spanning on W")
    heads = [D.arc(a).head for a in inner.arcs]
    if len(set(heads)) != len(heads):
        raise _Divergence("restricted structure has in-degree 2")
    if inner.entering is not None:
        root = next(iter(W - set(heads)))
        if D.arc(inner.entering).head != root:
            raise _Divergence("entering arc does not hit the inner root")


class _Prover:
    def __init__(self, k: int, d: int):
        self.k = k
        self.d = d
        self.trace: list[dict] = []

    def note(self, depth: int, n: int, case: str, **info) -> None:
        entry = {"depth": depth, "n": n, "case": case}
        entry.update(info)
        self.trace.append(entry)
        log.debug("proof-trace %s", entry)

    def packing(self, D: Digraph, c: int, U: Iterable[int] = (), forbidden: Iterable[int] = ()):
        U = frozenset(U)
        forbidden = frozenset(forbidden)
        host = remove_arcs(D, forbidden) if forbidden else D
        viol = check_k_plus_extra(host, self.k, c, U, allow_large=True)
        if viol is not None:
            raise _Divergence(f"packing condition {viol.inequality} fails for c={c}")
        res = find_k_plus_extra(host, self.k, c, U)
        if res is None:
            raise _Divergence(f"search found no packing although the condition holds (c={c})")
        trees, F = res
        return [Branching.of(D, t.arcs) for t in trees], Branching.of(D, F.arcs)

    def solve(self, D: Digraph, depth: int = 0) -> tuple[list[Branching], Branching]:
        k, d, n = self.k, self.d, D.n
        if n < 2:
            raise _Divergence("reached a digraph with fewer than two vertices")
        c = ceil((n - 1) / d)
        if c == 1:
            self.note(depth, n, "c=1", c=c)
            return self.packing(D, 1)
        if check_k_plus_extra(D, k, c - 1, allow_large=True) is None:
            self.note(depth, n, "1", c=c)
            return self.packing(D, c - 1)
        trees, F = self.packing(D, c)
        full = (1 << n) - 1
        while True:
            comps = components(D, F.arcs)
            r = min(comps, key=lambda v: (len(comps[v]), v))
            Wc = comps[r]
            if len(Wc) == 1:
                self.note(depth, n, "2:|V(Tc)|=1", c=c)
                return trees, F
            wmask = to_mask(Wc)
            umask = full & ~wmask
            other = frozenset(a for a in F.arcs if (umask >> D.arc(a).head) & 1)
            cross = [a for a in sorted(D.arcs, key=lambda a: a.id)
                     if (umask >> a.tail) & 1 and (wmask >> a.head) & 1]
            if not cross:
                self.note(depth, n, "2.1", c=c, W=sorted(Wc))
                inner = [_Inner(_restrict(D, t.arcs, wmask)) for t in trees]
                inner.append(_Inner(_restrict(D, F.arcs, wmask)))
                return self.contract_and_lift(D, Wc, inner, depth)

            residual = remove_arcs(D, other)
            d1 = equality_family(residual, k)
            free = [a for a in cross if not any(_enters(a, m) for masks in d1 for m in masks)]
            if free:
                a0 = free[0]
                U = from_mask(umask) | {a0.head}
                forbidden = other | {a0.id}
                self.note(depth, n, "2.2.1", c=c, arc=a0.as_list())
                # (2) and (3) still hold once a0 joins the other components.
                new_trees, F3 = self.packing(D, len(U) + 1, U, forbidden)
                F_new = Branching.of(D, F3.arcs | forbidden)
                if len(F_new.roots) != c:
                    raise _Divergence("augmented branching lost its root count")
                new_comps = components(D, F_new.arcs)
                if min(len(vs) for vs in new_comps.values()) >= len(Wc):
                    raise _Divergence("augmentation did not shrink the designated component")
                trees, F = new_trees, F_new
                continue

            X0 = minimal_violating_set(D, k, other, [a.id for a in cross])
            if X0 is None or not X0 <= Wc:
                raise _Divergence("minimal set X0 is missing or leaves V(Tc)")
            x0mask = to_mask(X0)
            if len(X0) >= 2:
                self.note(depth, n, "2.2.2:contract", c=c, X0=sorted(X0))
                inner = []
                for t in trees:
                    entering = [a for a in t.arcs if _enters(D.arc(a), x0mask)]
                    inner.append(_Inner(_restrict(D, t.arcs, x0mask), entering[0] if entering else None))
                inner.append(_Inner(_restrict(D, F.arcs, x0mask)))
                return self.contract_and_lift(D, X0, inner, depth)
            self.note(depth, n, "2.2.2:|X0|=1", c=c, X0=sorted(X0))
            if not _extra_ok(D, d, F.arcs):
                raise _Divergence("counting step found no component with d arcs")
            return trees, F

    def contract_and_lift(self, D: Digraph, W: frozenset[int], inner: list[_Inner], depth: int):
        """Solve D/W recursively and glue in k+1 arborescences of D[W]."""
        _check_inner_family(D, W, inner)
        con = contract(D, W)
        sub_trees, sub_F = self.solve(con.digraph, depth + 1)
        out = _glue(D, W, con, inner, sub_trees, sub_F)
        self.note(depth, D.n, "lift", W=sorted(W))
        return out


def _check_inner_family(D: Digraph, W: frozenset[int], inner: Sequence[_Inner]) -> None:
    wmask = to_mask(W)
    for arb in inner:
        _check_inner(D, W, arb)
    used = [a for arb in inner for a in arb.arcs]
    if len(set(used)) != len(used):
        raise _Divergence("inner arborescences share arcs")
    tied = [arb.entering for arb in inner if arb.entering is not None]
    entering = {a.id for a in D.arcs if _enters(a, wmask)}
    if len(set(tied)) != len(tied) or entering != set(tied):
        raise _Divergence("arcs entering W do not match the inner arborescence roots")


def _glue(D, W, con, inner, sub_trees, sub_F) -> tuple[list[Branching], Branching]:
    # A structure of D/W whose arc enters w takes the inner arborescence rooted
    # at that arc's head; the rest (w is a root there) take the free ones.
    by_entering = {arb.entering: j for j, arb in enumerate(inner) if arb.entering is not None}
    free = [j for j in range(len(inner)) if inner[j].entering is None]
    origin = con.arc_origin
    lifted = []
    pending = []
    for idx, b in enumerate(list(sub_trees) + [sub_F]):
        old = frozenset(origin[a] for a in b.arcs)
        into_w = [a for a in b.arcs if con.digraph.arc(a).head == con.w]
        if into_w:
            lifted.append(old | inner[by_entering[origin[into_w[0]]]].arcs)
        else:
            lifted.append(old)
            pending.append(idx)
    if len(pending) != len(free) or len(lifted) != len(inner):
        raise _Divergence("cannot match contracted structures with inner arborescences")
    for idx, j in zip(pending, free):
        lifted[idx] = lifted[idx] | inner[j].arcs
    try:
        trees = [Branching.of(D, arcs) for arcs in lifted[:-1]]
        F = Branching.of(D, lifted[-1])
    except InvalidBranching as exc:
        raise _Divergence(f"lifted structure is not a branching: {exc.reason}") from None
    return trees, F


def solve_theorem7(
    D: Digraph, k: int, d: int, mode: str = "proof-trace", *, allow_large: bool = False
) -> PackingCertificate:
    """Packing of k spanning arborescences plus a large branching.

    Raises :class:`HypothesisError` unless nu_f(D) > k + (d-1)/d. In
    ``"proof-trace"`` mode any state the argument excludes is logged and the
    exhaustive oracle is used instead (recorded as a ``fallback`` trace entry).
    """
    if k < 0 or d < 1:
        raise ContractError("need k >= 0 and d >= 1")
    if mode not in ("proof-trace", "oracle"):
        raise ContractError(f"unknown mode {mode!r}")
    if D.n < 2:
        raise ContractError("need at least two vertices")
    nu = nu_f_digraph(D, allow_large=allow_large)
    threshold = hypothesis_threshold(k, d)
    if not nu.value > threshold:
        rel = "=" if nu.value == threshold else "<"
        raise HypothesisError(
            f"hypothesis fails: nu_f = {fraction_str(nu.value)} {rel} k+(d-1)/d",
            nu.value, nu.witness,
        )
    if mode == "oracle":
        cert = solve_exhaustive(D, k, d, allow_large=allow_large)
        if cert is None:
            raise ArborpackError("oracle found no packing although the hypothesis holds")
        return cert

    prover = _Prover(k, d)
    try:
        trees, F = prover.solve(D)
        cert = PackingCertificate(k, d, trees, F, mode="proof-trace", trace=prover.trace)
        report = verify_theorem7(D, k, d, cert)
        if report.ok:
            return cert
        reason = "; ".join(report.failures)
    except _Divergence as exc:
        reason = str(exc)
    log.warning("proof-trace diverged (%s); falling back to exhaustive search", reason)
    cert = solve_exhaustive(D, k, d, allow_large=True)
    if cert is None:
        raise ArborpackError("oracle found no packing although the hypothesis holds")
    cert.trace = prover.trace + [{"case": "fallback", "reason": reason}]
    return cert


def arc_count_identity(D: Digraph, cert: PackingCertificate) -> bool:
    """Trees carry k(n-1) arcs in total and |A(extra)| = n - |roots(extra)|."""
    return (
        sum(len(t.arcs) for t in cert.trees) == cert.k * (D.n - 1)
        and len(cert.extra.arcs) == D.n - len(cert.extra.roots)
    )


def lift_packing(
    D: Digraph,
    W: Iterable[int],
    sub_trees: Sequence[Branching],
    sub_extra: Branching,
    inner: Sequence[tuple[Iterable[int], int | None]],
) -> tuple[list[Branching], Branching]:
    """Glue a packing of D/W with k+1 arborescences of D[W].

    ``sub_trees``/``sub_extra`` use arc ids of ``contract(D, W).digraph``.
    ``inner`` lists ``(arc ids in D, entering arc id or None)`` for each
    spanning arborescence of D[W]; every arc entering W must be tied to
    exactly one of them, rooted at its head. Raises :class:`ContractError`
    when the pieces do not fit.
    """
    W = frozenset(W)
    arbs = [_Inner(frozenset(arcs), e) for arcs, e in inner]
    try:
        _check_inner_family(D, W, arbs)
        return _glue(D, W, contract(D, W), arbs, sub_trees, sub_extra)
    except _Divergence as exc:
        raise ContractError(str(exc)) from None
