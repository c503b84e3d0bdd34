"""Command-line front end.

JSON goes to stdout, diagnostics to stderr. Exit status: 0 on success /
feasible / verified, 1 on infeasible / no packing / failed verification,
2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .edgelist import format_edge_list, parse_graph_file
from .errors import ArborpackError, HypothesisError
from .feasibility import check_k_plus_extra, check_spanning_arborescences
from .graph import Digraph, Graph
from .partitions import as_lists, gamma_f, nu_f_digraph, nu_f_graph
from .sharpness import build_sharp_instance, verify_sharp
from .solver import PackingCertificate, solve_theorem7, verify_theorem7
from .uncross import pieo_run, submodular_chain_check

log = logging.getLogger("arborpack")


class UsageError(Exception):
    pass


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload) + "\n")


def _digraph(path: str) -> Digraph:
    G = parse_graph_file(path)
    if not isinstance(G, Digraph):
        raise UsageError(f"{path}: expected a directed graph")
    return G


def _parse_roots(text: str | None) -> frozenset[int]:
    if not text:
        return frozenset()
    try:
        return frozenset(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"--roots must be a comma-separated vertex list, got {text!r}") from None


def _parse_family(text: str) -> list[list[int]]:
    """A subpartition given as JSON (``[[0,1],[2]]``) or ``0,1;2``."""
    text = text.strip()
    try:
        if text.startswith("["):
            fam = json.loads(text)
        else:
            fam = [[int(v) for v in part.split(",") if v.strip()] for part in text.split(";") if part.strip()]
    except (ValueError, json.JSONDecodeError):
        raise UsageError(f"cannot parse subpartition {text!r}") from None
    if not isinstance(fam, list) or not all(isinstance(p, list) for p in fam):
        raise UsageError(f"cannot parse subpartition {text!r}")
    return fam


def cmd_nu_f(args) -> int:
    G = parse_graph_file(args.file)
    res = nu_f_digraph(G) if isinstance(G, Digraph) else nu_f_graph(G)
    _emit(res.to_json())
    return 0


def cmd_gamma_f(args) -> int:
    G = parse_graph_file(args.file)
    res = gamma_f(G)
    _emit({"value": res.to_json()["value"], "witness": as_lists(res.witness)[0]})
    return 0


def cmd_feasibility(args) -> int:
    D = _digraph(args.file)
    if args.c is None:
        if args.roots:
            raise UsageError("--roots requires --c")
        viol = check_spanning_arborescences(D, args.k)
    else:
        viol = check_k_plus_extra(D, args.k, args.c, _parse_roots(args.roots))
    if viol is None:
        _emit({"feasible": True})
        return 0
    _emit({"feasible": False, "violation": viol.to_json()})
    return 1


def cmd_pack(args) -> int:
    D = _digraph(args.file)
    mode = "proof-trace" if args.proof_trace else "oracle"
    try:
        cert = solve_theorem7(D, args.k, args.d, mode=mode)
    except HypothesisError as exc:
        _emit({"ok": False, "explanation": str(exc), "witness": as_lists(exc.witness)})
        return 1
    report = verify_theorem7(D, args.k, args.d, cert)
    if not report.ok:
        _emit({"ok": False, "explanation": "self-verification failed", "report": report.to_json()})
        return 1
    _emit(cert.to_json(D))
    return 0


def cmd_verify(args) -> int:
    D = _digraph(args.file)
    try:
        data = json.loads(Path(args.cert).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read certificate: {exc}") from None
    try:
        cert = PackingCertificate.from_json(D, data)
    except ArborpackError as exc:
        _emit({"ok": False, "failures": [f"(load) {exc}"]})
        return 1
    report = verify_theorem7(D, args.k, args.d, cert)
    _emit(report.to_json())
    return 0 if report.ok else 1


def cmd_sharpness(args) -> int:
    inst = build_sharp_instance(args.k, args.d)
    report = verify_sharp(inst.D, args.k, args.d)
    edge_list = format_edge_list(inst.D)
    payload = {
        "k": args.k,
        "d": args.d,
        "component_counts": inst.component_counts,
        "roots": [sorted(r) for r in inst.roots],
        "report": report.to_json(),
    }
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        stem = f"sharp_k{args.k}_d{args.d}"
        (out / f"{stem}.txt").write_text(edge_list, encoding="utf-8")
        (out / f"{stem}.json").write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        payload["files"] = [str(out / f"{stem}.txt"), str(out / f"{stem}.json")]
    else:
        payload["edge_list"] = edge_list
    _emit(payload)
    return 0 if report.ok else 1


def cmd_uncross_demo(args) -> int:
    D = _digraph(args.file)
    trace = pieo_run(_parse_family(args.p1), _parse_family(args.p2))
    payload = trace.to_json()
    payload["in_degree_totals"] = [
        sum(D.in_degree_mask(sum(1 << v for v in X)) for X in fam) for fam in trace.families()
    ]
    payload["all_equal"] = submodular_chain_check(D, trace)
    _emit(payload)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="arborpack", description="Spanning arborescence packing tools.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("nu-f", help="fractional packing number with witness")
    s.add_argument("file")
    s.set_defaults(func=cmd_nu_f)

    s = sub.add_parser("gamma-f", help="fractional arboricity with witness")
    s.add_argument("file")
    s.set_defaults(func=cmd_gamma_f)

    s = sub.add_parser("feasibility", help="check packing conditions")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--c", type=int)
    s.add_argument("--roots", help="comma-separated forced roots of the extra branching")
    s.add_argument("file")
    s.set_defaults(func=cmd_feasibility)

    s = sub.add_parser("pack", help="k arborescences plus a large branching")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--proof-trace", action="store_true", help="follow the inductive construction")
    s.add_argument("file")
    s.set_defaults(func=cmd_pack)

    s = sub.add_parser("verify", help="check a packing certificate")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("file")
    s.add_argument("cert")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("sharpness", help="build and certify an extremal instance")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sharpness)

    s = sub.add_parser("uncross-demo", help="uncross two subpartitions")
    s.add_argument("file")
    s.add_argument("p1")
    s.add_argument("p2")
    s.set_defaults(func=cmd_uncross_demo)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"arborpack: error: {exc}", file=sys.stderr)
        return 2
    except (ArborpackError, OSError) as exc:
        print(f"arborpack: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
