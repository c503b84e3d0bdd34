"""Edge-list text format.

First line ``n m directed|undirected``, then ``m`` lines ``tail head`` with
0-based vertices. Repeated lines are parallel arcs/edges; the i-th arc line
gets id ``i``. Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

from pathlib import Path

from .errors import ContractError, LoopError
from .graph import Digraph, Graph


class EdgeListError(ContractError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def parse_edge_list(text: str) -> Digraph | Graph:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line.split()))
    if not rows:
        raise EdgeListError("empty input")
    lineno, header = rows[0]
    if len(header) != 3 or header[2] not in ("directed", "undirected"):
        raise EdgeListError("header must be 'n m directed|undirected'", lineno)
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise EdgeListError("n and m must be integers", lineno) from None
    if n < 0 or m < 0:
        raise EdgeListError("n and m must be non-negative", lineno)
    body = rows[1:]
    if len(body) != m:
        raise EdgeListError(f"expected {m} arc lines, found {len(body)}")
    pairs = []
    for lineno, parts in body:
        if len(parts) != 2:
            raise EdgeListError("expected 'tail head'", lineno)
        try:
            t, h = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListError("endpoints must be integers", lineno) from None
        if not (0 <= t < n and 0 <= h < n):
            raise EdgeListError(f"endpoint outside 0..{n - 1}", lineno)
        if t == h:
            raise LoopError(f"line {lineno}: loop at vertex {t}; graphs may have parallel arcs but not loops")
        pairs.append((t, h))
    if header[2] == "directed":
        return Digraph.from_pairs(n, pairs)
    return Graph.from_pairs(n, pairs)


def parse_graph_file(path: str | Path) -> Digraph | Graph:
    return parse_edge_list(Path(path).read_text(encoding="utf-8"))


def format_edge_list(G: Digraph | Graph) -> str:
    if isinstance(G, Digraph):
        kind = "directed"
        pairs = [(a.tail, a.head) for a in sorted(G.arcs, key=lambda a: a.id)]
    else:
        kind = "undirected"
        pairs = [(e.u, e.v) for e in sorted(G.edges, key=lambda e: e.id)]
    lines = [f"{G.n} {len(pairs)} {kind}"]
    lines.extend(f"{t} {h}" for t, h in pairs)
    return "\n".join(lines) + "\n"
