"""
SGF, the plain-text Schreier graph format::

    # comment
    schreier <n> <V> <root>
    <V images of 0..V-1 under a_1>
    ...
    <V images under a_n>
    field 0110...          (optional binary field)

``-1`` marks a missing image and makes the graph partial.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .errors import ParseError
from .graph import PartialLabeledGraph, SchreierGraph, validate


def write_sgf(graph, field_bits: Optional[Sequence] = None) -> str:
    maps = graph.perms if isinstance(graph, SchreierGraph) else graph.maps
    root = graph.root if graph.root is not None else 0
    lines = [f"schreier {graph.rank} {graph.vertex_count} {root}"]
    lines += [" ".join(str(x) for x in m) for m in maps]
    if field_bits is not None:
        lines.append("field " + "".join(str(int(b)) for b in field_bits))
    return "\n".join(lines) + "\n"


def _int(token, lineno, col):
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an integer, got {token!r}", lineno, col) from None


def parse_sgf(text: str, with_field: bool = False):
    """Parse SGF text into a SchreierGraph, or a PartialLabeledGraph if incomplete.

    With ``with_field`` returns ``(graph, bits)`` where bits may be None.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append((lineno, raw))
    if not rows:
        raise ParseError("empty input")
    lineno, raw = rows[0]
    head = raw.split()
    if len(head) != 4 or head[0] != "schreier":
        raise ParseError("header must be 'schreier <n> <V> <root>'", lineno, 1)
    n, V, root = (_int(t, lineno, raw.index(t) + 1) for t in head[1:])
    if n < 1 or V < 1:
        raise ParseError("need n >= 1 and V >= 1", lineno, 1)
    if not 0 <= root < V:
        raise ParseError(f"root {root} out of range for {V} vertices", lineno, raw.rindex(head[3]) + 1)
    if len(rows) < 1 + n:
        raise ParseError(f"expected {n} permutation lines, found {len(rows) - 1}")
    maps, columns = [], []
    for lineno, raw in rows[1:1 + n]:
        tokens = raw.split()
        if len(tokens) != V:
            raise ParseError(f"expected {V} entries, found {len(tokens)}", lineno, 1)
        row, cols, col = [], [], 0
        for t in tokens:
            col = raw.index(t, col) + 1
            x = _int(t, lineno, col)
            if not -1 <= x < V:
                raise ParseError(f"image {x} out of range", lineno, col)
            row.append(x)
            cols.append(col)
            col += len(t) - 1
        maps.append(row)
        columns.append(cols)

    bits = None
    for lineno, raw in rows[1 + n:]:
        tokens = raw.split()
        if tokens[0] != "field" or len(tokens) != 2:
            raise ParseError(f"unexpected line {raw.strip()!r}", lineno, 1)
        if len(tokens[1]) != V or set(tokens[1]) - {"0", "1"}:
            raise ParseError(f"field must be {V} characters of 0/1", lineno, raw.index(tokens[1]) + 1)
        bits = tuple(int(ch) for ch in tokens[1])

    complete = all(x >= 0 for m in maps for x in m)
    if complete:
        for (lineno, raw), m, cols in zip(rows[1:1 + n], maps, columns):
            seen = set()
            for v, x in enumerate(m):
                if x in seen:
                    raise ParseError(f"duplicate image {x}: not a permutation", lineno, cols[v])
                seen.add(x)
    partial = PartialLabeledGraph(n, V, maps, root)
    graph = partial
    if complete and not validate(partial):
        graph = SchreierGraph(maps, root=root, check=False)
    return (graph, bits) if with_field else graph
