"""Readers and writers for graph, signal and filter files."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .complexes import CliqueComplex, Graph
from .spectral_filter import FilterSpec


def parse_graph(text: str) -> Graph:
    """Vertex count on the first data line, then one ``a b`` pair per edge; ``#`` starts a comment."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line.split()))
    if not rows:
        raise ValueError("graph file is empty")
    lineno, head = rows[0]
    if len(head) != 1:
        raise ValueError(f"line {lineno}: expected the vertex count alone, got {' '.join(head)!r}")
    try:
        n = int(head[0])
        edges = []
        for lineno, parts in rows[1:]:
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected two vertex ids, got {' '.join(parts)!r}")
            edges.append((int(parts[0]), int(parts[1])))
    except ValueError as exc:
        if "line" in str(exc):
            raise
        raise ValueError(f"line {lineno}: {exc}") from None
    return Graph.from_edges(n, edges)


def read_graph(path) -> Graph:
    return parse_graph(Path(path).read_text())


def format_graph(g: Graph) -> str:
    lines = [str(g.n)] + [f"{a} {b}" for a, b in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def parse_signal(data, K: CliqueComplex, k: int) -> np.ndarray:
    """Dense k-signal from a list of {"simplex": [...], "value": x}; absent simplices are zero."""
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, list):
        raise ValueError("signal must be a JSON list of {simplex, value} records")
    index = K.index(k)
    s = np.zeros(K.count(k))
    seen = set()
    for rec in data:
        try:
            simplex = tuple(int(v) for v in rec["simplex"])
            value = float(rec["value"])
        except (KeyError, TypeError, ValueError):
            raise ValueError(f"malformed signal record {rec!r}") from None
        if len(simplex) != k + 1:
            raise ValueError(f"simplex {list(simplex)} is not a {k}-simplex")
        if simplex not in index:
            raise ValueError(f"simplex {list(simplex)} is not in the complex")
        if simplex in seen:
            raise ValueError(f"simplex {list(simplex)} listed twice")
        seen.add(simplex)
        s[index[simplex]] = value
    return s


def read_signal(path, K: CliqueComplex, k: int) -> np.ndarray:
    return parse_signal(Path(path).read_text(), K, k)


def format_signal(s, K: CliqueComplex, k: int) -> list[dict]:
    return [{"simplex": list(sigma), "value": float(v)} for sigma, v in zip(K.simplices(k), s)]


def read_filter_spec(path) -> FilterSpec:
    return FilterSpec.from_json(Path(path).read_text())


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=True, default=_default)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def _default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")
