"""Reading and writing graphs, root catalogs, point clouds and SVG scatters."""

from __future__ import annotations

import csv
import json
import logging
import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import networkx as nx
import numpy as np

from .multigraph import GraphError, Multigraph, from_edge_list

__all__ = [
    "graph_from_json",
    "graph_to_json",
    "load_graph",
    "read_graph6",
    "Graph6Entry",
    "ROOTS_HEADER",
    "CLOUD_HEADER",
    "write_cloud_csv",
    "render_svg",
]

log = logging.getLogger(__name__)

ROOTS_HEADER = ["graph_id", "s", "t", "re", "im", "residual", "zero_mult"]
CLOUD_HEADER = ["re", "im", "depth"]
VIEW = 2.2
SVG_SIZE = 600


def graph_from_json(obj: dict) -> Multigraph:
    """Build a multigraph from ``{"vertices", "edges", "s", "t"}``; repeated edges are parallel."""
    try:
        vertices, edges, s, t = obj["vertices"], obj["edges"], obj["s"], obj["t"]
    except (KeyError, TypeError) as exc:
        raise GraphError(f"graph JSON needs vertices, edges, s and t: {exc}") from None
    if not isinstance(vertices, list) or not isinstance(edges, list):
        raise GraphError("vertices and edges must be lists")
    for e in edges:
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise GraphError(f"bad edge {e!r}")
    return from_edge_list(vertices, edges, s, t)


def _restore(v: str, ints: bool):
    return int(v) if ints else v


def graph_to_json(g: Multigraph, int_ids: bool | None = None) -> dict:
    """Inverse of :func:`graph_from_json`. Integer ids are restored when every vertex name is an integer."""
    if int_ids is None:
        int_ids = all(v.lstrip("-").isdigit() for v in g.vertices)
    return {
        "vertices": [_restore(v, int_ids) for v in g.vertices],
        "edges": [[_restore(u, int_ids), _restore(v, int_ids)] for _, u, v in g.edges],
        "s": _restore(g.s, int_ids),
        "t": _restore(g.t, int_ids),
    }


@dataclass(frozen=True)
class Graph6Entry:
    index: int  # 0-based line number among non-blank lines
    graph: nx.Graph


def read_graph6(path: str | os.PathLike) -> tuple[list[Graph6Entry], int]:
    """All graphs in a graph6 file and the number of malformed lines skipped."""
    entries, bad = [], 0
    with open(path, "rb") as fh:
        lines = [ln.strip() for ln in fh]
    index = 0
    for line in lines:
        if not line:
            continue
        if line.startswith(b">>graph6<<"):
            line = line[len(b">>graph6<<") :]
        try:
            g = nx.from_graph6_bytes(line)
        except (nx.NetworkXError, ValueError, IndexError) as exc:
            log.warning("skipping malformed graph6 line %d: %s", index, exc)
            bad += 1
        else:
            entries.append(Graph6Entry(index, g))
        index += 1
    return entries, bad


def nx_to_multigraph(g: nx.Graph, s, t) -> Multigraph:
    return from_edge_list(sorted(g.nodes), sorted(tuple(sorted(e)) for e in g.edges), s, t)


def load_graph(path: str | os.PathLike, s=None, t=None, index: int = 0) -> Multigraph:
    """Read a JSON graph, or graph ``index`` of a graph6 file; ``s``/``t`` override the terminals."""
    path = os.fspath(path)
    if path.endswith(".json"):
        with open(path) as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise GraphError(f"{path}: {exc}") from None
        if isinstance(obj, dict):
            if s is not None:
                obj = {**obj, "s": _coerce_like(s, obj.get("vertices", []))}
            if t is not None:
                obj = {**obj, "t": _coerce_like(t, obj.get("vertices", []))}
        return graph_from_json(obj)
    entries, _ = read_graph6(path)
    match = [e for e in entries if e.index == index]
    if not match:
        raise GraphError(f"{path}: no graph at index {index}")
    g = match[0].graph
    s = 0 if s is None else int(s)
    t = max(g.nodes) if t is None else int(t)
    return nx_to_multigraph(g, s, t)


def _coerce_like(x, vertices: Sequence):
    if vertices and all(isinstance(v, int) for v in vertices):
        try:
            return int(x)
        except ValueError:
            return x
    return x


def write_cloud_csv(path: str | os.PathLike, points: np.ndarray, depths: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CLOUD_HEADER)
        for z, d in zip(points, depths):
            w.writerow([repr(float(z.real)), repr(float(z.imag)), int(d)])


def render_svg(path: str | os.PathLike, points: Iterable[complex], title: str = "") -> int:
    """Scatter ``points`` on the square [-2.2, 2.2]^2 with axes; returns the number drawn."""
    scale = SVG_SIZE / (2 * VIEW)

    def px(x: float) -> float:
        return (x + VIEW) * scale

    dots = []
    for z in points:
        if abs(z.real) <= VIEW and abs(z.imag) <= VIEW:
            dots.append(f'<circle cx="{px(z.real):.2f}" cy="{px(-z.imag):.2f}" r="0.5"/>')
    mid = px(0.0)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SVG_SIZE}" height="{SVG_SIZE}" '
        f'viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">',
    ]
    if title:
        out.append(f"<title>{_escape(title)}</title>")
    out += [
        f'<rect width="{SVG_SIZE}" height="{SVG_SIZE}" fill="white"/>',
        f'<line x1="0" y1="{mid:.2f}" x2="{SVG_SIZE}" y2="{mid:.2f}" stroke="gray" stroke-width="0.5"/>',
        f'<line x1="{mid:.2f}" y1="0" x2="{mid:.2f}" y2="{SVG_SIZE}" stroke="gray" stroke-width="0.5"/>',
        '<g fill="black">',
        *dots,
        "</g>",
        "</svg>",
    ]
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")
    return len(dots)


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def iter_pairs(nodes: Sequence) -> Iterator[tuple]:
    for i, s in enumerate(nodes):
        for t in nodes[i + 1 :]:
            yield s, t
