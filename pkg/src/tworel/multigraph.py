"""Loopless multigraphs with a distinguished terminal pair.

All operations return new graphs; inputs are never mutated. Vertex and edge
ids are strings, and the total order on vertices is plain string order.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import networkx as nx

__all__ = [
    "GraphError",
    "Multigraph",
    "ContractResult",
    "FamilySpec",
    "from_edge_list",
    "delete_edge",
    "contract_edge",
    "subdivide",
    "substitute_gadget",
    "prune_irrelevant",
    "relevant_edge_mask",
    "bfs_order",
    "normal_key",
    "family_graph",
    "cycle_graph",
    "theta_graph",
    "bundle_graph",
    "path_graph",
]


class GraphError(ValueError):
    """Raised for malformed graphs or invalid structural requests."""


@dataclass(frozen=True)
class Multigraph:
    """A loopless multigraph with terminals ``s`` and ``t``.

    ``edges`` holds ``(edge_id, u, v)`` triples; repeated endpoint pairs are
    parallel edges. ``s == t`` only occurs on the result of a contraction that
    merged the terminals (see :func:`contract_edge`).
    """

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]
    s: str
    t: str

    @property
    def order(self) -> int:
        return len(self.vertices)

    @property
    def size(self) -> int:
        return len(self.edges)

    @property
    def terminals_merged(self) -> bool:
        return self.s == self.t

    def edge(self, edge_id: str) -> tuple[str, str]:
        for eid, u, v in self.edges:
            if eid == edge_id:
                return u, v
        raise GraphError(f"unknown edge id {edge_id!r}")

    def degree(self, v: str) -> int:
        return sum((u == v) + (w == v) for _, u, w in self.edges)

    def endpoint_pairs(self) -> list[tuple[str, str]]:
        return [(u, v) for _, u, v in self.edges]

    def with_terminals(self, s, t) -> "Multigraph":
        s, t = str(s), str(t)
        if s == t:
            raise GraphError("terminals must be distinct")
        if s not in self.vertices or t not in self.vertices:
            raise GraphError("terminal is not a vertex")
        return Multigraph(self.vertices, self.edges, s, t)

    def to_networkx(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(self.vertices)
        for eid, u, v in self.edges:
            g.add_edge(u, v, key=eid)
        return g

    def is_connected(self) -> bool:
        return _reachable(self, self.s) == set(self.vertices)

    def terminals_connected(self) -> bool:
        return self.t in _reachable(self, self.s)


class ContractResult(NamedTuple):
    graph: Multigraph
    terminals_merged: bool


def _adjacency(g: Multigraph) -> dict[str, list[str]]:
    adj: dict[str, list[str]] = {v: [] for v in g.vertices}
    for _, u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    return adj


def _reachable(g: Multigraph, start: str) -> set[str]:
    adj = _adjacency(g)
    seen = {start}
    todo = [start]
    while todo:
        x = todo.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


def from_edge_list(vertices: Iterable, pairs: Iterable[Sequence], s, t) -> Multigraph:
    """Build a validated multigraph; edges get ids ``e0, e1, ...`` in input order."""
    vs = [str(v) for v in vertices]
    if len(set(vs)) != len(vs):
        dup = [v for v, c in Counter(vs).items() if c > 1]
        raise GraphError(f"duplicate vertex id(s): {dup}")
    vset = set(vs)
    edges = []
    for i, pair in enumerate(pairs):
        u, v = (str(x) for x in pair)
        if u not in vset or v not in vset:
            raise GraphError(f"edge {(u, v)} has an unknown endpoint")
        if u == v:
            raise GraphError(f"loop at vertex {u!r} is not allowed")
        edges.append((f"e{i}", u, v))
    s, t = str(s), str(t)
    if s == t:
        raise GraphError("terminals must be distinct")
    if s not in vset or t not in vset:
        raise GraphError("terminal is not a vertex")
    return Multigraph(tuple(vs), tuple(edges), s, t)


def delete_edge(g: Multigraph, edge_id: str) -> Multigraph:
    g.edge(edge_id)
    return Multigraph(g.vertices, tuple(e for e in g.edges if e[0] != edge_id), g.s, g.t)


def contract_edge(g: Multigraph, edge_id: str) -> ContractResult:
    """Identify the endpoints of an edge.

    The merged vertex keeps the smaller id, except that a terminal always
    survives. Loops created by the merge are dropped. When both terminals end
    up in one vertex the result has ``s == t`` and the flag is set.
    """
    a, b = g.edge(edge_id)
    keep, gone = sorted((a, b))
    if gone in (g.s, g.t) and keep not in (g.s, g.t):
        keep, gone = gone, keep

    def ren(x):
        return keep if x == gone else x

    edges = []
    for eid, u, v in g.edges:
        if eid == edge_id:
            continue
        u, v = ren(u), ren(v)
        if u != v:
            edges.append((eid, u, v))
    s, t = ren(g.s), ren(g.t)
    verts = tuple(v for v in g.vertices if v != gone)
    return ContractResult(Multigraph(verts, tuple(edges), s, t), s == t)


def _fresh(prefix: str, taken: set[str]):
    i = 1
    while True:
        name = f"{prefix}.{i}"
        if name not in taken:
            taken.add(name)
            yield name
        i += 1


def subdivide(g: Multigraph, edge_id: str, parts: int) -> Multigraph:
    """Replace an edge by a path of ``parts`` edges through new internal vertices."""
    u, v = g.edge(edge_id)
    if parts < 1:
        raise GraphError("parts must be >= 1")
    if parts == 1:
        return g
    vnames = _fresh(edge_id, set(g.vertices))
    enames = _fresh(edge_id, {e[0] for e in g.edges})
    chain = [u] + [next(vnames) for _ in range(parts - 1)] + [v]
    new_edges = []
    for eid, x, y in g.edges:
        if eid == edge_id:
            new_edges.extend((next(enames), chain[i], chain[i + 1]) for i in range(parts))
        else:
            new_edges.append((eid, x, y))
    return Multigraph(g.vertices + tuple(chain[1:-1]), tuple(new_edges), g.s, g.t)


def substitute_gadget(g: Multigraph, h: Multigraph, flip: bool = False) -> Multigraph:
    """Edge substitution G[H(u,v)] with H's terminals (h.s, h.t) playing (u, v).

    Each edge {x, y} of G becomes a copy of H; u goes to the smaller of x, y
    (or the larger when ``flip`` is set). Internal vertices and edges of the
    copy are named ``<edge id>.<n>``.
    """
    u, v = h.s, h.t
    if u == v or u not in h.vertices or v not in h.vertices:
        raise GraphError("gadget needs two distinct terminals")
    if not h.is_connected():
        raise GraphError("gadget graph must be connected")
    inner = sorted(x for x in h.vertices if x not in (u, v))
    taken_v = set(g.vertices)
    vertices = list(g.vertices)
    edges = []
    for eid, x, y in g.edges:
        lo, hi = sorted((x, y))
        if flip:
            lo, hi = hi, lo
        names = _fresh(eid, taken_v)
        mapping = {u: lo, v: hi}
        for w in inner:
            mapping[w] = next(names)
            vertices.append(mapping[w])
        for j, (_, a, b) in enumerate(h.edges, start=1):
            edges.append((f"{eid}.{j}", mapping[a], mapping[b]))
    return Multigraph(tuple(vertices), tuple(edges), g.s, g.t)


def relevant_edge_mask(vertices: Iterable[str], pairs: Sequence[tuple], s, t) -> list[bool] | None:
    """Flag edges lying on some simple s-t path; None when s and t are disconnected.

    An edge qualifies exactly when its block sits on the s-t path of the
    block-cut tree.
    """
    simple = nx.Graph()
    simple.add_nodes_from(vertices)
    simple.add_edges_from(pairs)
    if not nx.has_path(simple, s, t):
        return None
    comp = nx.node_connected_component(simple, s)
    simple = simple.subgraph(comp)
    blocks = [frozenset(b) for b in nx.biconnected_components(simple)]
    cuts = set(nx.articulation_points(simple))
    if not cuts:
        return [u in comp and v in comp for u, v in pairs]
    tree = nx.Graph()
    for i, b in enumerate(blocks):
        tree.add_node(("B", i))
        for c in b & cuts:
            tree.add_edge(("B", i), ("C", c))

    def node_of(x):
        if x in cuts:
            return ("C", x)
        return next(("B", i) for i, b in enumerate(blocks) if x in b)

    path = nx.shortest_path(tree, node_of(s), node_of(t))
    keep = [blocks[i] for kind, i in path if kind == "B"]
    return [any(u in b and v in b for b in keep) for u, v in pairs]


def prune_irrelevant(g: Multigraph) -> Multigraph:
    """Drop every edge not on a simple s-t path, then any vertex left isolated (terminals stay)."""
    mask = relevant_edge_mask(g.vertices, g.endpoint_pairs(), g.s, g.t)
    if mask is None:
        raise GraphError("terminals lie in different components")
    edges = tuple(e for e, k in zip(g.edges, mask) if k)
    used = {g.s, g.t}
    for _, u, v in edges:
        used.update((u, v))
    verts = tuple(v for v in g.vertices if v in used)
    return Multigraph(verts, edges, g.s, g.t)


def bfs_order(vertices: Sequence[str], adj: dict[str, list[str]], s: str) -> list[str]:
    """BFS from s; neighbours visited by (degree, id); unreached vertices appended by (degree, id)."""
    deg = {v: len(adj[v]) for v in vertices}
    order = [s]
    seen = {s}
    queue = deque([s])
    while queue:
        x = queue.popleft()
        for y in sorted(set(adj[x]), key=lambda w: (deg[w], w)):
            if y not in seen:
                seen.add(y)
                order.append(y)
                queue.append(y)
    order.extend(sorted((v for v in vertices if v not in seen), key=lambda w: (deg[w], w)))
    return order


def normal_key(g: Multigraph) -> bytes:
    """Deterministic key of the labelled structure after BFS-from-s renaming.

    Independent of edge-list order and edge ids. Not an isomorphism invariant.
    """
    order = bfs_order(g.vertices, _adjacency(g), g.s)
    idx = {v: i for i, v in enumerate(order)}
    edges = sorted(tuple(sorted((idx[u], idx[v]))) for _, u, v in g.edges)
    body = ";".join(f"{a},{b}" for a, b in edges)
    return f"{len(order)}|{idx[g.t]}|{body}".encode()


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class FamilySpec:
    """A closed-form family: cycle(n, k), theta(l, k), bundle(m) or path(l)."""

    family: str
    n: int = 0
    k: int = 0
    l: int = 0
    m: int = 0

    def __post_init__(self):
        f = self.family
        if f == "cycle":
            if self.n < 3 or not 1 <= self.k <= self.n // 2:
                raise GraphError("cycle needs n >= 3 and 1 <= k <= n/2")
        elif f == "theta":
            if self.l < 1 or self.k < 1:
                raise GraphError("theta needs l >= 1 and k >= 1")
        elif f == "bundle":
            if self.m < 1:
                raise GraphError("bundle needs m >= 1")
        elif f == "path":
            if self.l < 1:
                raise GraphError("path needs length l >= 1")
        else:
            raise GraphError(f"unknown family {f!r}")

    @property
    def label(self) -> str:
        params = {"cycle": ("n", "k"), "theta": ("l", "k"), "bundle": ("m",), "path": ("l",)}
        return "-".join([self.family] + [f"{p}{getattr(self, p)}" for p in params[self.family]])


def cycle_graph(n: int, k: int) -> Multigraph:
    """C_n on vertices 0..n-1 with terminals 0 and k."""
    FamilySpec("cycle", n=n, k=k)
    return from_edge_list(range(n), [(i, (i + 1) % n) for i in range(n)], 0, k)


def theta_graph(l: int, k: int) -> Multigraph:
    """k internally disjoint s-t paths of length l."""
    FamilySpec("theta", l=l, k=k)
    verts = ["s", "t"]
    pairs = []
    for j in range(k):
        chain = ["s"] + [f"{j}.{i}" for i in range(1, l)] + ["t"]
        verts.extend(chain[1:-1])
        pairs.extend(zip(chain, chain[1:]))
    return from_edge_list(verts, pairs, "s", "t")


def bundle_graph(m: int) -> Multigraph:
    FamilySpec("bundle", m=m)
    return from_edge_list(["s", "t"], [("s", "t")] * m, "s", "t")


def path_graph(l: int) -> Multigraph:
    FamilySpec("path", l=l)
    chain = ["s"] + [str(i) for i in range(1, l)] + ["t"]
    return from_edge_list(chain, list(zip(chain, chain[1:])), "s", "t")


def family_graph(spec: FamilySpec) -> Multigraph:
    if spec.family == "cycle":
        return cycle_graph(spec.n, spec.k)
    if spec.family == "theta":
        return theta_graph(spec.l, spec.k)
    if spec.family == "bundle":
        return bundle_graph(spec.m)
    return path_graph(spec.l)
