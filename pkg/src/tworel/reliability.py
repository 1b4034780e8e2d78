"""Two-terminal reliability polynomials.

``trel`` runs the factor theorem

    Rel(G) = q_e * Rel(G . e) + (1 - q_e) * Rel(G - e)

on graphs whose edges carry reliability polynomials q_e (initially p), after
pruning edges off every s-t path and collapsing parallel and series pairs.
Results of reduced subproblems are memoized on a canonical key.
"""

from __future__ import annotations

import cmath
import math
import threading
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, MutableMapping

import mpmath
import numpy as np

from .multigraph import FamilySpec, GraphError, Multigraph, bfs_order, relevant_edge_mask
from .polynomial import P, Polynomial, evaluate

__all__ = [
    "ReliabilityEngine",
    "trel",
    "trel_family",
    "compose_gadget",
    "OriginClass",
    "classify_origin",
    "DensityHit",
    "SearchExhausted",
    "find_root_near_disk0",
    "LiftedRoot",
    "lift_roots_disk1",
    "theta_value",
]

ONE = Polynomial([1])
ZERO = Polynomial()

# (u, v, weight) with integer vertices
WEdge = tuple[int, int, Polynomial]


def _parallel(a: Polynomial, b: Polynomial) -> Polynomial:
    return a + b - a * b


class ReliabilityEngine:
    """Deletion-contraction with series-parallel reductions and a memo table.

    ``cache`` may be any mutable mapping from ``bytes`` keys to polynomials,
    e.g. a :class:`tworel.cache.DiskCache`.
    """

    def __init__(self, cache: MutableMapping[bytes, Polynomial] | None = None):
        self.cache = {} if cache is None else cache
        self.hits = 0
        self.misses = 0
        self._lock = threading.Lock()

    def trel(self, g: Multigraph) -> Polynomial:
        if g.s == g.t:
            raise GraphError("terminals must be distinct")
        index = {v: i for i, v in enumerate(g.vertices)}
        edges = [(index[u], index[v], P) for _, u, v in g.edges]
        return self._solve(edges, index[g.s], index[g.t])

    # internals

    def _solve(self, edges: list[WEdge], s: int, t: int) -> Polynomial:
        edges = _prune(edges, s, t)
        if edges is None:
            return ZERO
        edges = _reduce(edges, s, t)
        if len(edges) == 1:
            return edges[0][2]
        edges, s, t = _canonical(edges, s, t)
        key = _key(edges, t)
        hit = self.cache.get(key)
        if hit is not None:
            self.hits += 1
            return hit
        self.misses += 1

        bi = _branch_edge(edges, s)
        u, v, w = edges[bi]
        rest = edges[:bi] + edges[bi + 1 :]
        other = v if u == s else u
        if other == t:
            contracted = ONE
        else:
            merged = []
            for a, b, q in rest:
                a = s if a == other else a
                b = s if b == other else b
                if a != b:
                    merged.append((a, b, q))
            contracted = self._solve(merged, s, t)
        deleted = self._solve(rest, s, t)
        result = w * contracted + (ONE - w) * deleted
        with self._lock:
            self.cache.setdefault(key, result)
        return result


def _prune(edges: list[WEdge], s: int, t: int) -> list[WEdge] | None:
    verts = {s, t}
    for a, b, _ in edges:
        verts.update((a, b))
    mask = relevant_edge_mask(sorted(verts), [(a, b) for a, b, _ in edges], s, t)
    if mask is None:
        return None
    return [e for e, k in zip(edges, mask) if k]


def _reduce(edges: list[WEdge], s: int, t: int) -> list[WEdge]:
    """Collapse parallel classes and non-terminal degree-2 vertices until stable."""
    while True:
        groups: dict[tuple[int, int], Polynomial] = {}
        for a, b, q in edges:
            k = (a, b) if a < b else (b, a)
            groups[k] = _parallel(groups[k], q) if k in groups else q
        edges = [(a, b, q) for (a, b), q in groups.items()]

        incident: dict[int, list[int]] = defaultdict(list)
        for i, (a, b, _) in enumerate(edges):
            incident[a].append(i)
            incident[b].append(i)
        target = next((x for x, ids in incident.items() if len(ids) == 2 and x not in (s, t)), None)
        if target is None:
            return edges
        i, j = incident[target]
        a1, b1, q1 = edges[i]
        a2, b2, q2 = edges[j]
        x = b1 if a1 == target else a1
        y = b2 if a2 == target else a2
        edges = [e for k, e in enumerate(edges) if k not in (i, j)]
        edges.append((x, y, q1 * q2))


def _canonical(edges: list[WEdge], s: int, t: int) -> tuple[list[WEdge], int, int]:
    verts = set()
    adj: dict = defaultdict(list)
    for a, b, _ in edges:
        verts.update((a, b))
        adj[a].append(b)
        adj[b].append(a)
    # ids are ints; bfs_order only needs them to be sortable
    order = bfs_order(sorted(verts), adj, s)
    idx = {v: i for i, v in enumerate(order)}
    out = []
    for a, b, q in edges:
        a, b = idx[a], idx[b]
        if a > b:
            a, b = b, a
        out.append((a, b, q))
    out.sort(key=lambda e: (e[0], e[1], e[2].coeffs))
    return out, 0, idx[t]


def _key(edges: list[WEdge], t: int) -> bytes:
    parts = [f"t{t}"]
    for a, b, q in edges:
        parts.append(f"{a},{b}:" + ",".join(str(c) for c in q.coeffs))
    return ";".join(parts).encode()


def _branch_edge(edges: list[WEdge], s: int) -> int:
    deg: dict[int, int] = defaultdict(int)
    for a, b, _ in edges:
        deg[a] += 1
        deg[b] += 1
    best = None
    for i, (a, b, _) in enumerate(edges):
        if s not in (a, b):
            continue
        other = b if a == s else a
        rank = (deg[other], -other)
        if best is None or rank > best[0]:
            best = (rank, i)
    assert best is not None, "pruned graph has an edge at s"
    return best[1]


_default_engine = ReliabilityEngine()


def trel(g: Multigraph, engine: ReliabilityEngine | None = None) -> Polynomial:
    """Two-terminal reliability of (g, g.s, g.t) as an exact polynomial in p."""
    return (engine or _default_engine).trel(g)


def trel_family(spec: FamilySpec) -> Polynomial:
    """Closed forms for cycles, theta graphs, bundles and paths."""
    if spec.family == "cycle":
        n, k = spec.n, spec.k
        return Polynomial.monomial(k) + Polynomial.monomial(n - k) - Polynomial.monomial(n)
    if spec.family == "theta":
        return ONE - (ONE - Polynomial.monomial(spec.l)) ** spec.k
    if spec.family == "bundle":
        return ONE - (ONE - P) ** spec.m
    if spec.family == "path":
        return Polynomial.monomial(spec.l)
    raise GraphError(f"unknown family {spec.family!r}")


def compose_gadget(g: Multigraph, h: Multigraph, engine: ReliabilityEngine | None = None) -> Polynomial:
    """Reliability of G[H(u,v)] without building it: Rel(G) evaluated at Rel(H)."""
    return trel(g, engine).compose(trel(h, engine))


@dataclass(frozen=True)
class OriginClass:
    kind: str  # superattracting | rationally-indifferent | repelling
    multiplier: int


def classify_origin(f: Polynomial) -> OriginClass:
    """Type of the fixed point 0 from the linear coefficient (parallel s-t edge count)."""
    if f[0] != 0:
        raise ValueError("0 is not a fixed point: f(0) != 0")
    a1 = f[1]
    if a1.denominator != 1 or a1 < 0:
        raise ValueError(f"linear coefficient {a1} is not an edge count")
    a1 = int(a1)
    if a1 == 0:
        kind = "superattracting"
    elif a1 == 1:
        kind = "rationally-indifferent"
    else:
        kind = "repelling"
    return OriginClass(kind, a1)


# ---------------------------------------------------------------------------
# roots near the unit disks


RESIDUAL_TOL = 1e-10
_DPS = 50


def theta_value(l: int, k: int) -> Callable:
    """Evaluate 1 - (1 - z^l)^k without expanding the polynomial."""

    def value(z):
        return 1 - (1 - z**l) ** k

    return value


@dataclass(frozen=True)
class DensityHit:
    l: int
    k: int
    j: int  # omega = exp(2 pi i j / k)
    q: int  # which l-th root of 1 - omega
    root: mpmath.mpc
    residual: float
    distance: float

    @property
    def value(self) -> complex:
        return complex(self.root)


class SearchExhausted(RuntimeError):
    def __init__(self, message: str, best: DensityHit | None):
        super().__init__(message)
        self.best = best


def _theta_root(l: int, k: int, j: int, q: int) -> mpmath.mpc:
    omega = mpmath.expjpi(mpmath.mpf(2 * j) / k)
    base = 1 - omega
    return mpmath.root(base, l) * mpmath.expjpi(mpmath.mpf(2 * q) / l)


def find_root_near_disk0(target: complex, eps: float, max_l: int = 512, max_k: int = 10**6) -> DensityHit:
    """Find a root of 1 - (1 - p^l)^k within ``eps`` of ``target`` (0 < |target| < 1).

    Roots are nu with nu^l = 1 - omega, omega a k-th root of unity. For each
    l (so that the l-th roots are spread 2 pi / l apart in argument) the point
    nu* = |target| e^{i psi} with |1 - nu*^l| = 1 and psi closest to
    arg(target) is formed; omega* = 1 - nu*^l is then approximated by
    exp(2 pi i j / k) with the best fractions j/k of growing denominator.
    The hit is re-evaluated at 50 digits and must have residual below 1e-10.
    """
    target = complex(target)
    if not eps > 0:
        raise ValueError("eps must be positive")
    rho = abs(target)
    if not 0 < rho < 1:
        raise ValueError("target must lie in the punctured open unit disk")
    theta = cmath.phase(target)
    best: DensityHit | None = None
    for l in range(1, max_l + 1):
        rl = rho**l
        if rl < 1e-300:
            break
        # |1 - rho^l e^{i l psi}| = 1  <=>  cos(l psi) = rho^l / 2
        half = math.acos(rl / 2)
        for sign in (1, -1):
            q = round((theta * l - sign * half) / (2 * math.pi))
            psi = (sign * half + 2 * math.pi * q) / l
            far = 2 * rho * abs(math.sin((psi - theta) / 2)) >= eps
            if far and best is not None:
                continue
            omega_star = 1 - rl * cmath.exp(1j * l * psi)
            frac = (cmath.phase(omega_star) / (2 * math.pi)) % 1.0
            # a direction that cannot succeed is only sampled once, to have a best guess to report
            K = max_k // 2 if far else 1
            while True:
                K = min(2 * K, max_k)
                approx = Fraction(frac).limit_denominator(K)
                j, k = approx.numerator, approx.denominator
                if 0 < j < k:
                    nu = _nearest_root(l, k, j, target)
                    dist = abs(nu[0] - target)
                    if best is None or dist < best.distance:
                        best = _certify(l, k, j, nu[1], target)
                    if dist < eps:
                        hit = _certify(l, k, j, nu[1], target)
                        if hit.distance < eps and hit.residual < RESIDUAL_TOL:
                            return hit
                if K >= max_k:
                    break
    raise SearchExhausted(f"no theta root within {eps} of {target} for l <= {max_l}, k <= {max_k}", best)


def _nearest_root(l: int, k: int, j: int, target: complex) -> tuple[complex, int]:
    base = 1 - cmath.exp(2j * math.pi * j / k)
    mod = abs(base) ** (1.0 / l)
    phi = cmath.phase(base)
    q = round((cmath.phase(target) * l - phi) / (2 * math.pi))
    return mod * cmath.exp(1j * (phi + 2 * math.pi * q) / l), q


def _certify(l: int, k: int, j: int, q: int, target: complex) -> DensityHit:
    with mpmath.workdps(_DPS):
        nu = _theta_root(l, k, j, q)
        residual = float(abs(theta_value(l, k)(nu)))
        distance = float(abs(nu - mpmath.mpc(target)))
    return DensityHit(l, k, j % k, q % l, nu, residual, distance)


@dataclass(frozen=True)
class LiftedRoot:
    value: mpmath.mpc
    residual: float  # |outer(bundle(z))| if outer given, else |bundle(z) - r|


def lift_roots_disk1(r, m: int, outer: Polynomial | Callable | None = None) -> list[LiftedRoot]:
    """Roots of Rel(G)∘(1 - (1-p)^m) coming from a root r of Rel(G): z = 1 - zeta, zeta^m = 1 - r."""
    if m < 1:
        raise ValueError("m must be >= 1")
    out = []
    with mpmath.workdps(_DPS):
        r = mpmath.mpc(r)
        base = mpmath.root(1 - r, m)
        for q in range(m):
            z = 1 - base * mpmath.expjpi(mpmath.mpf(2 * q) / m)
            inner = 1 - (1 - z) ** m
            if outer is None:
                res = abs(inner - r)
            elif isinstance(outer, Polynomial):
                res = abs(evaluate(outer, inner))
            else:
                res = abs(outer(inner))
            out.append(LiftedRoot(z, float(res)))
    return out
