"""Polynomial dynamics of reliability polynomials.

Inverse orbits of 0 approximate the two-terminal attractor; forward orbits of
critical points decide whether the Julia set is connected. Escape is certified
with the radius from :func:`root_bounds`, beyond which |f(z)| >= 2|z|.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .multigraph import Multigraph
from .polynomial import Polynomial, evaluate, root_bounds
from .reliability import classify_origin, trel
from .rootfinder import RootSet, all_roots, preimages

__all__ = [
    "PointCloud",
    "OrbitVerdict",
    "ConnectivityVerdict",
    "AttractorReport",
    "critical_points",
    "forward_orbit",
    "certify_escape",
    "inverse_orbit",
    "attractor",
    "connectivity",
]

log = logging.getLogger(__name__)

DEDUP = 1e-9
DEFAULT_DEPTH = 10
DEFAULT_BUDGET = 200_000
DEFAULT_MAX_ITER = 1000
CYCLE_DIGITS = 12


@dataclass(frozen=True)
class PointCloud:
    points: np.ndarray  # complex, in order of discovery
    depths: np.ndarray  # level at which each point first appeared
    depth: int
    budget_hit: bool = False
    dropped: int = 0

    def __len__(self) -> int:
        return len(self.points)

    def nearest(self, z: complex) -> float:
        return float(np.min(np.abs(self.points - z)))


@dataclass(frozen=True)
class OrbitVerdict:
    outcome: str  # escaped | cycle-detected | bounded-heuristic
    step: int  # escape step, cycle period or iterations run
    max_modulus_seen: float
    escape_radius: float
    orbit: tuple[complex, ...] = field(repr=False, default=())
    overflow: bool = False

    @property
    def escaped(self) -> bool:
        return self.outcome == "escaped"

    @property
    def bounded(self) -> bool:
        return self.outcome in ("cycle-detected", "bounded-heuristic")


@dataclass(frozen=True)
class ConnectivityVerdict:
    verdict: str  # disconnected-certified | connected-heuristic | inconclusive
    critical: tuple[complex, ...]
    orbits: tuple[OrbitVerdict, ...]


def critical_points(f: Polynomial) -> RootSet:
    if f.degree < 2:
        raise ValueError("critical points need degree >= 2")
    return all_roots(f.derivative())


def _rational(x: float) -> Fraction:
    return Fraction(x)


def certify_escape(f: Polynomial, z: complex) -> bool:
    """Exact check of |f(z)| >= 2|z| at z rounded to a Gaussian rational."""
    x, y = _rational(z.real), _rational(z.imag)
    re, im = Fraction(0), Fraction(0)
    for c in reversed(f.coeffs):
        re, im = re * x - im * y + c, re * y + im * x
    return re * re + im * im >= 4 * (x * x + y * y)


def forward_orbit(f: Polynomial, z0: complex, max_iter: int = DEFAULT_MAX_ITER) -> OrbitVerdict:
    """Iterate f from z0 until escape, a repeated point, or ``max_iter`` steps."""
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    radius = root_bounds(f).escape_radius
    z = complex(z0)
    seen = {(round(z.real, CYCLE_DIGITS), round(z.imag, CYCLE_DIGITS)): 0}
    orbit = [z]
    top = abs(z)
    for step in range(1, max_iter + 1):
        try:
            z = evaluate(f, z)
            mod = abs(z)
        except OverflowError:
            return OrbitVerdict("escaped", step, math.inf, radius, tuple(orbit), overflow=True)
        if not math.isfinite(mod):
            return OrbitVerdict("escaped", step, math.inf, radius, tuple(orbit), overflow=True)
        orbit.append(z)
        top = max(top, mod)
        if mod > radius:
            return OrbitVerdict("escaped", step, top, radius, tuple(orbit))
        key = (round(z.real, CYCLE_DIGITS), round(z.imag, CYCLE_DIGITS))
        if key in seen:
            return OrbitVerdict("cycle-detected", step - seen[key], top, radius, tuple(orbit))
        seen[key] = step
    return OrbitVerdict("bounded-heuristic", max_iter, top, radius, tuple(orbit))


def connectivity(f: Polynomial, max_iter: int = DEFAULT_MAX_ITER) -> ConnectivityVerdict:
    """Connectivity of J(f) from the forward orbits of its critical points.

    Only disconnection is certified; bounded orbits are evidence, not proof.
    """
    crit = critical_points(f)
    points = [r.value for r in crit.with_zero()]
    orbits = tuple(forward_orbit(f, z, max_iter) for z in points)
    if any(o.escaped and not o.overflow for o in orbits):
        verdict = "disconnected-certified"
    elif crit.converged and all(o.bounded for o in orbits):
        verdict = "connected-heuristic"
    else:
        verdict = "inconclusive"
    return ConnectivityVerdict(verdict, tuple(points), orbits)


class _Dedup:
    """Grid hash for points at resolution ``res``; neighbor cells are checked too."""

    def __init__(self, res: float = DEDUP):
        self.res = res
        self.grid: dict[tuple[int, int], list[complex]] = {}

    def add(self, z: complex) -> bool:
        i, j = math.floor(z.real / self.res), math.floor(z.imag / self.res)
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                for w in self.grid.get((i + di, j + dj), ()):
                    if abs(w - z) < self.res:
                        return False
        self.grid.setdefault((i, j), []).append(z)
        return True


def _canonical(zs: np.ndarray) -> np.ndarray:
    return zs[np.lexsort((zs.imag, zs.real))]


def inverse_orbit(
    f: Polynomial,
    depth: int = DEFAULT_DEPTH,
    budget: int = DEFAULT_BUDGET,
    seed: int | None = 0,
) -> PointCloud:
    """Backward orbit of 0 under f, level by level.

    Every preimage of the frontier is kept while the cloud fits in ``budget``
    points; after that each level follows one random preimage per frontier
    point, with the frontier subsampled to share the remaining budget.
    """
    if f.degree < 2:
        raise ValueError("inverse orbit needs degree >= 2")
    if f[0] != 0:
        raise ValueError("f(0) must be 0")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    rng = np.random.default_rng(seed)
    seen = _Dedup()
    seen.add(0j)
    points, depths = [0j], [0]
    frontier = np.array([0j])
    budget_hit = False
    dropped = 0
    d = f.degree
    for level in range(1, depth + 1):
        if len(frontier) == 0:
            break
        remaining = budget - len(points)
        if not budget_hit and len(frontier) * d > remaining:
            budget_hit = True
        if budget_hit:
            quota = max(remaining // (depth - level + 1), 0)
            if quota == 0:
                break
            if len(frontier) > quota:
                frontier = frontier[np.sort(rng.choice(len(frontier), quota, replace=False))]
        zs, ok = preimages(f, frontier)
        if budget_hit:
            pick = rng.integers(0, d, size=len(frontier))
            rows = np.arange(len(frontier))
            zs, ok = zs[rows, pick], ok[rows, pick]
        dropped += int((~ok).sum())
        cand = _canonical(zs[ok].ravel())
        fresh = []
        for z in cand:
            z = complex(z.real + 0.0, z.imag + 0.0)  # no signed zeros
            if seen.add(z):
                fresh.append(z)
        points.extend(fresh)
        depths.extend([level] * len(fresh))
        frontier = np.array(fresh, dtype=complex)
    if dropped:
        log.warning("%d preimage(s) dropped by the residual check", dropped)
    return PointCloud(np.array(points, dtype=complex), np.array(depths, dtype=int), depth, budget_hit, dropped)


@dataclass(frozen=True)
class AttractorReport:
    polynomial: Polynomial
    origin: str
    adjacent: bool
    structure: str
    cloud: PointCloud


def attractor(
    g: Multigraph,
    depth: int = DEFAULT_DEPTH,
    budget: int = DEFAULT_BUDGET,
    seed: int | None = 0,
    f: Polynomial | None = None,
) -> AttractorReport:
    """Inverse-orbit approximation of the two-terminal attractor of (g, s, t)."""
    f = trel(g) if f is None else f
    origin = classify_origin(f)
    adjacent = origin.multiplier >= 1
    if f.degree < 2:
        # a single s-t path: f = p^l has nothing but 0 to pull back
        cloud = PointCloud(np.array([0j]), np.array([0]), depth)
        return AttractorReport(f, origin.kind, adjacent, "attractor is {0}", cloud)
    k, rest = f.deflate()
    if rest.degree == 0:
        cloud = PointCloud(np.array([0j]), np.array([0]), depth)
        return AttractorReport(f, origin.kind, adjacent, "attractor is {0}", cloud)
    if adjacent:
        structure = "attractor approximates J(T)"
    else:
        structure = "attractor = inverse orbit; J(T) is its accumulation set"
    return AttractorReport(f, origin.kind, adjacent, structure, inverse_orbit(f, depth, budget, seed))
