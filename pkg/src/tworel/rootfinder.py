"""Complex roots of exact polynomials.

The power of p is divided out exactly and the rest is split into square-free
factors. Each factor is solved by Aberth-Ehrlich simultaneous iteration,
real roots come from exact Sturm isolation, and every root is Newton-polished
at 34 significant digits before rounding back to a complex double.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .polynomial import Polynomial, evaluate, isolate_real_roots, root_bounds, squarefree_decomposition

__all__ = [
    "Root",
    "RootSet",
    "RootFindingError",
    "aberth",
    "all_roots",
    "reconstruction_error",
    "preimages",
    "LeftHalfPlane",
    "OutsideDisk",
    "RealInterval",
    "RegionResult",
    "region_filter",
]

log = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-8
ABERTH_SWEEPS = 200
POLISH_STEPS = 50
POLISH_DPS = 34
BOUNDARY_TOL = 1e-9


class RootFindingError(RuntimeError):
    def __init__(self, message: str, rootset: "RootSet"):
        super().__init__(message)
        self.rootset = rootset


@dataclass(frozen=True)
class Root:
    value: complex
    residual: float  # normwise backward error |g(z)| / sum |c_i| |z|^i
    multiplicity: int = 1

    @property
    def is_real(self) -> bool:
        return self.value.imag == 0.0


@dataclass(frozen=True)
class RootSet:
    degree: int
    zero_multiplicity: int
    roots: tuple[Root, ...]
    unconverged: tuple[Root, ...] = field(default=())

    @property
    def converged(self) -> bool:
        return not self.unconverged

    def values(self, include_zero: bool = True) -> list[complex]:
        """Roots repeated by multiplicity."""
        out = [0j] * self.zero_multiplicity if include_zero else []
        for r in self.roots:
            out.extend([r.value] * r.multiplicity)
        return out

    def with_zero(self) -> list[Root]:
        head = [Root(0j, 0.0, self.zero_multiplicity)] if self.zero_multiplicity else []
        return head + list(self.roots)

    def count(self) -> int:
        return self.zero_multiplicity + sum(r.multiplicity for r in self.roots)


def _horner(coeffs: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Value and derivative; coeffs (N, d+1) ascending, z (N, d)."""
    d = coeffs.shape[1] - 1
    p = np.repeat(coeffs[:, d : d + 1], z.shape[1], axis=1).astype(complex)
    dp = np.zeros_like(p)
    for i in range(d - 1, -1, -1):
        dp = dp * z + p
        p = p * z + coeffs[:, i : i + 1]
    return p, dp


def aberth(coeffs: np.ndarray, sweeps: int = ABERTH_SWEEPS, radius: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Batched Aberth-Ehrlich iteration.

    ``coeffs`` has shape (N, d+1), lowest power first, with nonzero leading
    entries. Start points sit on a circle of radius ``radius`` (default: half
    the Fujiwara bound of each row). Returns the (N, d) approximations and a
    per-row convergence flag.
    """
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    n, d1 = coeffs.shape
    d = d1 - 1
    if d < 1:
        return np.zeros((n, 0), complex), np.ones(n, bool)
    lead = coeffs[:, -1:]
    if radius is None:
        # max |c_i / c_d|^(1/(d-i)): half the Fujiwara bound, far tighter than Cauchy's for high degree
        ratios = np.abs(coeffs[:, :-1] / lead)
        expo = 1.0 / (d - np.arange(d))
        radius = np.max(ratios ** expo[None, :], axis=1)
        radius = np.where(radius > 0, radius, 1.0)
    angles = 2 * np.pi * (np.arange(d) + 0.25) / d + 0.4
    z = radius[:, None] * np.exp(1j * angles)[None, :]
    active = np.ones((n, d), bool)
    eye = np.eye(d, dtype=bool)
    for _ in range(sweeps):
        p, dp = _horner(coeffs, z)
        with np.errstate(all="ignore"):
            ratio = p / dp
            diff = z[:, :, None] - z[:, None, :]
            inv = np.where(eye[None], 0, 1 / np.where(eye[None], 1, diff))
            s = inv.sum(axis=2)
            w = ratio / (1 - ratio * s)
        w = np.where(np.isfinite(w), w, 0)
        w = np.where(active, w, 0)
        z = z - w
        active &= np.abs(w) > 1e-15 * (1 + np.abs(z))
        active &= p != 0
        if not active.any():
            break
    return z, ~active.any(axis=1)


def _backward_error(g: Polynomial, z) -> float:
    with mpmath.workdps(POLISH_DPS):
        zz = mpmath.mpc(z)
        num = abs(evaluate(g, zz))
        den = sum(abs(mpmath.mpf(c.numerator) / c.denominator) * abs(zz) ** i for i, c in enumerate(g.coeffs))
        return float(num / den)


def _polish(g: Polynomial, dg: Polynomial, z, real: bool = False):
    with mpmath.workdps(POLISH_DPS):
        z = mpmath.mpf(z.real) if real else mpmath.mpc(z)
        for _ in range(POLISH_STEPS):
            d = evaluate(dg, z)
            if d == 0:
                break
            step = evaluate(g, z) / d
            z -= step
            if abs(step) <= mpmath.mpf(10) ** (-POLISH_DPS + 2) * max(1, abs(z)):
                break
        return complex(z)


def _factor_roots(g: Polynomial) -> list[complex]:
    """Roots of a square-free rational polynomial with g(0) != 0."""
    d = g.degree
    if d == 1:
        return [complex(-g[0] / g[1])]
    dg = g.derivative()
    real = []
    for rr in isolate_real_roots(g):
        x = rr.lo if rr.is_exact else rr.refine(max(abs(rr.midpoint), 1) * 2**-40).midpoint
        real.append(complex(float(x)) if rr.is_exact else _polish(g, dg, complex(float(x)), real=True))
    n_complex = d - len(real)
    if n_complex == 0:
        return real
    approx, _ = aberth(np.array([[complex(float(c)) for c in g.coeffs]]))
    approx = approx[0]
    # discard the len(real) candidates nearest the real axis; keep the upper half-plane ones
    order = np.argsort(np.abs(approx.imag))
    upper = [z for z in approx[order[len(real):]] if z.imag > 0]
    polished = [_polish(g, dg, z) for z in upper]
    if len(polished) * 2 == n_complex and all(z.imag > 0 for z in polished):
        return real + polished + [z.conjugate() for z in polished]
    # pairing failed; fall back to polishing every candidate
    log.warning("conjugate pairing failed for degree-%d factor; polishing raw candidates", d)
    return real + [_polish(g, dg, z) for z in approx[order[len(real):]]]


def all_roots(f: Polynomial, tol: float = RESIDUAL_TOL, strict: bool = False) -> RootSet:
    """All complex roots of f with exact zero multiplicity and exact multiplicities of the rest."""
    if f.is_zero():
        raise ValueError("the zero polynomial has no finite root set")
    k, g = f.deflate()
    roots: list[Root] = []
    bad: list[Root] = []
    if g.degree >= 1:
        for gi, mult in squarefree_decomposition(g):
            for z in _factor_roots(gi):
                r = Root(z, _backward_error(g, z), mult)
                (roots if r.residual <= tol else bad).append(r)
    roots.sort(key=lambda r: (r.value.real, r.value.imag))
    rs = RootSet(f.degree, k, tuple(roots), tuple(bad))
    if bad:
        msg = f"{len(bad)} root(s) above residual tolerance {tol}"
        if strict:
            raise RootFindingError(msg, rs)
        log.warning(msg)
    return rs


def reconstruction_error(f: Polynomial, rs: RootSet) -> float:
    """Max coefficient deviation of lc * prod (p - r_i), relative to the largest coefficient of f."""
    coeffs = np.array([1.0 + 0j])
    for z in rs.values():
        coeffs = np.convolve(coeffs, np.array([-z, 1.0]))
    coeffs = coeffs * float(f.leading)
    target = np.array([float(c) for c in f.coeffs], dtype=complex)
    if len(coeffs) != len(target):
        return float("inf")
    return float(np.max(np.abs(coeffs - target)) / np.max(np.abs(target)))


def preimages(f: Polynomial, ws: np.ndarray, newton_steps: int = 3) -> tuple[np.ndarray, np.ndarray]:
    """Solve f(z) = w for a batch of w in double precision.

    Returns an (N, d) array of preimages and a boolean (N, d) mask of those
    whose residual |f(z) - w| is below 1e-9 * (1 + |w|).
    """
    ws = np.asarray(ws, dtype=complex)
    base = np.array([complex(float(c)) for c in f.coeffs])
    coeffs = np.tile(base, (len(ws), 1))
    coeffs[:, 0] -= ws
    z, _ = aberth(coeffs)
    for _ in range(newton_steps):
        p, dp = _horner(coeffs, z)
        with np.errstate(all="ignore"):
            step = np.where(dp != 0, p / dp, 0)
        z = z - np.where(np.isfinite(step), step, 0)
    p, _ = _horner(coeffs, z)
    ok = np.abs(p) <= 1e-9 * (1 + np.abs(ws))[:, None]
    return z, ok


# ---------------------------------------------------------------------------
# regions


@dataclass(frozen=True)
class LeftHalfPlane:
    def distance(self, z: complex) -> float:
        # signed: negative inside
        return z.real


@dataclass(frozen=True)
class OutsideDisk:
    center: complex = 0j
    radius: float = 1.0

    def distance(self, z: complex) -> float:
        return self.radius - abs(z - self.center)


@dataclass(frozen=True)
class RealInterval:
    a: float
    b: float

    def distance(self, z: complex) -> float:
        return max(self.a - z.real, z.real - self.b, abs(z.imag))


@dataclass(frozen=True)
class RegionResult:
    inside: tuple[Root, ...]
    ambiguous: tuple[Root, ...]

    @property
    def count(self) -> int:
        return sum(r.multiplicity for r in self.inside)


def region_filter(rs: RootSet, region, boundary_tol: float = BOUNDARY_TOL) -> RegionResult:
    """Roots strictly inside a region; those within ``boundary_tol`` of its edge are reported separately.

    The root at 0 (if any) takes part with its exact multiplicity.
    """
    if isinstance(region, OutsideDisk) and region.radius < 0:
        raise ValueError("radius must be nonnegative")
    if isinstance(region, RealInterval) and region.a > region.b:
        raise ValueError("empty interval")
    inside, ambiguous = [], []
    for r in rs.with_zero():
        d = region.distance(r.value)
        if isinstance(region, RealInterval):
            # exactly real roots are reported with imag == 0
            near_edge = abs(r.value.real - region.a) <= boundary_tol or abs(r.value.real - region.b) <= boundary_tol
            if near_edge and abs(r.value.imag) <= boundary_tol:
                ambiguous.append(r)
            elif region.a < r.value.real < region.b and r.value.imag == 0.0:
                inside.append(r)
            elif abs(r.value.imag) <= boundary_tol and r.value.imag != 0.0 and region.a < r.value.real < region.b:
                ambiguous.append(r)
            continue
        if abs(d) <= boundary_tol:
            ambiguous.append(r)
        elif d < 0:
            inside.append(r)
    return RegionResult(tuple(inside), tuple(ambiguous))
