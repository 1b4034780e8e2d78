"""Half-plane and real-root analysis.

The Hermite-Biehler test decides weak stability (all roots in the closed left
half-plane) with exact arithmetic: the even and odd parts of f must have
positive leading coefficients and only real nonpositive roots, and reading
downward from 0 the roots must alternate r1 >= s1 >= r2 >= s2 >= ... with r
from the even part and s from the odd part.
"""

from __future__ import annotations

from dataclasses import dataclass

from .polynomial import (
    Polynomial,
    RealRoot,
    even_odd_split,
    evaluate,
    isolate_real_roots,
    sign_changes,
    squarefree_decomposition,
)
from .rootfinder import LeftHalfPlane, all_roots, region_filter

__all__ = [
    "HBResult",
    "hermite_biehler",
    "CycleWitness",
    "cycle_left_halfplane_witness",
    "RootCensus",
    "real_root_census",
]


@dataclass(frozen=True)
class HBResult:
    weakly_stable: bool
    f_even: Polynomial
    f_odd: Polynomial
    failed_check: str | None  # "leading-coefficient" | "real-roots" | "nonpositive-roots" | "interlacing"
    detail: str = ""

    @property
    def verdict(self) -> str:
        return "weakly-stable" if self.weakly_stable else "not-weakly-stable"


def _merged_ranks(fe: Polynomial, fo: Polynomial) -> tuple[list[int], list[int]]:
    """Ranks of the real roots of fe and fo (with multiplicity) on a common exact ordering."""
    product = Polynomial([1])
    for q in (fe, fo):
        if q.degree > 0:
            product = product * q
    if product.degree <= 0:
        return [], []
    distinct = isolate_real_roots(product)

    def ranks(q: Polynomial) -> list[int]:
        if q.degree <= 0:
            return []
        factors = squarefree_decomposition(q)
        out = []
        for i, root in enumerate(distinct):
            out.extend([i] * _multiplicity_at(factors, root))
        return out

    return ranks(fe), ranks(fo)


def _multiplicity_at(factors, root: RealRoot) -> int:
    for g, mult in factors:
        if root.is_exact:
            if evaluate(g, root.lo) == 0:
                return mult
        else:
            a, b = evaluate(g, root.lo), evaluate(g, root.hi)
            if (a > 0) != (b > 0) and a != 0 and b != 0:
                return mult
    return 0


def hermite_biehler(f: Polynomial) -> HBResult:
    """Exact weak-stability test; a negative leading coefficient is flipped first."""
    if f.is_zero():
        raise ValueError("zero polynomial")
    if f.leading < 0:
        f = -f
    fe, fo = even_odd_split(f)

    for name, q in (("f_even", fe), ("f_odd", fo)):
        if not q.is_zero() and q.leading < 0:
            return HBResult(False, fe, fo, "leading-coefficient", f"{name} has negative leading coefficient")

    for name, q in (("f_even", fe), ("f_odd", fo)):
        if q.degree <= 0:
            continue
        roots = isolate_real_roots(q)
        if sum(r.multiplicity for r in roots) != q.degree:
            return HBResult(False, fe, fo, "real-roots", f"{name} has non-real roots")
        if any(r.compare(0) > 0 for r in roots):
            return HBResult(False, fe, fo, "nonpositive-roots", f"{name} has a positive root")

    if fe.is_zero() or fo.is_zero():
        return HBResult(True, fe, fo, None)

    r, s = _merged_ranks(fe, fo)
    if not 0 <= len(r) - len(s) <= 1:
        return HBResult(False, fe, fo, "interlacing", f"f_even has {len(r)} roots and f_odd {len(s)}")
    r, s = r[::-1], s[::-1]
    seq = []
    for i in range(len(r)):
        seq.append(r[i])
        if i < len(s):
            seq.append(s[i])
    if any(a < b for a, b in zip(seq, seq[1:])):
        return HBResult(False, fe, fo, "interlacing", "roots of f_odd do not interlace those of f_even")
    return HBResult(True, fe, fo, None)


@dataclass(frozen=True)
class CycleWitness:
    n: int
    k: int
    parity_case: str
    g: Polynomial
    f: Polynomial
    hb: HBResult
    left_roots: tuple[complex, ...]

    @property
    def numeric_agrees(self) -> bool:
        return (not self.hb.weakly_stable) == any(z.real < -1e-7 for z in self.left_roots)


_CASES = {
    (0, 0): "n and k both even",
    (0, 1): "n is even and k is odd",
    (1, 0): "n is odd and k is even",
    (1, 1): "n and k both odd",
}


def cycle_left_halfplane_witness(n: int, k: int) -> CycleWitness:
    """Show p^(n-k) - p^(n-2k) - 1 has a root with negative real part.

    Runs Hermite-Biehler on f(p) = (-1)^(n-k) g(-p) and cross-checks with the
    numeric roots of g.
    """
    if n < 3 or not 1 <= k <= n // 2:
        raise ValueError("need n >= 3 and 1 <= k <= n/2")
    g = Polynomial.monomial(n - k) - Polynomial.monomial(n - 2 * k) - 1
    f = g.reflect() * (-1) ** (n - k)
    hb = hermite_biehler(f)
    left = region_filter(all_roots(g), LeftHalfPlane())
    return CycleWitness(n, k, _CASES[(n % 2, k % 2)], g, f, hb, tuple(r.value for r in left.inside))


@dataclass(frozen=True)
class RootCensus:
    positive: int
    negative: int
    zero: int
    positive_bound: int
    negative_bound: int
    degree: int

    @property
    def real(self) -> int:
        return self.positive + self.negative + self.zero

    @property
    def all_real(self) -> bool:
        return self.real == self.degree


def real_root_census(f: Polynomial) -> RootCensus:
    """Exact real-root counts (with multiplicity) beside the Descartes bounds."""
    if f.is_zero():
        raise ValueError("zero polynomial")
    k, g = f.deflate()
    pos = neg = 0
    for r in isolate_real_roots(g) if g.degree > 0 else []:
        if r.compare(0) > 0:
            pos += r.multiplicity
        else:
            neg += r.multiplicity
    census = RootCensus(pos, neg, k, sign_changes(g), sign_changes(g.reflect()), f.degree)
    assert pos <= census.positive_bound and neg <= census.negative_bound, "Descartes bound violated"
    return census
