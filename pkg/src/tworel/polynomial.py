"""Exact univariate polynomials over the rationals.

Coefficients are stored lowest power first as :class:`fractions.Fraction`.
Floating arithmetic only appears when a polynomial is evaluated at a float,
complex or mpmath number.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from numbers import Rational
from typing import Iterable, Sequence

import mpmath

__all__ = [
    "Polynomial",
    "FForm",
    "BoundsReport",
    "RealRoot",
    "P",
    "format_polynomial",
    "squarefree_part",
    "compose",
    "derivative",
    "evaluate",
    "to_fform",
    "from_fform",
    "sign_changes",
    "even_odd_split",
    "squarefree_decomposition",
    "sturm_sequence",
    "isolate_real_roots",
    "count_real_roots",
    "root_bounds",
]


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"polynomial coefficients must be exact rationals, got {type(c).__name__}")


class Polynomial:
    """Immutable polynomial in ``p`` with exact rational coefficients.

    ``Polynomial([0, 0, 2, 0, -1])`` is ``2*p^2 - p^4``. The zero polynomial
    has degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    def __reduce__(self):
        return (Polynomial, (self.coeffs,))

    # construction helpers

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c=1) -> "Polynomial":
        if k < 0:
            raise ValueError("negative exponent")
        return cls([0] * k + [c])

    # basic properties

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    @property
    def zero_multiplicity(self) -> int:
        """Index of the lowest nonzero coefficient (the power of p dividing f)."""
        if not self.coeffs:
            raise ValueError("zero polynomial")
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        raise AssertionError("unreachable")

    def deflate(self) -> tuple[int, "Polynomial"]:
        """Split f = p^k * g with g(0) != 0."""
        k = self.zero_multiplicity
        return k, Polynomial(self.coeffs[k:])

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    # ring operations

    def _coerce(self, other) -> "Polynomial | None":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Rational)):
            return Polynomial([other])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return Polynomial(self[i] + o[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            c = Fraction(other)
            return Polynomial(c * a for a in self.coeffs)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Polynomial([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __divmod__(self, other: "Polynomial"):
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Polynomial(), self
        quot = [Fraction(0)] * (dq + 1)
        lc = other.coeffs[-1]
        d = len(other.coeffs) - 1
        for k in range(dq, -1, -1):
            c = rem[k + d] / lc
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Polynomial(quot), Polynomial(rem[:d])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            c = Fraction(other)
            return Polynomial(a / c for a in self.coeffs)
        return NotImplemented

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(("Polynomial", self.coeffs))

    def __call__(self, z):
        return evaluate(self, z)

    # transformations

    def derivative(self) -> "Polynomial":
        return Polynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def compose(self, inner: "Polynomial") -> "Polynomial":
        """Return ``self(inner(p))``."""
        result = Polynomial()
        for c in reversed(self.coeffs):
            result = result * inner + c
        return result

    def reflect(self) -> "Polynomial":
        """Return f(-p)."""
        return Polynomial(-c if i % 2 else c for i, c in enumerate(self.coeffs))

    def monic(self) -> "Polynomial":
        if not self.coeffs:
            return self
        return self / self.coeffs[-1]

    def gcd(self, other: "Polynomial") -> "Polynomial":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def iterate(self, times: int) -> "Polynomial":
        """The ``times``-fold composition of f with itself (``p`` for 0)."""
        result = Polynomial([0, 1])
        for _ in range(times):
            result = self.compose(result)
        return result

    # display

    def __repr__(self):
        return f"Polynomial({[str(c) for c in self.coeffs]!r})"

    def __str__(self):
        return format_polynomial(self)


P = Polynomial([0, 1])


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _term(c: Fraction, k: int) -> str:
    mono = "" if k == 0 else ("p" if k == 1 else f"p^{k}")
    if k == 0:
        return _fmt_coeff(c)
    if c == 1:
        return mono
    return f"{_fmt_coeff(c)}*{mono}"


def format_polynomial(f: Polynomial, factored: bool = False) -> str:
    """Render ascending powers, e.g. ``2*p^2 - p^4``.

    With ``factored=True`` the power of p is pulled out: ``p^2*(2 - p^2)``.
    """
    if f.is_zero():
        return "0"
    if factored:
        k, g = f.deflate()
        if k and g.degree > 0:
            mono = "p" if k == 1 else f"p^{k}"
            return f"{mono}*({format_polynomial(g)})"
    parts: list[str] = []
    for k, c in enumerate(f.coeffs):
        if c == 0:
            continue
        body = _term(abs(c), k)
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


def compose(outer: Polynomial, inner: Polynomial) -> Polynomial:
    return outer.compose(inner)


def derivative(f: Polynomial) -> Polynomial:
    return f.derivative()


def evaluate(f: Polynomial, z):
    """Evaluate by Horner's rule.

    Exact for int/Fraction input; complex double for float/complex input;
    mpmath numbers are evaluated at the current mpmath precision.
    """
    cs = f.coeffs
    if isinstance(z, (int, Rational)) and not isinstance(z, bool):
        z = Fraction(z)
        acc = Fraction(0)
        for c in reversed(cs):
            acc = acc * z + c
        return acc
    if isinstance(z, (mpmath.mpf, mpmath.mpc)):
        acc = mpmath.mpf(0)
        for c in reversed(cs):
            acc = acc * z + mpmath.mpf(c.numerator) / c.denominator
        return acc
    if isinstance(z, (float, complex)):
        acc = 0.0 * z
        for c in reversed(cs):
            acc = acc * z + float(c)
        return acc
    # numpy scalars and arrays
    acc = 0 * z
    for c in reversed(cs):
        acc = acc * z + float(c)
    return acc


# ---------------------------------------------------------------------------
# F-form


@dataclass(frozen=True)
class FForm:
    """Coefficients in the basis p^i (1-p)^(m-i).

    For a reliability polynomial ``N[i]`` is the number of i-edge subsets
    whose operational edges connect the terminals.
    """

    m: int
    N: tuple

    def to_polynomial(self) -> Polynomial:
        return from_fform(self)

    def is_coherent(self) -> bool:
        """Nonnegative, bounded by C(m,i), and satisfying the upward-closure inequality."""
        m, N = self.m, self.N
        if len(N) != m + 1:
            return False
        for i, n in enumerate(N):
            if n < 0 or n > comb(m, i) or Fraction(n).denominator != 1:
                return False
        # an up-closed family: every i-set has m-i supersets of size i+1
        return all(N[i + 1] * (i + 1) >= N[i] * (m - i) for i in range(m))


def to_fform(f: Polynomial, m: int) -> FForm:
    """Basis change to F-form via p = x/(1+x): sum a_j x^j (1+x)^(m-j)."""
    if f.degree > m:
        raise ValueError(f"degree {f.degree} exceeds edge count m={m}")
    N = [Fraction(0)] * (m + 1)
    for j, a in enumerate(f.coeffs):
        if a == 0:
            continue
        r = m - j
        for i in range(r + 1):
            N[j + i] += a * comb(r, i)
    return FForm(m, tuple(int(n) if n.denominator == 1 else n for n in N))


def from_fform(ff: FForm) -> Polynomial:
    m = ff.m
    if len(ff.N) != m + 1:
        raise ValueError("F-form needs m+1 coefficients")
    out = [Fraction(0)] * (m + 1)
    for i, n in enumerate(ff.N):
        if n == 0:
            continue
        # p^i (1-p)^(m-i)
        r = m - i
        for j in range(r + 1):
            out[i + j] += Fraction(n) * comb(r, j) * (-1) ** j
    return Polynomial(out)


# ---------------------------------------------------------------------------
# sign rules


def sign_changes(f: Polynomial) -> int:
    """Descartes' bound: sign changes in the nonzero coefficient sequence."""
    if f.is_zero():
        raise ValueError("sign changes of the zero polynomial are undefined")
    signs = [c > 0 for c in f.coeffs if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def even_odd_split(f: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Return (f_even, f_odd) with f(p) = f_even(p^2) + p*f_odd(p^2)."""
    return Polynomial(f.coeffs[0::2]), Polynomial(f.coeffs[1::2])


# ---------------------------------------------------------------------------
# square-free decomposition and Sturm isolation


def squarefree_decomposition(f: Polynomial) -> list[tuple[Polynomial, int]]:
    """Yun's algorithm: f = lc * prod g_i^i with g_i monic, square-free, pairwise coprime.

    Constant factors are omitted.
    """
    if f.is_zero():
        raise ValueError("zero polynomial")
    if f.degree == 0:
        return []
    df = f.derivative()
    a = f.gcd(df)
    b = f // a
    c = df // a
    out = []
    i = 1
    while b.degree > 0:
        d = c - b.derivative()
        g = b.gcd(d)
        if g.degree > 0:
            out.append((g.monic(), i))
        b = b // g
        c = d // g
        i += 1
    return out


def squarefree_part(f: Polynomial) -> Polynomial:
    if f.degree <= 0:
        return Polynomial([1])
    return (f // f.gcd(f.derivative())).monic()


def _positive_normalize(g: Polynomial) -> Polynomial:
    lc = abs(g.leading)
    return g / lc if lc else g


def sturm_sequence(f: Polynomial) -> list[Polynomial]:
    """Sturm chain of the square-free part of f, each member scaled by a positive constant."""
    g = squarefree_part(f)
    seq = [g, _positive_normalize(g.derivative())]
    while not seq[-1].is_zero() and seq[-1].degree > 0:
        r = -(seq[-2] % seq[-1])
        if r.is_zero():
            break
        seq.append(_positive_normalize(r))
    return [s for s in seq if not s.is_zero()]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _variations(signs: Sequence[int]) -> int:
    s = [x for x in signs if x]
    return sum(1 for a, b in zip(s, s[1:]) if a != b)


def _sturm_at(seq: Sequence[Polynomial], x: Fraction) -> int:
    return _variations([_sign(evaluate(g, x)) for g in seq])


def _sturm_at_inf(seq: Sequence[Polynomial], negative: bool) -> int:
    signs = []
    for g in seq:
        s = _sign(g.leading)
        if negative and g.degree % 2:
            s = -s
        signs.append(s)
    return _variations(signs)


def _cauchy_rational(f: Polynomial) -> Fraction:
    lc = abs(f.leading)
    return 1 + max((abs(c) / lc for c in f.coeffs[:-1]), default=Fraction(0))


@dataclass(frozen=True)
class RealRoot:
    """A real root isolated in an exact rational interval.

    ``lo == hi`` means the root is exactly that rational. Otherwise the root
    lies strictly inside (lo, hi) and is the only root of ``poly`` there.
    """

    lo: Fraction
    hi: Fraction
    multiplicity: int
    poly: Polynomial = field(repr=False, compare=False)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self) -> float:
        return float(self.midpoint)

    def refine(self, width) -> "RealRoot":
        """Bisect with exact endpoints until the interval is narrower than ``width``."""
        width = Fraction(width)
        lo, hi = self.lo, self.hi
        g = self.poly
        if lo == hi:
            return self
        s_lo = _sign(evaluate(g, lo))
        while hi - lo >= width:
            mid = (lo + hi) / 2
            s_mid = _sign(evaluate(g, mid))
            if s_mid == 0:
                lo = hi = mid
                break
            if s_mid == s_lo:
                lo = mid
            else:
                hi = mid
        return RealRoot(lo, hi, self.multiplicity, g)

    def compare(self, x) -> int:
        """Exact sign of (root - x)."""
        x = Fraction(x)
        r = self
        while True:
            if r.is_exact:
                return _sign(r.lo - x)
            if x <= r.lo:
                return 1
            if x >= r.hi:
                return -1
            if evaluate(r.poly, x) == 0:
                return 0
            r = r.refine(r.width / 2)


def _isolate_squarefree(g: Polynomial) -> list[tuple[Fraction, Fraction]]:
    seq = sturm_sequence(g)
    B = _cauchy_rational(g) + 1
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(-B, B, _sturm_at(seq, -B), _sturm_at(seq, B))]
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb  # distinct roots in (a, b]
        if n == 0:
            continue
        if n == 1:
            if evaluate(g, b) == 0:
                out.append((b, b))
                continue
            # left endpoint may be a root owned by the neighbouring interval
            while evaluate(g, a) == 0:
                mid = (a + b) / 2
                if evaluate(g, mid) == 0:
                    a = b = mid
                    break
                vm = _sturm_at(seq, mid)
                if vm - vb == 1:
                    a = mid
                else:
                    b, vb = mid, vm
            out.append((a, b))
            continue
        mid = (a + b) / 2
        vm = _sturm_at(seq, mid)
        stack.append((a, mid, va, vm))
        stack.append((mid, b, vm, vb))
    out.sort()
    return out


def isolate_real_roots(f: Polynomial) -> list[RealRoot]:
    """All real roots of f, ascending, as disjoint exact-rational intervals with exact multiplicities."""
    if f.is_zero():
        raise ValueError("cannot isolate roots of the zero polynomial")
    if f.degree == 0:
        return []
    factors = squarefree_decomposition(f)
    g = Polynomial([1])
    for gi, _ in factors:
        g = g * gi
    g = g.monic()
    roots = []
    for a, b in _isolate_squarefree(g):
        mult = 0
        for gi, i in factors:
            if a == b:
                hit = evaluate(gi, a) == 0
            else:
                hit = _sign(evaluate(gi, a)) * _sign(evaluate(gi, b)) < 0
            if hit:
                mult = i
                break
        roots.append(RealRoot(a, b, mult, g))
    return roots


def count_real_roots(f: Polynomial, lo=None, hi=None, multiplicity: bool = True) -> int:
    """Count real roots in the open interval (lo, hi); None means unbounded."""
    total = 0
    for r in isolate_real_roots(f):
        if lo is not None and r.compare(lo) <= 0:
            continue
        if hi is not None and r.compare(hi) >= 0:
            continue
        total += r.multiplicity if multiplicity else 1
    return total


# ---------------------------------------------------------------------------
# root bounds


@dataclass(frozen=True)
class BoundsReport:
    cauchy_bound: float
    escape_radius: float
    hickman_R: float


def root_bounds(f: Polynomial) -> BoundsReport:
    """Root and escape bounds for a polynomial of degree d >= 2.

    ``escape_radius`` guarantees |f(z)| >= 2|z| whenever |z| >= escape_radius,
    so any orbit passing it diverges.
    """
    d = f.degree
    if d < 2:
        raise ValueError("root bounds need degree >= 2")
    cd = abs(f.leading)
    C = max(abs(c) for c in f.coeffs[:-1])
    cauchy = 1 + C / cd
    escape = max(Fraction(1), (C * d + 2) / cd)
    hickman = max(float(2 / cd) ** (1.0 / (d - 1)), float(C / cd + 1))
    return BoundsReport(float(cauchy), float(escape), hickman)
