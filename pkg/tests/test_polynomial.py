import math
import random
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tworel.polynomial import (
    P,
    FForm,
    Polynomial,
    count_real_roots,
    even_odd_split,
    evaluate,
    format_polynomial,
    from_fform,
    isolate_real_roots,
    root_bounds,
    sign_changes,
    squarefree_decomposition,
    to_fform,
)

from conftest import int_polys


def poly(*cs):
    return Polynomial(cs)


class TestRing:
    def test_sum(self):
        assert P + (P**2 - P) == P**2

    def test_identity_product(self):
        f = 2 * P**2 - P**4
        assert f * 1 == f

    @pytest.mark.parametrize("n,k", [(4, 2), (7, 3), (10, 1)])
    def test_monomial_product(self, n, k):
        assert Polynomial.monomial(k) * Polynomial.monomial(n - k) == Polynomial.monomial(n)

    def test_normalized(self):
        f = Polynomial([1, 2, 0, 0])
        assert f.coeffs == (1, 2) and f.degree == 1
        assert Polynomial().degree == -1 and Polynomial([0, 0]).is_zero()

    def test_division(self):
        f = (P + 1) ** 3 * (P - 2) + 5
        q, r = divmod(f, (P + 1) ** 3)
        assert q == P - 2 and r == Polynomial([5])

    def test_rejects_floats(self):
        with pytest.raises(TypeError):
            Polynomial([0.5])

    def test_immutable(self):
        with pytest.raises(AttributeError):
            P.coeffs = ()

    @given(int_polys(), int_polys())
    def test_ring_laws(self, a, b):
        a, b = Polynomial(a), Polynomial(b)
        assert a * b == b * a
        assert (a + b) - b == a
        q, r = divmod(a, b)
        assert q * b + r == a and r.degree < b.degree


class TestCompose:
    def test_self_composition(self):
        f = 2 * P**2 - P**4
        g = f.compose(f)
        assert g.degree == 16
        assert g(1) == 1
        half = Fraction(1, 2)
        assert g(half) == f(f(half))
        assert g.coeffs[:5] == (0, 0, 0, 0, 8)

    def test_identity_inner(self):
        f = poly(3, -1, 0, 7)
        assert f.compose(P) == f

    @pytest.mark.parametrize("k,m", [(2, 2), (3, 4)])
    def test_bundle_inner(self, k, m):
        bundle = 1 - (1 - P) ** m
        assert Polynomial.monomial(k).compose(bundle) == bundle**k

    @given(int_polys(max_degree=4), int_polys(max_degree=4), st.fractions(-3, 3, max_denominator=20))
    def test_evaluation_commutes(self, a, b, x):
        a, b = Polynomial(a), Polynomial(b)
        assert a.compose(b)(x) == a(b(x))
        if a.degree > 0 and b.degree > 0:
            assert a.compose(b).degree == a.degree * b.degree


class TestEvaluate:
    def test_exact(self):
        assert (2 * P**2 - P**4)(-1) == 1
        assert (P + P**2 - P**3)(Fraction(-1, 3)) == Fraction(-5, 27)
        assert isinstance((P + P**2)(Fraction(1, 3)), Fraction)

    def test_constant_term(self):
        f = poly(7, 1, 1)
        assert f(0) == 7

    def test_complex(self):
        f = 2 * P**2 - P**4
        z = 0.3 + 0.4j
        assert abs(f(z) - (2 * z**2 - z**4)) < 1e-15

    def test_mpmath(self):
        with mpmath.workdps(40):
            v = evaluate(P**2 - 2, mpmath.sqrt(2))
            assert abs(v) < mpmath.mpf(10) ** -38

    def test_numpy_array(self):
        zs = np.array([1.0, 2.0, -1.0])
        assert np.allclose(evaluate(P**2 + 1, zs), zs**2 + 1)


class TestDerivative:
    def test_c3(self):
        assert (P + P**2 - P**3).derivative() == poly(1, 2, -3)

    @pytest.mark.parametrize("k", [1, 2, 3, 5])
    def test_even_cycle_family(self, k):
        f = 2 * P**k - P ** (2 * k)
        assert f.derivative() == 2 * k * P ** (k - 1) * (1 - P**k)

    def test_constant(self):
        assert Polynomial([5]).derivative().is_zero()


class TestFForm:
    def test_c3(self):
        assert to_fform(P + P**2 - P**3, 3).N == (0, 1, 3, 1)

    def test_single_edge(self):
        assert from_fform(FForm(1, (0, 1))) == P

    def test_c4(self):
        ff = to_fform(2 * P**2 - P**4, 4)
        assert ff.N[2:] == (2, 4, 1) and ff.is_coherent()

    def test_degree_too_high(self):
        with pytest.raises(ValueError):
            to_fform(P**3, 2)

    @given(int_polys(max_degree=6), st.integers(0, 3))
    def test_round_trip(self, cs, extra):
        f = Polynomial(cs)
        m = f.degree + extra
        assert from_fform(to_fform(f, m)) == f

    def test_incoherent(self):
        assert not FForm(2, (0, 2, 0)).is_coherent()
        assert not FForm(2, (0, -1, 1)).is_coherent()
        assert not FForm(2, (0, 3, 1)).is_coherent()


class TestSigns:
    def test_c4(self):
        assert sign_changes(2 * P**2 - P**4) == 1

    @pytest.mark.parametrize("n,k", [(5, 2), (7, 3), (9, 1)])
    def test_cycle(self, n, k):
        f = P**k + P ** (n - k) - P**n
        assert sign_changes(f) == 1
        assert sign_changes(f.reflect()) <= 2

    def test_monomial(self):
        assert sign_changes(P**3) == 0

    def test_zero(self):
        with pytest.raises(ValueError):
            sign_changes(Polynomial())

    @settings(max_examples=500, deadline=None)
    @given(int_polys(max_degree=8))
    def test_descartes_soundness(self, cs):
        f = Polynomial(cs)
        pos = count_real_roots(f, 0, None)
        v = sign_changes(f)
        assert pos <= v and (v - pos) % 2 == 0


class TestSplit:
    def test_examples(self):
        fe, fo = even_odd_split(P**4 - P**2 - 1)
        assert fe == P**2 - P - 1 and fo.is_zero()
        fe, fo = even_odd_split(P**3)
        assert fe.is_zero() and fo == P
        fe, fo = even_odd_split(P**5 + P**3)
        assert fe.is_zero() and fo == P**2 + P

    @given(int_polys(max_degree=10))
    def test_identity(self, cs):
        f = Polynomial(cs)
        fe, fo = even_odd_split(f)
        assert fe.compose(P**2) + P * fo.compose(P**2) == f


class TestIsolation:
    def test_golden(self):
        roots = isolate_real_roots(P**2 - P - 1)
        phi = (1 + math.sqrt(5)) / 2
        assert len(roots) == 2
        lo, hi = roots
        assert lo.lo < 1 - phi < lo.hi and hi.lo < phi < hi.hi

    def test_c4(self):
        roots = isolate_real_roots(2 * P**2 - P**4)
        assert [r.multiplicity for r in roots] == [1, 2, 1]
        assert roots[1].is_exact and roots[1].lo == 0
        neg = roots[0].refine(Fraction(1, 10**12))
        assert neg.width < 1e-12 and abs(float(neg.midpoint) + math.sqrt(2)) < 1e-12

    def test_none(self):
        assert isolate_real_roots(P**2 + 1) == []

    def test_rational_roots_exact(self):
        f = (P - Fraction(1, 3)) ** 3 * (P + 2) * (P**2 - 2)
        roots = isolate_real_roots(f)
        assert [r.multiplicity for r in roots] == [1, 1, 3, 1]
        third = roots[2]
        assert third.compare(Fraction(1, 3)) == 0

    def test_squarefree_decomposition(self):
        f = 3 * (P - 1) ** 3 * (P + 1) ** 2 * (P**2 + 1)
        parts = {i: g for g, i in squarefree_decomposition(f)}
        assert parts[3] == P - 1 and parts[2] == P + 1 and parts[1] == P**2 + 1

    @settings(max_examples=100, deadline=None)
    @given(int_polys(max_degree=8))
    def test_against_numpy(self, cs):
        f = Polynomial(cs)
        roots = isolate_real_roots(f)
        for a, b in zip(roots, roots[1:]):
            assert a.hi <= b.lo
        ref = np.roots([float(c) for c in reversed(f.coeffs)])
        for r in roots:
            x = float(r.refine(Fraction(1, 10**8)).midpoint)
            assert np.min(np.abs(ref - x)) < 1e-3
        assert sum(r.multiplicity for r in roots) <= f.degree


class TestBounds:
    def test_examples(self):
        assert root_bounds(2 * P**2 - P**4).escape_radius == 10
        assert root_bounds(P**2).escape_radius == 2
        k23 = P**6 - P**5 - 2 * P**4 + 2 * P**3 + P
        b = root_bounds(k23)
        assert b.escape_radius == 14 and b.cauchy_bound == 3
        assert b.hickman_R == 3

    def test_degree(self):
        with pytest.raises(ValueError):
            root_bounds(P + 1)

    @settings(deadline=None)
    @given(int_polys(max_degree=9), st.integers(0, 2**32 - 1))
    def test_escape_inequality(self, cs, seed):
        f = Polynomial(cs)
        if f.degree < 2:
            return
        r = root_bounds(f).escape_radius * 1.01
        rng = random.Random(seed)
        for _ in range(100):
            z = r * complex(math.cos(a := rng.uniform(0, 2 * math.pi)), math.sin(a))
            assert abs(f(z)) >= 2 * abs(z)

    @settings(deadline=None)
    @given(int_polys(max_degree=9))
    def test_cauchy_bounds_roots(self, cs):
        f = Polynomial(cs)
        if f.degree < 2:
            return
        ref = np.roots([float(c) for c in reversed(f.coeffs)])
        assert np.all(np.abs(ref) <= root_bounds(f).cauchy_bound + 1e-9)


class TestFormat:
    def test_examples(self):
        assert format_polynomial(2 * P**2 - P**4) == "2*p^2 - p^4"
        assert format_polynomial(2 * P**2 - P**4, factored=True) == "p^2*(2 - p^2)"
        assert format_polynomial(P + P**2 - P**3) == "p + p^2 - p^3"
        assert format_polynomial(Polynomial()) == "0"
        assert format_polynomial(Polynomial([Fraction(-1, 2), 0, 3])) == "-1/2 + 3*p^2"


def test_pickle_round_trip():
    import pickle

    f = Polynomial([0, "1/2", 0, -3])
    assert pickle.loads(pickle.dumps(f)) == f
