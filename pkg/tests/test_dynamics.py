import cmath
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from scipy.spatial import cKDTree

from tworel.dynamics import (
    attractor,
    certify_escape,
    connectivity,
    critical_points,
    forward_orbit,
    inverse_orbit,
)
from tworel.multigraph import from_edge_list, path_graph
from tworel.polynomial import P, Polynomial, evaluate

C3 = P + P**2 - P**3
C4_ANTI = 2 * P**2 - P**4
C4_ADJ = P + P**3 - P**4
K23 = P**6 - P**5 - 2 * P**4 + 2 * P**3 + P
PHI = (1 + math.sqrt(5)) / 2


def near(points, z, tol):
    return min(abs(p - z) for p in points) < tol


class TestCriticalPoints:
    def test_c3(self):
        vals = critical_points(C3).values()
        assert near(vals, 1, 1e-12) and near(vals, -1 / 3, 1e-12) and len(vals) == 2

    def test_c4_adjacent(self):
        vals = critical_points(C4_ADJ).values()
        r1 = complex(-1 / 8, math.sqrt(15) / 8)
        for z in (1, r1, r1.conjugate()):
            assert near(vals, z, 1e-12)

    def test_even_cycle(self):
        rs = critical_points(2 * P**3 - P**6)
        assert rs.zero_multiplicity == 2
        for j in range(3):
            assert near(rs.values(), cmath.exp(2j * math.pi * j / 3), 1e-12)

    def test_degree(self):
        with pytest.raises(ValueError):
            critical_points(P)


class TestForwardOrbit:
    def test_c3_bounded(self):
        v = forward_orbit(C3, -1 / 3)
        assert v.outcome == "bounded-heuristic"
        # every iterate after the start lies in f([-1, 1]) = [-5/27, 1]
        assert all(-5 / 27 - 1e-12 <= z.real <= 1 and z.imag == 0 for z in v.orbit[1:])

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_roots_of_unity(self, k):
        f = 2 * P**k - P ** (2 * k)
        for j in range(k):
            v = forward_orbit(f, cmath.exp(2j * math.pi * j / k))
            assert v.outcome == "cycle-detected" and v.step == 1
            assert abs(v.orbit[1] - 1) < 1e-12

    def test_k23_escape(self):
        r = -1.157582493428974
        v = forward_orbit(K23, r)
        assert v.escaped and not v.overflow
        assert v.max_modulus_seen > v.escape_radius == 14
        assert certify_escape(K23, v.orbit[-1])

    def test_overflow(self):
        v = forward_orbit(P**50, 1e300, max_iter=5)
        assert v.escaped

    def test_max_iter(self):
        with pytest.raises(ValueError):
            forward_orbit(C3, 0.1, max_iter=0)

    def test_escape_certificate_is_exact(self):
        assert not certify_escape(C4_ANTI, 0.5)
        assert certify_escape(C4_ANTI, 10.5 + 0.1j)

    def test_c4_adjacent_modulus(self):
        # |f(f(r1))|^2 with r1 = (-1 + sqrt(15) i) / 8
        with mpmath.workdps(60):
            r1 = mpmath.mpc(-1, mpmath.sqrt(15)) / 8
            z = evaluate(C4_ADJ, evaluate(C4_ADJ, r1))
            target = mpmath.mpf(388912639) / 2**32
            assert abs(abs(z) ** 2 - target) / target < 1e-20


class TestInverseOrbit:
    def test_depth0(self):
        c = inverse_orbit(C4_ANTI, 0)
        assert list(c.points) == [0j]

    def test_depth1(self):
        c = inverse_orbit(C4_ANTI, 1)
        assert len(c) == 3
        for z in (0, math.sqrt(2), -math.sqrt(2)):
            assert near(c.points, z, 1e-12)

    def test_depth2(self):
        c = inverse_orbit(C4_ANTI, 2)
        # preimages of -sqrt(2): z^2 = 1 +- sqrt(1 + sqrt(2))
        for w in (math.sqrt(2), -math.sqrt(2)):
            for s1 in (1, -1):
                for s2 in (1, -1):
                    z = s2 * cmath.sqrt(1 + s1 * cmath.sqrt(1 - w))
                    assert near(c.points, z, 1e-10)
        assert near(c.points, 1.5981, 1e-4) and near(c.points, 0.7442j, 1e-4)
        assert len(c) == 11

    def test_requires_fixed_zero(self):
        with pytest.raises(ValueError):
            inverse_orbit(P**2 + 1, 2)

    @pytest.mark.parametrize("f", [C4_ANTI, C4_ADJ, C3])
    def test_soundness_and_dedup(self, f):
        c = inverse_orbit(f, 8, budget=20_000)
        for z, j in zip(c.points, c.depths):
            w = complex(z)
            for _ in range(j):
                w = evaluate(f, w)
            assert abs(w) < 1e-6
        tree = cKDTree(np.column_stack([c.points.real, c.points.imag]))
        assert not tree.query_pairs(1e-9 * (1 - 1e-6))

    def test_nesting(self):
        small = inverse_orbit(C4_ADJ, 4)
        big = inverse_orbit(C4_ADJ, 5)
        assert not big.budget_hit
        for z in small.points:
            assert near(big.points, z, 1e-9)

    def test_budget_and_determinism(self):
        a = inverse_orbit(C4_ANTI, 9, budget=5000, seed=7)
        b = inverse_orbit(C4_ANTI, 9, budget=5000, seed=7)
        assert a.budget_hit and len(a) <= 5000
        assert np.array_equal(a.points, b.points) and np.array_equal(a.depths, b.depths)
        assert a.depths.max() == 9

    def test_golden_point(self):
        c = inverse_orbit(C4_ANTI, 12)
        assert c.nearest(-PHI) < 1e-6


class TestAttractor:
    def test_path(self):
        rep = attractor(path_graph(3))
        assert list(rep.cloud.points) == [0j] and rep.structure == "attractor is {0}"

    def test_structure(self, c4_antipodal, c4_adjacent):
        anti = attractor(c4_antipodal, depth=3)
        assert not anti.adjacent and "accumulation" in anti.structure
        adj = attractor(c4_adjacent, depth=3)
        assert adj.adjacent and adj.structure == "attractor approximates J(T)"
        assert adj.origin == "rationally-indifferent"


class TestConnectivity:
    def test_c3(self):
        v = connectivity(C3)
        assert v.verdict == "connected-heuristic"

    def test_even_cycle(self):
        v = connectivity(2 * P**3 - P**6)
        assert v.verdict == "connected-heuristic"
        assert all(o.outcome == "cycle-detected" for o in v.orbits)

    def test_k23(self):
        v = connectivity(K23)
        assert v.verdict == "disconnected-certified"
        escaped = [z for z, o in zip(v.critical, v.orbits) if o.escaped]
        assert len(escaped) == 1 and abs(escaped[0] + 1.157582493) < 1e-6

    def test_verdict_invariants(self):
        for f in (C3, C4_ADJ, C4_ANTI, K23, 2 * P**2 - P**3):
            v = connectivity(f)
            if v.verdict == "disconnected-certified":
                assert any(o.escaped for o in v.orbits)
            if v.verdict == "connected-heuristic":
                assert all(o.bounded for o in v.orbits)
