import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from blaschke_tongues.core import BlaschkeMap
from blaschke_tongues.errors import ContourError, SolverError
from blaschke_tongues.index import (diagnose_pair, fixed_point_newton, index_multiplier,
                                    index_residue, iterate_array, multiplier_of,
                                    pair_identity_residual, winding_number)
from blaschke_tongues.locus import probe_tip_bifurcation


def random_fixed_points(n, seed=11):
    """Non-parabolic fixed points of B_a^p with p <= 3 found by Newton from random seeds."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        a = complex(*rng.uniform(-3.5, 3.5, 2))
        if abs(abs(a) - 1) < 0.05 or abs(a) < 0.2:
            continue
        p = int(rng.integers(1, 4))
        f = BlaschkeMap(a)
        seed_z = complex(*rng.uniform(-2, 2, 2))
        try:
            z = fixed_point_newton(f, seed_z, p)
        except SolverError:
            continue
        m = multiplier_of(f, z, p)
        if abs(z) < 1e-3 or abs(m - 1) < 1e-2 or abs(m) > 1e6:
            continue
        out.append((f, p, z, m))
    return out


class TestMultiplierForm:
    def test_values(self):
        assert index_multiplier(0) == 1
        assert index_multiplier(-1) == 0.5

    def test_near_parabolic(self):
        assert index_multiplier(1 - 1e-4 + 1e-6j).real > 1e3

    def test_parabolic_rejected(self):
        with pytest.raises(ValueError, match="residue form"):
            index_multiplier(1)


class TestResidueForm:
    def test_superattracting(self):
        assert index_residue(BlaschkeMap(2), 1, 1, 0.1) == pytest.approx(1, abs=1e-12)

    def test_not_isolating(self):
        # the contour around 1 of radius 1.5 also encloses the fixed point 0
        with pytest.raises(ContourError, match="contour not isolating"):
            index_residue(BlaschkeMap(2.5), 1, 1, 1.5)

    def test_shrink(self):
        v = index_residue(BlaschkeMap(2), 1, 1, 1.5, shrink=True)
        assert v == pytest.approx(1, abs=1e-10)

    def test_agrees_with_multiplier_form(self):
        worst = 0.0
        for f, p, z, m in random_fixed_points(100):
            r = index_residue(f, p, z, 1e-3, shrink=True)
            worst = max(worst, abs(r - index_multiplier(m)))
        assert worst < 1e-8

    def test_radius_independence(self):
        for f, p, z, m in random_fixed_points(20, seed=5):
            r1 = index_residue(f, p, z, 1e-3, shrink=True)
            r2 = index_residue(f, p, z, 5e-4, shrink=True)
            assert abs(r1 - r2) < 1e-9

    def test_tip_index_is_limit_of_sums(self):
        tip = probe_tip_bifurcation(3)
        diffs = []
        for d in (1e-2, 1e-3):
            rep = probe_tip_bifurcation(3 - d)
            assert abs(rep.S.imag) < 1e-10
            diffs.append(abs(rep.S - tip.i0))
        assert max(diffs) < 1e-6

    def test_triple_index_sum_real(self):
        rep = probe_tip_bifurcation(2.64732 + 0.0421017j)
        assert abs(rep.i0 + rep.i_plus + rep.i_minus - rep.S) < 1e-12
        assert abs(rep.S.imag) < 1e-8


class TestDiagnosis:
    @given(st.floats(-0.2, 0.2), st.floats(-0.2, 0.2))
    def test_conjugate_pair_identities(self, er, ei):
        eps = complex(er, ei)
        assume(abs(eps) > 1e-4 and abs(er) > 1e-6)
        rho = 1 + eps
        s = (1 / (1 - rho) + 1 / (1 - rho.conjugate()))
        assert abs(s.imag) < 1e-9 * abs(s)
        assert pair_identity_residual(rho) < 1e-6 * max(1.0, abs(s))
        pred = 1 + 2 * er * (1 - 1 / s.real)
        assert pred == pytest.approx(abs(rho) ** 2, abs=1e-12)

    def test_labels(self):
        z0 = 1.0
        zp, zm = 1.1 + 0.1j, 1 / (1.1 - 0.1j)
        rho = 0.95 + 0.05j
        label, st_, ident = diagnose_pair(1.05, zp, rho, zm, rho.conjugate())
        assert label == "pair-attracting" and st_ > 1
        assert ident == pytest.approx(abs(rho) ** 2, abs=1e-12)
        rho = 1.01 + 0.05j
        assert diagnose_pair(1.05, zp, rho, zm, rho.conjugate())[0] == "pair-repelling"
        assert diagnose_pair(0.5, 1j, 1.5, -1j, 1.5)[0] == "on-circle-attracting"
        assert diagnose_pair(1.5, 1j, 1.5, -1j, 1.5)[0] == "on-circle-repelling"
        assert diagnose_pair(1.0, 1j, 1.0, -1j, 1.0)[0] == "parabolic"

    def test_inconsistent_pair_raises(self):
        with pytest.raises(SolverError):
            diagnose_pair(1.05, 1.1 + 0.1j, 0.95 + 0.05j, 1 / (1.1 - 0.1j), 0.9 + 0.3j)


def test_winding_number():
    t = np.linspace(0, 2 * np.pi, 257)[:-1]
    assert winding_number(np.exp(1j * t)) == 1
    assert winding_number(np.exp(3j * t)) == 3
    assert winding_number(2 + np.exp(1j * t)) == 0


def test_iterate_array_matches_scalar():
    f = BlaschkeMap(2.3 - 0.4j)
    z = np.array([0.3 + 0.1j, -0.5j, 1.2])
    w = iterate_array(f, z, 2)
    for zi, wi in zip(z, w):
        assert wi == pytest.approx(f(f(complex(zi))), rel=1e-13)


def test_newton_deflation_finds_new_root():
    f = BlaschkeMap(2.5)
    z1 = fixed_point_newton(f, 0.9, 1)
    z2 = fixed_point_newton(f, 0.9, 1, avoid=[z1])
    assert abs(z1 - z2) > 1e-6
    for z in (z1, z2):
        assert abs(f(z) - z) < 1e-12
