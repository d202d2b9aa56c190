import math

import numpy as np
import pytest

from blaschke_tongues.circle import Lift, TongueType, detect_cycle, lift_jet, type_of
from blaschke_tongues import _backend
from blaschke_tongues.core import XI, critical_points
from blaschke_tongues.errors import DomainError, SolverError
from blaschke_tongues.locus import (BoundaryPoint, all_roots, attracting_cycle_on_circle,
                                    boundary_start_points, classify_boundary_point,
                                    extended_tongue_curves, extended_tongue_slice,
                                    find_root, find_tip, probe_tip_bifurcation, residuals,
                                    root_residual, trace_boundary, tongue_tip)

T0 = TongueType(0, 1)


@pytest.fixture(scope="module")
def t0_curves():
    return {side: trace_boundary(T0, side) for side in ("left", "right")}


class TestRoots:
    def test_fixed_tongue(self):
        p = find_root(1, 0)
        assert p.a == 2 and p.alpha == 0

    def test_period_two_k0(self):
        assert find_root(2, 0).alpha == 0

    def test_period_two_k1(self):
        p = find_root(2, 1)
        assert 0 < p.alpha < 1 / 3
        assert root_residual(2, 1, p.alpha) < 1e-12
        assert type_of(p.a) == TongueType(1, 2)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            find_root(2, 3)
        with pytest.raises(ValueError):
            find_root(0, 0)

    @pytest.mark.parametrize("p", range(1, 7))
    def test_root_count(self, p):
        # independent oracle: h^p_{2,alpha}(0) - k changes sign once on a fine grid
        grid = np.linspace(0, 1 / 3, 4001)[:-1]
        vals = np.array([lift_jet(2.0, al, 0.0, p).value for al in grid])
        assert np.all(np.diff(vals) > 0)
        roots = all_roots(p)
        assert len(roots) == 2 ** p - 1
        assert np.all(np.diff(roots) > 0)
        for k, al in enumerate(roots):
            assert root_residual(p, k, al) < 1e-12
            below = grid[vals < k]
            if k:
                assert below[-1] <= al <= grid[np.argmax(vals >= k)]


class TestBoundary:
    def test_start_points_symmetric(self):
        pts = boundary_start_points(T0)
        left, right = pts["left"], pts["right"]
        assert left.r == right.r == 2
        assert right.alpha > 0
        assert left.alpha == pytest.approx(-right.alpha, abs=1e-12)
        assert left.x == pytest.approx(-right.x, abs=1e-12)

    def test_sides_meet_at_tip(self, t0_curves):
        for c in t0_curves.values():
            tip = c.tip
            assert (tip.r, tip.alpha, tip.x) == pytest.approx((3, 0, 0), abs=1e-6)

    def test_graph_property(self, t0_curves):
        for c in t0_curves.values():
            rs = np.array([s.r for s in c.samples])
            assert np.all(np.diff(rs) > 0)

    def test_residuals_reevaluated(self, t0_curves):
        for c in t0_curves.values():
            for s in c.samples:
                assert max(abs(v) for v in residuals(s)[:2]) < 1e-9
                assert abs(s.multiplier - 1) < 1e-6

    def test_passes_near_caption_parameter(self, t0_curves):
        target = 2.65675 + 0.0389604j
        pts = np.array([s.a for c in t0_curves.values() for s in c.samples])
        # distance to the polyline, sampled densely between neighbours
        best = min(abs(p + t * (q - p) - target)
                   for c in t0_curves.values()
                   for p, q in zip([s.a for s in c.samples][:-1], [s.a for s in c.samples][1:])
                   for t in np.linspace(0, 1, 51))
        assert best < 2e-3
        assert pts.size > 10

    def test_classification(self, t0_curves):
        for side, c in t0_curves.items():
            pt = min(c.samples, key=lambda s: abs(s.r - 2.5))
            assert classify_boundary_point(pt) == side
        assert classify_boundary_point(BoundaryPoint(3, 0, 0, 1, 0, "tip")) == "tip"

    def test_attracting_both_sides_rejected(self):
        with pytest.raises(SolverError):
            classify_boundary_point(BoundaryPoint(2.5, 0, 0, 2 / 3, 0, "bogus"))


class TestTips:
    def test_fixed_tongue_tip_exact(self):
        tip = tongue_tip(T0)
        assert (tip.r, tip.alpha, tip.x) == (3, 0, 0)
        assert max(abs(v) for v in residuals(tip)) < 1e-10

    def test_second_derivative_vanishes_at_zero(self):
        for r in (1.5, 2.0, 2.5, 3.0, 4.0):
            assert lift_jet(r, 0.0, 0.0, 1).S == 0

    def test_symmetric_tips(self):
        for rot in (XI, XI.conjugate()):
            assert type_of(2.95 * rot) == T0

    def test_period_two_tip(self):
        tau = TongueType(1, 2)
        tip = tongue_tip(tau)
        assert max(abs(v) for v in residuals(tip)) < 1e-10
        assert 2 < tip.r < 3
        assert classify_boundary_point(tip) == "tip"

    def test_find_tip_from_seed(self, t0_curves):
        seed = t0_curves["right"].samples[-3]
        tip = find_tip(T0, seed)
        assert (tip.r, tip.alpha, tip.x) == pytest.approx((3, 0, 0), abs=1e-9)


class TestExtendedSlice:
    def test_period_doubling_radius(self):
        s = extended_tongue_slice(5 / 3)
        assert s.alpha_minus1 == pytest.approx(0, abs=1e-6)

    @pytest.mark.parametrize("r", [1.1, 1.2, 1.3, 1.5, 1.9, 2.0])
    def test_profile(self, r):
        s = extended_tongue_slice(r)
        assert np.all(np.diff(s.multipliers) > 0)
        assert np.all(np.diff(s.alphas) > 0)
        assert 0 < s.alpha_plus1 < 1 / 6
        assert np.all(s.alphas < 1 / 6)
        assert (s.alpha_minus1 is not None) == (r <= 5 / 3)
        if s.alpha_minus1 is not None:
            assert 0 < s.alpha_minus1 < s.alpha_plus1

    def test_multiplier_range(self):
        s = extended_tongue_slice(1.3)
        b = 3 + 2.3 / (1 - 1.3)
        assert s.multipliers[0] == pytest.approx(b)
        assert s.multipliers[-1] == pytest.approx(1, abs=1e-12)

    def test_domain(self):
        for r in (1.0, 0.5, 2.01):
            with pytest.raises(DomainError):
                extended_tongue_slice(r)

    def test_period_doubling_cycle(self):
        s = extended_tongue_slice(1.2)
        inside = attracting_cycle_on_circle(1.2, s.alpha_minus1 - 1e-3, 2)
        assert inside is not None
        pts, mult = inside
        assert abs(mult) < 1
        assert attracting_cycle_on_circle(1.2, s.alpha_minus1 + 1e-3, 1) is not None

    def test_mirror(self):
        s = extended_tongue_slice(1.5)
        al, m = s.mirrored()
        assert np.allclose(al, -al[::-1])
        assert np.allclose(m, m[::-1])

    def test_curves(self):
        curves = extended_tongue_curves(np.linspace(1.01, 2, 20))
        sides = sorted(c.side for c in curves)
        assert sides == ["multiplier+1", "multiplier+1", "multiplier-1", "multiplier-1"]
        minus = [c for c in curves if c.side == "multiplier-1"][0]
        assert max(s.r for s in minus.samples) <= 5 / 3
        for c in curves:
            for s in c.samples:
                h1 = Lift(s.r, s.alpha).derivative(s.x)
                assert h1 == pytest.approx(s.multiplier, abs=1e-9)


class TestProbe:
    def test_inside_tongue(self):
        rep = probe_tip_bifurcation(2.9)
        assert rep.classification == "on-circle-attracting"
        assert abs(rep.eta) < 1

    def test_repelling_pair(self):
        rep = probe_tip_bifurcation(2.55309 + 0.063042j)
        assert rep.classification == "pair-repelling"
        assert abs(rep.rho) > 1
        assert rep.rho_abs2_identity == pytest.approx(abs(rep.rho) ** 2, abs=1e-6)
        assert abs(rep.z_plus * rep.z_minus.conjugate() - 1) < 1e-9

    def test_attracting_pair(self):
        rep = probe_tip_bifurcation(2.8 + 0.02j)
        assert rep.classification == "pair-attracting"
        assert abs(rep.rho) < 1 and rep.S_tilde > 1
        assert rep.rho_abs2_identity == pytest.approx(abs(rep.rho) ** 2, abs=1e-6)

    def test_index_sum_real(self):
        rep = probe_tip_bifurcation(2.64732 + 0.0421017j)
        assert abs(rep.S.imag) < 1e-8

    def test_tip_parabolic(self):
        rep = probe_tip_bifurcation(3)
        assert rep.classification == "parabolic"
        assert math.isfinite(rep.i0.real)

    def test_pair_is_cycle_off_circle(self):
        # iteration oracle: the critical orbit converges to one of the probe's pair
        a = 2.8 + 0.02j
        rep = probe_tip_bifurcation(a)
        assert detect_cycle(a) is None
        c = critical_points(a)[0]
        code, q, _, zr, zi, _, _ = _backend.kernels.orbit_classify(
            a.real, a.imag, c.real, c.imag, 200000, 8, 100.0, 1e-6, 1e-9, 1e-6)
        assert code == _backend.OFF and q == 1
        z = complex(zr, zi)
        assert min(abs(z - rep.z_plus), abs(z - rep.z_minus)) < 1e-8
