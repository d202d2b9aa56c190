"""Tongue roots, boundary curves, tips, extended-tongue slices and tip probes.

Unknowns are expressed in lift coordinates: a = r e^{2 pi i alpha} and a
circle point z = e^{2 pi i (x + alpha)}.  A cycle of period p and winding k
satisfies h^p_{r,alpha}(x) = x + k.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .circle import Lift, TongueType, lift_derivative, lift_eval, lift_jet
from .config import DEFAULT, Tolerances
from .core import TWO_PI, BlaschkeMap, Param, canonicalize, check_nondegenerate, turns
from .errors import DomainError, SolverError
from .index import IndexReport, build_report, fixed_point_newton, multiplier_of

R_STEP_MIN = 1e-10
FD_STEP_R = 1e-7


@dataclass(frozen=True)
class BoundaryPoint:
    """Point of a parabolic locus in lift coordinates."""

    r: float
    alpha: float
    x: float
    multiplier: float
    k: int
    side: str
    period: int = 1

    @property
    def a(self) -> complex:
        return self.r * cmath.exp(1j * TWO_PI * self.alpha)

    @property
    def z(self) -> complex:
        return cmath.exp(1j * TWO_PI * (self.x + self.alpha))


@dataclass
class BoundaryCurve:
    """Samples of one side of a tongue boundary, ordered by increasing r."""

    tongue: TongueType
    side: str
    samples: list[BoundaryPoint]
    metadata: dict = field(default_factory=dict)

    @property
    def tip(self) -> BoundaryPoint:
        return self.samples[-1]


def residuals(pt: BoundaryPoint) -> tuple[float, float, float]:
    """(h^p(x) - x - k, (h^p)'(x) - 1, (h^p)''(x)) at a boundary point."""
    j = lift_jet(pt.r, pt.alpha, pt.x, pt.period)
    return j.value - pt.x - pt.k, j.X - 1.0, j.S


# roots

def _root_function(p: int, k: int):
    return lambda alpha: lift_jet(2.0, alpha, 0.0, p).value - k


def find_root(p: int, k: int) -> Param:
    """Root of the tongue of type k/(2^p - 1) on |a| = 2.

    Solves h^p_{2,alpha}(0) = k for alpha in [0, 1/3).  The left side is
    strictly increasing in alpha from 0 at alpha = 0 to 2^p - 1 at 1/3, so
    the root is unique and bracketed.

    Raises
    ------
    ValueError
        If p < 1 or k is outside 0..2^p - 2.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    if not 0 <= k <= 2 ** p - 2:
        raise ValueError(f"k must satisfy 0 <= k <= 2^p - 2 (got k={k}, p={p})")
    if k == 0:
        alpha = 0.0
    else:
        f = _root_function(p, k)
        alpha = brentq(f, 0.0, 1.0 / 3.0, xtol=1e-16, rtol=4 * np.finfo(float).eps,
                       maxiter=500)
        # Newton polish; A = d h^p / d alpha > 0
        for _ in range(3):
            j = lift_jet(2.0, alpha, 0.0, p)
            new = alpha - (j.value - k) / j.A
            if abs(_root_function(p, k)(new)) >= abs(j.value - k):
                break
            alpha = new
    return canonicalize(2.0 * cmath.exp(1j * TWO_PI * alpha))


def root_alpha(p: int, k: int) -> float:
    """Angle (turns, in [0, 1/3)) of the root; see :func:`find_root`."""
    return find_root(p, k).alpha


def root_residual(p: int, k: int, alpha: float) -> float:
    return abs(_root_function(p, k)(alpha))


def all_roots(p: int) -> list[float]:
    """Root angles alpha_{p,k} for k = 0..2^p - 2."""
    return [root_alpha(p, k) for k in range(2 ** p - 1)]


# boundary tracing

def _alpha_on_curve(r: float, x: float, p: int, k: int, guess: float) -> float:
    """alpha with h^p_{r,alpha}(x) = x + k, nearest to ``guess`` (monotone in alpha)."""
    def f(al):
        return lift_jet(r, al, x, p).value - x - k
    f0 = f(guess)
    if f0 == 0:
        return guess
    step = 1e-4 if f0 < 0 else -1e-4
    lo = guess
    for _ in range(60):
        hi = lo + step
        if f(hi) * f0 <= 0:
            a, b = sorted((lo, hi))
            return brentq(f, a, b, xtol=1e-16, rtol=4 * np.finfo(float).eps)
        lo = hi
        step *= 2.0
    raise SolverError("could not bracket alpha on the fixed-point curve")


def _newton2(r: float, alpha: float, x: float, p: int, k: int,
             max_iter: int = 40) -> tuple[float, float, object]:
    """Newton on F(alpha, x) = (h^p - x - k, (h^p)' - 1) at fixed r."""
    for _ in range(max_iter):
        j = lift_jet(r, alpha, x, p)
        f1 = j.value - x - k
        f2 = j.X - 1.0
        det = j.A * j.S - (j.X - 1.0) * j.M
        if det == 0 or not math.isfinite(det):
            raise SolverError("singular Jacobian")
        da = (f1 * j.S - (j.X - 1.0) * f2) / det
        dx = (j.A * f2 - j.M * f1) / det
        alpha -= da
        x -= dx
        if not (math.isfinite(alpha) and math.isfinite(x)) or abs(dx) > 0.25:
            raise SolverError("Newton diverged")
        if abs(da) < 1e-15 and abs(dx) < 1e-14:
            break
    j = lift_jet(r, alpha, x, p)
    if abs(j.value - x - k) > 1e-11 or abs(j.X - 1.0) > 1e-9:
        raise SolverError("Newton did not converge")
    return alpha, x, j


def classify_boundary_point(pt: BoundaryPoint, delta: float = 1e-4) -> str:
    """left, right or tip from the sign of h^p(y) - y - k at y = x -/+ delta.

    Raises
    ------
    SolverError
        If the point attracts from both sides, which cannot happen at a
        multiplier-one point of a tongue boundary.
    """
    lift = Lift(pt.r, pt.alpha)

    def v(y):
        z = y
        for _ in range(pt.period):
            z = lift_eval(lift, z)
        return z - y - pt.k

    left, right = v(pt.x - delta), v(pt.x + delta)
    if left < 0 and right < 0:
        return "left"
    if left > 0 and right > 0:
        return "right"
    if left < 0 < right:
        return "tip"
    raise SolverError("attracting from both sides: not a tongue boundary point")


def boundary_start_points(tau: TongueType, r: float = 2.0) -> dict[str, BoundaryPoint]:
    """The two multiplier-one points of a tongue on the circle |a| = r.

    Walks outward in x from the root's critical point along the fixed-point
    curve h^p(x) = x + k, solving for alpha, until the multiplier reaches 1
    on each side, then refines by bisection and Newton.
    """
    p, k = tau.p, tau.k
    alpha0 = root_alpha(p, k)
    dx = 2e-3 / 2 ** (p - 1)
    out = {}
    for direction in (1.0, -1.0):
        prev_x, prev_al = 0.0, alpha0
        x = 0.0
        found = None
        for _ in range(int(0.5 / dx)):
            x = prev_x + direction * dx
            al = _alpha_on_curve(r, x, p, k, prev_al)
            m = lift_jet(r, al, x, p).X
            if m >= 1.0:
                found = (prev_x, x, prev_al)
                break
            prev_x, prev_al = x, al
        if found is None:
            raise SolverError("no multiplier-one point found from the root")
        x_in, x_out, al_guess = found

        def g(xx):
            return lift_jet(r, _alpha_on_curve(r, xx, p, k, al_guess), xx, p).X - 1.0

        a_, b_ = sorted((x_in, x_out))
        xs = brentq(g, a_, b_, xtol=1e-14)
        als = _alpha_on_curve(r, xs, p, k, al_guess)
        als, xs, j = _newton2(r, als, xs, p, k)
        pt = BoundaryPoint(r, als, xs, j.X, k, "", p)
        side = classify_boundary_point(pt)
        out[side] = BoundaryPoint(r, als, xs, j.X, k, side, p)
    if set(out) != {"left", "right"}:
        raise SolverError(f"start points classified as {sorted(out)}")
    return out


def _exact_period_ok(r, alpha, x, p, thresh=1e-8) -> bool:
    lift = Lift(r, alpha)
    for m in range(1, p):
        if p % m:
            continue
        y = x
        for _ in range(m):
            y = lift_eval(lift, y)
        d = (y - x) % 1.0
        if min(d, 1.0 - d) < thresh:
            return False
    return True


def find_tip(tau: TongueType, seed: BoundaryPoint, max_iter: int = 60) -> BoundaryPoint:
    """Tip of a tongue: Newton on (h^p - x - k, (h^p)' - 1, (h^p)'') in (r, alpha, x).

    Derivatives in r are central differences with step 1e-7; the others are
    exact jets.

    Raises
    ------
    SolverError
        On divergence or if the solution has exact period smaller than p.
    """
    p, k = tau.p, tau.k
    r, al, x = seed.r, seed.alpha, seed.x

    def G(r_, al_, x_):
        j = lift_jet(r_, al_, x_, p)
        return np.array([j.value - x_ - k, j.X - 1.0, j.S]), j

    for _ in range(max_iter):
        g, j = G(r, al, x)
        gp, _ = G(r + FD_STEP_R, al, x)
        gm, _ = G(r - FD_STEP_R, al, x)
        dr = (gp - gm) / (2 * FD_STEP_R)
        J = np.column_stack([dr, [j.A, j.M, j.N], [j.X - 1.0, j.S, j.T]])
        try:
            step = np.linalg.solve(J, g)
        except np.linalg.LinAlgError as exc:
            raise SolverError("singular tip Jacobian", last_good=seed) from exc
        # damp large moves
        scale = min(1.0, 0.05 / max(abs(step[0]), 1e-300), 0.05 / max(abs(step[2]), 1e-300))
        r, al, x = r - scale * step[0], al - scale * step[1], x - scale * step[2]
        if not all(map(math.isfinite, (r, al, x))):
            raise SolverError("tip Newton diverged", last_good=seed)
        if scale == 1.0 and np.max(np.abs(step)) < 1e-15:
            break
    g, j = G(r, al, x)
    if abs(g[0]) > 1e-10 or abs(g[1]) > 1e-10 or abs(g[2]) > 1e-10:
        raise SolverError(f"tip Newton did not converge (residuals {g.tolist()})",
                          last_good=seed)
    if not _exact_period_ok(r, al, x, p):
        raise SolverError("period collapse: tip has exact period smaller than p",
                          last_good=seed)
    # exact zeros are kept exact for the real-axis tip
    return BoundaryPoint(float(r), float(al), float(x), float(j.X), k, "tip", p)


def trace_boundary(tau: TongueType, side: str, r_step: float = 0.02,
                   with_tip: bool = True) -> BoundaryCurve:
    """Continue one side of the boundary of T_tau from |a| = 2 to the tip.

    Predictor-corrector in r: linear extrapolation of (alpha, x), then Newton
    on F(alpha, x) = (h^p - x - k, (h^p)' - 1).  The step is halved on
    failure; once it falls below 1e-10, or |(h^p)''| < 1e-4, or the Jacobian
    condition number exceeds 1e8, the 3-equation tip solver takes over.

    Raises
    ------
    ValueError
        For an unknown side.
    SolverError
        On divergence (with the last good point) or a detected fold.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    if not r_step > 0:
        raise ValueError("r_step must be positive")
    p, k = tau.p, tau.k
    start = boundary_start_points(tau)[side]
    pts = [start]
    s_sign = math.copysign(1.0, residual_jet(start).S)
    h = r_step
    halvings = 0
    while True:
        last = pts[-1]
        r_new = last.r + h
        if len(pts) >= 2:
            prev = pts[-2]
            t = h / (last.r - prev.r)
            al_p = last.alpha + t * (last.alpha - prev.alpha)
            x_p = last.x + t * (last.x - prev.x)
        else:
            al_p, x_p = last.alpha, last.x
        try:
            al, x, j = _newton2(r_new, al_p, x_p, p, k)
            if math.copysign(1.0, j.S) != s_sign:
                raise SolverError("jumped to the other side")
            if abs(x - last.x) > 0.1 or abs(al - last.alpha) > 0.05:
                raise SolverError("corrector left the local window")
        except SolverError:
            h *= 0.5
            halvings += 1
            if h < R_STEP_MIN:
                break
            continue
        if j.A <= 0:
            raise SolverError("fold detected", last_good=last)
        pts.append(BoundaryPoint(r_new, al, x, j.X, k, side, p))
        cond = np.linalg.cond(np.array([[j.A, j.X - 1.0], [j.M, j.S]]))
        if abs(j.S) < 1e-4 or cond > 1e8:
            break
    meta = {"r_step": r_step, "halvings": halvings, "r_step_min": R_STEP_MIN,
            "newton_residual": 1e-11}
    if with_tip:
        tip = find_tip(tau, pts[-1])
        meta["tip"] = {"r": tip.r, "alpha": tip.alpha, "x": tip.x}
        if tip.r > pts[-1].r:
            pts.append(tip)
        else:
            pts[-1] = tip
    return BoundaryCurve(tongue=tau, side=side, samples=pts, metadata=meta)


def residual_jet(pt: BoundaryPoint):
    return lift_jet(pt.r, pt.alpha, pt.x, pt.period)


def tongue_tip(tau: TongueType, r_step: float = 0.02) -> BoundaryPoint:
    """Tip reached by tracing the right boundary."""
    return trace_boundary(tau, "right", r_step).tip


# extended tongue of period one

@dataclass
class SliceResult:
    """Extended fixed tongue on the circle |a| = r, 1 < r <= 2.

    ``alphas``, ``xs`` and ``multipliers`` sample the attracting-or-not
    fixed point continued from x = 0 at alpha = 0 up to alpha_plus1.
    """

    r: float
    alpha_plus1: float
    alpha_minus1: float | None
    x_plus1: float
    x_minus1: float | None
    alphas: np.ndarray
    xs: np.ndarray
    multipliers: np.ndarray

    def mirrored(self) -> tuple[np.ndarray, np.ndarray]:
        """Profile extended to alpha < 0 by the conjugation symmetry."""
        al = np.concatenate([-self.alphas[:0:-1], self.alphas])
        m = np.concatenate([self.multipliers[:0:-1], self.multipliers])
        return al, m


def fixed_point_alpha(r: float, x: float) -> float:
    """alpha for which x is a fixed point of h_{r,alpha} (winding 0)."""
    return (x - lift_eval(Lift(r, 0.0), x)) / 3.0


def extended_tongue_slice(r: float, n_samples: int = 257,
                          tol: Tolerances = DEFAULT) -> SliceResult:
    """Multiplier-one and multiplier-minus-one angles of the extended fixed tongue.

    The fixed point of h_{r,alpha} is continued from x = 0 at alpha = 0,
    parametrized by x: on the curve alpha = (x - h_{r,0}(x)) / 3 and the
    multiplier is h'(x), which increases from 3 + (1+r)/(1-r) at x = 0.
    alpha_minus1 is None when that starting multiplier exceeds -1, i.e. for
    r > 5/3; within ``tol.parabolic`` of -1 it is reported as 0.

    Raises
    ------
    DomainError
        Unless 1 < r <= 2.
    """
    if not 1.0 < r <= 2.0:
        raise DomainError("extended tongue slice needs 1 < r <= 2")
    lift = Lift(r, 0.0)

    def eta(x):
        return lift_derivative(lift, x)

    x1 = brentq(lambda x: eta(x) - 1.0, 0.0, 0.5, xtol=1e-15)
    a1 = fixed_point_alpha(r, x1)
    m0 = eta(0.0)
    if abs(m0 + 1.0) <= tol.parabolic:
        xm, am = 0.0, 0.0
    elif m0 < -1.0:
        xm = brentq(lambda x: eta(x) + 1.0, 0.0, x1, xtol=1e-15)
        am = fixed_point_alpha(r, xm)
    else:
        xm, am = None, None
    xs = np.linspace(0.0, x1, n_samples)
    alphas = np.array([fixed_point_alpha(r, x) for x in xs])
    mults = np.array([eta(x) for x in xs])
    return SliceResult(r, a1, am, x1, xm, alphas, xs, mults)


def extended_tongue_curves(r_values: Sequence[float]) -> list[BoundaryCurve]:
    """Multiplier +1 and -1 curves of the extended fixed tongue over 1 < r <= 2.

    Returns four curves: the +1 and -1 loci for alpha > 0 and their mirror
    images.  The -1 curve only covers r <= 5/3.
    """
    tau = TongueType(0, 1)
    plus, minus = [], []
    for r in sorted(r_values):
        s = extended_tongue_slice(r)
        plus.append(BoundaryPoint(r, s.alpha_plus1, s.x_plus1, 1.0, 0, "multiplier+1"))
        if s.alpha_minus1 is not None:
            minus.append(BoundaryPoint(r, s.alpha_minus1, s.x_minus1, -1.0, 0, "multiplier-1"))
    out = []
    for pts, side in ((plus, "multiplier+1"), (minus, "multiplier-1")):
        if not pts:
            continue
        mirror = [BoundaryPoint(q.r, -q.alpha, -q.x, q.multiplier, 0, side) for q in pts]
        out.append(BoundaryCurve(tau, side, pts))
        out.append(BoundaryCurve(tau, side, mirror))
    return out


def attracting_cycle_on_circle(r: float, alpha: float, period: int,
                               n_transient: int = 20000) -> tuple[list[float], float] | None:
    """Attracting cycle of exact period ``period`` of the circle map, or None.

    Iterates h from each critical point of h (zeros of h') and checks the
    limit for that period.
    """
    lift = Lift(r, alpha)
    # h'(x) = 0  <=>  cos 2 pi x = (r^2 + 2) / (3 r)
    c = (r * r + 2.0) / (3.0 * r)
    starts = [0.0] if c > 1 else [math.acos(c) / TWO_PI, -math.acos(c) / TWO_PI]
    for x in starts:
        for _ in range(n_transient):
            x = lift_eval(lift, x) % 1.0
        orbit = [x]
        for _ in range(period):
            orbit.append(lift_eval(lift, orbit[-1]) % 1.0)
        d = abs(orbit[-1] - orbit[0])
        if min(d, 1.0 - d) > 1e-9:
            continue
        if period > 1 and not _exact_period_ok(r, alpha, orbit[0], period, 1e-6):
            continue
        m = 1.0
        for y in orbit[:-1]:
            m *= lift_derivative(lift, y)
        if abs(m) < 1.0:
            return orbit[:-1], m
    return None


# probe near a tip

def _circle_fixed_points(r, alpha, p, x_seed, window=0.5, n=4001):
    lift = Lift(r, alpha)

    def hp(x):
        for _ in range(p):
            x = lift_eval(lift, x)
        return x

    k = round(hp(x_seed) - x_seed)

    def v(x):
        return hp(x) - x - k

    xs = np.linspace(x_seed - window, x_seed + window, n)
    vs = [v(x) for x in xs]
    roots = []
    for i in range(n - 1):
        if vs[i] == 0:
            roots.append(xs[i])
        elif vs[i] * vs[i + 1] < 0:
            roots.append(brentq(v, xs[i], xs[i + 1], xtol=1e-15))
    return roots, k


def probe_tip_bifurcation(a: complex, p: int = 1, x_seed: float = 0.0,
                          delta: float = 1e-3) -> IndexReport:
    """Fixed points of B_a^p near a tongue tip and their index diagnosis.

    One fixed point is located on the circle through the lift (the one
    nearest ``x_seed``).  The other two are either on the circle as well or
    form a pair symmetric with respect to it, found by complex Newton
    deflated at the circle point from seeds z0 (1 +- delta).

    Raises
    ------
    SolverError
        With diagnostics when fewer than three fixed points are found.
    """
    a = complex(a)
    check_nondegenerate(a)
    r, alpha = abs(a), turns(a)
    bmap = BlaschkeMap(a)
    roots, _ = _circle_fixed_points(r, alpha, p, x_seed)
    if not roots:
        raise SolverError("no fixed point of the circle map near the seed")
    lift = Lift(r, alpha)

    def mult_x(x):
        m = 1.0
        for _ in range(p):
            m *= lift_derivative(lift, x)
            x = lift_eval(lift, x)
        return m

    def z_of(x):
        return cmath.exp(1j * TWO_PI * (x + alpha))

    if len(roots) >= 3:
        roots = sorted(roots, key=lambda x: abs(x - x_seed))[:3]
        ms = [mult_x(x) for x in roots]
        i0 = min(range(3), key=lambda i: abs(ms[i]))
        others = [i for i in range(3) if i != i0]
        zs = [z_of(roots[i]) for i in (i0, *others)]
        mm = [ms[i] for i in (i0, *others)]
        return build_report(a, p, zs[0], mm[0], zs[1], mm[1], zs[2], mm[2])
    x0 = min(roots, key=lambda x: abs(x - x_seed))
    z0 = z_of(x0)
    eta = mult_x(x0)
    found = []
    for d in (delta, 1e-2, 3e-2, 0.1):
        for seed in (z0 * (1 + d), z0 * (1 - d), z0 * (1 + 1j * d), z0 * (1 - 1j * d)):
            try:
                zp = fixed_point_newton(bmap, seed, p, avoid=[z0])
            except SolverError:
                continue
            if abs(zp - z0) > 1e-8 and abs(abs(zp) - 1.0) > 1e-9:
                found.append(zp)
        if found:
            break
    if not found:
        raise SolverError(f"only the circle fixed point {z0!r} found near the seed "
                          f"(circle roots {roots!r})")
    zp = min(found, key=lambda z: abs(z - z0))
    zp = fixed_point_newton(bmap, zp, p)
    zm = fixed_point_newton(bmap, 1.0 / zp.conjugate(), p)
    if abs(zm - zp) < 1e-8:
        raise SolverError("symmetric partner coincides with the found point")
    if abs(zp) < abs(zm):
        zp, zm = zm, zp
    rho = multiplier_of(bmap, zp, p)
    rho_m = multiplier_of(bmap, zm, p)
    return build_report(a, p, z0, eta, zp, rho, zm, rho_m)


__all__ = [
    "BoundaryPoint", "BoundaryCurve", "SliceResult", "find_root", "root_alpha",
    "root_residual", "all_roots", "boundary_start_points", "trace_boundary",
    "find_tip", "classify_boundary_point", "extended_tongue_slice",
    "attracting_cycle_on_circle", "extended_tongue_curves", "probe_tip_bifurcation", "residuals",
    "fixed_point_alpha", "tongue_tip",
]
