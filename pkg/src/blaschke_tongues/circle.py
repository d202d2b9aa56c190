"""Circle-map viewpoint: the lift, the semiconjugacy to doubling, and circle cycles.

On the unit circle write z = exp(2 pi i (x + alpha)) with a = r exp(2 pi i alpha).
In the coordinate x the map B_a lifts to

    h(x) = 2x + 3 alpha - atan2(sin 2 pi x, r - cos 2 pi x) / pi       (r > 1)
    h(x) = 4x + 3 alpha + atan2(r sin 2 pi x, 1 - r cos 2 pi x) / pi   (r < 1)

which is continuous, satisfies h(x+1) = h(x) + deg and has

    h'(x) = 3 + (1 - r^2) / (1 + r^2 - 2 r cos 2 pi x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import _backend
from .config import DEFAULT, Tolerances
from .core import check_nondegenerate, critical_points, escape_radius, turns
from .errors import DomainError, NotInTongueError

PI = math.pi
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Lift:
    """Continuous lift h_{r,alpha} of the circle map of B_a, a = r e^{2 pi i alpha}."""

    r: float
    alpha: float

    def __post_init__(self):
        if not self.r >= 0:
            raise DomainError("r must be non-negative")

    @property
    def degree(self) -> int:
        return 2 if self.r > 1 else 4

    def __call__(self, x: float) -> float:
        return lift_eval(self, x)

    def derivative(self, x: float) -> float:
        return lift_derivative(self, x)


def _check(r: float, x: float) -> None:
    if r == 1.0 and math.isclose(x - round(x), 0.0, abs_tol=0.0):
        raise DomainError("lift undefined for r = 1 at x = 0 (mod 1)")


def lift_eval(lift: Lift, x: float) -> float:
    """h_{r,alpha}(x), continuous in x with h(0) = 3 alpha."""
    r = lift.r
    _check(r, x)
    s = math.sin(TWO_PI * x)
    c = math.cos(TWO_PI * x)
    if r >= 1.0:
        return 2.0 * x + 3.0 * lift.alpha - math.atan2(s, r - c) / PI
    return 4.0 * x + 3.0 * lift.alpha + math.atan2(r * s, 1.0 - r * c) / PI


def lift_derivative(lift: Lift, x: float) -> float:
    """dh/dx = 3 + (1 - r^2) / (1 + r^2 - 2 r cos 2 pi x)."""
    r = lift.r
    _check(r, x)
    d = 1.0 + r * r - 2.0 * r * math.cos(TWO_PI * x)
    return 3.0 + (1.0 - r * r) / d


def lift_derivatives(r: float, x: float) -> tuple[float, float, float, float]:
    """Return (h', h'', h''', dh/dr) at x.  dh/dalpha is identically 3."""
    s = math.sin(TWO_PI * x)
    c = math.cos(TWO_PI * x)
    d = 1.0 + r * r - 2.0 * r * c
    q = r * r - 1.0
    h1 = 3.0 - q / d
    h2 = q * 4.0 * PI * r * s / (d * d)
    h3 = q * 8.0 * PI * PI * r * (c * d - 4.0 * r * s * s) / (d * d * d)
    hr = s / (PI * d)
    return h1, h2, h3, hr


@dataclass
class Jet:
    """Value and derivatives of h^p at a point.

    ``X``, ``S``, ``T`` are the first three x-derivatives, ``A`` is d/dalpha,
    ``M = dX/dalpha`` and ``N = dS/dalpha``.
    """

    value: float
    X: float
    S: float
    T: float
    A: float
    M: float
    N: float


def lift_jet(r: float, alpha: float, x: float, p: int) -> Jet:
    """Jet of the p-th iterate of h_{r,alpha} at x (no reduction mod 1)."""
    lift = Lift(r, alpha)
    X, S, T, A, M, N = 1.0, 0.0, 0.0, 0.0, 0.0, 0.0
    for _ in range(p):
        h1, h2, h3, _ = lift_derivatives(r, x)
        x, X, S, T, A, M, N = (
            lift_eval(lift, x),
            h1 * X,
            h2 * X * X + h1 * S,
            h3 * X ** 3 + 3.0 * h2 * X * S + h1 * T,
            h1 * A + 3.0,
            h2 * A * X + h1 * M,
            h3 * A * X * X + 2.0 * h2 * X * M + h2 * A * S + h1 * N,
        )
    return Jet(x, X, S, T, A, M, N)


def iterate_lift(lift: Lift, x: float, n: int) -> float:
    for _ in range(n):
        x = lift_eval(lift, x)
    return x


def lift_bound(lift: Lift) -> float:
    """sup |h(x) - 2x|, valid for r > 1."""
    return abs(3.0 * lift.alpha) + math.asin(min(1.0, 1.0 / lift.r)) / PI


def semiconjugacy(lift: Lift, x: float, tol: float = 1e-12) -> float:
    """H(x) = lim h^n(x) / 2^n, the semiconjugacy to the doubling map.

    Uses H(x) = x + sum_n phi(y_n) / 2^(n+1) with phi(y) = h(y) - 2y and
    y_{n+1} = h(y_n) mod 1, truncated once the tail bound M / 2^N drops
    below ``tol``.

    Parameters
    ----------
    lift : Lift
        Must have r >= 2, where h is a degree-2 cover.
    x : float
        Point in lift coordinates.
    tol : float
        Truncation tolerance.

    Returns
    -------
    float
        H(x), with H(x + 1) = H(x) + 1 and H(h(x)) = 2 H(x).
    """
    if lift.r < 2.0 - 1e-12:
        raise DomainError("semiconjugacy undefined below |a|=2")
    if not tol > 0:
        raise ValueError("tol must be positive")
    n0 = math.floor(x)
    y = x - n0
    bound = lift_bound(lift)
    total = 0.0
    weight = 0.5
    while 2.0 * weight * bound >= tol:
        hy = lift_eval(lift, y)
        total += weight * (hy - 2.0 * y)
        y = hy - math.floor(hy)
        weight *= 0.5
    return n0 + (x - n0) + total


@dataclass(frozen=True)
class TongueType:
    """Type k / (2^p - 1) of a tongue."""

    k: int
    p: int

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("period p must be >= 1")
        if not 0 <= self.k <= 2 ** self.p - 2:
            raise ValueError(f"k must satisfy 0 <= k <= 2^p - 2, got k={self.k}, p={self.p}")

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.k, 2 ** self.p - 1)

    @property
    def value(self) -> float:
        return self.k / (2 ** self.p - 1)

    def __str__(self):
        return f"{self.k}/{2 ** self.p - 1}"


@dataclass
class CircleCycle:
    """Attracting or parabolic cycle of the circle map found from a critical orbit."""

    a: complex
    points: list[float]
    period: int
    multiplier: float
    marked_index: int
    stability: str
    z_points: list[complex] = field(default_factory=list)
    critical: str = "plus"

    @property
    def marked_point(self) -> float:
        return self.points[self.marked_index]


def stability_label(m: float, tol: float = 1e-6) -> str:
    if abs(m - 1.0) < tol:
        return "parabolic+1"
    if abs(m + 1.0) < tol:
        return "parabolic-1"
    if abs(m) < 1e-12:
        return "superattracting"
    if abs(m) < 1.0:
        return "attracting"
    return "repelling"


def _cycle_from(a: complex, start: complex, which: str, max_period: int,
                max_iters: int, tol: Tolerances) -> Optional[CircleCycle]:
    k = _backend.kernels
    code, q, _, zr, zi, _, _ = k.orbit_classify(
        a.real, a.imag, start.real, start.imag, int(max_iters), int(max_period),
        escape_radius(a, tol.escape_lambda), tol.zero_capture,
        tol.cycle_convergence, tol.circle, abs(a) < 2.0)
    if code != _backend.CIRCLE:
        return None
    r = abs(a)
    alpha = turns(a)
    lift = Lift(r, alpha)
    z = complex(zr, zi)
    zs, xs = [], []
    multiplier = 1.0
    for _ in range(q):
        zs.append(z)
        x = (turns(z) - alpha) % 1.0
        xs.append(x)
        multiplier *= lift_derivative(lift, x)
        z = _step(a, z)
    return CircleCycle(a=a, points=xs, period=q, multiplier=multiplier,
                       marked_index=0,
                       stability=stability_label(multiplier, tol.parabolic),
                       z_points=zs, critical=which)


def _step(a: complex, z: complex) -> complex:
    w = _backend._fallback.bstep(a.real, a.imag, z.real, z.imag)
    return complex(*w)


def detect_cycle(a: complex, max_period: int | None = None, max_iters: int | None = None,
                 tol: Tolerances = DEFAULT, critical: str = "plus") -> Optional[CircleCycle]:
    """Circle cycle attracting the orbit of a free critical point, or None.

    The orbit of c_plus (or c_minus with ``critical="minus"``) is followed
    in the plane.  None is returned if it escapes, falls into 0, converges
    to a cycle off the circle or is undecided after ``max_iters`` steps.
    The marked point (index 0) is the limit of B^{np}(c).
    """
    a = complex(a)
    check_nondegenerate(a)
    if abs(a) < 1.0:
        raise DomainError("detect_cycle needs |a| > 1")
    max_period = tol.max_period if max_period is None else max_period
    max_iters = tol.max_iters if max_iters is None else max_iters
    cp, cm = critical_points(a)
    start = cp if critical == "plus" else cm
    return _cycle_from(a, start, critical, max_period, max_iters, tol)


def detect_cycles(a: complex, max_period: int | None = None, max_iters: int | None = None,
                  tol: Tolerances = DEFAULT) -> dict[str, Optional[CircleCycle]]:
    """Run :func:`detect_cycle` from both critical points."""
    return {w: detect_cycle(a, max_period, max_iters, tol, critical=w)
            for w in ("plus", "minus")}


def same_cycle(c1: CircleCycle, c2: CircleCycle, tol: float = 1e-6) -> bool:
    if c1.period != c2.period:
        return False
    return all(min(abs(z - w) for w in c2.z_points) < tol for z in c1.z_points)


def type_of(a: complex, tol: Tolerances = DEFAULT, cycle: CircleCycle | None = None) -> TongueType:
    """Type k/(2^p - 1) of the tongue containing ``a``.

    Raises
    ------
    DomainError
        If |a| < 2.
    NotInTongueError
        If no attracting circle cycle is found, or H at the marked point is
        not within ``tol.type_match`` of k/(2^p - 1).
    """
    a = complex(a)
    if abs(a) < 2.0 - 1e-12:
        raise DomainError("type undefined; use extended-tongue membership")
    if cycle is None:
        cycle = detect_cycle(a, tol=tol)
    if cycle is None or abs(cycle.multiplier) >= 1.0:
        raise NotInTongueError("not in any tongue")
    p = cycle.period
    lift = Lift(max(abs(a), 2.0), turns(a))
    tau = semiconjugacy(lift, cycle.marked_point, tol=1e-13) % 1.0
    den = 2 ** p - 1
    k = round(tau * den) % den if den > 1 else 0
    dist = abs(tau - k / den)
    dist = min(dist, abs(dist - 1.0))
    if dist > tol.type_match:
        raise NotInTongueError(
            f"H(marked point) = {tau!r} is {dist:.3g} away from {k}/{den}")
    return TongueType(k, p)
