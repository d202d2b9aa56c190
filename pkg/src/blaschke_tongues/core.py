"""Evaluation of the Blaschke family and its relatives.

The family is

    B_{a,t}(z) = exp(2 pi i t) z^3 (z - a) / (1 - conj(a) z),

with B_a = B_{a,0}.  Points of the Riemann sphere are represented by Python
complex numbers plus the :data:`INFINITY` marker.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import DegenerateParameterError, DomainError

TWO_PI = 2.0 * math.pi
# primitive cube root of unity
XI = complex(-0.5, math.sqrt(3.0) / 2.0)


class _Infinity:
    """The point at infinity of the Riemann sphere."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


def is_infinity(z) -> bool:
    return z is INFINITY


def on_unit_circle(a: complex) -> bool:
    return abs(a) == 1.0


@dataclass(frozen=True)
class Param:
    """A parameter ``a`` together with its polar coordinates.

    ``alpha`` is arg(a) / 2 pi reduced modulo 1/3.  ``canonical`` is the
    representative of the six-element symmetry class of ``a``, related to it
    by ``canonical = XI**rotation * (conj(a) if conjugated else a)``.
    """

    a: complex
    canonical: complex
    r: float
    alpha: float
    rotation: int = 0
    conjugated: bool = False

    @classmethod
    def from_polar(cls, r: float, alpha: float) -> "Param":
        return canonicalize(r * cmath.exp(1j * TWO_PI * alpha))


def turns(z: complex) -> float:
    """Argument of ``z`` in turns, in [0, 1)."""
    t = math.atan2(z.imag, z.real) / TWO_PI
    return t + 1.0 if t < 0 else (0.0 if t >= 1.0 else t)


def canonicalize(a: complex, fold_conjugation: bool = True) -> Param:
    """Map ``a`` to its representative under a -> xi a and a -> conj(a).

    With ``fold_conjugation`` the representative has argument in [0, 1/6]
    turns, otherwise in [0, 1/3).  Idempotent.
    """
    a = complex(a)
    z, m, c = a, 0, False
    if fold_conjugation and z.imag < 0:
        z, c = z.conjugate(), True
    k = int(math.floor(3.0 * turns(z))) % 3
    if k:
        z = z * (XI.conjugate() if k == 1 else XI)
        m = -k
        if z.imag < 0:
            # rotation landed a hair below the real axis
            z = complex(abs(z), 0.0)
    if fold_conjugation and turns(z) > 1.0 / 6.0:
        z = z.conjugate() * XI
        m, c = 1 - m, not c
    t = turns(a)
    alpha = t - math.floor(3.0 * t) / 3.0
    if not 0.0 <= alpha < 1.0 / 3.0:
        alpha = 0.0
    return Param(a=a, canonical=z, r=abs(a), alpha=alpha,
                 rotation=m % 3, conjugated=c)


@dataclass(frozen=True)
class BlaschkeMap:
    """The map B_{a,t}; callable on complex numbers and :data:`INFINITY`."""

    a: complex
    t: float = 0.0
    _rot: complex = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "_rot", cmath.exp(1j * TWO_PI * self.t))

    @property
    def pole(self):
        ab = self.a.conjugate()
        if ab == 0 or on_unit_circle(self.a):
            return INFINITY
        return 1.0 / ab

    def __call__(self, z):
        return evaluate(self, z)

    def derivative(self, z):
        return derivative(self, z)


def evaluate(bmap: BlaschkeMap, z):
    """B_{a,t}(z) on the extended plane.

    The pole 1/conj(a) and infinity are sent to :data:`INFINITY`.  For
    |a| = 1 the factor (z-a)/(1-conj(a) z) is identically -a and the map is
    the cubic -a exp(2 pi i t) z^3.
    """
    if z is INFINITY:
        return INFINITY
    a = bmap.a
    z = complex(z)
    if on_unit_circle(a):
        return -a * bmap._rot * z ** 3
    den = 1.0 - a.conjugate() * z
    if den == 0:
        return INFINITY
    return bmap._rot * z ** 3 * (z - a) / den


def derivative(bmap: BlaschkeMap, z) -> complex:
    """B'_{a,t}(z) from the closed form

        z^2 (-3 conj(a) z^2 + (4 + 2|a|^2) z - 3a) / (1 - conj(a) z)^2.
    """
    if z is INFINITY:
        raise DomainError("derivative at infinity is not represented")
    a = bmap.a
    z = complex(z)
    if on_unit_circle(a):
        return -3.0 * a * bmap._rot * z * z
    ab = a.conjugate()
    den = 1.0 - ab * z
    if den == 0:
        raise DomainError("derivative at pole")
    s = (a * ab).real
    num = z * z * (-3.0 * ab * z * z + (4.0 + 2.0 * s) * z - 3.0 * a)
    return bmap._rot * num / (den * den)


def iterate(bmap: BlaschkeMap, z, n: int):
    """Return (B^n(z), (B^n)'(z)).  The derivative is None once the orbit hits infinity."""
    d = 1.0 + 0j
    for _ in range(n):
        w = evaluate(bmap, z)
        if w is INFINITY:
            return INFINITY, None
        d *= derivative(bmap, z)
        z = w
    return z, d


def critical_points(a: complex) -> tuple[complex, complex]:
    """Free critical points (c_plus, c_minus) of B_a.

    For |a| > 2 or |a| < 1 both are a/|a| times a real number and
    |c_plus| >= |c_minus|, so c_plus = 1/conj(c_minus) holds to roundoff.  For
    1 < |a| < 2 both lie on the unit circle and c_plus is the one whose
    argument lies in [arg a, arg a + 1/2) turns (a convention).
    """
    a = complex(a)
    s = (a * a.conjugate()).real
    if s == 0:
        raise DegenerateParameterError("degenerate family member: a = 0 has no free critical points")
    disc = (s - 4.0) * (s - 1.0)
    scale = a / (3.0 * s)
    if disc >= 0:
        root = math.sqrt(disc)
        return scale * (2.0 + s + root), scale * (2.0 + s - root)
    root = math.sqrt(-disc)
    return scale * complex(2.0 + s, root), scale * complex(2.0 + s, -root)


def escape_radius(a: complex, lam: float = 2.0) -> float:
    """Radius lam (|a| + 1) beyond which |B_a(z)| > lam |z|."""
    if not lam > 1:
        raise ValueError("escape factor lambda must be > 1")
    return lam * (abs(a) + 1.0)


def zero_capture_radius(a: complex) -> float:
    """Radius under which |G_{a,b}(z)| < 3|b||z|/4 whenever |b| < 1 and |a| > 1."""
    a = abs(a)
    return min(0.5, 1.0 / (2.0 * a)) if a > 0 else 0.5


def check_nondegenerate(a: complex) -> None:
    if a == 0:
        raise DegenerateParameterError("a = 0 gives z^4")
    if on_unit_circle(a):
        raise DegenerateParameterError("|a| = 1 collapses to the cubic -a z^3")


def rotate_conjugation(a: complex, alpha: float) -> tuple[complex, float]:
    """Parameters (a e^{-2 pi i alpha}, 3 alpha) of the map conjugate to B_{a,0} by z -> e^{-2 pi i alpha} z."""
    return a * cmath.exp(-1j * TWO_PI * alpha), 3.0 * alpha


@dataclass(frozen=True)
class GMap:
    """The family G_{a,b}(z) = b z^3 (z - a) / (1 - a z) (holomorphic in a)."""

    a: complex
    b: complex

    def __call__(self, z):
        if z is INFINITY:
            return INFINITY
        z = complex(z)
        den = 1.0 - self.a * z
        if den == 0:
            return INFINITY
        return self.b * z ** 3 * (z - self.a) / den

    def critical_points(self) -> tuple[complex, complex]:
        """Roots of 3a z^2 - 2(a^2 - 2) z + 3a; their product is 1."""
        a = complex(self.a)
        if a == 0:
            raise DegenerateParameterError("G_{0,b} has no free critical points")
        root = cmath.sqrt((a * a - 4.0) * (a * a - 1.0))
        return (2.0 + a * a + root) / (3.0 * a), (2.0 + a * a - root) / (3.0 * a)
