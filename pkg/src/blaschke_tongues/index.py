"""Holomorphic fixed-point indices and the attracting/repelling pair diagnosis."""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .core import INFINITY, TWO_PI, BlaschkeMap, derivative, evaluate
from .errors import ContourError, SolverError

N_NODES = 1024
PARABOLIC_TOL = 1e-6
MERGE_TOL = 1e-5


def index_multiplier(multiplier: complex) -> complex:
    """Index 1 / (1 - rho) of a fixed point with multiplier rho != 1."""
    multiplier = complex(multiplier)
    if multiplier == 1:
        raise ValueError("multiplier 1: use residue form")
    return 1.0 / (1.0 - multiplier)


def iterate_array(bmap: BlaschkeMap, z: np.ndarray, p: int) -> np.ndarray:
    """B^p on an array; the pole goes to inf."""
    a = bmap.a
    ab = a.conjugate()
    rot = bmap._rot
    cubic = abs(a) == 1.0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for _ in range(p):
            if cubic:
                z = -a * rot * z ** 3
            else:
                z = rot * z ** 3 * (z - a) / (1.0 - ab * z)
    return z


def winding_number(w: np.ndarray) -> int:
    """Winding of a closed sampled curve w_0..w_{N-1} around 0."""
    steps = np.angle(np.roll(w, -1) / w)
    return int(round(float(np.sum(steps)) / TWO_PI))


def _contour(bmap, p, z0, radius, n_nodes):
    theta = TWO_PI * np.arange(n_nodes) / n_nodes
    dz = radius * np.exp(1j * theta)
    z = z0 + dz
    w = z - iterate_array(bmap, z, p)
    return dz, w


def index_residue(bmap: BlaschkeMap, p: int, z0: complex, radius: float,
                  n_nodes: int = N_NODES, expected: int | None = 1,
                  shrink: bool = False) -> complex:
    """Residue of 1 / (z - B^p(z)) at the fixed point z0.

    The contour integral over |z - z0| = radius is evaluated by the
    trapezoidal rule, which converges geometrically for this analytic
    integrand.

    Parameters
    ----------
    bmap : BlaschkeMap
    p : int
        Iterate.
    z0 : complex
        Fixed point of B^p.
    radius : float
        Contour radius.
    n_nodes : int
        Quadrature nodes.
    expected : int or None
        Number of fixed points (with multiplicity) the contour must enclose,
        as counted by the winding number of z - B^p(z).  None accepts any
        positive count, as needed for a parabolic point of unknown
        multiplicity.
    shrink : bool
        Halve the radius until the count matches instead of raising.

    Returns
    -------
    complex

    Raises
    ------
    ContourError
        If the contour does not isolate z0.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    if not radius > 0:
        raise ValueError("radius must be positive")
    z0 = complex(z0)
    for _ in range(40):
        dz, w = _contour(bmap, p, z0, radius, n_nodes)
        ok = bool(np.all(np.isfinite(w))) and float(np.min(np.abs(w))) > 0
        count = winding_number(w) if ok else None
        if ok and (count == expected or (expected is None and count >= 1)):
            return complex(np.mean(dz / w))
        if not shrink:
            raise ContourError(
                f"contour not isolating: winding number {count}, expected {expected}")
        radius *= 0.5
    raise ContourError("contour not isolating at any radius tried")


@dataclass
class IndexReport:
    """Fixed points of B_a^p near a tip with their multipliers and indices.

    ``z_plus`` and ``z_minus`` are the two fixed points other than ``z0``.
    When they are off the circle, z_plus = 1 / conj(z_minus) and the
    multipliers are rho and conj(rho).
    """

    a: complex
    p: int
    z0: complex
    z_plus: complex
    z_minus: complex
    eta: float
    rho: complex
    rho_minus: complex
    i0: complex
    i_plus: complex
    i_minus: complex
    S: complex
    S_tilde: float
    eps: complex
    classification: str
    rho_abs2_identity: float | None = None

    @property
    def eps_r(self) -> float:
        return self.eps.real

    @property
    def eps_i(self) -> float:
        return self.eps.imag

    def to_dict(self) -> dict:
        def num(v):
            return None if v is None or v != v else float(v)

        def c(z):
            return {"re": num(complex(z).real), "im": num(complex(z).imag)}
        return {
            "a": c(self.a), "p": self.p,
            "fixed_points": {"z0": c(self.z0), "z_plus": c(self.z_plus),
                             "z_minus": c(self.z_minus)},
            "multipliers": {"eta": c(self.eta), "rho": c(self.rho),
                            "rho_minus": c(self.rho_minus)},
            "indices": {"z0": c(self.i0), "z_plus": c(self.i_plus),
                        "z_minus": c(self.i_minus)},
            "S": c(self.S), "S_tilde": num(self.S_tilde),
            "rho_abs": abs(self.rho),
            "rho_abs2_identity": num(self.rho_abs2_identity),
            "classification": self.classification,
        }


def _on_circle(z: complex, tol: float = 1e-6) -> bool:
    return abs(abs(z) - 1.0) < tol


def diagnose_pair(eta: float, z_plus: complex, rho: complex, z_minus: complex,
                  rho_minus: complex, tol: float = 1e-6) -> tuple[str, float, float | None]:
    """Classify the fixed-point triple from its multipliers.

    Returns
    -------
    classification : str
        One of ``parabolic``, ``on-circle-attracting``, ``on-circle-repelling``,
        ``pair-attracting``, ``pair-repelling``.
    S_tilde : float
        2 Re(1 / (1 - rho)), the index sum of the pair.
    rho_abs2_identity : float or None
        |rho|^2 predicted by 1 + 2 eps_r (1 - 1/S_tilde) for an off-circle pair.

    Raises
    ------
    SolverError
        If the prediction from S_tilde disagrees with |rho| computed directly.
    """
    mults = (complex(eta), complex(rho), complex(rho_minus))
    if any(abs(m - 1.0) < PARABOLIC_TOL for m in mults):
        s_t = float("nan")
        if abs(complex(rho) - 1.0) >= PARABOLIC_TOL:
            s_t = (1.0 / (1.0 - rho) + 1.0 / (1.0 - rho_minus)).real
        return "parabolic", s_t, None
    s_tilde = (1.0 / (1.0 - rho) + 1.0 / (1.0 - rho_minus)).real
    if abs(eta) < 1.0:
        return "on-circle-attracting", s_tilde, None
    if _on_circle(z_plus) and _on_circle(z_minus):
        label = ("on-circle-attracting" if min(abs(rho), abs(rho_minus)) < 1.0
                 else "on-circle-repelling")
        return label, s_tilde, None
    eps = complex(rho) - 1.0
    predicted = 1.0 + 2.0 * eps.real * (1.0 - 1.0 / s_tilde)
    direct = abs(rho) ** 2
    if abs(predicted - direct) > tol:
        raise SolverError(
            f"|rho|^2 identity violated: predicted {predicted!r}, direct {direct!r}")
    predicts_attracting = s_tilde > 1.0 and eps.real < 0.0
    if predicts_attracting != (abs(rho) < 1.0) and abs(abs(rho) - 1.0) > tol:
        raise SolverError("S_tilde prediction disagrees with |rho|")
    label = "pair-attracting" if abs(rho) < 1.0 else "pair-repelling"
    return label, s_tilde, predicted


def build_report(a: complex, p: int, z0: complex, eta: float, z_plus: complex,
                 rho: complex, z_minus: complex, rho_minus: complex,
                 residue_radius: float | None = None) -> IndexReport:
    """Assemble an :class:`IndexReport`.

    Indices come from the multiplier form; parabolic points use the residue
    form on a contour of radius ``residue_radius`` (shrunk until isolating).
    """
    bmap = BlaschkeMap(a)
    pts = (z0, z_plus, z_minus)
    mults = (complex(eta), complex(rho), complex(rho_minus))
    sep = min(abs(z0 - z_plus), abs(z0 - z_minus), abs(z_plus - z_minus))
    label, s_tilde, ident = diagnose_pair(eta, z_plus, rho, z_minus, rho_minus)
    if sep < MERGE_TOL:
        # the three points have merged into one parabolic point of multiplicity 3
        radius = 0.05 if residue_radius is None else residue_radius
        i0 = index_residue(bmap, p, z0, radius, expected=None, shrink=True)
        nan = complex(float("nan"), float("nan"))
        return IndexReport(a=complex(a), p=p, z0=complex(z0), z_plus=complex(z0),
                           z_minus=complex(z0), eta=float(complex(eta).real),
                           rho=complex(eta), rho_minus=complex(eta), i0=i0,
                           i_plus=nan, i_minus=nan, S=i0, S_tilde=float("nan"),
                           eps=complex(eta) - 1.0, classification="parabolic")
    if residue_radius is None:
        residue_radius = max(0.25 * sep, 1e-3)
    idx = []
    for z, m in zip(pts, mults):
        if abs(m - 1.0) < PARABOLIC_TOL:
            idx.append(index_residue(bmap, p, z, residue_radius, expected=None, shrink=True))
        else:
            idx.append(index_multiplier(m))
    S = idx[0] + idx[1] + idx[2]
    return IndexReport(a=complex(a), p=p, z0=complex(z0), z_plus=complex(z_plus),
                       z_minus=complex(z_minus), eta=float(complex(eta).real),
                       rho=complex(rho), rho_minus=complex(rho_minus),
                       i0=idx[0], i_plus=idx[1], i_minus=idx[2], S=S,
                       S_tilde=s_tilde, eps=complex(rho) - 1.0,
                       classification=label, rho_abs2_identity=ident)


def multiplier_of(bmap: BlaschkeMap, z: complex, p: int) -> complex:
    """(B^p)'(z) by the chain rule."""
    d = 1.0 + 0j
    for _ in range(p):
        d *= derivative(bmap, z)
        z = evaluate(bmap, z)
    return d


def fixed_point_newton(bmap: BlaschkeMap, z: complex, p: int, avoid: list[complex] = (),
                       max_iter: int = 100, tol: float = 1e-14) -> complex:
    """Newton for B^p(z) = z, deflated by the roots in ``avoid``.

    Raises
    ------
    SolverError
        On divergence or if the pole is hit.
    """
    z = complex(z)
    for _ in range(max_iter):
        w, d = z, 1.0 + 0j
        for _ in range(p):
            if w is INFINITY:
                raise SolverError("orbit hit the pole")
            d *= derivative(bmap, w)
            w = evaluate(bmap, w)
        if w is INFINITY:
            raise SolverError("orbit hit the pole")
        f = w - z
        fp = d - 1.0
        # deflation: g = f / prod(z - r)  =>  g/g' = f / (f' - f * sum 1/(z - r))
        corr = sum(1.0 / (z - r) for r in avoid)
        den = fp - f * corr
        if den == 0 or not cmath.isfinite(den):
            raise SolverError("singular Newton step")
        step = f / den
        z -= step
        if not cmath.isfinite(z) or abs(z) > 1e6:
            raise SolverError("Newton diverged")
        if abs(step) < tol * max(1.0, abs(z)):
            return z
    if abs(f) < 1e-10:
        return z
    raise SolverError("Newton did not converge")


def pair_identity_residual(rho: complex) -> float:
    """|S_tilde - (-2 eps_r / |eps|^2)| for the conjugate-pair formula."""
    eps = complex(rho) - 1.0
    s_tilde = 2.0 * (1.0 / (1.0 - rho)).real
    return abs(s_tilde - (-2.0 * eps.real / abs(eps) ** 2))


__all__ = ["IndexReport", "index_multiplier", "index_residue", "diagnose_pair",
           "build_report", "multiplier_of", "fixed_point_newton", "winding_number",
           "pair_identity_residual"]
