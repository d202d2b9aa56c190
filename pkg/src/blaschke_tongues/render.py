"""Parameter-plane and dynamical-plane scans, palettes and raster output."""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import _backend
from .config import DEFAULT
from .core import XI, BlaschkeMap, check_nondegenerate, critical_points, escape_radius
from .errors import SolverError
from .index import fixed_point_newton, multiplier_of

# parameter-plane legend: code -> (name, rgb)
PARAM_LEGEND = {
    0: ("degenerate", (128, 128, 128)),
    1: ("escape", (220, 30, 30)),
    2: ("zero", (0, 0, 0)),
    3: ("circle-period-1", (255, 150, 0)),
    4: ("circle-period-2", (0, 170, 0)),
    5: ("circle-period-3", (140, 40, 200)),
    6: ("circle-period-other", (170, 230, 150)),
    7: ("off-circle-cycle", (255, 150, 200)),
    8: ("undecided", (40, 60, 230)),
}

# dynamical-plane legend; escape is drawn on a blue-to-red scale
DYN_LEGEND = {
    0: ("undecided", (128, 128, 128)),
    1: ("escape", None),
    2: ("zero", (0, 0, 0)),
    3: ("basin-c-plus", (0, 190, 0)),
    4: ("basin-c-minus-only", (240, 220, 0)),
}

OVERLAY_COLORS = {
    "+1": (0, 200, 0),
    "-1": (230, 0, 230),
    "reference": (255, 255, 255),
}


@dataclass(frozen=True)
class ScanSpec:
    """Rectangle, resolution and iteration limits of a scan.

    For ``coords="cartesian"`` the rectangle lives in the complex plane.
    For ``coords="polar"`` (parameter plane only) ``center.real`` is the
    angle alpha in turns and ``center.imag`` is the modulus r.
    """

    center: complex
    width: float
    height: float
    nx: int
    ny: int
    max_iters: int = 5000
    max_period: int = 64
    lam: float = 2.0
    plane: str = "parameter"
    a: complex | None = None
    coords: str = "cartesian"
    basin_tol: float = DEFAULT.basin
    conv_tol: float = DEFAULT.cycle_convergence
    circle_tol: float = DEFAULT.circle
    zero_radius: float = DEFAULT.zero_capture

    def __post_init__(self):
        if self.nx <= 0 or self.ny <= 0:
            raise ValueError("pixel counts must be positive")
        if not self.width > 0 or not self.height > 0:
            raise ValueError("width and height must be positive")
        if not self.lam > 1:
            raise ValueError("escape factor lambda must be > 1")
        if self.plane not in ("parameter", "dynamical"):
            raise ValueError("plane must be 'parameter' or 'dynamical'")
        if self.coords not in ("cartesian", "polar"):
            raise ValueError("coords must be 'cartesian' or 'polar'")
        if self.plane == "dynamical":
            if self.a is None:
                raise ValueError("dynamical scans need a parameter a")
            check_nondegenerate(complex(self.a))
            if self.coords != "cartesian":
                raise ValueError("dynamical scans are cartesian")
        if self.max_iters < 1 or self.max_period < 1:
            raise ValueError("iteration limits must be positive")

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        """Pixel-centre coordinates along x (left to right) and y (top to bottom)."""
        c = complex(self.center)
        xs = c.real - self.width / 2 + (np.arange(self.nx) + 0.5) * (self.width / self.nx)
        ys = c.imag + self.height / 2 - (np.arange(self.ny) + 0.5) * (self.height / self.ny)
        return xs, ys

    def points(self) -> tuple[np.ndarray, np.ndarray]:
        """Flattened (real, imag) arrays of the scanned points, row-major from the top."""
        xs, ys = self.axes()
        X, Y = np.meshgrid(xs, ys)
        if self.coords == "polar":
            ang = 2.0 * np.pi * X
            return (Y * np.cos(ang)).ravel(), (Y * np.sin(ang)).ravel()
        return np.ascontiguousarray(X.ravel()), np.ascontiguousarray(Y.ravel())

    def to_pixel(self, z: complex) -> tuple[float, float]:
        """Continuous pixel coordinates (column, row) of a point of the plane."""
        if self.coords == "polar":
            z = complex((cmath.phase(z) / (2 * math.pi)) % 1.0, abs(z))
        c = complex(self.center)
        col = (z.real - (c.real - self.width / 2)) / self.width * self.nx - 0.5
        row = ((c.imag + self.height / 2) - z.imag) / self.height * self.ny - 0.5
        return col, row


@dataclass
class ClassifiedGrid:
    """Per-pixel class codes and auxiliary data (period or iteration count)."""

    spec: ScanSpec
    codes: np.ndarray
    aux: np.ndarray
    legend: dict = field(default_factory=dict)
    targets: list = field(default_factory=list)

    def counts(self) -> dict[str, int]:
        vals, cnt = np.unique(self.codes, return_counts=True)
        return {self.legend[int(v)][0]: int(c) for v, c in zip(vals, cnt)}

    def to_rgb(self) -> np.ndarray:
        return colorize(self)

    def write_csv(self, path) -> None:
        write_grid_csv(self, path)


def _chunks(n_rows: int, nx: int, threads: int) -> list[tuple[int, int]]:
    rows_per = max(1, math.ceil(n_rows / max(1, threads * 4)))
    return [(r0 * nx, min(n_rows, r0 + rows_per) * nx)
            for r0 in range(0, n_rows, rows_per)]


def _run(fn, spec: ScanSpec, threads: int) -> None:
    chunks = _chunks(spec.ny, spec.nx, threads)
    if threads <= 1:
        for s, e in chunks:
            fn(s, e)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        list(pool.map(lambda se: fn(*se), chunks))


def scan_parameter_plane(spec: ScanSpec, threads: int = 1,
                         backend: str | None = None) -> ClassifiedGrid:
    """Classify each parameter a by the fate of the critical point c_plus(a).

    Classes follow :data:`PARAM_LEGEND`; every |a| < 1 is drawn as escape
    and |a| = 1 exactly as degenerate.  For 1 < |a| < 2 both critical points
    lie on the unit circle; their orbits are kept on it and the shorter
    circle cycle attracting either one decides the class, which makes the
    classification invariant under a -> conj(a).
    """
    if spec.plane != "parameter":
        raise ValueError("spec is not a parameter-plane scan")
    k = _backend.get(backend)
    ar, ai = spec.points()
    n = ar.size
    codes = np.zeros(n, dtype=np.int32)
    aux = np.zeros(n, dtype=np.int64)

    def work(s, e):
        k.classify_params(ar, ai, int(spec.max_iters), int(spec.max_period), float(spec.lam),
                          float(spec.zero_radius), float(spec.conv_tol),
                          float(spec.circle_tol), codes, aux, s, e)

    _run(work, spec, threads)
    return ClassifiedGrid(spec, codes.reshape(spec.ny, spec.nx),
                          aux.reshape(spec.ny, spec.nx), dict(PARAM_LEGEND))


def _settle_undecided(a: complex, z: complex, max_period: int) -> list[complex] | None:
    """Non-repelling cycle near the end of a slowly converging orbit (parabolic case)."""
    bmap = BlaschkeMap(a)
    for q in range(1, min(max_period, 16) + 1):
        try:
            w = fixed_point_newton(bmap, z, q, max_iter=400, tol=1e-13)
        except SolverError:
            continue
        if abs(w - z) > 1e-2 or abs(multiplier_of(bmap, w, q)) > 1.0 + 1e-6:
            continue
        cyc = [w]
        for _ in range(q - 1):
            cyc.append(bmap(cyc[-1]))
        return cyc
    return None


def critical_cycle(a: complex, which: str = "plus", max_iters: int | None = None,
                   max_period: int = 64) -> list[complex] | None:
    """Points of the cycle attracting the orbit of c_plus or c_minus, or None."""
    a = complex(a)
    cp, cm = critical_points(a)
    c = cp if which == "plus" else cm
    k = _backend.kernels
    code, q, _, zr, zi, _, _ = k.orbit_classify(
        a.real, a.imag, c.real, c.imag,
        DEFAULT.max_iters if max_iters is None else int(max_iters), max_period,
        escape_radius(a, DEFAULT.escape_lambda), DEFAULT.zero_capture,
        DEFAULT.cycle_convergence, DEFAULT.circle, abs(a) < 2.0)
    if code in (_backend.ESCAPE, _backend.ZERO):
        return None
    if code == _backend.UNDECIDED:
        return _settle_undecided(a, complex(zr, zi), max_period)
    bmap = BlaschkeMap(a)
    cyc = [complex(zr, zi)]
    for _ in range(q - 1):
        cyc.append(bmap(cyc[-1]))
    return cyc


def scan_dynamical_plane(a: complex, spec: ScanSpec, threads: int = 1,
                         backend: str | None = None) -> ClassifiedGrid:
    """Classify starting points z for B_a.

    Targets are the cycles attracting the two critical orbits.  A pixel is
    in the c_plus basin once its orbit comes within ``spec.basin_tol`` of a
    point of that cycle, and in the c_minus class if it approaches the
    c_minus cycle when that cycle differs.
    """
    a = complex(a)
    check_nondegenerate(a)
    if spec.plane != "dynamical" or spec.a is None:
        spec = replace(spec, plane="dynamical", a=a)
    k = _backend.get(backend)
    plus = critical_cycle(a, "plus", max_period=spec.max_period) or []
    minus = critical_cycle(a, "minus", max_period=spec.max_period) or []
    # parabolic targets are only located to about eps^(1/3)
    if plus and minus and min(abs(m - p) for m in minus for p in plus) < 1e-4:
        minus = []
    targets = [(z, 3) for z in plus] + [(z, 4) for z in minus]
    tr = np.array([z.real for z, _ in targets], dtype=float)
    ti = np.array([z.imag for z, _ in targets], dtype=float)
    tl = np.array([lab for _, lab in targets], dtype=np.int32)
    zr, zi = spec.points()
    n = zr.size
    codes = np.zeros(n, dtype=np.int32)
    aux = np.zeros(n, dtype=np.int64)
    R = escape_radius(a, spec.lam)

    def work(s, e):
        k.classify_dynamical(a.real, a.imag, zr, zi, int(spec.max_iters), float(R),
                             float(spec.zero_radius), tr, ti, tl, float(spec.basin_tol),
                             codes, aux, s, e)

    _run(work, spec, threads)
    return ClassifiedGrid(spec, codes.reshape(spec.ny, spec.nx),
                          aux.reshape(spec.ny, spec.nx), dict(DYN_LEGEND),
                          targets=[(z, lab) for z, lab in targets])


def escape_color(n: np.ndarray, max_iters: int) -> np.ndarray:
    """256-step blue-to-red scale on log(1 + escape iteration)."""
    t = np.log1p(n.astype(float)) / math.log1p(max(max_iters, 1))
    idx = np.clip((t * 255).astype(np.int64), 0, 255).astype(np.uint8)
    out = np.zeros(n.shape + (3,), dtype=np.uint8)
    out[..., 0] = idx
    out[..., 2] = 255 - idx
    return out


def colorize(grid: ClassifiedGrid) -> np.ndarray:
    rgb = np.zeros(grid.codes.shape + (3,), dtype=np.uint8)
    for code, (_, color) in grid.legend.items():
        mask = grid.codes == code
        if color is None:
            rgb[mask] = escape_color(grid.aux[mask], grid.spec.max_iters)
        else:
            rgb[mask] = color
    return rgb


def write_ppm(rgb: np.ndarray, path) -> None:
    """Binary PPM (P6, 8 bit)."""
    rgb = np.ascontiguousarray(rgb, dtype=np.uint8)
    h, w = rgb.shape[:2]
    with open(path, "wb") as fh:
        fh.write(b"P6\n%d %d\n255\n" % (w, h))
        fh.write(rgb.tobytes())


def read_ppm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    parts = data.split(b"\n", 3)
    if parts[0] != b"P6":
        raise ValueError("not a binary PPM")
    w, h = map(int, parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(h, w, 3)


def write_png(rgb: np.ndarray, path) -> None:
    """PNG output through Pillow (optional dependency)."""
    try:
        from PIL import Image
    except ImportError as exc:
        raise RuntimeError("PNG output needs Pillow; install the 'png' extra") from exc
    Image.fromarray(np.ascontiguousarray(rgb, dtype=np.uint8), "RGB").save(path, optimize=False)


def write_grid_csv(grid: ClassifiedGrid, path) -> None:
    """One record ``ix,iy,class,aux`` per pixel."""
    ny, nx = grid.codes.shape
    iy, ix = np.mgrid[0:ny, 0:nx]
    table = np.column_stack([ix.ravel(), iy.ravel(), grid.codes.ravel(), grid.aux.ravel()])
    with open(path, "w", newline="") as fh:
        fh.write("ix,iy,class,aux\n")
        np.savetxt(fh, table, fmt="%d", delimiter=",")


# overlays

def _draw_polyline(rgb: np.ndarray, spec: ScanSpec, pts: Sequence[complex], color) -> None:
    h, w = rgb.shape[:2]
    pix = [spec.to_pixel(complex(z)) for z in pts]
    for (c0, r0), (c1, r1) in zip(pix[:-1], pix[1:]):
        n = int(math.ceil(2 * max(abs(c1 - c0), abs(r1 - r0)))) + 1
        if n > 4 * (w + h):
            continue  # wraps around in polar coordinates
        t = np.linspace(0.0, 1.0, n)
        cols = np.rint(c0 + t * (c1 - c0)).astype(np.int64)
        rows = np.rint(r0 + t * (r1 - r0)).astype(np.int64)
        ok = (cols >= 0) & (cols < w) & (rows >= 0) & (rows < h)
        rgb[rows[ok], cols[ok]] = color


def _circle(radius: float, n: int = 2048) -> list[complex]:
    return [radius * cmath.exp(2j * math.pi * j / n) for j in range(n + 1)]


def _curve_kind(curve) -> str:
    side = getattr(curve, "side", "")
    return "-1" if side == "multiplier-1" else "+1"


def render_tongue_overlay(curves: Iterable, spec: ScanSpec, base: ClassifiedGrid | None = None,
                          reference_radii: Sequence[float] = (1.0, 2.0),
                          symmetric: bool = True) -> np.ndarray:
    """Draw boundary curves over an optional scan.

    Multiplier +1 curves and multiplier -1 curves get distinct colours; the
    circles in ``reference_radii`` are drawn for orientation.  With
    ``symmetric`` every curve is also drawn rotated by 1/3 and 2/3 turn.
    Points outside the rectangle are clipped.
    """
    colors = dict(OVERLAY_COLORS)
    if base is not None:
        rgb = colorize(base)
    else:
        rgb = np.full((spec.ny, spec.nx, 3), 255, dtype=np.uint8)
        colors["reference"] = (0, 0, 0)
    for rad in reference_radii:
        _draw_polyline(rgb, spec, _circle(rad), colors["reference"])
    rots = (1, XI, XI * XI) if symmetric else (1,)
    for curve in curves:
        pts = [s.a for s in curve.samples]
        for rot in rots:
            _draw_polyline(rgb, spec, [rot * z for z in pts], colors[_curve_kind(curve)])
    return rgb
