"""Command-line interface: ``blaschke-tongues SUBCOMMAND [options]``.

Exit codes: 0 on success, 2 on invalid input, 3 when a numerical solver
fails.  Errors are reported as one JSON object on stderr; every successful
run prints a single summary line on stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import artifacts, render
from .circle import TongueType
from .config import DEFAULT
from .core import BlaschkeMap, check_nondegenerate
from .errors import ContourError, SolverError
from .index import fixed_point_newton, index_multiplier, index_residue, multiplier_of
from .locus import (extended_tongue_curves, extended_tongue_slice, find_root,
                    probe_tip_bifurcation, residuals, root_residual, tongue_tip,
                    trace_boundary)


class ValidationError(ValueError):
    """Bad command-line or configuration input (exit code 2)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def parse_complex(text: str) -> complex:
    """Parse ``RE+IMi`` (also ``RE``, ``IMi``, or a trailing ``j``).

    Parsing does not depend on the locale.
    """
    s = str(text).strip().replace(" ", "")
    if s.endswith("i"):
        s = s[:-1] + "j"
    try:
        return complex(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex literal: {text!r}") from None


def format_complex(z: complex) -> str:
    z = complex(z)
    sign = "-" if z.imag < 0 or (z.imag == 0 and str(z.imag).startswith("-")) else "+"
    return f"{z.real:.12g}{sign}{abs(z.imag):.12g}i"


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be > 0: {text!r}")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return v


# configuration files

def read_config(path) -> dict[str, str]:
    """Flat ``key = value`` file; ``#`` starts a comment.

    Keys are option names without the leading dashes, with ``-`` or ``_``.
    """
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from None
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{n}: expected key = value")
        key, value = (t.strip() for t in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _apply_config(sub: argparse.ArgumentParser, values: dict[str, str]) -> None:
    actions = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, value in values.items():
        act = actions.get(key)
        if act is None or key in ("help", "config"):
            raise ValidationError(f"unknown config key {key!r}")
        if isinstance(act, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            v = value.lower()
            if v not in _TRUE | _FALSE:
                raise ValidationError(f"config key {key!r} needs a boolean")
            defaults[key] = v in _TRUE
        elif act.type is not None:
            try:
                defaults[key] = act.type(value)
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise ValidationError(f"config key {key!r}: {exc}") from None
            if act.choices is not None and defaults[key] not in act.choices:
                raise ValidationError(f"config key {key!r}: invalid choice {value!r}")
        else:
            if act.choices is not None and value not in act.choices:
                raise ValidationError(f"config key {key!r}: invalid choice {value!r}")
            defaults[key] = value
    sub.set_defaults(**defaults)


# output handling

def _out_dir(args) -> Path:
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ValidationError(f"cannot create output directory {out}: {exc}") from None
    if not os.access(out, os.W_OK):
        raise ValidationError(f"output directory {out} is not writable")
    return out


def _check(values, tol: float, what: str) -> None:
    worst = max(abs(float(v)) for v in values)
    if not worst < tol:
        raise SolverError(f"{what} residual {worst:.3g} exceeds tolerance {tol:.3g}")


# subcommands

def cmd_root(args) -> str:
    out = _out_dir(args)
    tol = 1e-12 if args.tol is None else args.tol
    param = find_root(args.p, args.k)
    res = root_residual(args.p, args.k, param.alpha)
    _check([res], tol, "root")
    doc = artifacts.root_report(args.p, args.k, param, res)
    path = out / f"root_p{args.p}_k{args.k}.json"
    artifacts.write_json(doc, path, "root")
    return f"root p={args.p} k={args.k} a={format_complex(param.a)} residual={res:.3g} -> {path}"


def cmd_tip(args) -> str:
    out = _out_dir(args)
    tol = 1e-10 if args.tol is None else args.tol
    tau = TongueType(args.k, args.p)
    tip = tongue_tip(tau, r_step=args.r_step)
    res = residuals(tip)
    _check(res, tol, "tip")
    doc = artifacts.tip_report(tau, tip)
    path = out / f"tip_p{args.p}_k{args.k}.json"
    artifacts.write_json(doc, path, "tip")
    return (f"tip tau={tau} a={format_complex(tip.a)} x={tip.x:.12g} "
            f"max_residual={max(abs(v) for v in res):.3g} -> {path}")


def cmd_trace(args) -> str:
    out = _out_dir(args)
    tau = TongueType(args.k, args.p)
    sides = ("left", "right") if args.side == "both" else (args.side,)
    written = []
    for side in sides:
        curve = trace_boundary(tau, side, r_step=args.r_step, with_tip=not args.no_tip)
        stem = f"trace_p{args.p}_k{args.k}_{side}"
        csv_path = out / f"{stem}.csv"
        artifacts.write_curve_csv(curve, csv_path)
        tip = None
        if not args.no_tip:
            t = curve.tip
            tip = {"r": float(t.r), "alpha": float(t.alpha), "x": float(t.x),
                   "a": artifacts.cjson(t.a)}
        meta = {k: v for k, v in curve.metadata.items()
                if isinstance(v, (int, float, str, bool)) or v is None}
        doc = {"kind": "trace", "tau": str(tau), "side": side,
               "n_samples": len(curve.samples), "csv": csv_path.name, "tip": tip,
               "metadata": meta}
        artifacts.write_json(doc, out / f"{stem}.json", "trace")
        written.append(f"{side}:{len(curve.samples)}")
    return f"trace tau={tau} samples {' '.join(written)} -> {out}"


def cmd_slice(args) -> str:
    out = _out_dir(args)
    tol = replace(DEFAULT, parabolic=args.tol) if args.tol is not None else DEFAULT
    s = extended_tongue_slice(args.r, n_samples=args.samples, tol=tol)
    doc = artifacts.slice_report(s)
    path = out / f"slice_r{args.r:.10g}.json"
    artifacts.write_json(doc, path, "slice")
    am = "none" if s.alpha_minus1 is None else f"{s.alpha_minus1:.10g}"
    return f"slice r={args.r:.10g} alpha_plus1={s.alpha_plus1:.10g} alpha_minus1={am} -> {path}"


def cmd_probe(args) -> str:
    out = _out_dir(args)
    rep = probe_tip_bifurcation(args.a, p=args.p, x_seed=args.x_seed)
    doc = artifacts.index_report(rep, "probe")
    path = out / f"probe_{format_complex(args.a)}_p{args.p}.json"
    artifacts.write_json(doc, path, "index")
    return (f"probe a={format_complex(args.a)} classification={rep.classification} "
            f"|rho|={abs(rep.rho):.8g} S_tilde={rep.S_tilde:.6g} -> {path}")


def cmd_index(args) -> str:
    out = _out_dir(args)
    a = args.a
    check_nondegenerate(a)
    bmap = BlaschkeMap(a)
    z = fixed_point_newton(bmap, args.z, args.p)
    m = multiplier_of(bmap, z, args.p)
    im = None if m == 1 else index_multiplier(m)
    ir = index_residue(bmap, args.p, z, args.radius, shrink=True)
    doc = {"kind": "fixed_point_index", "a": artifacts.cjson(a), "p": args.p,
           "z": artifacts.cjson(z), "multiplier": artifacts.cjson(m),
           "index_multiplier": None if im is None else artifacts.cjson(im),
           "index_residue": artifacts.cjson(ir), "radius": float(args.radius)}
    path = out / f"index_{format_complex(a)}_p{args.p}.json"
    artifacts.write_json(doc, path, "fixed_point_index")
    diff = float("nan") if im is None else abs(im - ir)
    return (f"index a={format_complex(a)} z={format_complex(z)} "
            f"index={format_complex(ir)} |multiplier-residue|={diff:.3g} -> {path}")


def _scan_spec(args, plane: str, a=None) -> render.ScanSpec:
    kw = dict(center=args.center, width=args.width,
              height=args.width if args.height is None else args.height,
              nx=args.nx, ny=args.ny, max_iters=args.max_iters,
              max_period=args.max_period, lam=args.lam, plane=plane, a=a)
    if plane == "parameter":
        kw["coords"] = args.coords
    else:
        kw["basin_tol"] = args.basin_tol
    if args.tol is not None:
        kw["conv_tol"] = args.tol
    return render.ScanSpec(**kw)


def _write_render(out: Path, stem: str, grid, rgb, args, figure=None) -> list[str]:
    files = []
    ppm = out / f"{stem}.ppm"
    render.write_ppm(rgb, ppm)
    files.append(ppm.name)
    if args.png:
        png = out / f"{stem}.png"
        render.write_png(rgb, png)
        files.append(png.name)
    if args.grid_csv and grid is not None:
        gcsv = out / f"{stem}_grid.csv"
        render.write_grid_csv(grid, gcsv)
        files.append(gcsv.name)
    spec = grid.spec
    doc = {"kind": "render", "plane": spec.plane, "figure": figure,
           "a": None if spec.a is None else artifacts.cjson(spec.a),
           "center": artifacts.cjson(spec.center), "width": float(spec.width),
           "height": float(spec.height), "nx": spec.nx, "ny": spec.ny,
           "coords": spec.coords, "max_iters": spec.max_iters,
           "counts": grid.counts(), "files": files}
    artifacts.write_json(doc, out / f"{stem}.json", "render")
    return files


def cmd_render_param(args) -> str:
    out = _out_dir(args)
    spec = _scan_spec(args, "parameter")
    grid = render.scan_parameter_plane(spec, threads=args.threads)
    stem = args.name or "param"
    files = _write_render(out, stem, grid, render.colorize(grid), args)
    return f"render-param {spec.nx}x{spec.ny} {grid.counts()} -> {out / files[0]}"


def cmd_render_dyn(args) -> str:
    out = _out_dir(args)
    check_nondegenerate(args.a)
    spec = _scan_spec(args, "dynamical", a=args.a)
    grid = render.scan_dynamical_plane(args.a, spec, threads=args.threads)
    stem = args.name or "dyn"
    files = _write_render(out, stem, grid, render.colorize(grid), args)
    return f"render-dyn a={format_complex(args.a)} {grid.counts()} -> {out / files[0]}"


# figure recipes: ScanSpec keyword arguments for a 400 x 400 default

FIGURES = {
    "fig2": dict(plane="parameter", center=0j, width=7.0, height=7.0),
    "fig3a": dict(plane="parameter", coords="polar", center=complex(1 / 12, 2.1),
                  width=1 / 6, height=2.2),
    "fig4": dict(plane="parameter", center=complex(2.82, 0.035), width=0.4, height=0.2),
    "fig5a": dict(plane="dynamical", a=3 + 0j, center=0j, width=4.0, height=4.0,
                  basin_tol=1e-2, max_iters=20000),
    "fig5b": dict(plane="dynamical", a=complex(2.65675, 0.0389604), center=0j,
                  width=4.0, height=4.0, basin_tol=1e-3, max_iters=20000),
    "fig5c": dict(plane="dynamical", a=complex(2.55309, 0.063042), center=0j,
                  width=4.0, height=4.0, basin_tol=1e-3, max_iters=20000),
    "fig5d": dict(plane="dynamical", a=complex(2.64732, 0.0421017), center=0j,
                  width=4.0, height=4.0, basin_tol=1e-3, max_iters=20000),
    "fig6": dict(plane="parameter", center=0j, width=4.4, height=4.4, overlay=True),
}

# radii for the extended-tongue overlay and the step for the boundary traces
FIG6_RADII = np.linspace(1.001, 2.0, 200)
FIG6_TRACE_STEP = 0.02


def reproduce(figure: str, nx: int = 400, ny: int = 400, threads: int = 1):
    """Compute the grid and image of a figure recipe.

    Returns
    -------
    (ClassifiedGrid, numpy.ndarray)
    """
    if figure not in FIGURES:
        raise ValidationError(f"unknown figure {figure!r}; choose from {sorted(FIGURES)}")
    kw = dict(FIGURES[figure])
    overlay = kw.pop("overlay", False)
    spec = render.ScanSpec(nx=nx, ny=ny, **kw)
    if spec.plane == "dynamical":
        grid = render.scan_dynamical_plane(spec.a, spec, threads=threads)
        return grid, render.colorize(grid)
    grid = render.scan_parameter_plane(spec, threads=threads)
    if not overlay:
        return grid, render.colorize(grid)
    tau = TongueType(0, 1)
    curves = extended_tongue_curves(FIG6_RADII)
    for side in ("left", "right"):
        curves.append(trace_boundary(tau, side, r_step=FIG6_TRACE_STEP))
    return grid, render.render_tongue_overlay(curves, spec, base=grid)


def cmd_reproduce(args) -> str:
    out = _out_dir(args)
    grid, rgb = reproduce(args.figure, nx=args.nx, ny=args.ny, threads=args.threads)
    files = _write_render(out, args.figure, grid, rgb, args, figure=args.figure)
    return f"reproduce {args.figure} {args.nx}x{args.ny} {grid.counts()} -> {out / files[0]}"


# parser

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("common options")
    g.add_argument("--out", default=".", help="output directory (default: current)")
    g.add_argument("--tol", type=_positive_float, default=None,
                   help="acceptance tolerance of the command's main residual")
    g.add_argument("--threads", type=_positive_int, default=1,
                   help="worker threads for scans")
    g.add_argument("--config", default=None,
                   help="key = value file; command-line flags override it")

    parser = _Parser(prog="blaschke-tongues",
                     description="Tongues of the Blaschke family z^3 (z - a) / (1 - conj(a) z).")
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = subs.add_parser(name, parents=[common], help=help_, description=help_)
        sp.set_defaults(func=func)
        return sp

    def pk(sp):
        sp.add_argument("--p", type=_positive_int, required=True, help="period")
        sp.add_argument("--k", type=int, required=True, help="type numerator, 0..2^p-2")

    sp = add("root", cmd_root, "root of the tongue of type k/(2^p-1) on |a|=2")
    pk(sp)

    sp = add("tip", cmd_tip, "tip of the tongue of type k/(2^p-1)")
    pk(sp)
    sp.add_argument("--r-step", type=_positive_float, default=0.02)

    sp = add("trace", cmd_trace, "trace the boundary curves of a tongue")
    pk(sp)
    sp.add_argument("--side", choices=["left", "right", "both"], default="both")
    sp.add_argument("--r-step", type=_positive_float, default=0.02)
    sp.add_argument("--no-tip", action="store_true", help="stop before the tip")

    sp = add("slice", cmd_slice, "extended fixed tongue on the circle |a|=r, 1<r<=2")
    sp.add_argument("--r", type=float, required=True)
    sp.add_argument("--samples", type=_positive_int, default=257)

    sp = add("probe", cmd_probe, "fixed points and indices near a tongue tip")
    sp.add_argument("--a", type=parse_complex, required=True, help="parameter RE+IMi")
    sp.add_argument("--p", type=_positive_int, default=1)
    sp.add_argument("--x-seed", type=float, default=0.0)

    sp = add("index", cmd_index, "holomorphic index of a fixed point of B_a^p")
    sp.add_argument("--a", type=parse_complex, required=True)
    sp.add_argument("--p", type=_positive_int, default=1)
    sp.add_argument("--z", type=parse_complex, required=True, help="Newton seed")
    sp.add_argument("--radius", type=_positive_float, default=1e-3)

    def scan_opts(sp, width):
        sp.add_argument("--center", type=parse_complex, default=0j)
        sp.add_argument("--width", type=_positive_float, default=width)
        sp.add_argument("--height", type=_positive_float, default=None)
        sp.add_argument("--nx", type=_positive_int, default=400)
        sp.add_argument("--ny", type=_positive_int, default=400)
        sp.add_argument("--max-iters", type=_positive_int, default=5000)
        sp.add_argument("--max-period", type=_positive_int, default=64)
        sp.add_argument("--lam", type=float, default=2.0)
        sp.add_argument("--name", default=None, help="output file stem")
        image_opts(sp)

    def image_opts(sp):
        sp.add_argument("--png", action="store_true", help="also write PNG")
        sp.add_argument("--grid-csv", action="store_true", help="also dump ix,iy,class,aux")

    sp = add("render-param", cmd_render_param, "parameter-plane scan")
    scan_opts(sp, 7.0)
    sp.add_argument("--coords", choices=["cartesian", "polar"], default="cartesian")

    sp = add("render-dyn", cmd_render_dyn, "dynamical-plane scan of B_a")
    sp.add_argument("--a", type=parse_complex, required=True)
    scan_opts(sp, 4.0)
    sp.add_argument("--basin-tol", type=_positive_float, default=1e-3)

    sp = add("reproduce", cmd_reproduce, "render a figure recipe")
    sp.add_argument("figure", choices=sorted(FIGURES))
    sp.add_argument("--nx", type=_positive_int, default=400)
    sp.add_argument("--ny", type=_positive_int, default=400)
    image_opts(sp)
    return parser


def _parse(argv) -> argparse.Namespace:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    if known.config:
        subs = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
        command = next((t for t in argv if t in subs.choices), None)
        if command is not None:
            sub = subs.choices[command]
            values = read_config(known.config)
            _apply_config(sub, values)
            # options supplied by the file are no longer required on the command line
            for act in sub._actions:
                if act.dest in values:
                    act.required = False
    return parser.parse_args(argv)


def _fail(exc: BaseException, code: int) -> int:
    doc = {"error": str(exc), "type": type(exc).__name__, "exit_code": code}
    sys.stderr.write(json.dumps(doc, sort_keys=True) + "\n")
    print(f"error: {exc}")
    return code


def main(argv=None) -> int:
    try:
        args = _parse(argv)
        line = args.func(args)
    except (SolverError, ContourError) as exc:
        return _fail(exc, 3)
    except (ValueError, LookupError, argparse.ArgumentTypeError) as exc:
        return _fail(exc, 2)
    print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
