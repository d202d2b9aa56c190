"""JSON reports, their schemas, and CSV readers/writers for curves.

Every JSON document written here validates against the schema of the same
name in :data:`SCHEMAS`.  Output is deterministic: keys are sorted and
floats use the shortest round-trip representation.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import jsonschema

from .circle import TongueType
from .core import Param
from .index import IndexReport
from .locus import BoundaryCurve, BoundaryPoint, SliceResult, residuals

CURVE_HEADER = ("r", "alpha", "x", "multiplier", "side", "k", "period")

_NUM = {"type": "number"}
_NUM_OR_NULL = {"type": ["number", "null"]}
_COMPLEX = {
    "type": "object",
    "properties": {"re": _NUM_OR_NULL, "im": _NUM_OR_NULL},
    "required": ["re", "im"],
    "additionalProperties": False,
}
_RESIDUALS = {"type": "array", "items": _NUM, "minItems": 1, "maxItems": 3}

SCHEMAS = {
    "root": {
        "type": "object",
        "properties": {
            "kind": {"const": "root"},
            "p": {"type": "integer", "minimum": 1},
            "k": {"type": "integer", "minimum": 0},
            "tau": {"type": "string", "pattern": r"^\d+/\d+$"},
            "r": _NUM, "alpha": _NUM, "a_re": _NUM, "a_im": _NUM,
            "residuals": _RESIDUALS,
        },
        "required": ["kind", "p", "k", "tau", "r", "alpha", "a_re", "a_im", "residuals"],
        "additionalProperties": False,
    },
    "tip": {
        "type": "object",
        "properties": {
            "kind": {"const": "tip"},
            "p": {"type": "integer", "minimum": 1},
            "k": {"type": "integer", "minimum": 0},
            "tau": {"type": "string", "pattern": r"^\d+/\d+$"},
            "r": _NUM, "alpha": _NUM, "x": _NUM, "a_re": _NUM, "a_im": _NUM,
            "residuals": _RESIDUALS,
        },
        "required": ["kind", "p", "k", "tau", "r", "alpha", "x", "a_re", "a_im",
                     "residuals"],
        "additionalProperties": False,
    },
    "trace": {
        "type": "object",
        "properties": {
            "kind": {"const": "trace"},
            "tau": {"type": "string"},
            "side": {"enum": ["left", "right"]},
            "n_samples": {"type": "integer", "minimum": 1},
            "csv": {"type": "string"},
            "tip": {"type": ["object", "null"]},
            "metadata": {"type": "object"},
        },
        "required": ["kind", "tau", "side", "n_samples", "csv"],
        "additionalProperties": False,
    },
    "slice": {
        "type": "object",
        "properties": {
            "kind": {"const": "slice"},
            "r": _NUM,
            "alpha_plus1": _NUM,
            "alpha_minus1": _NUM_OR_NULL,
            "x_plus1": _NUM,
            "x_minus1": _NUM_OR_NULL,
            "profile": {
                "type": "object",
                "properties": {
                    "alpha": {"type": "array", "items": _NUM},
                    "x": {"type": "array", "items": _NUM},
                    "multiplier": {"type": "array", "items": _NUM},
                },
                "required": ["alpha", "x", "multiplier"],
                "additionalProperties": False,
            },
        },
        "required": ["kind", "r", "alpha_plus1", "alpha_minus1", "x_plus1", "x_minus1",
                     "profile"],
        "additionalProperties": False,
    },
    "index": {
        "type": "object",
        "properties": {
            "kind": {"enum": ["probe", "index"]},
            "a": _COMPLEX,
            "p": {"type": "integer", "minimum": 1},
            "fixed_points": {
                "type": "object",
                "properties": {"z0": _COMPLEX, "z_plus": _COMPLEX, "z_minus": _COMPLEX},
                "required": ["z0", "z_plus", "z_minus"],
            },
            "multipliers": {
                "type": "object",
                "properties": {"eta": _COMPLEX, "rho": _COMPLEX, "rho_minus": _COMPLEX},
                "required": ["eta", "rho", "rho_minus"],
            },
            "indices": {
                "type": "object",
                "properties": {"z0": _COMPLEX, "z_plus": _COMPLEX, "z_minus": _COMPLEX},
                "required": ["z0", "z_plus", "z_minus"],
            },
            "S": _COMPLEX,
            "S_tilde": _NUM_OR_NULL,
            "rho_abs": _NUM,
            "rho_abs2_identity": _NUM_OR_NULL,
            "classification": {"enum": ["parabolic", "on-circle-attracting",
                                        "on-circle-repelling", "pair-attracting",
                                        "pair-repelling"]},
        },
        "required": ["kind", "a", "p", "fixed_points", "multipliers", "indices", "S",
                     "S_tilde", "classification"],
        "additionalProperties": False,
    },
    "fixed_point_index": {
        "type": "object",
        "properties": {
            "kind": {"const": "fixed_point_index"},
            "a": _COMPLEX,
            "p": {"type": "integer", "minimum": 1},
            "z": _COMPLEX,
            "multiplier": _COMPLEX,
            "index_multiplier": {"oneOf": [_COMPLEX, {"type": "null"}]},
            "index_residue": _COMPLEX,
            "radius": _NUM,
        },
        "required": ["kind", "a", "p", "z", "multiplier", "index_multiplier",
                     "index_residue", "radius"],
        "additionalProperties": False,
    },
    "render": {
        "type": "object",
        "properties": {
            "kind": {"const": "render"},
            "plane": {"enum": ["parameter", "dynamical"]},
            "figure": {"type": ["string", "null"]},
            "a": {"oneOf": [_COMPLEX, {"type": "null"}]},
            "center": _COMPLEX,
            "width": _NUM, "height": _NUM,
            "nx": {"type": "integer", "minimum": 1},
            "ny": {"type": "integer", "minimum": 1},
            "coords": {"enum": ["cartesian", "polar"]},
            "max_iters": {"type": "integer"},
            "counts": {"type": "object", "additionalProperties": {"type": "integer"}},
            "files": {"type": "array", "items": {"type": "string"}},
        },
        "required": ["kind", "plane", "center", "width", "height", "nx", "ny", "counts",
                     "files"],
        "additionalProperties": False,
    },
    "error": {
        "type": "object",
        "properties": {
            "error": {"type": "string"},
            "type": {"type": "string"},
            "exit_code": {"enum": [2, 3]},
        },
        "required": ["error", "type", "exit_code"],
        "additionalProperties": False,
    },
}


def cjson(z) -> dict:
    """Complex number as ``{"re", "im"}`` with NaN mapped to null."""
    z = complex(z)
    return {"re": _finite(z.real), "im": _finite(z.imag)}


def _finite(v: float):
    return None if v is None or math.isnan(v) else float(v)


def validate(doc: dict, schema: str) -> None:
    """Raise ``jsonschema.ValidationError`` if ``doc`` does not match."""
    jsonschema.validate(doc, SCHEMAS[schema])


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(doc: dict, path, schema: str) -> None:
    validate(doc, schema)
    Path(path).write_text(dumps(doc))


def read_json(path, schema: str) -> dict:
    doc = json.loads(Path(path).read_text())
    validate(doc, schema)
    return doc


# reports

def root_report(p: int, k: int, param: Param, residual: float) -> dict:
    a = param.a
    return {
        "kind": "root", "p": p, "k": k, "tau": str(TongueType(k, p)),
        "r": float(param.r), "alpha": float(param.alpha),
        "a_re": float(a.real), "a_im": float(a.imag), "residuals": [float(residual)],
    }


def tip_report(tau: TongueType, pt: BoundaryPoint) -> dict:
    a = pt.a
    return {
        "kind": "tip", "p": tau.p, "k": tau.k, "tau": str(tau),
        "r": float(pt.r), "alpha": float(pt.alpha), "x": float(pt.x),
        "a_re": float(a.real), "a_im": float(a.imag),
        "residuals": [float(v) for v in residuals(pt)],
    }


def slice_report(s: SliceResult) -> dict:
    return {
        "kind": "slice", "r": float(s.r),
        "alpha_plus1": float(s.alpha_plus1),
        "alpha_minus1": None if s.alpha_minus1 is None else float(s.alpha_minus1),
        "x_plus1": float(s.x_plus1),
        "x_minus1": None if s.x_minus1 is None else float(s.x_minus1),
        "profile": {"alpha": [float(v) for v in s.alphas],
                    "x": [float(v) for v in s.xs],
                    "multiplier": [float(v) for v in s.multipliers]},
    }


def index_report(rep: IndexReport, kind: str = "probe") -> dict:
    doc = rep.to_dict()
    doc["kind"] = kind
    return doc


# curves

def _g(v: float) -> str:
    return f"{v:.17g}"


def write_curve_csv(curve: BoundaryCurve, path) -> None:
    """Write samples with header ``r,alpha,x,multiplier,side,k,period``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CURVE_HEADER)
        for s in curve.samples:
            w.writerow([_g(s.r), _g(s.alpha), _g(s.x), _g(s.multiplier), s.side,
                        s.k, s.period])


def read_curve_csv(path, tongue: TongueType | None = None, side: str | None = None) -> BoundaryCurve:
    """Parse a curve CSV back into a :class:`BoundaryCurve`."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != CURVE_HEADER:
        raise ValueError(f"bad curve header in {path}")
    pts = [BoundaryPoint(float(r), float(al), float(x), float(m), int(k), sd, int(p))
           for r, al, x, m, sd, k, p in rows[1:]]
    if tongue is None:
        tongue = TongueType(pts[0].k, pts[0].period) if pts else TongueType(0, 1)
    if side is None:
        side = pts[0].side if pts else ""
    return BoundaryCurve(tongue, side, pts)


__all__ = ["SCHEMAS", "CURVE_HEADER", "validate", "dumps", "write_json", "read_json",
           "root_report", "tip_report", "slice_report", "index_report", "cjson",
           "write_curve_csv", "read_curve_csv"]
