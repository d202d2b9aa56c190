"""Tongues of the Blaschke family B_a(z) = z^3 (z - a) / (1 - conj(a) z).

The orbit kernels are compiled with Cython when available; otherwise a
pure-Python mirror is used.  ``blaschke_tongues.BACKEND`` names the one in use.
"""

from ._backend import NAME as BACKEND
from .circle import (CircleCycle, Lift, TongueType, detect_cycle, detect_cycles,
                     lift_derivative, lift_eval, semiconjugacy, type_of)
from .config import DEFAULT, Tolerances
from .core import (INFINITY, XI, BlaschkeMap, GMap, Param, canonicalize, critical_points,
                   derivative, escape_radius, evaluate, iterate)
from .errors import (ContourError, DegenerateParameterError, DomainError, NotInTongueError,
                     SolverError)
from .index import IndexReport, diagnose_pair, index_multiplier, index_residue
from .locus import (BoundaryCurve, BoundaryPoint, SliceResult, classify_boundary_point,
                    extended_tongue_curves, extended_tongue_slice, find_root, find_tip,
                    probe_tip_bifurcation, trace_boundary, tongue_tip)
from .render import (ClassifiedGrid, ScanSpec, render_tongue_overlay, scan_dynamical_plane,
                     scan_parameter_plane)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BlaschkeMap", "GMap", "Param", "INFINITY", "XI", "evaluate", "derivative",
    "iterate", "critical_points", "canonicalize", "escape_radius", "Lift", "TongueType",
    "CircleCycle", "lift_eval", "lift_derivative", "semiconjugacy", "detect_cycle",
    "detect_cycles", "type_of", "Tolerances", "DEFAULT", "IndexReport", "index_multiplier",
    "index_residue", "diagnose_pair", "BoundaryPoint", "BoundaryCurve", "SliceResult",
    "find_root", "find_tip", "trace_boundary", "tongue_tip", "classify_boundary_point",
    "extended_tongue_slice", "extended_tongue_curves", "probe_tip_bifurcation", "ScanSpec",
    "ClassifiedGrid", "scan_parameter_plane", "scan_dynamical_plane",
    "render_tongue_overlay", "DegenerateParameterError", "DomainError", "NotInTongueError",
    "SolverError", "ContourError",
]
