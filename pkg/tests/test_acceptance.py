"""Acceptance criteria, each at its stated tolerance and time budget.

Every test records one PASS/FAIL line, collected in the terminal summary.
"""

import time

import numpy as np
import pytest

from blaschke_tongues import _backend
from blaschke_tongues.circle import (Lift, TongueType, detect_cycles, lift_derivative,
                                     lift_eval, same_cycle, semiconjugacy, type_of)
from blaschke_tongues.cli import main
from blaschke_tongues.config import DEFAULT
from blaschke_tongues.core import XI, BlaschkeMap
from blaschke_tongues.errors import SolverError
from blaschke_tongues.index import fixed_point_newton, index_multiplier, index_residue, multiplier_of
from blaschke_tongues.locus import (all_roots, attracting_cycle_on_circle, extended_tongue_slice,
                                    find_root, probe_tip_bifurcation, trace_boundary)
from blaschke_tongues import artifacts

T0 = TongueType(0, 1)


class Clock:
    def __enter__(self):
        self.t = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t


def finish(record, n, checks, detail):
    """Record the criterion and fail with the names of the failing checks."""
    bad = [name for name, ok in checks.items() if not ok]
    record(n, not bad, detail + ("" if not bad else "  failed: " + ", ".join(bad)))
    assert not bad, bad


def test_criterion_01_root_and_tip(tmp_path, record, capsys):
    with Clock() as c1:
        code1 = main(["root", "--p", "1", "--k", "0", "--out", str(tmp_path)])
    with Clock() as c2:
        code2 = main(["tip", "--p", "1", "--k", "0", "--out", str(tmp_path)])
    capsys.readouterr()
    root = artifacts.read_json(tmp_path / "root_p1_k0.json", "root")
    tip = artifacts.read_json(tmp_path / "tip_p1_k0.json", "tip")
    checks = {
        "exit codes": code1 == code2 == 0,
        "root a=2": complex(root["a_re"], root["a_im"]) == 2,
        "root residual": abs(root["residuals"][0]) < 1e-12,
        "tip a=3": abs(complex(tip["a_re"], tip["a_im"]) - 3) < 1e-10,
        "tip x=0": abs(tip["x"]) < 1e-10,
        "tip residuals": max(abs(v) for v in tip["residuals"]) < 1e-10,
        "runtime": c1.elapsed < 1 and c2.elapsed < 1,
    }
    finish(record, 1, checks,
           f"root a={root['a_re']}, tip a={tip['a_re']}+{tip['a_im']}i, "
           f"{c1.elapsed + c2.elapsed:.3f}s")


def test_criterion_02_lift_derivative_anchors(record):
    anchors = {2.0: 0.0, 5 / 3: -1.0, 3.0: 1.0}
    with Clock() as c:
        got = {r: lift_derivative(Lift(r, 0.0), 0.0) for r in anchors}
    err = max(abs(got[r] - v) for r, v in anchors.items())
    checks = {"values": err < 1e-12, "runtime": c.elapsed < 1e-3}
    finish(record, 2, checks, f"max error {err:.1e}, {c.elapsed * 1e6:.0f}us")


def test_criterion_03_root_counting(record):
    counts, worst = {}, 0.0
    with Clock() as c:
        for p in range(1, 7):
            roots = all_roots(p)
            counts[p] = len([al for al in roots if 0 <= al < 1 / 3])
            for k in range(2 ** p - 1):
                tau = type_of(find_root(p, k).a)
                worst = max(worst, abs(float(tau.fraction) - k / (2 ** p - 1)))
    checks = {
        "counts": all(counts[p] == 2 ** p - 1 for p in counts),
        "types": worst < 1e-6,
        "runtime": c.elapsed < 30,
    }
    finish(record, 3, checks, f"counts {counts}, max type error {worst:.1e}, {c.elapsed:.1f}s")


def _polyline_distance(curves, target):
    best = np.inf
    for c in curves:
        pts = np.array([s.a for s in c.samples])
        for p, q in zip(pts[:-1], pts[1:]):
            d = q - p
            t = np.clip(((target - p) * d.conjugate()).real / abs(d) ** 2, 0, 1)
            best = min(best, abs(p + t * d - target))
    return best


def test_criterion_04_boundary_trace(record):
    with Clock() as c:
        curves = {side: trace_boundary(T0, side) for side in ("left", "right")}
    monotone = all(np.all(np.diff([s.r for s in cv.samples]) > 0) for cv in curves.values())
    tips = [cv.tip for cv in curves.values()]
    meet = max(abs(t.a - 3) for t in tips)
    dist = _polyline_distance(curves.values(), 2.65675 + 0.0389604j)
    checks = {"r-monotone": monotone, "meet at tip": meet < 1e-6,
              "caption point": dist < 2e-3, "runtime": c.elapsed < 30}
    finish(record, 4, checks,
           f"tip gap {meet:.1e}, caption distance {dist:.2e}, {c.elapsed:.1f}s")


def test_criterion_05_tip_probe(record):
    with Clock() as c1:
        r1 = probe_tip_bifurcation(2.64732 + 0.0421017j)
    with Clock() as c2:
        r2 = probe_tip_bifurcation(2.55309 + 0.063042j)
    ident = max(abs(r.rho_abs2_identity - abs(r.rho) ** 2) for r in (r1, r2))
    checks = {
        "first pair-attracting": r1.classification == "pair-attracting",
        "first |rho|<1": abs(r1.rho) < 1,
        "first S~>1": r1.S_tilde > 1,
        "second pair-repelling": r2.classification == "pair-repelling",
        "identity": ident < 1e-6,
        "runtime": c1.elapsed < 1 and c2.elapsed < 1,
    }
    finish(record, 5, checks,
           f"first {r1.classification} |rho|={abs(r1.rho):.7f} S~={r1.S_tilde:.6f}; "
           f"second {r2.classification} |rho|={abs(r2.rho):.7f}; identity {ident:.1e}")


def _random_fixed_points(n, seed=5):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        a = complex(*rng.uniform(-3.5, 3.5, 2))
        if abs(abs(a) - 1) < 0.05 or abs(a) < 0.2:
            continue
        p = int(rng.integers(1, 4))
        f = BlaschkeMap(a)
        try:
            z = fixed_point_newton(f, complex(*rng.uniform(-2, 2, 2)), p)
        except SolverError:
            continue
        m = multiplier_of(f, z, p)
        if abs(z) < 1e-3 or abs(m - 1) < 1e-2 or abs(m) > 1e6:
            continue
        out.append((f, p, z, m))
    return out


def test_criterion_06_index_oracle(record):
    with Clock() as c:
        pts = _random_fixed_points(100)
        err = max(abs(index_residue(f, p, z, 1e-3, shrink=True) - index_multiplier(m))
                  for f, p, z, m in pts)
    checks = {"agreement": err < 1e-8, "runtime": c.elapsed < 10}
    finish(record, 6, checks, f"max |residue - 1/(1-rho)| {err:.1e}, {c.elapsed:.2f}s")


def test_criterion_07_semiconjugacy(record):
    rng = np.random.default_rng(7)
    tol = 1e-8
    e_dbl = e_per = 0.0
    with Clock() as c:
        for _ in range(1000):
            lift = Lift(rng.uniform(2, 6), rng.uniform(0, 1 / 3))
            x = rng.uniform(-1, 2)
            H = semiconjugacy(lift, x, tol)
            e_dbl = max(e_dbl, abs(semiconjugacy(lift, lift_eval(lift, x), tol) - 2 * H))
            e_per = max(e_per, abs(semiconjugacy(lift, x + 1, tol) - H - 1))
    checks = {"H(h)=2H": e_dbl < 4 * tol, "H(x+1)=H+1": e_per < tol, "runtime": c.elapsed < 10}
    finish(record, 7, checks, f"errors {e_dbl:.1e} / {e_per:.1e}, {c.elapsed:.2f}s")


def test_criterion_08_extended_tongue(record):
    checks = {}
    with Clock() as c:
        s = extended_tongue_slice(5 / 3)
        checks["alpha_-1(5/3)=0"] = s.alpha_minus1 is not None and abs(s.alpha_minus1) < 1e-6
        for r in (1.1, 1.3, 1.5, 1.9):
            s = extended_tongue_slice(r)
            checks[f"r={r} increasing"] = bool(np.all(np.diff(s.alphas) > 0)
                                               and np.all(np.diff(s.multipliers) > 0))
            checks[f"r={r} alpha_1<1/6"] = s.alpha_plus1 < 1 / 6
            checks[f"r={r} alpha_-1 iff r<=5/3"] = (s.alpha_minus1 is not None) == (r <= 5 / 3)
        s = extended_tongue_slice(1.2)
        doubled = attracting_cycle_on_circle(1.2, s.alpha_minus1 - 1e-3, 2)
        checks["period doubling at r=1.2"] = doubled is not None and len(doubled[0]) == 2
    checks["runtime"] = c.elapsed < 30
    finish(record, 8, checks, f"{sum(checks.values())}/{len(checks)} checks, {c.elapsed:.2f}s")


def test_criterion_09_boundedness_uniqueness(record):
    rng = np.random.default_rng(9)
    found_outside = multiple = attracting = 0
    with Clock() as c:
        for _ in range(1000):
            a = rng.uniform(3, 4) * np.exp(2j * np.pi * rng.uniform())
            res = detect_cycles(a)
            if any(cy is not None and abs(cy.multiplier) <= 1 + DEFAULT.parabolic
                   for cy in res.values()):
                found_outside += 1
        for _ in range(1000):
            a = rng.uniform(2, 4) * np.exp(2j * np.pi * rng.uniform())
            res = detect_cycles(a)
            att = [cy for cy in res.values() if cy is not None and abs(cy.multiplier) < 1]
            attracting += bool(att)
            if len(att) == 2 and not same_cycle(att[0], att[1]):
                multiple += 1
    checks = {"none for |a| in [3,4]": found_outside == 0,
              "at most one": multiple == 0, "non-vacuous": attracting > 0,
              "runtime": c.elapsed < 60}
    finish(record, 9, checks,
           f"{found_outside} cycles beyond 3, {attracting} tongue samples, "
           f"{multiple} double cycles, {c.elapsed:.2f}s")


def _classify(a):
    a = np.asarray(a, dtype=complex)
    code = np.zeros(a.size, np.int32)
    aux = np.zeros(a.size, np.int64)
    _backend.kernels.classify_params(
        np.ascontiguousarray(a.real), np.ascontiguousarray(a.imag), 5000, 64, 2.0,
        DEFAULT.zero_capture, DEFAULT.cycle_convergence, DEFAULT.circle, code, aux, 0, a.size)
    return code


def test_criterion_10_symmetry(record):
    rng = np.random.default_rng(10)
    a = rng.uniform(0.5, 4, 1000) * np.exp(2j * np.pi * rng.uniform(size=1000))
    with Clock() as c:
        base = _classify(a)
        rot = _classify(a * XI)
        conj = _classify(a.conjugate())
    n_rot = int(np.sum(base != rot))
    n_conj = int(np.sum(base != conj))
    checks = {"rotation": n_rot == 0, "conjugation": n_conj == 0, "runtime": c.elapsed < 30}
    finish(record, 10, checks,
           f"mismatches rotation {n_rot}, conjugation {n_conj}, {c.elapsed:.2f}s")


@pytest.mark.slow
def test_criterion_11_reproduce(tmp_path, record, capsys):
    checks, times = {}, {}
    for fig in ("fig2", "fig5a", "fig6"):
        worst = 0.0
        for run in ("a", "b"):
            with Clock() as c:
                code = main(["reproduce", fig, "--nx", "400", "--ny", "400", "--threads", "4",
                             "--out", str(tmp_path / run)])
            worst = max(worst, c.elapsed)
            checks[f"{fig} exit"] = code == 0
        times[fig] = worst
        checks[f"{fig} < 2 min"] = worst < 120
        same = all((tmp_path / "a" / f"{fig}{ext}").read_bytes()
                   == (tmp_path / "b" / f"{fig}{ext}").read_bytes() for ext in (".ppm", ".json"))
        checks[f"{fig} deterministic"] = same
    capsys.readouterr()
    finish(record, 11, checks, ", ".join(f"{k} {v:.1f}s" for k, v in times.items()))
