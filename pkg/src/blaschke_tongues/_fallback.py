"""Pure-Python orbit kernels.

Mirrors ``_kernels.pyx`` operation by operation; results are bit-identical
to the compiled backend.
"""

from __future__ import annotations

from math import fabs, sqrt

DEGENERATE, ESCAPE, ZERO, CIRCLE, OFF, UNDECIDED = range(6)
DYN_UNDECIDED, DYN_ESCAPE, DYN_ZERO, DYN_PLUS, DYN_MINUS = range(5)


def bstep(ar, ai, zr, zi):
    """One step of B_a on (zr, zi); None at the pole."""
    z2r = zr * zr - zi * zi
    z2i = 2.0 * zr * zi
    z3r = z2r * zr - z2i * zi
    z3i = z2r * zi + z2i * zr
    nr = zr - ar
    ni = zi - ai
    numr = z3r * nr - z3i * ni
    numi = z3r * ni + z3i * nr
    dr = 1.0 - (ar * zr + ai * zi)
    di = ai * zr - ar * zi
    d2 = dr * dr + di * di
    if d2 == 0.0:
        return None
    return (numr * dr + numi * di) / d2, (numi * dr - numr * di) / d2


def bderiv(ar, ai, zr, zi):
    s = ar * ar + ai * ai
    z2r = zr * zr - zi * zi
    z2i = 2.0 * zr * zi
    qr = ar * z2r + ai * z2i
    qi = ar * z2i - ai * z2r
    c = 4.0 + 2.0 * s
    pr = -3.0 * qr + c * zr - 3.0 * ar
    pi_ = -3.0 * qi + c * zi - 3.0 * ai
    numr = z2r * pr - z2i * pi_
    numi = z2r * pi_ + z2i * pr
    dr = 1.0 - (ar * zr + ai * zi)
    di = ai * zr - ar * zi
    e_r = dr * dr - di * di
    e_i = 2.0 * dr * di
    e2 = e_r * e_r + e_i * e_i
    if e2 == 0.0:
        return None
    return (numr * e_r + numi * e_i) / e2, (numi * e_r - numr * e_i) / e2


def biterate(ar, ai, zr, zi, q):
    """(B^q(z), (B^q)'(z)) as four floats, or None through the pole."""
    pr, pi_ = 1.0, 0.0
    for _ in range(q):
        d = bderiv(ar, ai, zr, zi)
        if d is None:
            return None
        br, bi = d
        tr = pr * br - pi_ * bi
        pi_ = pr * bi + pi_ * br
        pr = tr
        w = bstep(ar, ai, zr, zi)
        if w is None:
            return None
        zr, zi = w
    return zr, zi, pr, pi_


def orbit_classify(ar, ai, zr, zi, max_iters, max_period, esc_radius,
                   zero_radius, conv_tol, circle_tol, project=False):
    """Follow the orbit of z under B_a until it is decided.

    Returns
    -------
    tuple
        ``(code, period, n_iter, zr, zi, mr, mi)``.  ``code`` is one of
        ESCAPE, ZERO, CIRCLE, OFF, UNDECIDED.  For CIRCLE and OFF, ``z`` is
        the polished cycle point reached at iterate indices divisible by the
        minimal period and ``m`` is the cycle multiplier.

    With ``project`` every iterate is renormalized to modulus 1, which keeps
    orbits of circle points on the invariant circle despite roundoff.
    """
    R2 = esc_radius * esc_radius
    Z2 = zero_radius * zero_radius
    T2 = conv_tol * conv_tol
    refr, refi = zr, zi
    n = 0
    steps = cand = streak = 0
    converged = False
    while n < max_iters:
        m2 = zr * zr + zi * zi
        if m2 > R2:
            return ESCAPE, 0, n, zr, zi, 0.0, 0.0
        if m2 < Z2:
            return ZERO, 0, n, zr, zi, 0.0, 0.0
        w = bstep(ar, ai, zr, zi)
        if w is None:
            return ESCAPE, 0, n, zr, zi, 0.0, 0.0
        zr, zi = w
        if project:
            nrm = sqrt(zr * zr + zi * zi)
            zr = zr / nrm
            zi = zi / nrm
        n += 1
        steps += 1
        dx = zr - refr
        dy = zi - refi
        if dx * dx + dy * dy < T2:
            if steps == cand:
                streak += 1
            else:
                cand = steps
                streak = 1
            refr, refi = zr, zi
            steps = 0
            if streak >= 3:
                converged = True
                break
        elif steps >= max_period:
            refr, refi = zr, zi
            steps = cand = streak = 0
    if not converged:
        return UNDECIDED, 0, n, zr, zi, 0.0, 0.0

    q = cand
    for d in range(1, cand + 1):
        if cand % d:
            continue
        wr, wi = zr, zi
        for _ in range(d):
            w = bstep(ar, ai, wr, wi)
            if w is None:
                break
            wr, wi = w
        dx = wr - zr
        dy = wi - zi
        if dx * dx + dy * dy < 1e-12:
            q = d
            break

    phase = n % q
    if phase:
        for _ in range(q - phase):
            zr, zi = bstep(ar, ai, zr, zi)
            n += 1

    z0r, z0i = zr, zi
    for _ in range(50):
        it = biterate(ar, ai, zr, zi, q)
        if it is None:
            zr, zi = z0r, z0i
            break
        wr, wi, gr, gi = it
        fr = wr - zr
        fi = wi - zi
        hr = gr - 1.0
        hi = gi
        h2 = hr * hr + hi * hi
        if h2 == 0.0:
            break
        sr = (fr * hr + fi * hi) / h2
        si = (fi * hr - fr * hi) / h2
        if sr * sr + si * si > 1e-6:
            break
        zr = zr - sr
        zi = zi - si
        if sr * sr + si * si < 1e-30:
            break
    dx = zr - z0r
    dy = zi - z0i
    if dx * dx + dy * dy >= 1e-8:
        zr, zi = z0r, z0i

    it = biterate(ar, ai, zr, zi, q)
    gr, gi = (0.0, 0.0) if it is None else (it[2], it[3])
    code = CIRCLE if fabs(sqrt(zr * zr + zi * zi) - 1.0) < circle_tol else OFF
    return code, q, n, zr, zi, gr, gi


def critical_plus(ar, ai):
    s = ar * ar + ai * ai
    disc = (s - 4.0) * (s - 1.0)
    if disc >= 0.0:
        root = sqrt(disc)
        f = (2.0 + s + root) / (3.0 * s)
        return ar * f, ai * f
    root = sqrt(-disc)
    f = (2.0 + s) / (3.0 * s)
    g = root / (3.0 * s)
    return ar * f - ai * g, ar * g + ai * f


def critical_minus_annulus(ar, ai):
    s = ar * ar + ai * ai
    root = sqrt(-(s - 4.0) * (s - 1.0))
    f = (2.0 + s) / (3.0 * s)
    g = root / (3.0 * s)
    return ar * f + ai * g, ai * f - ar * g


_CIRCLE_CLASS = {1: 3, 2: 4, 3: 5}


def param_class(ar, ai, max_iters, max_period, lam, zero_radius, conv_tol, circle_tol):
    s = ar * ar + ai * ai
    if s == 1.0:
        return 0, 0
    if s < 1.0:
        return 1, 0
    cr, ci = critical_plus(ar, ai)
    esc = lam * (sqrt(s) + 1.0)
    code, q, n, _, _, _, _ = orbit_classify(
        ar, ai, cr, ci, max_iters, max_period, esc,
        zero_radius, conv_tol, circle_tol, s < 4.0)
    if s < 4.0:
        # both critical points lie on the circle; use the shorter circle cycle
        cr, ci = critical_minus_annulus(ar, ai)
        code2, q2, n2, _, _, _, _ = orbit_classify(
            ar, ai, cr, ci, max_iters, max_period, esc,
            zero_radius, conv_tol, circle_tol, True)
        if code2 == CIRCLE and (code != CIRCLE or q2 < q):
            code, q, n = code2, q2, n2
    if code == ESCAPE:
        return 1, n
    if code == ZERO:
        return 2, n
    if code == CIRCLE:
        return _CIRCLE_CLASS.get(q, 6), q
    if code == OFF:
        return 7, q
    return 8, n


def classify_params(ar, ai, max_iters, max_period, lam, zero_radius, conv_tol,
                    circle_tol, out_code, out_aux, start, stop):
    ar_l = ar[start:stop].tolist()
    ai_l = ai[start:stop].tolist()
    for j, (x, y) in enumerate(zip(ar_l, ai_l)):
        code, aux = param_class(x, y, max_iters, max_period, lam, zero_radius,
                                conv_tol, circle_tol)
        out_code[start + j] = code
        out_aux[start + j] = aux


def classify_dynamical(ar, ai, zr, zi, max_iters, esc_radius, zero_radius,
                       tr, ti, tlabel, basin_tol, out_code, out_aux, start, stop):
    R2 = esc_radius * esc_radius
    Z2 = zero_radius * zero_radius
    B2 = basin_tol * basin_tol
    targets = list(zip(tr.tolist(), ti.tolist(), tlabel.tolist()))
    zr_l = zr[start:stop].tolist()
    zi_l = zi[start:stop].tolist()
    for j, (x, y) in enumerate(zip(zr_l, zi_l)):
        code = DYN_UNDECIDED
        n = 0
        while n < max_iters:
            m2 = x * x + y * y
            if m2 > R2:
                code = DYN_ESCAPE
                break
            if m2 < Z2:
                code = DYN_ZERO
                break
            for px, py, lab in targets:
                dx = x - px
                dy = y - py
                if dx * dx + dy * dy < B2:
                    code = lab
                    break
            if code != DYN_UNDECIDED:
                break
            w = bstep(ar, ai, x, y)
            if w is None:
                code = DYN_ESCAPE
                break
            x, y = w
            n += 1
        out_code[start + j] = code
        out_aux[start + j] = n


# names shared with the compiled module
step = bstep
deriv = bderiv
