# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-pixel orbit kernels.

Every floating point expression here is mirrored operation by operation in
``_fallback.py`` so that both backends return bit-identical grids.
"""

from libc.math cimport sqrt, fabs

cdef enum:
    DEGENERATE = 0
    ESCAPE = 1
    ZERO = 2
    CIRCLE = 3
    OFF = 4
    UNDECIDED = 5

cdef enum:
    DYN_UNDECIDED = 0
    DYN_ESCAPE = 1
    DYN_ZERO = 2
    DYN_PLUS = 3
    DYN_MINUS = 4

cdef struct Orbit:
    int code
    int period
    long n
    double zr
    double zi
    double mr
    double mi


cdef inline bint bstep(double ar, double ai, double zr, double zi,
                       double* wr, double* wi) noexcept nogil:
    cdef double z2r = zr * zr - zi * zi
    cdef double z2i = 2.0 * zr * zi
    cdef double z3r = z2r * zr - z2i * zi
    cdef double z3i = z2r * zi + z2i * zr
    cdef double nr = zr - ar
    cdef double ni = zi - ai
    cdef double numr = z3r * nr - z3i * ni
    cdef double numi = z3r * ni + z3i * nr
    cdef double dr = 1.0 - (ar * zr + ai * zi)
    cdef double di = ai * zr - ar * zi
    cdef double d2 = dr * dr + di * di
    if d2 == 0.0:
        return 0
    wr[0] = (numr * dr + numi * di) / d2
    wi[0] = (numi * dr - numr * di) / d2
    return 1


cdef inline bint bderiv(double ar, double ai, double zr, double zi,
                        double* outr, double* outi) noexcept nogil:
    cdef double s = ar * ar + ai * ai
    cdef double z2r = zr * zr - zi * zi
    cdef double z2i = 2.0 * zr * zi
    # conj(a) z^2
    cdef double qr = ar * z2r + ai * z2i
    cdef double qi = ar * z2i - ai * z2r
    cdef double c = 4.0 + 2.0 * s
    cdef double pr = -3.0 * qr + c * zr - 3.0 * ar
    cdef double pi_ = -3.0 * qi + c * zi - 3.0 * ai
    cdef double numr = z2r * pr - z2i * pi_
    cdef double numi = z2r * pi_ + z2i * pr
    cdef double dr = 1.0 - (ar * zr + ai * zi)
    cdef double di = ai * zr - ar * zi
    cdef double e_r = dr * dr - di * di
    cdef double e_i = 2.0 * dr * di
    cdef double e2 = e_r * e_r + e_i * e_i
    if e2 == 0.0:
        return 0
    outr[0] = (numr * e_r + numi * e_i) / e2
    outi[0] = (numi * e_r - numr * e_i) / e2
    return 1


cdef inline bint biterate(double ar, double ai, double zr, double zi, int q,
                          double* wr, double* wi, double* dr, double* di) noexcept nogil:
    """B^q(z) and its derivative by the chain rule."""
    cdef int j
    cdef double pr = 1.0, pi_ = 0.0, br, bi, tr
    for j in range(q):
        if not bderiv(ar, ai, zr, zi, &br, &bi):
            return 0
        tr = pr * br - pi_ * bi
        pi_ = pr * bi + pi_ * br
        pr = tr
        if not bstep(ar, ai, zr, zi, &zr, &zi):
            return 0
    wr[0] = zr
    wi[0] = zi
    dr[0] = pr
    di[0] = pi_
    return 1


cdef void orbit_core(double ar, double ai, double zr, double zi, long max_iters,
                     int max_period, double esc_radius, double zero_radius,
                     double conv_tol, double circle_tol, bint project,
                     Orbit* res) noexcept nogil:
    cdef double R2 = esc_radius * esc_radius
    cdef double Z2 = zero_radius * zero_radius
    cdef double T2 = conv_tol * conv_tol
    cdef double refr = zr, refi = zi, m2, dx, dy
    cdef double wr, wi, gr, gi, fr, fi, hr, hi, h2, sr, si, z0r, z0i, nrm
    cdef long n = 0
    cdef int steps = 0, cand = 0, streak = 0, q, d, it, phase, j
    cdef bint converged = 0

    res.period = 0
    res.mr = 0.0
    res.mi = 0.0
    while n < max_iters:
        m2 = zr * zr + zi * zi
        if m2 > R2:
            res.code = ESCAPE
            res.n = n
            res.zr = zr
            res.zi = zi
            return
        if m2 < Z2:
            res.code = ZERO
            res.n = n
            res.zr = zr
            res.zi = zi
            return
        if not bstep(ar, ai, zr, zi, &zr, &zi):
            res.code = ESCAPE
            res.n = n
            res.zr = zr
            res.zi = zi
            return
        if project:
            # keep orbits of circle points on the invariant circle
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
            refr = zr
            refi = zi
            steps = 0
            if streak >= 3:
                converged = 1
                break
        elif steps >= max_period:
            refr = zr
            refi = zi
            steps = 0
            cand = 0
            streak = 0

    res.n = n
    res.zr = zr
    res.zi = zi
    if not converged:
        res.code = UNDECIDED
        return

    # minimal period
    q = cand
    for d in range(1, cand + 1):
        if cand % d != 0:
            continue
        wr = zr
        wi = zi
        for j in range(d):
            if not bstep(ar, ai, wr, wi, &wr, &wi):
                break
        dx = wr - zr
        dy = wi - zi
        if dx * dx + dy * dy < 1e-12:
            q = d
            break

    # move to the cycle point reached at iterate indices divisible by q
    phase = <int>(n % q)
    if phase != 0:
        for j in range(q - phase):
            bstep(ar, ai, zr, zi, &zr, &zi)
            n += 1

    # Newton polish on B^q(z) - z
    z0r = zr
    z0i = zi
    for it in range(50):
        if not biterate(ar, ai, zr, zi, q, &wr, &wi, &gr, &gi):
            zr = z0r
            zi = z0i
            break
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
        zr = z0r
        zi = z0i

    if not biterate(ar, ai, zr, zi, q, &wr, &wi, &gr, &gi):
        gr = 0.0
        gi = 0.0
    res.period = q
    res.n = n
    res.zr = zr
    res.zi = zi
    res.mr = gr
    res.mi = gi
    if fabs(sqrt(zr * zr + zi * zi) - 1.0) < circle_tol:
        res.code = CIRCLE
    else:
        res.code = OFF


cdef inline void critical_plus(double ar, double ai, double* cr, double* ci) noexcept nogil:
    cdef double s = ar * ar + ai * ai
    cdef double disc = (s - 4.0) * (s - 1.0)
    cdef double root, f, g
    if disc >= 0.0:
        root = sqrt(disc)
        f = (2.0 + s + root) / (3.0 * s)
        cr[0] = ar * f
        ci[0] = ai * f
    else:
        root = sqrt(-disc)
        f = (2.0 + s) / (3.0 * s)
        g = root / (3.0 * s)
        cr[0] = ar * f - ai * g
        ci[0] = ar * g + ai * f


cdef inline void critical_minus_annulus(double ar, double ai, double* cr,
                                        double* ci) noexcept nogil:
    # second critical point on the circle when 1 < |a| < 2
    cdef double s = ar * ar + ai * ai
    cdef double root = sqrt(-(s - 4.0) * (s - 1.0))
    cdef double f = (2.0 + s) / (3.0 * s)
    cdef double g = root / (3.0 * s)
    cr[0] = ar * f + ai * g
    ci[0] = ai * f - ar * g


cdef inline void param_class(double ar, double ai, long max_iters, int max_period,
                             double lam, double zero_radius, double conv_tol,
                             double circle_tol, int* code, long* aux) noexcept nogil:
    cdef double s = ar * ar + ai * ai
    cdef double cr, ci
    cdef Orbit o, o2
    if s == 1.0:
        code[0] = 0
        aux[0] = 0
        return
    if s < 1.0:
        code[0] = 1
        aux[0] = 0
        return
    critical_plus(ar, ai, &cr, &ci)
    orbit_core(ar, ai, cr, ci, max_iters, max_period, lam * (sqrt(s) + 1.0),
               zero_radius, conv_tol, circle_tol, s < 4.0, &o)
    if s < 4.0:
        # both critical points lie on the circle; use the shorter circle cycle
        critical_minus_annulus(ar, ai, &cr, &ci)
        orbit_core(ar, ai, cr, ci, max_iters, max_period, lam * (sqrt(s) + 1.0),
                   zero_radius, conv_tol, circle_tol, 1, &o2)
        if o2.code == CIRCLE and (o.code != CIRCLE or o2.period < o.period):
            o = o2
    if o.code == ESCAPE:
        code[0] = 1
        aux[0] = o.n
    elif o.code == ZERO:
        code[0] = 2
        aux[0] = o.n
    elif o.code == CIRCLE:
        if o.period == 1:
            code[0] = 3
        elif o.period == 2:
            code[0] = 4
        elif o.period == 3:
            code[0] = 5
        else:
            code[0] = 6
        aux[0] = o.period
    elif o.code == OFF:
        code[0] = 7
        aux[0] = o.period
    else:
        code[0] = 8
        aux[0] = o.n


def orbit_classify(double ar, double ai, double zr, double zi, long max_iters,
                   int max_period, double esc_radius, double zero_radius,
                   double conv_tol, double circle_tol, bint project=False):
    """Follow the orbit of z under B_a; see ``_fallback.orbit_classify``."""
    cdef Orbit o
    with nogil:
        orbit_core(ar, ai, zr, zi, max_iters, max_period, esc_radius,
                   zero_radius, conv_tol, circle_tol, project, &o)
    return (o.code, o.period, o.n, o.zr, o.zi, o.mr, o.mi)


def classify_params(const double[::1] ar, const double[::1] ai, long max_iters,
                    int max_period, double lam, double zero_radius, double conv_tol,
                    double circle_tol, int[::1] out_code, long long[::1] out_aux,
                    Py_ssize_t start, Py_ssize_t stop):
    """Classify parameters ar[i] + i ai[i] for start <= i < stop by the fate of c_plus."""
    cdef Py_ssize_t i
    cdef int code
    cdef long aux
    with nogil:
        for i in range(start, stop):
            param_class(ar[i], ai[i], max_iters, max_period, lam, zero_radius,
                        conv_tol, circle_tol, &code, &aux)
            out_code[i] = code
            out_aux[i] = aux


def classify_dynamical(double ar, double ai, const double[::1] zr, const double[::1] zi,
                       long max_iters, double esc_radius, double zero_radius,
                       const double[::1] tr, const double[::1] ti, const int[::1] tlabel,
                       double basin_tol, int[::1] out_code, long long[::1] out_aux,
                       Py_ssize_t start, Py_ssize_t stop):
    """Classify starting points z[i] by escape, capture at 0 or approach to a target point."""
    cdef Py_ssize_t i, j, nt = tr.shape[0]
    cdef double R2 = esc_radius * esc_radius
    cdef double Z2 = zero_radius * zero_radius
    cdef double B2 = basin_tol * basin_tol
    cdef double x, y, m2, dx, dy
    cdef long n
    cdef int code
    with nogil:
        for i in range(start, stop):
            x = zr[i]
            y = zi[i]
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
                for j in range(nt):
                    dx = x - tr[j]
                    dy = y - ti[j]
                    if dx * dx + dy * dy < B2:
                        code = tlabel[j]
                        break
                if code != DYN_UNDECIDED:
                    break
                if not bstep(ar, ai, x, y, &x, &y):
                    code = DYN_ESCAPE
                    break
                n += 1
            out_code[i] = code
            out_aux[i] = n


def step(double ar, double ai, double zr, double zi):
    """One step of B_a as (re, im), or None at the pole."""
    cdef double wr, wi
    if not bstep(ar, ai, zr, zi, &wr, &wi):
        return None
    return wr, wi


def deriv(double ar, double ai, double zr, double zi):
    """B_a'(z) as (re, im), or None at the pole."""
    cdef double wr, wi
    if not bderiv(ar, ai, zr, zi, &wr, &wi):
        return None
    return wr, wi
