# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels.

Mirror of ``_purepy`` — same three entry points, same algorithms, same
operation order, so the two backends agree to rounding (bit-for-bit for the
pure-arithmetic Euler march).
"""

import math as _math

import numpy as np

from libc.math cimport NAN, exp, fabs, log, isfinite, INFINITY

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double cabs(double complex)

COND_LIMIT = 1e12
cdef double _COND_LIMIT = 1e12


# ---------------------------------------------------------------------------
# logderiv_batch
# ---------------------------------------------------------------------------


cdef void _logderiv_impl(double[::1] p, double[::1] q, double tau,
                         double complex[::1] z, bint qzero,
                         double complex[::1] ld, double[::1] logabs) nogil:
    cdef Py_ssize_t i, k
    cdef Py_ssize_t lp = p.shape[0], lq = q.shape[0], npts = z.shape[0]
    cdef double complex zz, P, Pp, Q, Qp, e2, num, den, x
    cdef double kappa, e1
    for i in range(npts):
        zz = z[i]
        P = 0.0
        for k in range(lp - 1, -1, -1):
            P = P * zz + p[k]
        Pp = 0.0
        for k in range(lp - 1, 0, -1):
            Pp = Pp * zz + (<double> k) * p[k]
        if qzero:
            ld[i] = Pp / P
            logabs[i] = log(cabs(P))
            continue
        Q = 0.0
        for k in range(lq - 1, -1, -1):
            Q = Q * zz + q[k]
        Qp = 0.0
        for k in range(lq - 1, 0, -1):
            Qp = Qp * zz + (<double> k) * q[k]
        x = (-zz) * tau
        kappa = x.real
        if kappa < 0.0:
            kappa = 0.0
        e1 = exp(-kappa)
        e2 = cexp(x - kappa)
        num = e1 * Pp + e2 * (Qp - tau * Q)
        den = e1 * P + e2 * Q
        ld[i] = num / den
        logabs[i] = kappa + log(cabs(den))


def logderiv_batch(pcoefs, qcoefs, tau, pts):
    """delta'/delta and log|delta| at each point of ``pts``."""
    pts_arr = np.ascontiguousarray(np.atleast_1d(np.asarray(pts, dtype=complex)))
    p = np.ascontiguousarray(np.atleast_1d(np.asarray(pcoefs, dtype=float)))
    q = np.ascontiguousarray(np.atleast_1d(np.asarray(qcoefs, dtype=float)))
    flat = pts_arr.ravel()
    ld = np.empty(flat.size, dtype=complex)
    logabs = np.empty(flat.size, dtype=float)
    qzero = not np.any(q != 0.0)
    _logderiv_impl(p, q, float(tau), flat, qzero, ld, logabs)
    shape = np.asarray(pts).shape
    return ld.reshape(shape), logabs.reshape(shape)


# ---------------------------------------------------------------------------
# admissibility_grid
# ---------------------------------------------------------------------------


cdef double _polyval_real(double[::1] c, Py_ssize_t length, double v) nogil:
    cdef double acc = 0.0
    cdef Py_ssize_t k
    for k in range(length - 1, -1, -1):
        acc = acc * v + c[k]
    return acc


cdef int _node_solve(double[:, ::1] A, double[::1] rhs, double[::1] x,
                     Py_ssize_t q) nogil:
    """Gaussian elimination with partial pivoting on one q x q system.

    Returns 1 when the node is numerically singular (same criteria and
    operation order as the batched numpy version)."""
    cdef Py_ssize_t col, r, i, piv
    cdef double best, mag, f, acc, pivot
    cdef double min_diag = INFINITY, max_diag = 0.0
    for col in range(q):
        piv = col
        best = fabs(A[col, col])
        for r in range(col + 1, q):
            mag = fabs(A[r, col])
            if mag > best:
                best = mag
                piv = r
        if piv != col:
            for i in range(q):
                f = A[col, i]
                A[col, i] = A[piv, i]
                A[piv, i] = f
            f = rhs[col]
            rhs[col] = rhs[piv]
            rhs[piv] = f
        pivot = A[col, col]
        mag = fabs(pivot)
        if mag < min_diag:
            min_diag = mag
        if mag > max_diag:
            max_diag = mag
        for r in range(col + 1, q):
            f = A[r, col] / pivot
            if not isfinite(f):
                f = 0.0
            for i in range(col, q):
                A[r, i] = A[r, i] - f * A[col, i]
            rhs[r] = rhs[r] - f * rhs[col]
    for col in range(q - 1, -1, -1):
        acc = rhs[col]
        for i in range(col + 1, q):
            acc = acc - A[col, i] * x[i]
        x[col] = acc / A[col, col]
    cdef double ratio = max_diag / min_diag
    for i in range(q):
        if not isfinite(x[i]):
            return 1
    if not (ratio < _COND_LIMIT):
        return 1
    return 0


def admissibility_grid(pcoefs, m, tau_values, s0_values):
    """Constraint function F and its local scale on a (tau, s0) grid."""
    p = np.ascontiguousarray(np.atleast_1d(np.asarray(pcoefs, dtype=float)))
    taus = np.ascontiguousarray(np.atleast_1d(np.asarray(tau_values, dtype=float)))
    s0s = np.ascontiguousarray(np.atleast_1d(np.asarray(s0_values, dtype=float)))
    cdef Py_ssize_t mm = int(m)
    cdef Py_ssize_t q = mm + 1
    cdef Py_ssize_t H = taus.shape[0], W = s0s.shape[0]

    # derivative-coefficient table of p for orders 0..m+1 (ascending coeffs)
    tab = []
    cur = p
    for _ in range(mm + 2):
        tab.append(cur)
        if cur.size <= 1:
            cur = np.zeros(1)
        else:
            cur = np.ascontiguousarray(cur[1:] * np.arange(1, cur.size, dtype=float))
    maxlen = max(t.size for t in tab)
    dp_np = np.zeros((mm + 2, maxlen))
    dplen_np = np.zeros(mm + 2, dtype=np.intp)
    for k, t in enumerate(tab):
        dp_np[k, : t.size] = t
        dplen_np[k] = t.size

    # comb(k, j) * perm(i, j) lookup, exact small integers
    cf_np = np.zeros((mm + 2, q, q))
    for k in range(mm + 2):
        for i in range(q):
            for j in range(min(k, i) + 1):
                cf_np[k, i, j] = float(_math.comb(k, j) * _math.perm(i, j))

    F = np.empty((H, W))
    S = np.empty((H, W))
    _admiss_impl(dp_np, dplen_np, cf_np, taus, s0s, mm, F, S)
    return F, S


cdef void _admiss_impl(double[:, ::1] dp, Py_ssize_t[::1] dplen,
                       double[:, :, ::1] cf, double[::1] taus,
                       double[::1] s0s, Py_ssize_t mm,
                       double[:, ::1] F, double[:, ::1] S):
    cdef Py_ssize_t q = mm + 1
    cdef Py_ssize_t H = taus.shape[0], W = s0s.shape[0]
    cdef Py_ssize_t h, w, k, i, j, jmax
    cdef double tau, s0, block, pn, fv, sv, term
    A_np = np.empty((q, q))
    rhs_np = np.empty(q)
    x_np = np.empty(q)
    ntp_np = np.empty(mm + 2)
    s0p_np = np.empty(q)
    cdef double[:, ::1] A = A_np
    cdef double[::1] rhs = rhs_np
    cdef double[::1] x = x_np
    cdef double[::1] ntp = ntp_np
    cdef double[::1] s0p = s0p_np
    cdef double[::1] row_next = np.empty(q)
    cdef int bad
    with nogil:
        for h in range(H):
            tau = taus[h]
            ntp[0] = 1.0
            for k in range(1, mm + 2):
                ntp[k] = ntp[k - 1] * (-tau)
            for w in range(W):
                s0 = s0s[w]
                s0p[0] = 1.0
                for k in range(1, q):
                    s0p[k] = s0p[k - 1] * s0
                for k in range(mm + 2):
                    for i in range(q):
                        block = 0.0
                        jmax = k if k < i else i
                        for j in range(jmax + 1):
                            block = block + cf[k, i, j] * (ntp[k - j] * s0p[i - j])
                        if k <= mm:
                            A[k, i] = block
                        else:
                            row_next[i] = block
                for k in range(q):
                    rhs[k] = -_polyval_real(dp[k], dplen[k], s0)
                pn = _polyval_real(dp[mm + 1], dplen[mm + 1], s0)
                bad = _node_solve(A, rhs, x, q)
                if bad:
                    F[h, w] = NAN
                    S[h, w] = NAN
                else:
                    fv = pn
                    sv = 1.0 + fabs(pn)
                    for i in range(q):
                        term = row_next[i] * x[i]
                        fv = fv + term
                        sv = sv + fabs(term)
                    F[h, w] = fv
                    S[h, w] = sv


# ---------------------------------------------------------------------------
# euler_run
# ---------------------------------------------------------------------------


cdef Py_ssize_t _euler_impl(double[::1] a, double[::1] b, double h,
                            Py_ssize_t D, double[:, ::1] rows,
                            double[::1] x, bint neutral) nogil:
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t m = b.shape[0] - 1
    cdef Py_ssize_t M = rows.shape[1] - 1
    cdef Py_ssize_t mirror = m if m < n - 1 else n - 1
    cdef Py_ssize_t j, k
    cdef double ynth
    cdef Py_ssize_t stop = -1
    for j in range(D, M):
        for k in range(mirror + 1):
            rows[k, j] = x[k]
        ynth = 0.0
        for k in range(n):
            ynth -= a[k] * x[k]
        for k in range(m + 1):
            ynth -= b[k] * rows[k, j - D]
        if neutral:
            rows[n, j] = ynth
        for k in range(n - 1):
            x[k] += h * x[k + 1]
        x[n - 1] += h * ynth
        rows[0, j + 1] = x[0]
        if not (fabs(x[0]) <= 1e300):
            stop = j + 1
            break
    if stop == -1:
        for k in range(1, mirror + 1):
            rows[k, M] = x[k]
    return stop


def euler_run(acoefs, bcoefs, h, delay_steps, hist, state, neutral):
    """Explicit-Euler march of the delay equation, in place (see _purepy)."""
    a = np.ascontiguousarray(np.atleast_1d(np.asarray(acoefs, dtype=float)))
    b = np.ascontiguousarray(np.atleast_1d(np.asarray(bcoefs, dtype=float)))
    x = np.array([float(v) for v in state], dtype=float)
    if not (isinstance(hist, np.ndarray) and hist.dtype == np.float64
            and hist.flags["C_CONTIGUOUS"]):
        raise TypeError("hist must be a C-contiguous float64 array")
    return int(_euler_impl(a, b, float(h), int(delay_steps), hist, x,
                           1 if neutral else 0))
