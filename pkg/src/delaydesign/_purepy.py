"""Pure-Python (numpy) implementations of the numerical kernels.

This module is the fallback backend; `_core` (compiled) implements the same
three entry points with identical semantics.  Keep algorithm and operation
order in sync between the two so results agree to rounding.

Conventions shared by both backends:
  * polynomial coefficient arrays are ascending (c[0] + c[1] s + ...),
  * the non-delayed part includes its monic leading 1,
  * all heavy evaluation uses the factored form exp(kappa) * v with
    kappa = max(0, -Re(s) tau) so nothing overflows in the left half-plane.
"""

from __future__ import annotations

import math

import numpy as np

COND_LIMIT = 1e12


def _deriv(c: np.ndarray) -> np.ndarray:
    if c.size <= 1:
        return np.zeros(1)
    return c[1:] * np.arange(1, c.size)


def _polyval(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(z)
    for v in c[::-1]:
        acc = acc * z + v
    return acc


def logderiv_batch(pcoefs, qcoefs, tau, pts):
    """delta'/delta and log|delta| at each point of ``pts``.

    Returns (ld, logabs) arrays; entries may be non-finite where delta
    vanishes on (or underflows at) a sample — callers treat those as
    untrustworthy contours.
    """
    pts = np.asarray(pts, dtype=complex)
    p = np.asarray(pcoefs, dtype=float)
    q = np.asarray(qcoefs, dtype=float)
    P = _polyval(p, pts)
    Pp = _polyval(_deriv(p), pts)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if not np.any(q != 0.0):
            ld = Pp / P
            logabs = np.log(np.abs(P))
            return ld, logabs
        Q = _polyval(q, pts)
        Qp = _polyval(_deriv(q), pts)
        x = -pts * tau
        kappa = np.maximum(x.real, 0.0)
        e1 = np.exp(-kappa)
        e2 = np.exp(x - kappa)
        num = e1 * Pp + e2 * (Qp - tau * Q)
        den = e1 * P + e2 * Q
        ld = num / den
        logabs = kappa + np.log(np.abs(den))
    return ld, logabs


def _gauss_batched(A, rhs):
    """Solve a batch of small dense systems by Gaussian elimination with
    partial pivoting.  A: (B, q, q), rhs: (B, q), both overwritten.

    Returns (x, bad) where bad marks batch members that are numerically
    singular (zero pivot, non-finite entries, or diagonal-magnitude ratio of
    the factor above COND_LIMIT).
    """
    B, q, _ = A.shape
    ar = np.arange(B)
    min_diag = np.full(B, np.inf)
    max_diag = np.zeros(B)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for col in range(q):
            piv = np.argmax(np.abs(A[:, col:, col]), axis=1) + col
            # swap rows col <-> piv per batch member
            tmp = A[ar, col, :].copy()
            A[ar, col, :] = A[ar, piv, :]
            A[ar, piv, :] = tmp
            tmpb = rhs[ar, col].copy()
            rhs[ar, col] = rhs[ar, piv]
            rhs[ar, piv] = tmpb
            pivot = A[:, col, col]
            ap = np.abs(pivot)
            min_diag = np.minimum(min_diag, ap)
            max_diag = np.maximum(max_diag, ap)
            if col + 1 < q:
                f = A[:, col + 1 :, col] / pivot[:, None]
                f = np.where(np.isfinite(f), f, 0.0)
                A[:, col + 1 :, col:] -= f[:, :, None] * A[:, col, col:][:, None, :]
                rhs[:, col + 1 :] -= f * rhs[:, col][:, None]
        x = np.zeros((B, q))
        for col in range(q - 1, -1, -1):
            acc = rhs[:, col] - np.einsum("bi,bi->b", A[:, col, col + 1 :], x[:, col + 1 :])
            x[:, col] = acc / A[:, col, col]
        ratio = max_diag / min_diag
    bad = ~np.isfinite(x).all(axis=1) | ~(ratio < COND_LIMIT)
    return x, bad


def admissibility_grid(pcoefs, m, tau_values, s0_values):
    """Constraint function F and its local scale on a (tau, s0) grid.

    The m+1 root conditions at a real s0 are solved for the rescaled delayed
    coefficients bhat = exp(-s0 tau) b, which keeps every matrix entry
    exponential-free; F is the next derivative order evaluated on that
    solution.  Nodes with a singular local system are returned as NaN.

    Returns (F, S): two (H, W) float arrays, rows indexed by tau, columns by
    s0 (s0 varies fastest in memory).
    """
    p = np.asarray(pcoefs, dtype=float)
    taus = np.asarray(tau_values, dtype=float)
    s0s = np.asarray(s0_values, dtype=float)
    H, W = taus.size, s0s.size
    B = H * W
    q = m + 1

    # powers used by the condition-matrix entries, built by cumulative
    # multiplication (the compiled backend does the same, keeping both
    # backends bit-for-bit comparable)
    s0_pow = [np.ones_like(s0s)]
    for _ in range(m):
        s0_pow.append(s0_pow[-1] * s0s)
    nt_pow = [np.ones_like(taus)]
    for _ in range(m + 1):
        nt_pow.append(nt_pow[-1] * (-taus))

    A = np.zeros((H, W, q, q))
    A_next = np.zeros((H, W, q))  # row for derivative order m+1 (defines F)
    for k in range(m + 2):
        for i in range(q):
            block = np.zeros((H, W))
            for j in range(0, min(k, i) + 1):
                cji = math.comb(k, j) * math.perm(i, j)
                block += cji * np.multiply.outer(nt_pow[k - j], s0_pow[i - j])
            if k <= m:
                A[:, :, k, i] = block
            else:
                A_next[:, :, i] = block

    rhs = np.zeros((H, W, q))
    for k in range(q):
        rhs[:, :, k] = -_polyval(_deriv_k(p, k), s0s)[None, :]
    p_next = _polyval(_deriv_k(p, m + 1), s0s)[None, :]

    x, bad = _gauss_batched(A.reshape(B, q, q), rhs.reshape(B, q))
    x = x.reshape(H, W, q)
    bad = bad.reshape(H, W)

    terms = A_next * x
    F = p_next + terms.sum(axis=2)
    S = 1.0 + np.abs(p_next) + np.abs(terms).sum(axis=2)
    F = np.where(bad, np.nan, F)
    S = np.where(bad, np.nan, S)
    return F, S


def _deriv_k(c: np.ndarray, k: int) -> np.ndarray:
    out = c
    for _ in range(k):
        out = _deriv(out)
    return out


def euler_run(acoefs, bcoefs, h, delay_steps, hist, state, neutral):
    """Explicit-Euler march of the delay equation, in place.

    hist : (m+1, M+1) array of y^{(k)} samples; columns 0..delay_steps are
        prefilled from the initial function, the rest are written here.
        Row 0 is the solution itself.  In the neutral case the last row
        holds the computed highest derivative.
    state : y, y', ..., y^{(n-1)} at t = 0 (length n >= 1).

    Returns the index of the first sample whose magnitude exceeds 1e300
    (blow-up), or -1 on a complete run.
    """
    a = [float(v) for v in acoefs]
    b = [float(v) for v in bcoefs]
    n = len(a)
    m = len(b) - 1
    D = int(delay_steps)
    M = hist.shape[1] - 1
    x = [float(v) for v in state]
    rows = [list(hist[k]) for k in range(m + 1)]
    h = float(h)
    mirror = min(m, n - 1)
    stop = -1
    for j in range(D, M):
        for k in range(mirror + 1):
            rows[k][j] = x[k]
        ynth = 0.0
        for k in range(n):
            ynth -= a[k] * x[k]
        for k in range(m + 1):
            ynth -= b[k] * rows[k][j - D]
        if neutral:
            rows[n][j] = ynth
        for k in range(n - 1):
            x[k] += h * x[k + 1]
        x[n - 1] += h * ynth
        rows[0][j + 1] = x[0]
        if not (abs(x[0]) <= 1e300):
            stop = j + 1
            break
    else:
        for k in range(1, mirror + 1):
            rows[k][M] = x[k]
    for k in range(m + 1):
        hist[k, :] = rows[k]
    return stop
