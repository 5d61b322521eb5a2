"""High-precision oracles the frozen expected values were derived from.

Deliberately independent of the package numerics: derivatives come from
mpmath's numerical differentiation of the raw basis functions (no product
rule, no coefficient recurrences), and every solve runs in 50-digit
arithmetic.  Tests embed the resulting literals; these helpers let anyone
regenerate them.
"""

import mpmath as mp

mp.mp.dps = 50


def eval_char(n, m, a, b, tau, s, k=0):
    """k-th derivative of s^n + sum a_i s^i + e^(-s tau) sum b_i s^i."""

    def f(z):
        acc = z**n
        for i, c in enumerate(a):
            acc += c * z**i
        dl = mp.mpf(0)
        for i, c in enumerate(b):
            dl += c * z**i
        return acc + mp.e ** (-z * tau) * dl

    if k == 0:
        return f(mp.mpmathify(s))
    return mp.diff(f, mp.mpmathify(s), k)


def design_oracle(n, m, tau, conditions):
    """Solve for (a_0..a_{n-1}, b_0..b_m) from root conditions.

    conditions: iterable of (v, k) demanding the k-th derivative of the
    characteristic function vanish at s = v.  Returns (a, b) as floats.
    """
    tau = mp.mpf(tau)
    basis = [(lambda s, i=i: s**i) for i in range(n)]
    basis += [(lambda s, i=i: s**i * mp.e ** (-s * tau)) for i in range(m + 1)]

    def monic(s):
        return s**n

    rows, rhs = [], []
    for v, k in conditions:
        v = mp.mpf(v)
        if k == 0:
            rows.append([f(v) for f in basis])
            rhs.append(-monic(v))
        else:
            rows.append([mp.diff(f, v, k) for f in basis])
            rhs.append(-mp.diff(monic, v, k))
    sol = mp.lu_solve(mp.matrix(rows), mp.matrix(rhs))
    vals = [float(sol[i]) for i in range(n + m + 1)]
    return vals[:n], vals[n:]


def mid_conditions(n, m, s0):
    return [(s0, k) for k in range(n + m + 1)]


def crrid_conditions(roots):
    """Confluent interpretation: repeats raise the derivative order."""
    out = []
    seen = {}
    for r in roots:
        k = seen.get(r, 0)
        out.append((r, k))
        seen[r] = k + 1
    return out


def control_design_oracle(a, n, tau, s0):
    """m = 0 delayed gain for plant a at the double real root s0."""
    a = [mp.mpf(v) for v in a]
    s0 = mp.mpf(s0)
    tau = mp.mpf(tau)
    P = s0**n + mp.fsum(a[i] * s0**i for i in range(n))
    return float(-P * mp.e ** (s0 * tau))


def oscillator_default_roots(omega, tau):
    """Real solutions s0 of 2 s0 + tau (s0^2 + omega^2) = 0, descending."""
    tau = mp.mpf(tau)
    omega = mp.mpf(omega)
    disc = 1 - tau**2 * omega**2
    if disc < 0:
        return []
    r = mp.sqrt(disc)
    return sorted([float((-1 + r) / tau), float((-1 - r) / tau)], reverse=True)
