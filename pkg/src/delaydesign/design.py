"""Coefficient-assignment solvers and the admissibility region.

Three design problems are solved here, all reducing to small dense linear
systems in the unknown coefficients:

* generic dominant-root placement: a real root of maximal multiplicity
  n + m + 1 at a prescribed s0 (all of a and b unknown);
* chains of coexisting real roots: n + m + 1 prescribed real roots, with
  repeated entries handled confluently (derivative conditions);
* control-oriented placement: a is fixed by the plant, only b is solved,
  and the remaining scalar compatibility equation F(s0, tau) = 0 links the
  root location to the delay.  The zero set of F is the admissibility
  region; it is sampled on a grid and contoured by marching squares.

Rows of the condition matrices are rescaled by exp(min(v, 0) * tau) so that
entries stay representable for strongly negative v * tau; this is an exact
rescaling of each equation, not an approximation.
"""

from __future__ import annotations

import math
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import _kernels as kernels
from . import deadline as _deadline
from .errors import InvalidInput, NoAdmissiblePoint, SingularSystem
from .quasipoly import (
    Quasipolynomial,
    evaluate_derivative,
    poly_derivative,
)

__all__ = [
    "DesignResult",
    "DelayGiven",
    "RootGiven",
    "AdmissibilityContour",
    "solve_generic_mid",
    "solve_generic_crrid",
    "solve_b_given",
    "admissibility_residual",
    "solve_control_mid",
    "admissibility_contour",
    "refine_contour_vertex",
]

TOL_DESIGN = 1e-8
COND_LIMIT = 1e12
# Grid samples used to bracket zeros of the scalar compatibility function.
SEARCH_SAMPLES = 2048
# The tau = 0 grid row is evaluated just inside the domain.
TAU_FLOOR = 1e-9


@dataclass(frozen=True)
class DelayGiven:
    """Control-oriented mode: the delay is fixed, the root is solved for."""

    tau: float

    def __post_init__(self):
        if not (isinstance(self.tau, (int, float)) and math.isfinite(self.tau) and self.tau > 0):
            raise InvalidInput("DelayGiven requires a positive finite tau")
        object.__setattr__(self, "tau", float(self.tau))


@dataclass(frozen=True)
class RootGiven:
    """Control-oriented mode: the root is fixed, the delay is solved for."""

    s0: float

    def __post_init__(self):
        if not (isinstance(self.s0, (int, float)) and math.isfinite(self.s0)):
            raise InvalidInput("RootGiven requires a finite s0")
        object.__setattr__(self, "s0", float(self.s0))


ControlGiven = Union[DelayGiven, RootGiven]


@dataclass(frozen=True)
class DesignResult:
    """A fully determined quasipolynomial plus solve diagnostics."""

    quasipolynomial: Quasipolynomial
    residuals: tuple
    condition_estimate: float
    solved_parameter: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "quasipolynomial": self.quasipolynomial.to_dict(),
            "residuals": list(self.residuals),
            "condition_estimate": self.condition_estimate,
            "solved_parameter": self.solved_parameter,
        }


def _validate_orders(n, m, *, allow_zero_pair=False) -> tuple:
    if not isinstance(n, int) or not isinstance(m, int):
        raise InvalidInput("orders n and m must be integers")
    if n < 0 or m < 0 or n < m:
        raise InvalidInput("orders must satisfy n >= m >= 0")
    if not allow_zero_pair and n == 0 and m == 0:
        raise InvalidInput("the degenerate pair n = m = 0 is not designable")
    return n, m


def _validate_tau(tau) -> float:
    try:
        tau = float(tau)
    except (TypeError, ValueError) as exc:
        raise InvalidInput("tau must be a real number") from exc
    if not (math.isfinite(tau) and tau > 0):
        raise InvalidInput("tau must be positive and finite")
    return tau


def _validate_real(x, name) -> float:
    try:
        x = float(x)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"{name} must be a real number") from exc
    if not math.isfinite(x):
        raise InvalidInput(f"{name} must be finite")
    return x


def _validate_a(a, n) -> tuple:
    try:
        a = tuple(float(v) for v in a)
    except (TypeError, ValueError) as exc:
        raise InvalidInput("a must be a sequence of real numbers") from exc
    if len(a) != n:
        raise InvalidInput(f"a must have exactly n = {n} entries")
    if not all(math.isfinite(v) for v in a):
        raise InvalidInput("a must contain only finite values")
    return a


def _condition_row(n: int, m: int, tau: float, v: float, k: int):
    """Matrix row and right-hand side for the condition delta^{(k)}(v) = 0.

    Unknown ordering is a0..a_{n-1} then b0..bm.  The row is scaled by
    exp(v*tau) when v < 0, which cancels the exponential on the delayed
    columns; when v >= 0 the delayed columns carry exp(-v*tau) <= 1.
    """
    row = np.zeros(n + m + 1)
    if v < 0:
        w = math.exp(v * tau)
        edecay = 1.0
    else:
        w = 1.0
        edecay = math.exp(-v * tau)
    for i in range(k, n):
        row[i] = w * math.perm(i, k) * v ** (i - k)
    for i in range(m + 1):
        acc = 0.0
        for j in range(min(k, i) + 1):
            acc += math.comb(k, j) * math.perm(i, j) * v ** (i - j) * (-tau) ** (k - j)
        row[n + i] = edecay * acc
    rhs = -w * math.perm(n, k) * v ** (n - k) if k <= n else 0.0
    return row, rhs


def _solve_dense(M: np.ndarray, rhs: np.ndarray):
    try:
        x = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(
            "condition system is singular", condition_estimate=math.inf
        ) from exc
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        cond = float(np.linalg.cond(M, 1))
    if not np.all(np.isfinite(x)) or not cond < COND_LIMIT:
        raise SingularSystem(
            f"condition system is numerically singular "
            f"(condition estimate {cond:.3e})",
            condition_estimate=cond,
        )
    return x, cond


def _build_result(n, m, tau, conditions, solved_parameter=None) -> DesignResult:
    M = np.zeros((n + m + 1, n + m + 1))
    rhs = np.zeros(n + m + 1)
    for r, (v, k) in enumerate(conditions):
        M[r], rhs[r] = _condition_row(n, m, tau, v, k)
    x, cond = _solve_dense(M, rhs)
    q = Quasipolynomial(n, m, tuple(x[:n]), tuple(x[n:]), tau)
    residuals = tuple(abs(evaluate_derivative(q, v, k)) for v, k in conditions)
    return DesignResult(q, residuals, cond, solved_parameter)


def solve_generic_mid(n: int, m: int, tau, s0) -> DesignResult:
    """Coefficients making ``s0`` a real root of maximal multiplicity
    n + m + 1 (every free coefficient used)."""
    n, m = _validate_orders(n, m)
    tau = _validate_tau(tau)
    s0 = _validate_real(s0, "s0")
    conditions = [(s0, k) for k in range(n + m + 1)]
    return _build_result(n, m, tau, conditions)


def solve_generic_crrid(n: int, m: int, tau, roots) -> DesignResult:
    """Coefficients placing n + m + 1 prescribed real roots (non-increasing
    order); repeated values are imposed confluently via derivative
    conditions, so an all-equal input reproduces :func:`solve_generic_mid`."""
    n, m = _validate_orders(n, m)
    tau = _validate_tau(tau)
    try:
        roots = [float(v) for v in roots]
    except (TypeError, ValueError) as exc:
        raise InvalidInput("roots must be a sequence of real numbers") from exc
    if len(roots) != n + m + 1:
        raise InvalidInput(f"expected exactly n + m + 1 = {n + m + 1} roots")
    if not all(math.isfinite(v) for v in roots):
        raise InvalidInput("roots must be finite")
    if any(roots[i] < roots[i + 1] for i in range(len(roots) - 1)):
        raise InvalidInput("roots must be sorted in non-increasing order")
    conditions = []
    run_value, run_len = roots[0], 0
    for v in roots:
        if v == run_value:
            run_len += 1
        else:
            run_value, run_len = v, 1
        conditions.append((run_value, run_len - 1))
    return _build_result(n, m, tau, conditions)


def _bhat_matrix(n: int, m: int, s0: float, tau: float, rows: int) -> np.ndarray:
    """Exponential-free condition matrix on bhat = exp(-s0 tau) b."""
    A = np.zeros((rows, m + 1))
    for k in range(rows):
        for i in range(m + 1):
            acc = 0.0
            for j in range(min(k, i) + 1):
                acc += (
                    math.comb(k, j) * math.perm(i, j) * s0 ** (i - j) * (-tau) ** (k - j)
                )
            A[k, i] = acc
    return A


def _p_derivatives(a: tuple, n: int, s0: float, orders: int) -> np.ndarray:
    pc = np.array(a + (1.0,))
    out = np.zeros(orders)
    for k in range(orders):
        ck = poly_derivative(pc, k)
        acc = 0.0
        for c in ck[::-1]:
            acc = acc * s0 + c
        out[k] = acc
    return out


def solve_b_given(a, n: int, m: int, s0, tau) -> np.ndarray:
    """The unique delayed coefficients b0..bm making s0 a root of
    multiplicity at least m + 1, with the non-delayed part fixed."""
    n, m = _validate_orders(n, m)
    if n < 1:
        raise InvalidInput("solve_b_given requires n >= 1")
    a = _validate_a(a, n)
    s0 = _validate_real(s0, "s0")
    tau = _validate_tau(tau)
    A = _bhat_matrix(n, m, s0, tau, m + 1)
    rhs = -_p_derivatives(a, n, s0, m + 1)
    bhat, _cond = _solve_dense(A, rhs)
    x = s0 * tau
    if x > 709.0:
        raise InvalidInput("s0 * tau too large: delayed coefficients overflow")
    return math.exp(x) * bhat


def _residual_and_scale(a: tuple, n: int, m: int, s0: float, tau: float):
    F, S = kernels.admissibility_grid(
        np.array(a + (1.0,)), m, np.array([tau]), np.array([s0])
    )
    return float(F[0, 0]), float(S[0, 0])


def admissibility_residual(a, n: int, m: int, s0, tau) -> float:
    """Scalar compatibility function F(s0, tau): the (m+1)-th derivative of
    the quasipolynomial after the delayed coefficients have been solved for.
    F = 0 exactly on the admissibility region boundary curve."""
    n, m = _validate_orders(n, m)
    if n < 1:
        raise InvalidInput("admissibility_residual requires n >= 1")
    a = _validate_a(a, n)
    s0 = _validate_real(s0, "s0")
    tau = _validate_tau(tau)
    f, _ = _residual_and_scale(a, n, m, s0, tau)
    if math.isnan(f):
        raise SingularSystem("local coefficient system is singular at this point")
    return f


def _control_result(a, n, m, s0, tau, solved) -> DesignResult:
    b = solve_b_given(a, n, m, s0, tau)
    q = Quasipolynomial(n, m, a, tuple(b), tau)
    residuals = tuple(abs(evaluate_derivative(q, s0, k)) for k in range(m + 2))
    A = _bhat_matrix(n, m, s0, tau, m + 1)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        cond = float(np.linalg.cond(A, 1))
    return DesignResult(q, residuals, cond, solved)


def _bracket_zeros(xs: np.ndarray, fs: np.ndarray):
    """Indices i with a sign change between xs[i] and xs[i+1] plus exact
    hits; NaN samples break brackets."""
    hits = [i for i in range(xs.size) if fs[i] == 0.0]
    brackets = []
    for i in range(xs.size - 1):
        f0, f1 = fs[i], fs[i + 1]
        if not (math.isfinite(f0) and math.isfinite(f1)):
            continue
        if f0 == 0.0 or f1 == 0.0:
            continue
        if (f0 < 0.0) != (f1 < 0.0):
            brackets.append(i)
    return hits, brackets


def _bisect(a, n, m, fixed_tau, fixed_s0, lo, hi, flo, fhi):
    """Bisection of F along one free parameter to 1e-12 absolute width."""
    for _ in range(100):
        if hi - lo < 1e-12:
            break
        mid = 0.5 * (lo + hi)
        if fixed_tau is not None:
            fm, _ = _residual_and_scale(a, n, m, mid, fixed_tau)
        else:
            fm, _ = _residual_and_scale(a, n, m, fixed_s0, mid)
        if math.isnan(fm):
            break
        if fm == 0.0:
            return mid
        if (flo < 0.0) != (fm < 0.0):
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def solve_control_mid(
    a,
    n: int,
    m: int,
    given: ControlGiven,
    *,
    search_min=None,
    search_max=None,
    samples: int = SEARCH_SAMPLES,
    cancel=None,
) -> list:
    """All control-oriented designs in the search window.

    DelayGiven: solves F(s0, tau_given) = 0 for s0 in [search_min, 0]
    (default -50/tau) and returns results ordered by descending s0 — the
    first entry is the default (rightmost intended dominant root).
    RootGiven: solves F(s0_given, tau) = 0 for tau in (0, search_max]
    (default 100/max(1, |s0|)), ordered by ascending tau.
    """
    n, m = _validate_orders(n, m)
    if n < 1:
        raise InvalidInput("control-oriented design requires n >= 1")
    a = _validate_a(a, n)
    if samples < 16:
        raise InvalidInput("samples must be at least 16")
    pc = np.array(a + (1.0,))

    if isinstance(given, DelayGiven):
        tau = given.tau
        lo = -50.0 / tau if search_min is None else _validate_real(search_min, "search_min")
        if not lo < 0:
            raise InvalidInput("search_min must be negative")
        xs = np.linspace(lo, 0.0, samples)
        F, _ = kernels.admissibility_grid(pc, m, np.array([tau]), xs)
        fs = F[0]
        _deadline.check(cancel, stage="bracketing")
        hits, brackets = _bracket_zeros(xs, fs)
        zeros = [xs[i] for i in hits]
        for i in brackets:
            zeros.append(_bisect(a, n, m, tau, None, xs[i], xs[i + 1], fs[i], fs[i + 1]))
        zeros = _dedupe(sorted(zeros, reverse=True))
        results = []
        for s0 in zeros:
            _deadline.check(cancel, stage="solving", found=len(results))
            try:
                results.append(_control_result(a, n, m, s0, tau, s0))
            except SingularSystem:
                continue
        if not results:
            raise NoAdmissiblePoint(
                "no admissible root location in the search window for the "
                "given delay; consult the admissibility plot to pick a "
                "feasible (s0, tau) pair"
            )
        return results

    if isinstance(given, RootGiven):
        s0 = given.s0
        hi = (
            100.0 / max(1.0, abs(s0))
            if search_max is None
            else _validate_real(search_max, "search_max")
        )
        if not hi > 0:
            raise InvalidInput("search_max must be positive")
        xs = np.linspace(hi / samples, hi, samples)
        F, _ = kernels.admissibility_grid(pc, m, xs, np.array([s0]))
        fs = F[:, 0]
        _deadline.check(cancel, stage="bracketing")
        hits, brackets = _bracket_zeros(xs, fs)
        zeros = [xs[i] for i in hits]
        for i in brackets:
            zeros.append(_bisect(a, n, m, None, s0, xs[i], xs[i + 1], fs[i], fs[i + 1]))
        zeros = _dedupe(sorted(zeros))
        results = []
        for tau in zeros:
            _deadline.check(cancel, stage="solving", found=len(results))
            try:
                results.append(_control_result(a, n, m, s0, tau, tau))
            except SingularSystem:
                continue
        if not results:
            raise NoAdmissiblePoint(
                "no admissible delay in the search window for the given "
                "root; consult the admissibility plot to pick a feasible "
                "(s0, tau) pair"
            )
        return results

    raise InvalidInput("given must be DelayGiven or RootGiven")


def _dedupe(values, rel=1e-9):
    out = []
    for v in values:
        if not out or abs(v - out[-1]) > rel * (1.0 + abs(v)):
            out.append(v)
    return out


# ---------------------------------------------------------------------------
# Admissibility contour (grid sampling + marching squares)
# ---------------------------------------------------------------------------


@dataclass
class AdmissibilityContour:
    """Sampled compatibility function and its zero-level polylines.

    ``values`` has shape (H, W): rows indexed by tau, columns by s0 (s0
    varies fastest).  Singular grid nodes are NaN.  ``polylines`` is a list
    of (k, 2) arrays with columns (s0, tau); ``vertex_edges`` is a parallel
    structure recording the grid edge each vertex interpolates, used for
    one-dimensional refinement.
    """

    a: tuple
    n: int
    m: int
    s0_min: float
    tau_max: float
    s0_values: np.ndarray
    tau_values: np.ndarray
    values: np.ndarray
    scales: np.ndarray
    polylines: list
    vertex_edges: list

    def rectangle(self) -> dict:
        return {
            "s0_min": self.s0_min,
            "s0_max": 0.0,
            "tau_min": 0.0,
            "tau_max": self.tau_max,
        }

    def to_dict(self, include_grid: bool = True) -> dict:
        out = {
            "rectangle": self.rectangle(),
            "grid_shape": [int(self.values.shape[0]), int(self.values.shape[1])],
            "polylines": [
                [[float(x), float(y)] for x, y in poly] for poly in self.polylines
            ],
        }
        if include_grid:
            out["grid"] = [[float(v) for v in row] for row in self.values]
        return out


def admissibility_contour(
    a,
    n: int,
    m: int,
    s0_min,
    tau_max,
    grid_resolution=(400, 400),
    *,
    workers: int = 1,
    cancel=None,
) -> AdmissibilityContour:
    """Sample F on [s0_min, 0] x [0, tau_max] and contour its zero set.

    ``grid_resolution`` is (number of s0 samples, number of tau samples).
    The tau = 0 row is evaluated at tau = 1e-9 (the function is continuous
    there; the solver itself requires tau > 0).  Grid rows are evaluated in
    chunks, optionally across a thread pool.
    """
    n, m = _validate_orders(n, m)
    if n < 1:
        raise InvalidInput("admissibility requires n >= 1")
    a = _validate_a(a, n)
    s0_min = _validate_real(s0_min, "s0_min")
    tau_max = _validate_real(tau_max, "tau_max")
    if not (s0_min < 0.0 < tau_max):
        raise InvalidInput("window requires s0_min < 0 < tau_max")
    try:
        ns0, ntau = (int(v) for v in grid_resolution)
    except (TypeError, ValueError) as exc:
        raise InvalidInput("grid_resolution must be a pair of integers") from exc
    if ns0 < 8 or ntau < 8:
        raise InvalidInput("grid resolutions must be at least 8")

    s0_values = np.linspace(s0_min, 0.0, ns0)
    tau_values = np.linspace(0.0, tau_max, ntau)
    tau_eval = tau_values.copy()
    tau_eval[0] = min(TAU_FLOOR, 0.5 * tau_eval[1])

    pc = np.array(a + (1.0,))
    F = np.empty((ntau, ns0))
    S = np.empty((ntau, ns0))
    chunk = max(8, ntau // (4 * max(1, workers)))
    spans = [(lo, min(lo + chunk, ntau)) for lo in range(0, ntau, chunk)]

    def run(span):
        lo, hi = span
        return span, kernels.admissibility_grid(pc, m, tau_eval[lo:hi], s0_values)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for (lo, hi), (f, s) in pool.map(run, spans):
                F[lo:hi] = f
                S[lo:hi] = s
                _deadline.check(cancel, rows_done=hi, rows_total=ntau)
    else:
        for span in spans:
            (lo, hi), (f, s) = run(span)
            F[lo:hi] = f
            S[lo:hi] = s
            _deadline.check(cancel, rows_done=hi, rows_total=ntau)

    polylines, vertex_edges = _marching_squares(s0_values, tau_values, F)
    return AdmissibilityContour(
        a=a,
        n=n,
        m=m,
        s0_min=s0_min,
        tau_max=tau_max,
        s0_values=s0_values,
        tau_values=tau_values,
        values=F,
        scales=S,
        polylines=polylines,
        vertex_edges=vertex_edges,
    )


# Case table: corner bits BL=1, BR=2, TR=4, TL=8 set where F > 0; each entry
# lists segments as pairs of local edge names.  The two saddle cases (5, 10)
# are disambiguated by the cell-center sign at lookup time.
_MS_TABLE = {
    1: [("L", "B")],
    2: [("B", "R")],
    3: [("L", "R")],
    4: [("R", "T")],
    6: [("B", "T")],
    7: [("L", "T")],
    8: [("T", "L")],
    9: [("B", "T")],
    11: [("R", "T")],
    12: [("L", "R")],
    13: [("B", "R")],
    14: [("L", "B")],
}


def _marching_squares(xv: np.ndarray, yv: np.ndarray, F: np.ndarray):
    """Zero-level polylines of F on the tensor grid (xv columns, yv rows).

    Returns (polylines, vertex_edges): each polyline is a (k, 2) float array
    of (x, y) points; vertex_edges[p][v] = ((x0, y0, f0), (x1, y1, f1)) is
    the grid edge whose linear interpolation produced that vertex.
    """
    pos = np.zeros(F.shape, dtype=bool)
    fin = np.isfinite(F)
    pos[fin] = F[fin] > 0.0
    case = (
        pos[:-1, :-1].astype(np.int8)
        + (pos[:-1, 1:].astype(np.int8) << 1)
        + (pos[1:, 1:].astype(np.int8) << 2)
        + (pos[1:, :-1].astype(np.int8) << 3)
    )
    valid = fin[:-1, :-1] & fin[:-1, 1:] & fin[1:, 1:] & fin[1:, :-1]
    cells = np.argwhere(valid & (case != 0) & (case != 15))

    verts = {}
    segments = []

    def vertex(eid):
        if eid in verts:
            return
        kind, j, i = eid
        if kind == 0:  # horizontal edge: (j,i) -- (j,i+1)
            x0, y0, f0 = xv[i], yv[j], F[j, i]
            x1, y1, f1 = xv[i + 1], yv[j], F[j, i + 1]
        else:  # vertical edge: (j,i) -- (j+1,i)
            x0, y0, f0 = xv[i], yv[j], F[j, i]
            x1, y1, f1 = xv[i], yv[j + 1], F[j + 1, i]
        t = f0 / (f0 - f1)
        verts[eid] = (
            x0 + t * (x1 - x0),
            y0 + t * (y1 - y0),
            (float(x0), float(y0), float(f0)),
            (float(x1), float(y1), float(f1)),
        )

    for j, i in cells:
        c = int(case[j, i])
        if c in (5, 10):
            center_pos = (F[j, i] + F[j, i + 1] + F[j + 1, i] + F[j + 1, i + 1]) > 0.0
            if c == 5:
                segs = [("B", "R"), ("T", "L")] if center_pos else [("B", "L"), ("R", "T")]
            else:
                segs = [("L", "B"), ("T", "R")] if center_pos else [("B", "R"), ("T", "L")]
        else:
            segs = _MS_TABLE[c]
        local = {
            "B": (0, j, i),
            "T": (0, j + 1, i),
            "L": (1, j, i),
            "R": (1, j, i + 1),
        }
        for e1, e2 in segs:
            id1, id2 = local[e1], local[e2]
            vertex(id1)
            vertex(id2)
            segments.append((id1, id2))

    adj = defaultdict(list)
    for id1, id2 in segments:
        adj[id1].append(id2)
        adj[id2].append(id1)

    visited = set()
    polylines = []
    vertex_edges = []

    def walk(start):
        path = [start]
        visited.add(start)
        cur = start
        while True:
            nxt = None
            for cand in sorted(adj[cur]):
                if cand not in visited:
                    nxt = cand
                    break
            if nxt is None:
                break
            path.append(nxt)
            visited.add(nxt)
            cur = nxt
        return path

    def emit(path):
        pts = np.array([[verts[e][0], verts[e][1]] for e in path])
        polylines.append(pts)
        vertex_edges.append([(verts[e][2], verts[e][3]) for e in path])

    for e in sorted(e for e in adj if len(adj[e]) == 1):
        if e not in visited:
            emit(walk(e))
    for e in sorted(adj):
        if e not in visited:
            emit(walk(e))
    return polylines, vertex_edges


def refine_contour_vertex(
    contour: AdmissibilityContour,
    polyline_index: int,
    vertex_index: int,
    *,
    tol: float = 1e-10,
    max_bisect: int = 200,
):
    """Bisect F along the grid edge behind one polyline vertex.

    Returns (s0, tau, f) with |f| <= tol * local scale (or the bisection
    interval exhausted to rounding).  tau values on the tau = 0 row are
    evaluated at the same small floor used by the grid.
    """
    try:
        (x0, y0, f0), (x1, y1, f1) = contour.vertex_edges[polyline_index][vertex_index]
    except (IndexError, TypeError) as exc:
        raise InvalidInput("no such polyline vertex") from exc
    a, n, m = contour.a, contour.n, contour.m

    def eval_at(t):
        s0 = x0 + t * (x1 - x0)
        tau = max(y0 + t * (y1 - y0), TAU_FLOOR)
        return s0, tau, _residual_and_scale(a, n, m, s0, tau)

    lo, flo = 0.0, f0
    hi, fhi = 1.0, f1
    if flo == 0.0:
        s0, tau, (f, _) = eval_at(0.0)
        return s0, tau, f
    if fhi == 0.0:
        s0, tau, (f, _) = eval_at(1.0)
        return s0, tau, f
    best = None
    for _ in range(max_bisect):
        mid = 0.5 * (lo + hi)
        s0, tau, (f, s) = eval_at(mid)
        if math.isnan(f):
            break
        best = (s0, tau, f)
        if abs(f) <= tol * s or hi - lo < 1e-15:
            return best
        if (flo < 0.0) != (f < 0.0):
            hi, fhi = mid, f
        else:
            lo, flo = mid, f
    if best is None:
        s0, tau, (f, _) = eval_at(0.5)
        best = (s0, tau, f)
    return best
