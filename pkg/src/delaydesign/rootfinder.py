"""Zeros of a quasipolynomial inside a rectangle, by the argument principle.

Counting: (1/2pi i) of delta'/delta around the boundary, composite 16-node
Gauss-Legendre panels per edge, panel count doubled until the value is both
stable (1e-3) and near an integer (1e-2).  A guard rejects contours passing
too close to a zero (min |delta| below 1e-6 of the local envelope).

Locating: recursive bisection of the rectangle until each region holds at
most four zeros, then Delves-Lyness moment extraction in centered
coordinates, damped Newton polish, clustering, and a micro-contour recount
around every candidate to certify multiplicities.

Large windows are pre-split into vertical strips of width <= 20/tau, which
bounds the variation of |exp(-s tau)| per contour.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels as kernels
from . import deadline as _deadline
from .errors import (
    AssignedRootMissing,
    ContourTooClose,
    ConvergenceFailure,
    InvalidInput,
    InvalidPerturbation,
    RootOnBoundary,
)
from .quasipoly import ComplexRectangle, Quasipolynomial, evaluate, log_scale
from .quasipoly import _eval_parts  # factored evaluation shared with Newton

__all__ = [
    "Root",
    "RootSet",
    "DominanceReport",
    "SensitivitySweep",
    "count_roots",
    "winding_integral",
    "find_roots",
    "certify_dominance",
    "sensitivity_sweep",
]

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)

LOG_GUARD = math.log(1e-6)
STABLE_TOL = 1e-3
INTEGER_TOL = 1e-2
MAX_DOUBLINGS = 9
TERMINAL_CAPACITY = 4
# moment extraction still works somewhat beyond the terminal capacity; used
# as a fallback when a tight cluster blocks every split line
MOMENT_CAP = 10
MAX_DEPTH = 64
STRIP_WIDTH_FACTOR = 20.0
MICRO_RADIUS = 1e-4
CLUSTER_TOL = 1e-8
BOUNDARY_SNAP = 1e-3


@dataclass(frozen=True)
class Root:
    location: complex
    multiplicity: int
    residual: float


@dataclass(frozen=True)
class RootSet:
    """All zeros found in a window, with the contour count they must match."""

    rectangle: ComplexRectangle
    roots: tuple
    winding_count: int
    window_abscissa: float

    def to_dict(self) -> dict:
        return {
            "rectangle": self.rectangle.to_dict(),
            "roots": [
                [r.location.real, r.location.imag, r.multiplicity, r.residual]
                for r in self.roots
            ],
            "winding_count": self.winding_count,
            "window_abscissa": self.window_abscissa,
        }


@dataclass(frozen=True)
class DominanceReport:
    dominant: bool
    margin: float

    def to_dict(self) -> dict:
        return {"dominant": self.dominant, "margin": self.margin}


@dataclass(frozen=True)
class SensitivitySweep:
    epsilon: float
    K: int
    per_k: dict

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "K": self.K,
            "per_k": {str(k): self.per_k[k].to_dict() for k in sorted(self.per_k)},
        }


class _Inconsistent(Exception):
    """Internal: moment extraction disagreed with the contour count."""


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------


def _guard_log_scale(q: Quasipolynomial, pts: np.ndarray) -> np.ndarray:
    # Envelope of |delta| along the contour.  The delayed factor enters as
    # exp(-Re(s) tau): it grows only into the left half-plane.
    mag = np.maximum(1.0, np.abs(pts))
    maxa = max((abs(v) for v in q.a), default=0.0)
    maxb = max((abs(v) for v in q.b), default=0.0)
    base = q.n * np.log(mag)
    if maxb == 0.0:
        return base + math.log1p(maxa)
    return base + np.logaddexp(math.log1p(maxa), math.log(maxb) + (-pts.real) * q.tau)


def _polygon_nodes(vertices, panels):
    """Quadrature nodes and dz-weights along a closed polygon."""
    zs = []
    ws = []
    k = len(vertices)
    offs = (_GL_X + 1.0) / 2.0
    for e in range(k):
        z0 = vertices[e]
        z1 = vertices[(e + 1) % k]
        p = panels[e]
        t = (np.arange(p)[:, None] + offs[None, :]) / p
        zs.append((z0 + (z1 - z0) * t).ravel())
        ws.append(np.tile(_GL_W * (z1 - z0) / (2.0 * p), p))
    return np.concatenate(zs), np.concatenate(ws)


def _circle_nodes(center, radius, panels):
    offs = (_GL_X + 1.0) / 2.0
    dth = 2.0 * math.pi / panels
    th = (np.arange(panels)[:, None] + offs[None, :]).ravel() * dth
    e = np.exp(1j * th)
    z = center + radius * e
    w = np.tile(_GL_W * dth / 2.0, panels) * (1j * radius * e)
    return z, w


def _moments(q, z, w, center, rho, pmax, guard):
    ld, logabs = kernels.logderiv_batch(q.p_coeffs(), q.q_coeffs(), q.tau, z)
    margin = math.inf
    if guard:
        margin = float(np.min(logabs - _guard_log_scale(q, z)))
    elif not np.all(np.isfinite(ld)):
        return None, -math.inf
    I = np.empty(pmax + 1, dtype=complex)
    cur = np.ones_like(z)
    phi = (z - center) / rho
    scaled = w * ld / (2j * math.pi)
    for p in range(pmax + 1):
        I[p] = np.sum(scaled * cur)
        cur = cur * phi
    return I, margin


def _adaptive(q, build, pmax, center, rho, guard, cancel, unsettled_none=False):
    """Panel-doubling loop: returns (count, moments, raw) once the winding
    value is stable and near a nonnegative integer."""
    prev = None
    mult = 1
    for _level in range(MAX_DOUBLINGS + 1):
        _deadline.check(cancel, stage="quadrature")
        z, w = build(mult)
        I, margin = _moments(q, z, w, center, rho, pmax, guard)
        if guard and not margin > LOG_GUARD:
            raise ContourTooClose(
                f"contour passes within the guard band of a root "
                f"(log-margin {margin:.2f})"
            )
        if I is not None and prev is not None and abs(I[0] - prev) < STABLE_TOL:
            r = round(I[0].real)
            if r >= 0 and abs(I[0] - r) < INTEGER_TOL:
                return int(r), I, I[0]
        prev = None if I is None else I[0]
        mult *= 2
    if unsettled_none:
        return None, None, None
    raise ContourTooClose("winding integral failed to settle under refinement")


def _edge_panels(q: Quasipolynomial, rect: ComplexRectangle):
    # initial panel counts resolve the exp(-s tau) oscillation along edges
    def p0(L):
        if q.delayed_active:
            return max(2, min(128, math.ceil(L * q.tau / math.pi)))
        return 2

    return [p0(rect.width), p0(rect.height), p0(rect.width), p0(rect.height)]


def _rect_adaptive(q, rect, pmax, cancel, guard=True):
    verts = rect.corners()
    base = _edge_panels(q, rect)
    center = rect.center
    rho = max(rect.diagonal / 2.0, 1e-300)

    def build(mult):
        return _polygon_nodes(verts, [p * mult for p in base])

    return _adaptive(q, build, pmax, center, rho, guard, cancel)


def _micro_count(q, center, radius, cancel) -> Optional[int]:
    def build(mult):
        return _circle_nodes(center, radius, 8 * mult)

    count, _, _ = _adaptive(
        q, build, 0, center, radius, False, cancel, unsettled_none=True
    )
    return count


def _strips(q: Quasipolynomial, rect: ComplexRectangle):
    if not q.delayed_active:
        return [rect]
    wmax = STRIP_WIDTH_FACTOR / q.tau
    if rect.width <= wmax:
        return [rect]
    k = math.ceil(rect.width / wmax)
    xs = np.linspace(rect.x_min, rect.x_max, k + 1)
    return [
        ComplexRectangle(float(xs[i]), float(xs[i + 1]), rect.y_min, rect.y_max)
        for i in range(k)
    ]


def count_roots(q: Quasipolynomial, rect: ComplexRectangle, *, cancel=None) -> int:
    """Number of zeros (with multiplicity) inside the rectangle.

    Raises ContourTooClose when a zero sits too near the boundary for the
    quadrature to be trusted; callers wanting automatic recovery should
    shift the window slightly and retry (find_roots does exactly that).
    """
    _check_inputs(q, rect)
    total = 0
    for strip in _strips(q, rect):
        c, _, _ = _rect_adaptive(q, strip, 0, cancel)
        total += c
    return total


def winding_integral(
    q: Quasipolynomial, rect: ComplexRectangle, *, panels: Optional[int] = None, cancel=None
) -> float:
    """Pre-rounding winding value along the rectangle boundary.

    With ``panels`` given, a single fixed-resolution pass using that many
    panels per edge (no adaptivity) — useful for refinement studies;
    otherwise the adaptive value."""
    _check_inputs(q, rect)
    total = 0.0 + 0.0j
    for strip in _strips(q, rect):
        if panels is None:
            _, _, raw = _rect_adaptive(q, strip, 0, cancel)
        else:
            z, w = _polygon_nodes(strip.corners(), [panels] * 4)
            I, margin = _moments(
                q, z, w, strip.center, max(strip.diagonal / 2, 1e-300), 0, True
            )
            if not margin > LOG_GUARD:
                raise ContourTooClose("contour passes within the guard band of a root")
            raw = I[0]
        total += raw
    return float(total.real)


# ---------------------------------------------------------------------------
# Root extraction
# ---------------------------------------------------------------------------


def _power_sums_to_monic(s: np.ndarray) -> np.ndarray:
    # Newton identities: k e_k = sum_{i=1..k} (-1)^(i-1) e_{k-i} s_i
    N = s.size
    e = np.zeros(N + 1, dtype=complex)
    e[0] = 1.0
    for k in range(1, N + 1):
        acc = 0.0 + 0.0j
        for i in range(1, k + 1):
            acc += (-1.0) ** (i - 1) * e[k - i] * s[i - 1]
        e[k] = acc / k
    return np.array([(-1.0) ** k * e[k] for k in range(N + 1)])


def _logabs(q, z, order):
    v, kappa = _eval_parts(q, z, order)
    if v == 0:
        return -math.inf
    return kappa + math.log(abs(v))


def _newton_polish(q, z, order=0, max_iter=100):
    """Damped Newton on delta^(order); the exp(kappa) factor cancels in the
    step, so evaluation stays finite arbitrarily deep in the left plane."""
    z = complex(z)
    for _ in range(max_iter):
        v0, _k0 = _eval_parts(q, z, order)
        if v0 == 0:
            return z
        v1, _k1 = _eval_parts(q, z, order + 1)
        if v1 == 0 or not (math.isfinite(v1.real) and math.isfinite(v1.imag)):
            return z
        dz = v0 / v1
        cap = 0.5 * (1.0 + abs(z))
        if abs(dz) > cap:
            dz *= cap / abs(dz)
        base = _logabs(q, z, order)
        step = dz
        znew = None
        for _h in range(9):
            cand = z - step
            if _logabs(q, cand, order) < base:
                znew = cand
                break
            step *= 0.5
        if znew is None:
            znew = z - step
        moved = abs(znew - z)
        z = znew
        if moved < 1e-14 * (1.0 + abs(z)):
            break
    return z


def _union_groups(items, linked):
    parent = list(range(len(items)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if linked(items[i], items[j]):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    groups = {}
    for i in range(len(items)):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def _boundary_distance(rect: ComplexRectangle, z: complex) -> float:
    if rect.contains(z):
        dx = min(abs(z.real - rect.x_min), abs(z.real - rect.x_max))
        dy = min(abs(z.imag - rect.y_min), abs(z.imag - rect.y_max))
        return min(dx, dy)
    cx = min(max(z.real, rect.x_min), rect.x_max)
    cy = min(max(z.imag, rect.y_min), rect.y_max)
    return math.hypot(z.real - cx, z.imag - cy)


def _extract(q, rect, count, final, cancel):
    """Locate ``count`` zeros in a terminal region via contour moments.

    Raises _Inconsistent (or ConvergenceFailure when ``final``) whenever the
    micro-contour certification disagrees with the clustering.  A root that
    straddles the region boundary can settle the boundary quadrature on a
    stable half-winding without tripping the proximity guard; when a
    certification mismatch points at a location that close to the edge it is
    reported as ContourTooClose so the caller's shift-and-retry applies.
    """

    def fail(msg, near=None):
        if near is not None and _boundary_distance(rect, near) <= BOUNDARY_SNAP * (
            1.0 + abs(near)
        ):
            raise ContourTooClose(
                f"certification mismatch beside the region boundary: {msg}"
            )
        if final:
            raise ConvergenceFailure(msg)
        raise _Inconsistent(msg)

    center = rect.center
    rho = max(rect.diagonal / 2.0, 1e-300)
    recount, I, _ = _rect_adaptive(q, rect, count, cancel)
    if recount != count:
        fail(f"moment pass recounted {recount} != {count}")
    w_roots = np.roots(_power_sums_to_monic(I[1 : count + 1]))
    candidates = center + rho * w_roots
    polished = [_newton_polish(q, z) for z in candidates]

    clusters = _union_groups(
        polished,
        lambda zi, zj: abs(zi - zj) <= CLUSTER_TOL * (1.0 + min(abs(zi), abs(zj))),
    )
    centers = [np.mean([polished[i] for i in g]) for g in clusters]
    sizes = [len(g) for g in clusters]

    # clusters whose micro-circles would overlap must be certified jointly
    link_tol = 2.2 * MICRO_RADIUS
    groups = _union_groups(
        list(range(len(clusters))),
        lambda ci, cj: abs(centers[ci] - centers[cj])
        <= link_tol * (1.0 + max(abs(centers[ci]), abs(centers[cj]))),
    )

    found = []
    for group in groups:
        if len(group) == 1:
            ci = group[0]
            ctr = centers[ci]
            radius = MICRO_RADIUS * (1.0 + abs(ctr))
            mu = _micro_count(q, ctr, radius, cancel)
            if mu != sizes[ci]:
                fail(f"micro recount {mu} != cluster size {sizes[ci]}", near=ctr)
            found.append((ctr, mu, radius))
            continue
        # several clusters too close together: try separated certification
        dmin = min(
            abs(centers[i] - centers[j])
            for ii, i in enumerate(group)
            for j in group[ii + 1 :]
        )
        rsep = 0.45 * dmin
        ok = False
        if rsep > 1e-13 * (1.0 + abs(centers[group[0]])):
            mus = [_micro_count(q, centers[i], rsep, cancel) for i in group]
            if all(mu == sizes[i] for mu, i in zip(mus, group)):
                for mu, i in zip(mus, group):
                    found.append((centers[i], mu, rsep))
                ok = True
        if not ok:
            # treat the whole group as one (possibly multiple) root
            members = [polished[i] for ci in group for i in clusters[ci]]
            ctr = np.mean(members)
            spread = max(abs(p - ctr) for p in members)
            radius = max(MICRO_RADIUS * (1.0 + abs(ctr)), 3.0 * spread)
            mu = _micro_count(q, ctr, radius, cancel)
            total = sum(sizes[i] for i in group)
            if mu != total:
                fail(f"merged micro recount {mu} != group size {total}", near=ctr)
            found.append((ctr, mu, radius))

    roots = []
    for ctr, mu, radius in found:
        loc = complex(ctr)
        if mu > 1:
            refined = _newton_polish(q, loc, order=mu - 1)
            if abs(refined - loc) <= radius:
                loc = refined
        roots.append((loc, int(mu)))
    if sum(mu for _, mu in roots) != count:
        near = min(
            (loc for loc, _ in roots),
            key=lambda z: _boundary_distance(rect, z),
            default=None,
        )
        fail("certified multiplicities do not sum to the region count", near=near)
    return roots


_SPLIT_OFFSETS = (0.0, 0.04, -0.04, 0.09, -0.09, 0.15, -0.15, 0.22)


def _split(rect: ComplexRectangle, attempt: int):
    off = _SPLIT_OFFSETS[attempt]
    if rect.width >= rect.height:
        xm = rect.x_min + rect.width * (0.5 + off)
        return (
            ComplexRectangle(rect.x_min, xm, rect.y_min, rect.y_max),
            ComplexRectangle(xm, rect.x_max, rect.y_min, rect.y_max),
        )
    ym = rect.y_min + rect.height * (0.5 + off)
    return (
        ComplexRectangle(rect.x_min, rect.x_max, rect.y_min, ym),
        ComplexRectangle(rect.x_min, rect.x_max, ym, rect.y_max),
    )


def _resolve(q, rect, count, depth, salvage, cancel):
    """Recursive subdivision down to terminal regions, then extraction.

    ``salvage`` marks the one-shot re-subdivision permitted after an
    inconsistent extraction; failures below it are final."""
    if count == 0:
        return []
    _deadline.check(cancel, stage="subdivision", depth=depth)
    exhausted = depth >= MAX_DEPTH or rect.diagonal < 1e-8 * (1.0 + abs(rect.center))
    salvage_children = salvage
    if count <= TERMINAL_CAPACITY:
        try:
            return _extract(q, rect, count, exhausted or salvage, cancel)
        except _Inconsistent:
            salvage_children = True
    if exhausted:
        if count <= MOMENT_CAP:
            return _extract(q, rect, count, True, cancel)
        raise ConvergenceFailure(
            f"{count} zeros remain clustered below the resolvable region size"
        )
    for attempt in range(len(_SPLIT_OFFSETS)):
        ra, rb = _split(rect, attempt)
        try:
            ca, _, _ = _rect_adaptive(q, ra, 0, cancel)
            cb, _, _ = _rect_adaptive(q, rb, 0, cancel)
        except ContourTooClose:
            continue
        if ca + cb != count:
            continue
        return _resolve(q, ra, ca, depth + 1, salvage_children, cancel) + _resolve(
            q, rb, cb, depth + 1, salvage_children, cancel
        )
    # every split line lands inside a root cluster: extract at this size
    if count <= MOMENT_CAP:
        return _extract(q, rect, count, True, cancel)
    raise ConvergenceFailure(
        f"could not partition a region holding {count} zeros"
    )


def _check_inputs(q, rect):
    if not isinstance(q, Quasipolynomial):
        raise InvalidInput("q must be a Quasipolynomial")
    if not isinstance(rect, ComplexRectangle):
        raise InvalidInput("rect must be a ComplexRectangle")


_PERTURB_DIRS = (
    (1.0, 0.0),
    (-1.0, 0.0),
    (0.0, 1.0),
    (0.0, -1.0),
    (math.sqrt(0.5), math.sqrt(0.5)),
    (-math.sqrt(0.5), -math.sqrt(0.5)),
    (math.sqrt(0.5), -math.sqrt(0.5)),
    (-math.sqrt(0.5), math.sqrt(0.5)),
)


def _find_in(q, rect, workers, cancel):
    strips = _strips(q, rect)

    def handle(strip):
        c, _, _ = _rect_adaptive(q, strip, 0, cancel)
        if c == 0:
            return c, []
        return c, _resolve(q, strip, c, 0, False, cancel)

    if workers > 1 and len(strips) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(handle, strips))
    else:
        outcomes = [handle(s) for s in strips]

    total = sum(c for c, _ in outcomes)
    pairs = [p for _, rs in outcomes for p in rs]
    pairs.sort(key=lambda p: (p[0].real, p[0].imag))
    if sum(mu for _, mu in pairs) != total:
        raise ConvergenceFailure("located multiplicities do not sum to the count")
    for loc, _mu in pairs:
        if not rect.contains(loc):
            if _boundary_distance(rect, loc) <= BOUNDARY_SNAP * (1.0 + abs(loc)):
                raise ContourTooClose(
                    "a refined root sits on the search window boundary"
                )
            raise ConvergenceFailure("a refined root escaped the search window")
    roots = tuple(
        Root(loc, mu, abs(evaluate(q, loc))) for loc, mu in pairs
    )
    absc = max((r.location.real for r in roots), default=-math.inf)
    return RootSet(rect, roots, total, absc)


def find_roots(
    q: Quasipolynomial,
    rect: ComplexRectangle,
    *,
    workers: int = 1,
    cancel=None,
) -> RootSet:
    """All zeros inside the rectangle, with certified multiplicities.

    When a zero sits on (or hugs) the boundary the window is shifted by
    10^-4 of its diagonal and the search retried, up to eight times; the
    returned RootSet records the window actually searched.
    """
    _check_inputs(q, rect)
    last = None
    for attempt in range(9):
        if attempt == 0:
            r = rect
        else:
            d = rect.diagonal * 1e-4 * attempt
            dx, dy = _PERTURB_DIRS[(attempt - 1) % len(_PERTURB_DIRS)]
            r = rect.shifted(d * dx, d * dy)
        try:
            return _find_in(q, r, workers, cancel)
        except ContourTooClose as exc:
            last = exc
    raise RootOnBoundary(
        "a root appears pinned to the window boundary (8 perturbed retries)"
    ) from last


def certify_dominance(rs: RootSet, s0: float) -> DominanceReport:
    """Window-limited dominance check for an assigned real root."""
    s0 = float(s0)
    matched = [r for r in rs.roots if abs(r.location - s0) <= 1e-6]
    if not matched:
        raise AssignedRootMissing(
            f"no root within 1e-6 of s0 = {s0} in this root set"
        )
    others = [r for r in rs.roots if abs(r.location - s0) > 1e-6]
    if not others:
        return DominanceReport(True, math.inf)
    top = max(r.location.real for r in others)
    return DominanceReport(all(r.location.real <= s0 - 1e-9 for r in others), s0 - top)


def sensitivity_sweep(
    q: Quasipolynomial,
    epsilon: float,
    K: int,
    rect: ComplexRectangle,
    *,
    workers: int = 1,
    cancel=None,
) -> SensitivitySweep:
    """Spectra at delays tau + k*epsilon for k = -K..K, coefficients fixed."""
    _check_inputs(q, rect)
    try:
        epsilon = float(epsilon)
    except (TypeError, ValueError) as exc:
        raise InvalidInput("epsilon must be a real number") from exc
    if not (math.isfinite(epsilon) and epsilon > 0):
        raise InvalidInput("epsilon must be positive")
    if not isinstance(K, int) or K < 1:
        raise InvalidInput("K must be a positive integer")
    if q.tau - K * epsilon <= 0:
        raise InvalidPerturbation(
            f"tau - K*epsilon = {q.tau - K * epsilon:.6g} is not positive"
        )
    per_k = {}
    nominal = find_roots(q, rect, workers=workers, cancel=cancel)
    for k in range(-K, K + 1):
        _deadline.check(cancel, stage="sweep", k=k)
        if k == 0:
            per_k[k] = nominal
        else:
            per_k[k] = find_roots(
                q.with_tau(q.tau + k * epsilon), rect, workers=workers, cancel=cancel
            )
    return SensitivitySweep(epsilon, K, per_k)
