"""Time-domain simulation by the method of steps with explicit Euler.

The step is h = tau / steps_per_delay, so the delayed sample sits exactly
steps_per_delay grid points back and no interpolation of the history is
ever needed.  The delayed derivative terms y^(k)(t - tau) for k <= m are
read from stored rows of past derivatives; in the neutral case the highest
row is the derivative computed from the equation itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import _kernels as kernels
from . import deadline as _deadline
from .errors import BlowUp, InvalidInput
from .quasipoly import Quasipolynomial

__all__ = [
    "Constant",
    "Polynomial",
    "Exponential",
    "Trigonometric",
    "InitialCondition",
    "initial_from_dict",
    "initial_to_dict",
    "eval_initial",
    "Trajectory",
    "simulate",
]


def _finite_real(value, what):
    try:
        v = float(value)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"{what} must be a real number") from exc
    if not math.isfinite(v):
        raise InvalidInput(f"{what} must be finite")
    return v


@dataclass(frozen=True)
class Constant:
    c: float

    def __post_init__(self):
        object.__setattr__(self, "c", _finite_real(self.c, "constant value"))


@dataclass(frozen=True)
class Polynomial:
    """Initial segment sum coeffs[i] * t^i (lowest degree first)."""

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(_finite_real(c, "polynomial coefficient") for c in self.coeffs)
        if not cs:
            raise InvalidInput("polynomial initial condition needs coefficients")
        object.__setattr__(self, "coeffs", cs)


@dataclass(frozen=True)
class Exponential:
    """amplitude * exp(rate * t)."""

    amplitude: float
    rate: float

    def __post_init__(self):
        object.__setattr__(self, "amplitude", _finite_real(self.amplitude, "amplitude"))
        object.__setattr__(self, "rate", _finite_real(self.rate, "rate"))


@dataclass(frozen=True)
class Trigonometric:
    """amplitude * sin(omega * t + phase)."""

    amplitude: float
    omega: float
    phase: float

    def __post_init__(self):
        object.__setattr__(self, "amplitude", _finite_real(self.amplitude, "amplitude"))
        object.__setattr__(self, "omega", _finite_real(self.omega, "omega"))
        object.__setattr__(self, "phase", _finite_real(self.phase, "phase"))


InitialCondition = Union[Constant, Polynomial, Exponential, Trigonometric]


def initial_from_dict(payload) -> InitialCondition:
    """Decode the wire form: exactly one of the four family keys."""
    if not isinstance(payload, dict):
        raise InvalidInput("initial condition must be an object")
    keys = set(payload)
    if len(keys) != 1:
        raise InvalidInput(
            "initial condition must have exactly one of: constant, polynomial, "
            "exponential, trigonometric"
        )
    kind = next(iter(keys))
    body = payload[kind]
    if kind == "constant":
        return Constant(body)
    if kind == "polynomial":
        if not isinstance(body, (list, tuple)):
            raise InvalidInput("polynomial initial condition must be a list")
        return Polynomial(tuple(body))
    if kind == "exponential":
        if not isinstance(body, dict):
            raise InvalidInput("exponential initial condition must be an object")
        extra = set(body) - {"amplitude", "rate"}
        if extra or set(body) != {"amplitude", "rate"}:
            raise InvalidInput("exponential takes exactly amplitude and rate")
        return Exponential(body["amplitude"], body["rate"])
    if kind == "trigonometric":
        if not isinstance(body, dict):
            raise InvalidInput("trigonometric initial condition must be an object")
        if set(body) != {"amplitude", "omega", "phase"}:
            raise InvalidInput("trigonometric takes exactly amplitude, omega, phase")
        return Trigonometric(body["amplitude"], body["omega"], body["phase"])
    raise InvalidInput(f"unknown initial condition kind: {kind!r}")


def initial_to_dict(ic: InitialCondition) -> dict:
    if isinstance(ic, Constant):
        return {"constant": ic.c}
    if isinstance(ic, Polynomial):
        return {"polynomial": list(ic.coeffs)}
    if isinstance(ic, Exponential):
        return {"exponential": {"amplitude": ic.amplitude, "rate": ic.rate}}
    if isinstance(ic, Trigonometric):
        return {
            "trigonometric": {
                "amplitude": ic.amplitude,
                "omega": ic.omega,
                "phase": ic.phase,
            }
        }
    raise InvalidInput("unknown initial condition type")


def eval_initial(ic: InitialCondition, t, k: int = 0):
    """k-th derivative of the initial function at time(s) t (vectorized)."""
    t = np.asarray(t, dtype=float)
    if isinstance(ic, Constant):
        out = np.full(t.shape, ic.c if k == 0 else 0.0)
    elif isinstance(ic, Polynomial):
        cs = ic.coeffs
        out = np.zeros(t.shape)
        for i in range(k, len(cs)):
            out += cs[i] * math.perm(i, k) * t ** (i - k)
    elif isinstance(ic, Exponential):
        out = ic.amplitude * ic.rate**k * np.exp(ic.rate * t)
    elif isinstance(ic, Trigonometric):
        # d/dt sin(wt + p) = w sin(wt + p + pi/2)
        out = (
            ic.amplitude
            * ic.omega**k
            * np.sin(ic.omega * t + ic.phase + k * math.pi / 2.0)
        )
    else:
        raise InvalidInput("unknown initial condition type")
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution: t[0] = -tau, t crosses zero exactly on the grid."""

    t: np.ndarray
    y: np.ndarray
    h: float

    def decimated(self, max_samples: int = 100_000) -> "Trajectory":
        """Evenly thinned copy keeping first and last samples; h unchanged."""
        if max_samples < 2:
            raise InvalidInput("max_samples must be at least 2")
        size = self.t.size
        if size <= max_samples:
            return self
        stride = math.ceil((size - 1) / (max_samples - 1))
        idx = np.arange(0, size, stride)
        if idx[-1] != size - 1:
            idx = np.append(idx, size - 1)
        return Trajectory(self.t[idx], self.y[idx], self.h)

    def to_dict(self) -> dict:
        return {"t": self.t.tolist(), "y": self.y.tolist(), "h": self.h}


def simulate(
    q: Quasipolynomial,
    ic: InitialCondition,
    horizon: float,
    steps_per_delay: int = 1000,
    *,
    cancel=None,
) -> Trajectory:
    """Integrate the delay equation from the given history up to t >= horizon.

    Raises BlowUp (carrying the offending time) as soon as |y| exceeds 1e300.
    """
    if not isinstance(q, Quasipolynomial):
        raise InvalidInput("q must be a Quasipolynomial")
    if not isinstance(ic, (Constant, Polynomial, Exponential, Trigonometric)):
        raise InvalidInput("unknown initial condition type")
    horizon = _finite_real(horizon, "horizon")
    if horizon <= 0:
        raise InvalidInput("horizon must be positive")
    if not isinstance(steps_per_delay, int) or steps_per_delay < 10:
        raise InvalidInput("steps_per_delay must be an integer >= 10")

    h = q.tau / steps_per_delay
    D = steps_per_delay
    M = D + math.ceil(horizon / h)
    t = -q.tau + h * np.arange(M + 1)
    _deadline.check(cancel, stage="setup", samples=M + 1)

    hist = np.zeros((q.m + 1, M + 1))
    for k in range(q.m + 1):
        hist[k, : D + 1] = eval_initial(ic, t[: D + 1], k)

    if q.n == 0:
        # zeroth-order equation: y(t) = -b0 y(t - tau), a pure recurrence
        b0 = q.b[0]
        y = hist[0]
        stop = -1
        for j in range(D + 1, M + 1):
            y[j] = -b0 * y[j - D]
            if not (abs(y[j]) <= 1e300):
                stop = j
                break
    else:
        state = [eval_initial(ic, 0.0, k) for k in range(q.n)]
        stop = kernels.euler_run(
            q.a, q.b, h, D, hist, state, q.kind == "neutral"
        )
    if stop >= 0:
        bad_t = float(t[stop])
        raise BlowUp(
            f"trajectory magnitude exceeded 1e300 at t = {bad_t:.6g}", time=bad_t
        )
    return Trajectory(t, hist[0].copy(), h)
