"""Quasipolynomial data model and exact evaluation.

The central object is the characteristic function of a linear differential
equation with a single discrete delay,

    delta(s) = s**n + sum_k a[k] s**k + exp(-s*tau) * sum_k b[k] s**k,

with the leading coefficient of ``s**n`` fixed to 1.  Polynomial parts are
evaluated by Horner's rule; derivatives of any order are exact (Leibniz rule
applied to the exponential factor, no finite differencing).

Evaluation is organized around a factored form ``exp(kappa) * v`` with
``kappa = max(0, -Re(s)*tau)`` so that values stay representable deep in the
left half-plane where the delayed term grows like ``exp(|Re s| tau)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import InvalidInput

__all__ = [
    "Quasipolynomial",
    "ComplexRectangle",
    "evaluate",
    "evaluate_derivative",
    "scale",
    "log_scale",
]

# Exact integer binomials are guaranteed up to this derivative order; no
# design use case exceeds n + m + 1 for practical orders.
MAX_DERIVATIVE_ORDER = 64


def _as_float_tuple(values, what: str) -> tuple:
    try:
        out = tuple(float(v) for v in values)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"{what} must be a sequence of real numbers") from exc
    if not all(math.isfinite(v) for v in out):
        raise InvalidInput(f"{what} must contain only finite values")
    return out


@dataclass(frozen=True)
class Quasipolynomial:
    """Characteristic function data: orders, coefficients and the delay.

    Parameters
    ----------
    n, m : int
        Orders of the non-delayed and delayed polynomial parts, ``n >= m``.
    a : sequence of n floats
        Coefficients a0..a_{n-1} of the non-delayed part (the s**n term is
        monic and implicit).
    b : sequence of m+1 floats
        Coefficients b0..bm multiplying exp(-s*tau).
    tau : float
        Positive delay.
    """

    n: int
    m: int
    a: tuple
    b: tuple
    tau: float

    def __post_init__(self):
        if not isinstance(self.n, int) or not isinstance(self.m, int):
            raise InvalidInput("orders n and m must be integers")
        if self.n < 0 or self.m < 0:
            raise InvalidInput("orders n and m must be nonnegative")
        if self.n < self.m:
            raise InvalidInput("order n must satisfy n >= m")
        object.__setattr__(self, "a", _as_float_tuple(self.a, "a"))
        object.__setattr__(self, "b", _as_float_tuple(self.b, "b"))
        if len(self.a) != self.n:
            raise InvalidInput(f"a must have exactly n = {self.n} entries")
        if len(self.b) != self.m + 1:
            raise InvalidInput(f"b must have exactly m + 1 = {self.m + 1} entries")
        try:
            tau = float(self.tau)
        except (TypeError, ValueError) as exc:
            raise InvalidInput("tau must be a real number") from exc
        if not (math.isfinite(tau) and tau > 0):
            raise InvalidInput("tau must be positive and finite")
        object.__setattr__(self, "tau", tau)

    @property
    def kind(self) -> str:
        """'neutral' when the highest derivative is also delayed, else 'retarded'."""
        if self.n == self.m and self.b[self.m] != 0.0:
            return "neutral"
        return "retarded"

    @property
    def delayed_active(self) -> bool:
        return any(v != 0.0 for v in self.b)

    def p_coeffs(self) -> np.ndarray:
        """Ascending coefficients of the monic non-delayed part (length n+1)."""
        return np.array(self.a + (1.0,), dtype=float)

    def q_coeffs(self) -> np.ndarray:
        """Ascending coefficients of the delayed part (length m+1)."""
        return np.array(self.b, dtype=float)

    def with_tau(self, tau: float) -> "Quasipolynomial":
        return Quasipolynomial(self.n, self.m, self.a, self.b, tau)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "a": list(self.a),
            "b": list(self.b),
            "tau": self.tau,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Quasipolynomial":
        if not isinstance(d, dict):
            raise InvalidInput("quasipolynomial must be an object")
        missing = {"n", "m", "a", "b", "tau"} - set(d)
        if missing:
            raise InvalidInput(f"quasipolynomial missing fields: {sorted(missing)}")
        try:
            n = int(d["n"])
            m = int(d["m"])
        except (TypeError, ValueError) as exc:
            raise InvalidInput("orders n and m must be integers") from exc
        return cls(n, m, d["a"], d["b"], d["tau"])


@dataclass(frozen=True)
class ComplexRectangle:
    """Axis-aligned window [x_min, x_max] x [y_min, y_max] in the s-plane."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        vals = [self.x_min, self.x_max, self.y_min, self.y_max]
        try:
            vals = [float(v) for v in vals]
        except (TypeError, ValueError) as exc:
            raise InvalidInput("rectangle bounds must be real numbers") from exc
        if not all(math.isfinite(v) for v in vals):
            raise InvalidInput("rectangle bounds must be finite")
        for name, v in zip(("x_min", "x_max", "y_min", "y_max"), vals):
            object.__setattr__(self, name, v)
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise InvalidInput("rectangle requires x_min < x_max and y_min < y_max")

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.x_min + self.x_max), 0.5 * (self.y_min + self.y_max))

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)

    def corners(self) -> list:
        """Corners in counter-clockwise order from bottom-left."""
        return [
            complex(self.x_min, self.y_min),
            complex(self.x_max, self.y_min),
            complex(self.x_max, self.y_max),
            complex(self.x_min, self.y_max),
        ]

    def contains(self, s: complex, margin: float = 0.0) -> bool:
        return (
            self.x_min + margin < s.real < self.x_max - margin
            and self.y_min + margin < s.imag < self.y_max - margin
        )

    def shifted(self, dx: float, dy: float) -> "ComplexRectangle":
        return ComplexRectangle(
            self.x_min + dx, self.x_max + dx, self.y_min + dy, self.y_max + dy
        )

    def is_symmetric(self, tol: float = 0.0) -> bool:
        return abs(self.y_min + self.y_max) <= tol * max(1.0, self.height)

    def to_dict(self) -> dict:
        return {
            "x_min": self.x_min,
            "x_max": self.x_max,
            "y_min": self.y_min,
            "y_max": self.y_max,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ComplexRectangle":
        if not isinstance(d, dict):
            raise InvalidInput("rectangle must be an object")
        missing = {"x_min", "x_max", "y_min", "y_max"} - set(d)
        if missing:
            raise InvalidInput(f"rectangle missing fields: {sorted(missing)}")
        return cls(d["x_min"], d["x_max"], d["y_min"], d["y_max"])


@lru_cache(maxsize=4096)
def _derivative_coeffs(coeffs: tuple, k: int) -> tuple:
    """Ascending coefficients of the k-th derivative of a polynomial."""
    c = list(coeffs)
    for _ in range(k):
        c = [c[i] * i for i in range(1, len(c))]
        if not c:
            return (0.0,)
    return tuple(c)


def poly_derivative(coeffs: Sequence[float], k: int) -> np.ndarray:
    return np.array(_derivative_coeffs(tuple(float(c) for c in coeffs), k))


def _horner(coeffs, s):
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * s + c
    return acc


def _delayed_bracket(q: Quasipolynomial, s: complex, k: int) -> complex:
    # Leibniz sum without the exponential factor:
    #   sum_j C(k,j) (-tau)**(k-j) Q^{(j)}(s)
    acc = 0j
    qc = tuple(q.b)
    for j in range(0, min(k, q.m) + 1):
        acc += (
            math.comb(k, j)
            * (-q.tau) ** (k - j)
            * _horner(_derivative_coeffs(qc, j), s)
        )
    return acc


def _eval_parts(q: Quasipolynomial, s: complex, k: int = 0):
    """Return (v, kappa) with delta^{(k)}(s) = exp(kappa) * v.

    kappa = max(0, -Re(s)*tau) keeps both contributions representable: the
    non-delayed part is attenuated by exp(-kappa) <= 1 and the delayed part
    carries exp(-s*tau - kappa), whose modulus never exceeds 1.
    """
    s = complex(s)
    pk = _horner(_derivative_coeffs(tuple(q.a) + (1.0,), k), s)
    if not q.delayed_active:
        return pk, 0.0
    x = -s * q.tau
    kappa = max(x.real, 0.0)
    bracket = _delayed_bracket(q, s, k)
    if kappa == 0.0:
        return pk + cmath.exp(x) * bracket, 0.0
    return math.exp(-kappa) * pk + cmath.exp(x - kappa) * bracket, kappa


def evaluate(q: Quasipolynomial, s: complex) -> complex:
    """Value of the quasipolynomial at ``s``.

    Overflow (possible deep in the left half-plane) yields an infinite
    component rather than an exception.
    """
    v, kappa = _eval_parts(q, s, 0)
    if kappa == 0.0:
        return v
    try:
        growth = math.exp(kappa)
    except OverflowError:
        growth = math.inf
    return growth * v


def evaluate_derivative(q: Quasipolynomial, s: complex, k: int) -> complex:
    """Exact k-th derivative of the quasipolynomial at ``s``.

    ``k = 0`` coincides with :func:`evaluate`.
    """
    if not isinstance(k, int) or k < 0:
        raise InvalidInput("derivative order k must be a nonnegative integer")
    if k > MAX_DERIVATIVE_ORDER:
        raise InvalidInput(
            f"derivative order k = {k} exceeds the supported maximum "
            f"{MAX_DERIVATIVE_ORDER}"
        )
    if k == 0:
        return evaluate(q, s)
    v, kappa = _eval_parts(q, s, k)
    if kappa == 0.0:
        return v
    try:
        growth = math.exp(kappa)
    except OverflowError:
        growth = math.inf
    return growth * v


def scale(q: Quasipolynomial, s: complex) -> float:
    """Natural magnitude of the quasipolynomial near ``s``, used to make
    residual tolerances relative: max(1,|s|)**n * (1 + max|a| + max|b| e^{|Re s| tau})."""
    s = complex(s)
    mag = max(1.0, abs(s))
    maxa = max((abs(v) for v in q.a), default=0.0)
    maxb = max((abs(v) for v in q.b), default=0.0)
    x = abs(s.real) * q.tau
    grow = math.exp(x) if x < 709.0 else math.inf
    return mag**q.n * (1.0 + maxa + maxb * grow)


def log_scale(q: Quasipolynomial, s: complex) -> float:
    """log of :func:`scale`, overflow-free."""
    s = complex(s)
    mag = max(1.0, abs(s))
    maxa = max((abs(v) for v in q.a), default=0.0)
    maxb = max((abs(v) for v in q.b), default=0.0)
    base = q.n * math.log(mag)
    if maxb == 0.0:
        return base + math.log1p(maxa)
    return base + np.logaddexp(math.log1p(maxa), math.log(maxb) + abs(s.real) * q.tau)
