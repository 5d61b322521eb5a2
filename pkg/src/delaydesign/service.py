"""JSON-over-HTTP facade over the design, root-finding, and simulation core.

Every endpoint is a pure function of its request body: identical requests
produce byte-identical JSON responses (numbers carry 17 significant digits,
enough for a lossless double round-trip).  Domain failures map one-to-one
onto error codes; malformed JSON is 400, schema/domain violations are 422,
and an expired request deadline is 408 with partial-progress metadata.
"""

from __future__ import annotations

from typing import List, Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, ConfigDict

from ._kernels import backend_name
from ._serialize import dumps_17g
from .deadline import Deadline
from .design import (
    DelayGiven,
    RootGiven,
    admissibility_contour,
    solve_control_mid,
    solve_generic_crrid,
    solve_generic_mid,
)
from .errors import DelayDesignError, InvalidInput
from .quasipoly import ComplexRectangle, Quasipolynomial
from .rootfinder import find_roots, sensitivity_sweep
from .simulate import initial_from_dict, simulate

__all__ = ["create_app", "app"]

_STATUS_BY_CODE = {
    "bad_input": 422,
    "singular_system": 422,
    "no_admissible_point": 422,
    "contour_too_close": 422,
    "root_on_boundary": 422,
    "invalid_perturbation": 422,
    "blow_up": 422,
    "deadline_exceeded": 408,
    "internal": 500,
}

MAX_TRANSPORT_SAMPLES = 100_000


def _json(payload, status: int = 200) -> Response:
    return Response(
        content=dumps_17g(payload),
        status_code=status,
        media_type="application/json",
    )


def _error(status: int, code: str, message: str, details=None) -> Response:
    body = {"code": code, "message": message}
    if details is not None:
        body["details"] = details
    return _json(body, status)


class _Body(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GenericMidBody(_Body):
    n: int
    m: int
    tau: float
    s0: float
    deadline_ms: Optional[float] = None


class GenericCrridBody(_Body):
    n: int
    m: int
    tau: float
    roots: List[float]
    deadline_ms: Optional[float] = None


class ControlMidBody(_Body):
    n: int
    m: int
    a: List[float]
    given: dict
    search_min: Optional[float] = None
    search_max: Optional[float] = None
    deadline_ms: Optional[float] = None


class AdmissibilityBody(_Body):
    n: int
    m: int
    a: List[float]
    s0_min: float
    tau_max: float
    grid: Optional[List[int]] = None
    deadline_ms: Optional[float] = None


class QuasiBody(_Body):
    n: int
    m: int
    a: List[float]
    b: List[float]
    tau: float


class RectBody(_Body):
    x_min: float
    x_max: float
    y_min: float
    y_max: float


class RootsBody(_Body):
    q: QuasiBody
    rect: RectBody
    deadline_ms: Optional[float] = None


class SensitivityBody(_Body):
    q: QuasiBody
    rect: RectBody
    epsilon: float
    K: int
    deadline_ms: Optional[float] = None


class SimulateBody(_Body):
    q: QuasiBody
    ic: dict
    T: float
    steps: int = 1000
    deadline_ms: Optional[float] = None


def _deadline_of(ms: Optional[float]) -> Optional[Deadline]:
    if ms is None:
        return None
    try:
        ms = float(ms)
    except (TypeError, ValueError) as exc:
        raise InvalidInput("deadline_ms must be a number") from exc
    if not ms > 0:
        raise InvalidInput("deadline_ms must be positive")
    return Deadline.from_ms(ms)


def _quasi(body: QuasiBody) -> Quasipolynomial:
    return Quasipolynomial.from_dict(body.model_dump())


def _rect(body: RectBody) -> ComplexRectangle:
    return ComplexRectangle.from_dict(body.model_dump())


def _given(payload: dict):
    if not isinstance(payload, dict):
        raise InvalidInput("given must be an object")
    if set(payload) == {"tau"}:
        return DelayGiven(payload["tau"])
    if set(payload) == {"s0"}:
        return RootGiven(payload["s0"])
    raise InvalidInput("given must contain exactly one of: tau, s0")


def create_app(
    static_dir: Optional[str] = None,
    thread_budget: int = 1,
    default_grid=(400, 400),
) -> FastAPI:
    """Application factory.

    thread_budget caps per-request worker-pool parallelism in the core;
    static_dir, when given, is served at / (the bundled browser UI).
    """
    app = FastAPI(title="delaydesign", version="0.1.0", docs_url=None, redoc_url=None)
    workers = max(1, int(thread_budget))

    @app.exception_handler(RequestValidationError)
    async def _on_validation(request: Request, exc: RequestValidationError):
        errors = exc.errors()
        if any(e.get("type") == "json_invalid" for e in errors):
            return _error(400, "bad_input", "malformed JSON body")
        parts = []
        for e in errors:
            loc = ".".join(str(p) for p in e.get("loc", ()) if p != "body")
            parts.append(f"{loc}: {e.get('msg', 'invalid')}" if loc else e.get("msg", "invalid"))
        return _error(422, "bad_input", "; ".join(parts))

    @app.exception_handler(DelayDesignError)
    async def _on_domain(request: Request, exc: DelayDesignError):
        status = _STATUS_BY_CODE.get(exc.code, 500)
        details = None
        partial = getattr(exc, "partial", None)
        if partial is not None:
            details = {"partial": partial}
        cond = getattr(exc, "condition_estimate", None)
        if cond is not None:
            details = {"condition_estimate": cond}
        t = getattr(exc, "time", None)
        if t is not None:
            details = {"time": t}
        return _error(status, exc.code, str(exc), details)

    @app.exception_handler(Exception)
    async def _on_internal(request: Request, exc: Exception):
        return _error(500, "internal", "internal error")

    @app.get("/health")
    def health() -> Response:
        return _json(
            {"status": "ok", "version": "0.1.0", "backend": backend_name()}
        )

    @app.post("/design/generic-mid")
    def design_generic_mid(body: GenericMidBody) -> Response:
        deadline = _deadline_of(body.deadline_ms)
        if deadline is not None:
            deadline.check(stage="design")
        res = solve_generic_mid(body.n, body.m, body.tau, body.s0)
        return _json(res.to_dict())

    @app.post("/design/generic-crrid")
    def design_generic_crrid(body: GenericCrridBody) -> Response:
        deadline = _deadline_of(body.deadline_ms)
        if deadline is not None:
            deadline.check(stage="design")
        # order-insensitive on the wire: re-sorted non-increasing here
        res = solve_generic_crrid(body.n, body.m, body.tau, sorted(body.roots, reverse=True))
        return _json(res.to_dict())

    @app.post("/design/control-mid")
    def design_control_mid(body: ControlMidBody) -> Response:
        results = solve_control_mid(
            body.a,
            body.n,
            body.m,
            _given(body.given),
            search_min=body.search_min,
            search_max=body.search_max,
            cancel=_deadline_of(body.deadline_ms),
        )
        return _json([r.to_dict() for r in results])

    @app.post("/admissibility")
    def admissibility(body: AdmissibilityBody) -> Response:
        grid = body.grid if body.grid is not None else list(default_grid)
        if len(grid) != 2:
            raise InvalidInput("grid must be [n_s0, n_tau]")
        contour = admissibility_contour(
            body.a,
            body.n,
            body.m,
            body.s0_min,
            body.tau_max,
            (grid[0], grid[1]),
            workers=workers,
            cancel=_deadline_of(body.deadline_ms),
        )
        return _json(contour.to_dict())

    @app.post("/roots")
    def roots(body: RootsBody) -> Response:
        rs = find_roots(
            _quasi(body.q),
            _rect(body.rect),
            workers=workers,
            cancel=_deadline_of(body.deadline_ms),
        )
        return _json(rs.to_dict())

    @app.post("/sensitivity")
    def sensitivity(body: SensitivityBody) -> Response:
        sweep = sensitivity_sweep(
            _quasi(body.q),
            body.epsilon,
            body.K,
            _rect(body.rect),
            workers=workers,
            cancel=_deadline_of(body.deadline_ms),
        )
        return _json(sweep.to_dict())

    @app.post("/simulate")
    def simulate_endpoint(body: SimulateBody) -> Response:
        traj = simulate(
            _quasi(body.q),
            initial_from_dict(body.ic),
            body.T,
            body.steps,
            cancel=_deadline_of(body.deadline_ms),
        )
        # long runs are computed in full but thinned for transport
        return _json(traj.decimated(MAX_TRANSPORT_SAMPLES).to_dict())

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


app = create_app()
