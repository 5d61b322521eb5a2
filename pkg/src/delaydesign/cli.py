"""Batch command-line front end over the design/root-finding/simulation core.

Every subcommand accepts either inline flags or ``--input file.json`` whose
body matches the HTTP service schema, and emits exactly the document the
service would return for the equivalent request (JSON by default, CSV for
tabular artifacts).  Exit status: 0 success, 2 bad input, 3 domain error.

Coefficient list flags are comma-separated, lowest degree first, matching
the JSON schema ordering everywhere.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Optional

from ._serialize import dumps_17g
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
from .rootfinder import certify_dominance, find_roots, sensitivity_sweep
from .simulate import initial_from_dict, simulate

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_DOMAIN = 3

MAX_TRANSPORT_SAMPLES = 100_000

_CSV_CAPABLE = {"roots", "sensitivity", "simulate", "admissibility"}


def _fmt(x: float) -> str:
    return "%.17g" % float(x)


def _float_list(text: str, what: str) -> list:
    if text.strip() == "":
        return []
    try:
        return [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise InvalidInput(f"{what} must be a comma-separated list of numbers") from exc


def _int_list(text: str, what: str) -> list:
    try:
        return [int(v) for v in text.split(",")]
    except ValueError as exc:
        raise InvalidInput(f"{what} must be a comma-separated list of integers") from exc


def _load_input(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            body = json.load(fh)
    except OSError as exc:
        raise InvalidInput(f"cannot read input file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"input file is not valid JSON: {exc}") from exc
    if not isinstance(body, dict):
        raise InvalidInput("input file must hold a JSON object")
    return body


def _require(body: dict, *fields):
    missing = [f for f in fields if f not in body]
    if missing:
        raise InvalidInput(f"missing fields: {', '.join(missing)}")


def _int_field(body, name):
    v = body[name]
    if isinstance(v, bool) or not isinstance(v, int):
        raise InvalidInput(f"{name} must be an integer")
    return v


def _quasi_from_body(body: dict) -> Quasipolynomial:
    _require(body, "q")
    return Quasipolynomial.from_dict(body["q"])


def _rect_from_body(body: dict) -> ComplexRectangle:
    _require(body, "rect")
    return ComplexRectangle.from_dict(body["rect"])


def _given_from_body(payload) -> object:
    if not isinstance(payload, dict):
        raise InvalidInput("given must be an object")
    if set(payload) == {"tau"}:
        return DelayGiven(payload["tau"])
    if set(payload) == {"s0"}:
        return RootGiven(payload["s0"])
    raise InvalidInput("given must contain exactly one of: tau, s0")


# ---------------------------------------------------------------------------
# Subcommand bodies (shared by --input and inline flags)
# ---------------------------------------------------------------------------


def _run_generic_mid(body: dict, workers: int):
    _require(body, "n", "m", "tau", "s0")
    res = solve_generic_mid(_int_field(body, "n"), _int_field(body, "m"), body["tau"], body["s0"])
    return res.to_dict()


def _run_generic_crrid(body: dict, workers: int):
    _require(body, "n", "m", "tau", "roots")
    roots = body["roots"]
    if not isinstance(roots, (list, tuple)):
        raise InvalidInput("roots must be a list")
    res = solve_generic_crrid(
        _int_field(body, "n"), _int_field(body, "m"), body["tau"],
        sorted((float(r) for r in roots), reverse=True),
    )
    return res.to_dict()


def _run_control_mid(body: dict, workers: int):
    _require(body, "n", "m", "a", "given")
    results = solve_control_mid(
        body["a"],
        _int_field(body, "n"),
        _int_field(body, "m"),
        _given_from_body(body["given"]),
        search_min=body.get("search_min"),
        search_max=body.get("search_max"),
    )
    return [r.to_dict() for r in results]


def _run_admissibility(body: dict, workers: int):
    _require(body, "n", "m", "a", "s0_min", "tau_max")
    grid = body.get("grid", [400, 400])
    if not (isinstance(grid, (list, tuple)) and len(grid) == 2):
        raise InvalidInput("grid must be [n_s0, n_tau]")
    contour = admissibility_contour(
        body["a"],
        _int_field(body, "n"),
        _int_field(body, "m"),
        body["s0_min"],
        body["tau_max"],
        (grid[0], grid[1]),
        workers=workers,
    )
    return contour.to_dict()


def _run_roots(body: dict, workers: int):
    rs = find_roots(_quasi_from_body(body), _rect_from_body(body), workers=workers)
    return rs.to_dict()


def _run_sensitivity(body: dict, workers: int):
    _require(body, "epsilon", "K")
    sweep = sensitivity_sweep(
        _quasi_from_body(body),
        body["epsilon"],
        _int_field(body, "K"),
        _rect_from_body(body),
        workers=workers,
    )
    return sweep.to_dict()


def _run_simulate(body: dict, workers: int):
    _require(body, "ic", "T")
    steps = body.get("steps", 1000)
    if isinstance(steps, bool) or not isinstance(steps, int):
        raise InvalidInput("steps must be an integer")
    traj = simulate(_quasi_from_body(body), initial_from_dict(body["ic"]), body["T"], steps)
    return traj.decimated(MAX_TRANSPORT_SAMPLES).to_dict()


def _run_report(body: dict, workers: int):
    """Design + spectrum + dominance + trajectory in one archival document."""
    _require(body, "mode")
    mode = body["mode"]
    if mode == "generic-mid":
        design = _run_generic_mid(body, workers)
        s_target = float(body["s0"])
    elif mode == "generic-crrid":
        design = _run_generic_crrid(body, workers)
        s_target = max(float(r) for r in body["roots"])
    elif mode == "control-mid":
        designs = _run_control_mid(body, workers)
        design = designs[0]
        given = body["given"]
        s_target = (
            float(given["s0"]) if "s0" in given else float(design["solved_parameter"])
        )
    else:
        raise InvalidInput(
            "mode must be one of: generic-mid, generic-crrid, control-mid"
        )
    q = Quasipolynomial.from_dict(design["quasipolynomial"])
    doc = {"mode": mode, "design": design}
    if "rect" in body:
        rs = find_roots(q, ComplexRectangle.from_dict(body["rect"]), workers=workers)
        doc["roots"] = rs.to_dict()
        doc["dominance"] = certify_dominance(rs, s_target).to_dict()
    if "ic" in body or "T" in body:
        _require(body, "ic", "T")
        steps = body.get("steps", 1000)
        if isinstance(steps, bool) or not isinstance(steps, int):
            raise InvalidInput("steps must be an integer")
        traj = simulate(q, initial_from_dict(body["ic"]), body["T"], steps)
        doc["trajectory"] = traj.decimated(MAX_TRANSPORT_SAMPLES).to_dict()
    return doc


_RUNNERS = {
    "generic-mid": _run_generic_mid,
    "generic-crrid": _run_generic_crrid,
    "control-mid": _run_control_mid,
    "admissibility": _run_admissibility,
    "roots": _run_roots,
    "sensitivity": _run_sensitivity,
    "simulate": _run_simulate,
    "report": _run_report,
}


# ---------------------------------------------------------------------------
# CSV rendering
# ---------------------------------------------------------------------------


def _to_csv(subcommand: str, doc) -> str:
    lines = []
    if subcommand == "roots":
        lines.append("re,im,multiplicity,residual")
        for re_, im_, mult, res in doc["roots"]:
            lines.append(f"{_fmt(re_)},{_fmt(im_)},{mult},{_fmt(res)}")
    elif subcommand == "sensitivity":
        lines.append("k,re,im,multiplicity")
        for k in sorted(doc["per_k"], key=int):
            for re_, im_, mult, _res in doc["per_k"][k]["roots"]:
                lines.append(f"{int(k)},{_fmt(re_)},{_fmt(im_)},{mult}")
    elif subcommand == "simulate":
        lines.append("t,y")
        for t, y in zip(doc["t"], doc["y"]):
            lines.append(f"{_fmt(t)},{_fmt(y)}")
    elif subcommand == "admissibility":
        lines.append("polyline,s0,tau")
        for i, poly in enumerate(doc["polylines"]):
            for s0, tau in poly:
                lines.append(f"{i},{_fmt(s0)},{_fmt(tau)}")
    else:
        raise InvalidInput(
            "csv format is only available for: roots, sensitivity, simulate, "
            "admissibility"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    # let values like "-1,1,-1,1" or "-2.5" pass as arguments, not flags
    # (argparse sets the matcher per instance, so override it there)
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = re.compile(r"^-[\d.]")


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--input", help="JSON file holding the request body")
    p.add_argument("--output", help="write the document here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--threads", type=int, default=1, help="core worker-pool size")


def _build_parser() -> argparse.ArgumentParser:
    ap = _Parser(
        prog="delaydesign",
        description="delayed-feedback design, spectrum verification, and "
        "simulation for single-delay linear differential equations",
    )
    sub = ap.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("generic-mid", help="place a maximal-multiplicity real root")
    _add_common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--tau", type=float)
    p.add_argument("--s0", type=float)

    p = sub.add_parser("generic-crrid", help="place a chain of coexisting real roots")
    _add_common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--tau", type=float)
    p.add_argument("--roots", help="comma-separated real roots")

    p = sub.add_parser("control-mid", help="delayed output feedback for a given plant")
    _add_common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--a", help="plant coefficients a0,...,a(n-1)")
    p.add_argument("--tau", type=float, help="given delay (solves for s0)")
    p.add_argument("--s0", type=float, help="given root (solves for tau)")
    p.add_argument("--search-min", type=float, dest="search_min")
    p.add_argument("--search-max", type=float, dest="search_max")

    p = sub.add_parser("admissibility", help="zero contour of the dominance constraint")
    _add_common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--a", help="plant coefficients a0,...,a(n-1)")
    p.add_argument("--s0-min", type=float, dest="s0_min")
    p.add_argument("--tau-max", type=float, dest="tau_max")
    p.add_argument("--grid", help="n_s0,n_tau (default 400,400)")

    p = sub.add_parser("roots", help="all characteristic roots in a rectangle")
    _add_common(p)
    _add_quasi_flags(p)
    p.add_argument("--rect", help="x_min,x_max,y_min,y_max")

    p = sub.add_parser("sensitivity", help="spectra under delay perturbations")
    _add_common(p)
    _add_quasi_flags(p)
    p.add_argument("--rect", help="x_min,x_max,y_min,y_max")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--K", type=int)

    p = sub.add_parser("simulate", help="explicit-Euler trajectory")
    _add_common(p)
    _add_quasi_flags(p)
    p.add_argument("--ic", help='initial condition JSON, e.g. {"constant":1}')
    p.add_argument("--T", type=float, help="simulation horizon")
    p.add_argument("--steps", type=int, default=1000, help="steps per delay")

    p = sub.add_parser("report", help="design + roots + simulation bundle")
    _add_common(p)
    p.add_argument("--mode", choices=("generic-mid", "generic-crrid", "control-mid"))
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--a", help="plant coefficients (control-mid)")
    p.add_argument("--tau", type=float)
    p.add_argument("--s0", type=float)
    p.add_argument("--roots", help="comma-separated real roots (generic-crrid)")
    p.add_argument("--rect", help="x_min,x_max,y_min,y_max")
    p.add_argument("--ic", help="initial condition JSON")
    p.add_argument("--T", type=float)
    p.add_argument("--steps", type=int, default=1000)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--static", help="directory with the browser UI bundle")
    p.add_argument("--default-grid", default="400,400", dest="default_grid")

    return ap


def _add_quasi_flags(p: argparse.ArgumentParser):
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--a", help="non-delayed coefficients a0,...,a(n-1)")
    p.add_argument("--b", help="delayed coefficients b0,...,bm")
    p.add_argument("--tau", type=float)


def _body_from_flags(args: argparse.Namespace) -> dict:
    """Rebuild the service-schema body from inline flags."""
    sc = args.subcommand
    body: dict = {}

    def put(name, value):
        if value is not None:
            body[name] = value

    if sc in ("roots", "sensitivity", "simulate"):
        for f in ("n", "m", "a", "b", "tau"):
            if getattr(args, f, None) is None:
                raise InvalidInput(f"--{f} is required (or use --input)")
        body["q"] = {
            "n": args.n,
            "m": args.m,
            "a": _float_list(args.a, "--a"),
            "b": _float_list(args.b, "--b"),
            "tau": args.tau,
        }
        if getattr(args, "rect", None) is not None:
            vals = _float_list(args.rect, "--rect")
            if len(vals) != 4:
                raise InvalidInput("--rect needs x_min,x_max,y_min,y_max")
            body["rect"] = dict(zip(("x_min", "x_max", "y_min", "y_max"), vals))
        if sc == "sensitivity":
            put("epsilon", args.epsilon)
            put("K", args.K)
        if sc == "simulate":
            if args.ic is not None:
                try:
                    body["ic"] = json.loads(args.ic)
                except json.JSONDecodeError as exc:
                    raise InvalidInput(f"--ic is not valid JSON: {exc}") from exc
            put("T", args.T)
            body["steps"] = args.steps
        return body

    if sc in ("generic-mid", "generic-crrid"):
        put("n", args.n)
        put("m", args.m)
        put("tau", args.tau)
        if sc == "generic-mid":
            put("s0", args.s0)
        elif args.roots is not None:
            body["roots"] = _float_list(args.roots, "--roots")
        return body

    if sc == "control-mid":
        put("n", args.n)
        put("m", args.m)
        if args.a is not None:
            body["a"] = _float_list(args.a, "--a")
        if args.tau is not None and args.s0 is not None:
            raise InvalidInput("give exactly one of --tau or --s0")
        if args.tau is not None:
            body["given"] = {"tau": args.tau}
        elif args.s0 is not None:
            body["given"] = {"s0": args.s0}
        put("search_min", args.search_min)
        put("search_max", args.search_max)
        return body

    if sc == "admissibility":
        put("n", args.n)
        put("m", args.m)
        if args.a is not None:
            body["a"] = _float_list(args.a, "--a")
        put("s0_min", args.s0_min)
        put("tau_max", args.tau_max)
        if args.grid is not None:
            body["grid"] = _int_list(args.grid, "--grid")
        return body

    if sc == "report":
        put("mode", args.mode)
        put("n", args.n)
        put("m", args.m)
        if args.a is not None:
            body["a"] = _float_list(args.a, "--a")
        put("tau", args.tau)
        put("s0", args.s0)
        if args.roots is not None:
            body["roots"] = _float_list(args.roots, "--roots")
        if args.tau is not None and args.mode == "control-mid":
            body["given"] = {"tau": args.tau}
        elif args.s0 is not None and args.mode == "control-mid":
            body["given"] = {"s0": args.s0}
        if args.rect is not None:
            vals = _float_list(args.rect, "--rect")
            if len(vals) != 4:
                raise InvalidInput("--rect needs x_min,x_max,y_min,y_max")
            body["rect"] = dict(zip(("x_min", "x_max", "y_min", "y_max"), vals))
        if args.ic is not None:
            try:
                body["ic"] = json.loads(args.ic)
            except json.JSONDecodeError as exc:
                raise InvalidInput(f"--ic is not valid JSON: {exc}") from exc
        put("T", args.T)
        body["steps"] = args.steps
        return body

    raise InvalidInput(f"unknown subcommand {sc!r}")


def _emit(text: str, path: Optional[str]):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    grid = _int_list(args.default_grid, "--default-grid")
    if len(grid) != 2:
        raise InvalidInput("--default-grid needs two integers")
    app = create_app(
        static_dir=args.static,
        thread_budget=args.threads,
        default_grid=(grid[0], grid[1]),
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.subcommand == "serve":
            return _serve(args)
        if args.input is not None:
            body = _load_input(args.input)
        else:
            body = _body_from_flags(args)
        workers = max(1, args.threads)
        doc = _RUNNERS[args.subcommand](body, workers)
        if args.format == "csv":
            text = _to_csv(args.subcommand, doc)
        else:
            text = dumps_17g(doc) + "\n"
        _emit(text, args.output)
        return EXIT_OK
    except InvalidInput as exc:
        print(f"error ({exc.code}): {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except DelayDesignError as exc:
        print(f"error ({exc.code}): {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
