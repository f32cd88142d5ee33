"""Command-line client for the service handlers.

Every subcommand builds the corresponding request model, invokes the
handler in-process and emits a run report

    {command, inputs, outputs, pass, tolerance, wall_ms}

as JSON (or CSV with --format csv).  Exit codes: 0 when checks pass,
1 when a numeric check exceeds its tolerance, 2 on invalid input or usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from pathlib import Path
from typing import Optional

from pydantic import ValidationError

from .errors import (
    BudgetExceededError,
    InconsistentWeightsError,
    InvalidAngleError,
    InvalidModulusError,
    LatticeFormatError,
    NotFlippableError,
    SingularWeightError,
    StringRoutingError,
    TriplePointError,
)
from .geometry import lattice_from_dict, load_lattice
from .geometry.svg import export_svg
from .service import handlers
from .service.models import (
    EnumerateRequest,
    LatticeBuildRequest,
    SolveRequest,
    StarTriangleRequest,
    VerifyRequest,
    WeightsRequest,
)

_USAGE_ERRORS = (
    InvalidAngleError,
    InvalidModulusError,
    InconsistentWeightsError,
    LatticeFormatError,
    NotFlippableError,
    TriplePointError,
    StringRoutingError,
    SingularWeightError,
    BudgetExceededError,
    ValidationError,
    ValueError,
)


def _angle(value: float, deg: bool) -> float:
    return math.radians(value) if deg else value


def _floats(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _ints(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _report(command: str, inputs: dict, outputs: dict, passed: bool,
            tolerance: Optional[float], started: float) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "pass": bool(passed),
        "tolerance": tolerance,
        "wall_ms": round(1000.0 * (time.perf_counter() - started), 3),
    }


def _emit(report: dict, fmt: str, out: Optional[str]) -> None:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["key", "value"])
        for key, value in report.items():
            if key == "outputs":
                continue
            writer.writerow([key, json.dumps(value)])
        for key, value in report["outputs"].items():
            if isinstance(value, list) and value and isinstance(value[0], list):
                for i, row in enumerate(value):
                    writer.writerow([f"{key}[{i}]"] + list(row))
            else:
                writer.writerow([key, json.dumps(value)])
        text = buf.getvalue()
    else:
        text = json.dumps(report, indent=1)
    if out:
        Path(out).write_text(text)
    else:
        print(text)


def _apply_config(
    args: argparse.Namespace, parser: argparse.ArgumentParser, argv: list[str]
) -> None:
    """Fill unset flags from a key=value config file; explicit flags win."""
    if not getattr(args, "config", None):
        return
    try:
        lines = Path(args.config).read_text().splitlines()
    except OSError as exc:
        parser.error(f"cannot read config file: {exc}")
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#") or "=" not in line:
            continue
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not hasattr(args, key) or f"--{key.replace('_', '-')}" in argv:
            continue
        current = getattr(args, key)
        try:
            if isinstance(current, bool):
                setattr(args, key, value.strip().lower() in ("1", "true", "yes"))
            elif isinstance(current, int):
                setattr(args, key, int(value))
            elif isinstance(current, float):
                setattr(args, key, float(value))
            elif current is None or isinstance(current, str):
                setattr(args, key, value.strip())
        except ValueError:
            parser.error(f"bad config value for {key}: {value!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS,
                        help="key=value config file; flags win")
    common.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS,
                        help="write the report to a file instead of stdout")
    common.add_argument("--deg", action="store_true", default=argparse.SUPPRESS,
                        help="angles are given in degrees")
    parser = argparse.ArgumentParser(
        prog="znpf",
        description="Discretely holomorphic parafermions for Z_N clock models.",
    )
    parser.add_argument("--config", help="key=value config file; flags win")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", help="write the report to a file instead of stdout")
    parser.add_argument("--deg", action="store_true", help="angles are given in degrees")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("weights", parents=[common], help="critical couplings for an opening angle")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)

    p = sub.add_parser("verify", parents=[common], help="face residuals of the contour identity")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--weights", help="free couplings x_1,..,x_(N//2); default critical")
    p.add_argument("--anti", action="store_true", help="check the antiholomorphic companion")
    p.add_argument("--tol", type=float, default=1e-10)

    p = sub.add_parser("solve", parents=[common], help="solve the holomorphicity conditions for couplings")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--single-orientation", action="store_true",
                   help="diagnostic: impose only the alpha-face conditions")

    p = sub.add_parser("star-triangle", parents=[common], help="verify the star-triangle relation")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alphas", required=True, help="three angles a1,a2,a3 summing to pi")
    p.add_argument("--perturb", type=float, default=0.0)
    p.add_argument("--tol", type=float, default=1e-10)

    p = sub.add_parser("lattice", parents=[common], help="build or load a covering lattice")
    p.add_argument("action", choices=("build", "load"))
    p.add_argument("--type", dest="kind",
                   choices=("square", "tri", "hex", "multigrid"), default="square")
    p.add_argument("--rows", type=int, default=3)
    p.add_argument("--cols", type=int, default=3)
    p.add_argument("--size", type=int, default=2)
    p.add_argument("--alpha", type=float, default=math.pi / 2)
    p.add_argument("--alpha2", type=float)
    p.add_argument("--grid-angles", help="multigrid directions, comma separated")
    p.add_argument("--grid-offsets", help="multigrid offsets, comma separated")
    p.add_argument("--extent", type=int, default=2)
    p.add_argument("--n", type=int, help="assign critical weights for modulus n")
    p.add_argument("--file", help="lattice JSON to load")
    p.add_argument("--svg", help="write an SVG rendering")
    p.add_argument("--save", help="write the lattice JSON")

    p = sub.add_parser("enumerate", parents=[common], help="exact enumeration checks on a lattice file")
    p.add_argument("--lattice", required=True, help="lattice JSON file")
    p.add_argument("--check", required=True,
                   choices=("partition", "correlator", "face-sum", "per-config",
                            "path-independence"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--face", type=int)
    p.add_argument("--anchor", type=int)
    p.add_argument("--path-a", help="comma separated dual ids")
    p.add_argument("--path-b", help="comma separated dual ids")
    p.add_argument("--spectator", action="append", default=[],
                   help="vertex:power insertion, repeatable")
    p.add_argument("--string", action="append", default=[],
                   help="sector:d0,d1,.. disorder string, repeatable")
    p.add_argument("--perturb-x1", type=float, default=0.0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--cap", type=int, default=10**7)
    p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("serve", parents=[common], help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _run(args: argparse.Namespace) -> tuple[dict, bool]:
    started = time.perf_counter()
    if args.command == "weights":
        req = WeightsRequest(n=args.n, alpha=_angle(args.alpha, args.deg))
        resp = handlers.handle_weights(req)
        report = _report("weights", req.model_dump(), resp.model_dump(), True, None, started)
        return report, True

    if args.command == "verify":
        req = VerifyRequest(
            n=args.n, m=args.m, alpha=_angle(args.alpha, args.deg),
            weights=_floats(args.weights) if args.weights else None,
            anti=args.anti, tol=args.tol,
        )
        resp = handlers.handle_verify(req)
        report = _report("verify", req.model_dump(), resp.model_dump(),
                         resp.passed, args.tol, started)
        return report, resp.passed

    if args.command == "solve":
        req = SolveRequest(
            n=args.n, m=args.m, alpha=_angle(args.alpha, args.deg),
            both_orientations=not args.single_orientation,
        )
        resp = handlers.handle_solve(req)
        report = _report("solve", req.model_dump(), resp.model_dump(),
                         resp.solvable, None, started)
        return report, resp.solvable

    if args.command == "star-triangle":
        alphas = [_angle(a, args.deg) for a in _floats(args.alphas)]
        req = StarTriangleRequest(n=args.n, alphas=alphas,
                                  perturb=args.perturb, tol=args.tol)
        resp = handlers.handle_star_triangle(req)
        report = _report("star-triangle", req.model_dump(), resp.model_dump(),
                         resp.passed, args.tol, started)
        return report, resp.passed

    if args.command == "lattice":
        if args.action == "load":
            if not args.file:
                raise LatticeFormatError("lattice load requires --file")
            lat = load_lattice(args.file)
            kind = "loaded"
            resp_dict = {
                "kind": kind,
                "vertices": len(lat.vertices),
                "primal_vertices": len(lat.primal_ids),
                "faces": len(lat.faces),
                "alphas": sorted({round(f.alpha, 12) for f in lat.faces}),
                "boundary": len(lat.boundary),
                "lattice": None,
            }
        else:
            kind_map = {"square": "square", "tri": "triangular",
                        "hex": "honeycomb", "multigrid": "multigrid"}
            req = LatticeBuildRequest(
                kind=kind_map[args.kind],
                rows=args.rows, cols=args.cols, size=args.size,
                alpha=_angle(args.alpha, args.deg),
                alpha2=_angle(args.alpha2, args.deg) if args.alpha2 is not None else None,
                angles=[_angle(a, args.deg) for a in _floats(args.grid_angles)]
                if args.grid_angles else None,
                offsets=_floats(args.grid_offsets) if args.grid_offsets else None,
                extent=args.extent, n=args.n,
            )
            resp = handlers.handle_lattice_build(req)
            lat = lattice_from_dict(resp.lattice)
            resp_dict = resp.model_dump()
        if args.svg:
            export_svg(lat, args.svg)
        if args.save and args.action == "build":
            Path(args.save).write_text(json.dumps(resp_dict["lattice"], indent=1))
        outputs = dict(resp_dict)
        outputs.pop("lattice", None)  # keep the report small; --save has the data
        report = _report("lattice", {"action": args.action}, outputs, True, None, started)
        return report, True

    if args.command == "enumerate":
        data = json.loads(Path(args.lattice).read_text())
        spectators = []
        for spec in args.spectator:
            vid, _, power = spec.partition(":")
            spectators.append((int(vid), int(power)))
        strings = []
        for spec in args.string:
            sector, _, path = spec.partition(":")
            strings.append({"sector": int(sector), "path": _ints(path)})
        req = EnumerateRequest(
            lattice=data, check=args.check, n=args.n, m=args.m,
            face=args.face, anchor=args.anchor,
            path_a=_ints(args.path_a) if args.path_a else None,
            path_b=_ints(args.path_b) if args.path_b else None,
            spectators=spectators, strings=strings, perturb_x1=args.perturb_x1,
            tol=args.tol, cap=args.cap, workers=args.threads,
        )
        resp = handlers.handle_enumerate(req)
        inputs = req.model_dump()
        inputs["lattice"] = f"<{args.lattice}>"
        report = _report("enumerate", inputs, resp.model_dump(),
                         resp.passed, args.tol, started)
        return report, resp.passed

    if args.command == "serve":
        import uvicorn

        from .service.app import app

        uvicorn.run(app, host=args.host, port=args.port)
        return _report("serve", {}, {}, True, None, started), True

    raise ValueError(f"unknown command {args.command!r}")


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    effective = list(sys.argv[1:]) if argv is None else list(argv)
    args = parser.parse_args(effective)
    _apply_config(args, parser, effective)
    try:
        report, passed = _run(args)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(report, args.format, args.out)
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())
