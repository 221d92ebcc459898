"""Command-line entry point: ``polsqueeze {report,fig,sweep,verify,measure,amplify}``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numeric
contract failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import __version__
from .errors import ConsistencyError, CutoffExhausted, DomainError
from .polarization import PoincareVector, PolarizationAngles, poincare_from_angles
from .scan import (
    DEFAULT_SEED, VERIFY_TOL, SweepSpec, amplify_dump, direction_report, figure_spec,
    measure_rows, run_verify, s2_sweep, sphere_grid,
)

SCHEMA = "polsqueeze/1"
EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


def fmt_number(x) -> str:
    """Shortest round-trip decimal; ``inf``/``-inf``/``nan`` as literal tokens."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if x is None:
        return "n/a"
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, PoincareVector):
        return [obj.m1, obj.m2, obj.m3]
    if isinstance(obj, float) and not math.isfinite(obj):
        return fmt_number(obj)
    if hasattr(obj, "item"):
        return _jsonable(obj.item())
    return obj


def dump_json(meta: dict, body: dict) -> str:
    doc = {"meta": meta}
    doc.update(body)
    return json.dumps(_jsonable(doc), indent=2, allow_nan=False) + "\n"


def dump_csv(meta: dict, header: list[str], rows: list[list], footer: list[list] = ()) -> str:
    buf = io.StringIO()
    for k, v in meta.items():
        buf.write(f"# {k}: {json.dumps(_jsonable(v), sort_keys=True)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in list(rows) + list(footer):
        w.writerow([c if isinstance(c, str) else fmt_number(c) for c in row])
    return buf.getvalue()


def _meta(args, **extra) -> dict:
    flags = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out")}
    meta = {"schema": SCHEMA, "version": __version__, "command": args.command, "flags": flags}
    meta.update(extra)
    return meta


def _parse_direction(text: str):
    if text.strip().lower() == "m":
        return "m"
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"direction must be 'x,y,z' or 'm', got {text!r}")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("direction needs three components")
    return parts


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        a, b = (int(p) for p in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 20x40, got {text!r}")
    if a < 1 or b < 1:
        raise argparse.ArgumentTypeError("grid dimensions must be positive")
    return a, b


def _non_negative_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _gt(text: str) -> float:
    v = float(text)
    if not 0.0 <= v <= 2.0:
        raise argparse.ArgumentTypeError("gt must lie in [0, 2]")
    return v


def cmd_report(args) -> tuple[str, int]:
    angles = PolarizationAngles(args.theta, args.phi)
    directions = []
    for d in args.direction or []:
        directions.append(poincare_from_angles(angles) if d == "m" else PoincareVector.from_vector(d))
    if args.grid or not directions:
        directions += sphere_grid(*(args.grid or (20, 40)))
    body = direction_report(args.n, angles, directions)
    meta = _meta(args, tolerances={"squeeze_eps": 1e-12})
    if args.format == "json":
        return dump_json(meta, body), EXIT_OK
    header = ["n1", "n2", "n3", "n_dot_m", "variance", "bound", "factor", "degree", "squeezed",
              "undefined", "chirkin", "heersink", "luis", "general"]
    rows = [[*r["n"], r["n_dot_m"], r["variance"], r["bound"], r["factor"], r["degree"], r["squeezed"],
             r["undefined"], *(r["criteria"][k]["satisfied"] for k in ("Chirkin", "Heersink", "Luis", "General"))]
            for r in body["rows"]]
    meta["summary"] = body["summary"]
    meta["vacuum"] = body["state"]["vacuum"]
    return dump_csv(meta, header, rows), EXIT_OK


def _sweep_output(args, spec: SweepSpec) -> tuple[str, int]:
    rows = s2_sweep(spec)
    cols = {"printed31": ["factor_closed_form_printed31"],
            "printed32": ["factor_closed_form_variant32"],
            "both": ["factor_closed_form_printed31", "factor_closed_form_variant32"]}[args.variant]
    header = [spec.var, *cols, "factor_oracle"]
    meta = _meta(args, spec={"N": spec.n, "theta": spec.theta, "phi": spec.phi, "gt": spec.gt,
                             "var": spec.var, "lo": spec.lo, "hi": spec.hi, "points": spec.points})
    if args.format == "json":
        return dump_json(meta, {"rows": [{k: r[k] for k in header} for r in rows]}), EXIT_OK
    return dump_csv(meta, header, [[r[k] for k in header] for r in rows]), EXIT_OK


def cmd_fig(args) -> tuple[str, int]:
    return _sweep_output(args, figure_spec(args.figure, args.n, args.gt, args.points))


def cmd_sweep(args) -> tuple[str, int]:
    spec = SweepSpec(args.n, args.theta, args.phi, args.gt, args.var, args.lo, args.hi,
                     args.points, args.format)
    return _sweep_output(args, spec)


def cmd_verify(args) -> tuple[str, int]:
    rep = run_verify(args.seed, args.samples)
    code = rep.exit_code()
    meta = _meta(args, seed=args.seed, tolerances={"verify": VERIFY_TOL})
    header = ["group", "quantity", "params", "printed", "corrected", "oracle",
              "diff_printed", "diff_corrected", "error"]
    rows = [[r.group, r.quantity, json.dumps(_jsonable(r.params), sort_keys=True), r.printed, r.corrected,
             r.oracle, r.diff_printed, r.diff_corrected, r.error or ""] for r in rep.rows]
    if args.format == "json":
        body = {
            "exit_code": code,
            "resolutions": rep.resolutions(),
            "groups": rep.group_summary(),
            "rows": [dict(zip(header, [r.group, r.quantity, r.params, r.printed, r.corrected, r.oracle,
                                       r.diff_printed, r.diff_corrected, r.error])) for r in rep.rows],
        }
        return dump_json(meta, body), code
    meta["resolutions"] = rep.resolutions()
    meta["exit_code"] = code
    return dump_csv(meta, header, rows), code


def cmd_measure(args) -> tuple[str, int]:
    res = measure_rows(args.n, PolarizationAngles(args.theta, args.phi),
                       PolarizationAngles(args.theta0, args.phi0))
    meta = _meta(args, direction=res.direction)
    if args.format == "json":
        body = {"rows": [{"outcome": k, "probability": p} for k, p in res.distribution.items()],
                "mean": res.mean, "variance": res.variance}
        return dump_json(meta, body), EXIT_OK
    rows = [[k, p] for k, p in res.distribution.items()]
    return dump_csv(meta, ["outcome", "probability"], rows,
                    footer=[["mean", res.mean], ["variance", res.variance]]), EXIT_OK


def cmd_amplify(args) -> tuple[str, int]:
    d = amplify_dump(args.n, PolarizationAngles(args.theta, args.phi), args.gt)
    meta = _meta(args)
    if args.format == "json":
        return dump_json(meta, {"rows": [d]}), EXIT_OK
    flat = {k: v for k, v in d.items() if not isinstance(v, list)}
    for j, v in enumerate(d["means"]):
        flat[f"S{j}"] = v
    for j, v in enumerate(d["variances"], start=1):
        flat[f"V{j}"] = v
    return dump_csv(meta, list(flat), [list(flat.values())]), EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polsqueeze", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="stdout", help="output path or 'stdout'")

    def state_flags(p, n_default=8):
        p.add_argument("--n", type=_non_negative_int, default=n_default, help="photon number N")
        p.add_argument("--theta", type=float, default=math.pi / 3)
        p.add_argument("--phi", type=float, default=0.0)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("report", parents=[common], help="squeezing report over directions")
    state_flags(p)
    p.add_argument("--direction", type=_parse_direction, action="append",
                   help="'x,y,z' (normalized) or 'm' for the state's own direction; repeatable")
    p.add_argument("--grid", type=_parse_grid, help="equal-area sphere grid, e.g. 20x40")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("fig", parents=[common], help="theta sweep of the S_2 factor (figure 1 or 2)")
    p.add_argument("figure", type=int, choices=(1, 2))
    p.add_argument("--n", type=_non_negative_int, default=8)
    p.add_argument("--gt", type=_gt, default=0.1)
    p.add_argument("--points", type=int, default=400)
    p.add_argument("--variant", choices=("printed31", "printed32", "both"), default="both")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_fig)

    p = sub.add_parser("sweep", parents=[common], help="general sweep of the S_2 factor")
    state_flags(p)
    p.add_argument("--gt", type=_gt, default=0.1)
    p.add_argument("--var", choices=("theta", "phi", "gt"), default="theta")
    p.add_argument("--lo", type=float, default=0.0)
    p.add_argument("--hi", type=float, default=math.pi / 2)
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--variant", choices=("printed31", "printed32", "both"), default="both")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", parents=[common], help="closed forms against the numeric oracle")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("measure", parents=[common], help="rotated-basis N_x - N_y statistics")
    state_flags(p)
    p.add_argument("--theta0", type=float, default=0.0)
    p.add_argument("--phi0", type=float, default=0.0)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("amplify", parents=[common], help="raw Stokes moments after amplification")
    state_flags(p)
    p.add_argument("--gt", type=_gt, default=0.1)
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.set_defaults(func=cmd_amplify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "points", 2) < 2:
        parser.error("--points must be at least 2")
    if getattr(args, "samples", 1) < 1:
        parser.error("--samples must be at least 1")
    try:
        text, code = args.func(args)
    except DomainError as exc:
        parser.error(str(exc))
    except (CutoffExhausted, ConsistencyError) as exc:
        print(f"polsqueeze: numeric contract failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.out == "stdout":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
