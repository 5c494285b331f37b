"""Command-line entry point.

Subcommands: catalog, hopf, normalize, focus, period, cyclicity, simulate,
displacement, verify.  Reports are JSON on stdout (exact values as rational
strings); exit code 0 on success, 2 on domain errors, 1 on usage errors.
HF_PRECISION in {double, extended} selects the numeric backend precision
for period measurements.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, is_dataclass
from fractions import Fraction

from . import catalog, simulate
from .cyclicity import cyclicity_bound_line, cyclicity_bound_rank, jet_focus_report
from .errors import FocusObstruction, HopfcmError
from .focusq import report_for_field
from .grammar import eval_exact, parse_expression
from .normalform import to_normal_form
from .paramfield import GaussExpr, Jet, ParamExpr
from .period import isochronicity_constants
from .polysys import char_cubic, hopf_test, parse_system
from .verify import CLAIMS, run_claim

USAGE_EXIT = 1
DOMAIN_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(USAGE_EXIT)


def jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (ParamExpr, Jet, GaussExpr)):
        return str(x)
    if is_dataclass(x) and not isinstance(x, type):
        return {k: jsonable(v) for k, v in asdict(x).items()}
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "tolist"):
        return x.tolist()
    if isinstance(x, float) and x != x:
        return "nan"
    return x


def _emit(report, out=None):
    text = json.dumps(jsonable(report), indent=2, default=str)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _parse_params(spec):
    if not spec:
        return {}
    out = {}
    for item in spec.split(","):
        if "=" not in item:
            raise HopfcmError(f"bad parameter assignment {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = Fraction(v) if "/" in v or "." not in v else float(v)
    return out


def _load_system(name_or_path, params):
    if name_or_path in catalog.BUILTIN_SYSTEMS:
        return catalog.build(name_or_path, params or None)
    with open(name_or_path) as fh:
        fld = parse_system(fh.read())
    if params and fld.backend == "exact" and fld.params:
        bind = {k: Fraction(v) for k, v in params.items() if k in fld.params}
        remaining = tuple(p for p in fld.params if p not in bind)
        fld = fld.substitute_params(bind, remaining)
    return fld


def _parse_point(spec, fld, params):
    if spec is None:
        zero = fld._zero()
        return (zero, zero, zero)
    if spec.startswith("E"):
        pts = {lab: p for lab, p, ex in catalog.equilibria_catalog(params) if ex}
        if spec not in pts:
            raise HopfcmError(f"equilibrium {spec} does not exist at {params}")
        return pts[spec]
    vals = [Fraction(v) for v in spec.split(",")]
    if len(vals) != 3:
        raise HopfcmError("point must be E<k> or three comma-separated values")
    if fld.backend == "float":
        return tuple(float(v) for v in vals)
    return tuple(vals)


def _cmd_catalog(args):
    rows = []
    for name, meta in catalog.BUILTIN_SYSTEMS.items():
        rows.append(
            {
                "name": name,
                "backend": meta["backend"],
                "params": list(meta["params"]),
                "description": meta["description"],
            }
        )
    _emit({"systems": rows}, args.out)
    return 0


def _cmd_hopf(args):
    params = _parse_params(args.params)
    fld = _load_system(args.system, params)
    point = _parse_point(args.point, fld, params)
    cubic = char_cubic(fld.jacobian_at(point))
    report = hopf_test(cubic)
    _emit(
        {
            "system": args.system,
            "point": point,
            "is_hopf": report.is_hopf,
            "omega_squared": report.omega_squared,
            "lambda3": report.lambda3,
            "eigenvalues": [str(e) for e in (report.eigenvalues() or [])],
            "conditions": report.conditions,
        },
        args.out,
    )
    return 0 if report.is_hopf else DOMAIN_EXIT


def _cmd_normalize(args):
    params = _parse_params(args.params)
    fld = _load_system(args.system, params)
    matrix = None
    time_scale = None
    if args.transform:
        with open(args.transform) as fh:
            doc = json.load(fh)
        rows = doc["matrix"]
        if fld.backend == "float":
            matrix = [[float(v) for v in row] for row in rows]
            if doc.get("time_scale") is not None:
                time_scale = float(doc["time_scale"])
        else:
            matrix = [
                [eval_exact(parse_expression(str(v)), fld.params) for v in row]
                for row in rows
            ]
            if doc.get("time_scale") is not None:
                time_scale = eval_exact(
                    parse_expression(str(doc["time_scale"])), fld.params
                )
    point = _parse_point(args.point, fld, params)
    nf = to_normal_form(fld, point, matrix=matrix, time_scale=time_scale)
    _emit(
        {
            "system": args.system,
            "lambda": str(nf.lam),
            "orientation": nf.orientation,
            "components": [str(c) for c in nf.field.components],
        },
        args.out,
    )
    return 0


def _cmd_focus(args):
    params = _parse_params(args.params)
    if args.jet_degree:
        fld = _load_system(args.system, None)
        if fld.backend == "float":
            raise HopfcmError("jet expansions need an exact-backend system")
        small = tuple(s.strip() for s in args.small.split(",")) if args.small else fld.params
        point = {k: Fraction(v) for k, v in params.items()}
        report = jet_focus_report(fld, point, small, args.jet_degree, args.order)
    else:
        fld = _load_system(args.system, params)
        report = report_for_field(fld, args.order)
    _emit(
        {
            "system": args.system,
            "order": args.order,
            "backend": report.backend,
            "normalization": report.normalization,
            "quantities": [jsonable(q) for q in report.quantities],
        },
        args.out,
    )
    return 0


def _cmd_period(args):
    params = _parse_params(args.params)
    fld = _load_system(args.system, params)
    zero = fld._zero()
    nf = to_normal_form(fld, (zero, zero, zero))
    try:
        pe = isochronicity_constants(nf, args.order)
    except FocusObstruction as exc:
        _emit(
            {
                "system": args.system,
                "focus_obstruction": {"order": exc.order, "value": jsonable(exc.value)},
            },
            args.out,
        )
        return DOMAIN_EXIT
    _emit(
        {
            "system": args.system,
            "constants": [jsonable(t) for t in pe.constants],
            "odd_residuals": [jsonable(t) for t in pe.odd_residuals],
            "isochronous": pe.is_isochronous(),
        },
        args.out,
    )
    return 0


def _cmd_cyclicity(args):
    if args.mode == "teo4":
        d0 = Fraction(args.d0)
        report = cyclicity_bound_rank(
            catalog.e1_normal_trace(),
            {"k": 1, "c": 0, "d": d0, "sigma": 0},
            ("k", "c", "d"),
            1,
            3,
            trace_declared=True,
        )
    elif args.mode == "teo5":
        from .verify import ETA_LINE

        report = cyclicity_bound_line(
            catalog.e1_center_perturbed(),
            {},
            catalog.PERTURBATION_PARAMS,
            5,
            ("a011", "a101", "b011"),
            ETA_LINE,
        )
    else:
        with open(args.config) as fh:
            cfg = json.load(fh)
        fld = _load_system(cfg["system"], None)
        point = {k: Fraction(str(v)) for k, v in cfg.get("point", {}).items()}
        small = tuple(cfg["small"])
        if "line" in cfg:
            line = {k: Fraction(str(v)) for k, v in cfg["line"].items()}
            report = cyclicity_bound_line(
                fld, point, small, cfg["order"], tuple(cfg["pivots"]), line,
                trace_declared=cfg.get("trace", False),
            )
        else:
            report = cyclicity_bound_rank(
                fld, point, small, cfg.get("degree", 1), cfg["order"],
                trace_declared=cfg.get("trace", False),
            )
    _emit(report, args.out)
    return 0


def _cmd_simulate(args):
    params = _parse_params(args.params)
    fld = _load_system(args.system, params)
    if fld.backend != "float":
        fld = fld.to_float({k: float(v) for k, v in params.items()})
    x0 = tuple(float(v) for v in args.x0.split(","))
    t_span = (0.0, -args.tmax) if args.backward else (0.0, args.tmax)
    traj = simulate.integrate(fld, x0, t_span, args.tol, args.tol * 1e-2)
    out = args.out or "trajectory.csv"
    simulate.export_csv(traj, out)
    artifacts = [out]
    if args.plot_script:
        artifacts.append(simulate.export_plot_script(out.rsplit(".", 1)[0] + "_plot.py"))
    print(json.dumps({"artifacts": artifacts, "steps": len(traj.t), "nfev": traj.nfev}))
    return 0


def _cmd_displacement(args):
    params = _parse_params(args.params)
    fld = _load_system(args.system, params)
    if fld.backend != "float":
        fld = fld.to_float({k: float(v) for k, v in params.items()})
    grid = [float(v) for v in args.rho0_grid.split(",")]
    samples = []
    for rho0 in grid:
        samples.append(simulate.displacement(fld, rho0))
    report = {
        "system": args.system,
        "samples": [
            {
                "rho0": s.rho0,
                "dbar": s.dbar,
                "dbar_over_rho0_cubed": s.dbar / s.rho0**3,
                "omega0": s.omega0,
                "omega_residual": s.omega_residual,
            }
            for s in samples
        ],
    }
    if args.csv:
        simulate.export_displacement_csv(samples, args.csv)
        report["csv"] = args.csv
    _emit(report, args.out)
    return 0


def _cmd_verify(args):
    kwargs = {}
    if args.claim == "conservation" and args.out_dir:
        kwargs["out_dir"] = args.out_dir
    result = run_claim(args.claim, **kwargs)
    _emit(result, args.out)
    return 0 if result["passed"] else DOMAIN_EXIT


def build_parser():
    p = _Parser(prog="hopfcm", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write the JSON report to this file")
        sp.add_argument(
            "--json",
            action="store_true",
            help="machine-readable output (reports are always JSON)",
        )

    sp = sub.add_parser("catalog", help="list built-in systems")
    common(sp)
    sp.set_defaults(fn=_cmd_catalog)

    sp = sub.add_parser("hopf", help="eigenvalue test at an equilibrium")
    sp.add_argument("--system", required=True)
    sp.add_argument("--point", help="E<k> or u,v,w")
    sp.add_argument("--params", help="name=value,...")
    common(sp)
    sp.set_defaults(fn=_cmd_hopf)

    sp = sub.add_parser("normalize", help="rotation normal form at a Hopf point")
    sp.add_argument("--system", required=True)
    sp.add_argument("--point")
    sp.add_argument("--params")
    sp.add_argument("--transform", help="JSON file with matrix (and time_scale)")
    common(sp)
    sp.set_defaults(fn=_cmd_normalize)

    sp = sub.add_parser("focus", help="focus quantities")
    sp.add_argument("--system", required=True)
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--params")
    sp.add_argument("--jet-degree", type=int, dest="jet_degree")
    sp.add_argument("--small", help="comma-separated small parameters")
    common(sp)
    sp.set_defaults(fn=_cmd_focus)

    sp = sub.add_parser("period", help="isochronicity constants")
    sp.add_argument("--system", required=True)
    sp.add_argument("--order", type=int, required=True)
    sp.add_argument("--params")
    common(sp)
    sp.set_defaults(fn=_cmd_period)

    sp = sub.add_parser("cyclicity", help="limit-cycle lower bounds")
    sp.add_argument("--mode", choices=("teo4", "teo5", "custom"), required=True)
    sp.add_argument("--d0", default="1", help="teo4 base point d value")
    sp.add_argument("--config", help="JSON config for custom mode")
    common(sp)
    sp.set_defaults(fn=_cmd_cyclicity)

    sp = sub.add_parser("simulate", help="integrate and export a trajectory")
    sp.add_argument("--system", required=True)
    sp.add_argument("--x0", required=True)
    sp.add_argument("--tmax", type=float, required=True)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--params")
    sp.add_argument("--backward", action="store_true")
    sp.add_argument("--plot-script", action="store_true", dest="plot_script")
    common(sp)
    sp.set_defaults(fn=_cmd_simulate)

    sp = sub.add_parser("displacement", help="reduced displacement sweep")
    sp.add_argument("--system", required=True)
    sp.add_argument("--rho0-grid", required=True, dest="rho0_grid")
    sp.add_argument("--params")
    sp.add_argument("--csv", help="write rho0,dbar pairs to this file")
    common(sp)
    sp.set_defaults(fn=_cmd_displacement)

    sp = sub.add_parser("verify", help="run a named verification claim")
    sp.add_argument("--claim", required=True, choices=sorted(CLAIMS))
    sp.add_argument("--out-dir", dest="out_dir")
    common(sp)
    sp.set_defaults(fn=_cmd_verify)

    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except FocusObstruction as exc:
        print(
            json.dumps({"error": "FocusObstruction", "order": exc.order,
                        "value": jsonable(exc.value)}),
            file=sys.stderr,
        )
        return DOMAIN_EXIT
    except HopfcmError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return DOMAIN_EXIT
    except FileNotFoundError as exc:
        print(json.dumps({"error": "FileNotFound", "message": str(exc)}), file=sys.stderr)
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
