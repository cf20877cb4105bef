"""Command-line front end.

One batch run per invocation.  Reports embed the package version, the echoed
configuration, the seed and the tolerance table, and are byte-identical for
identical configurations.  Exit codes: 0 success, 1 invalid input, 2 a
verification suite failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import __version__
from .algebra import E1, E2, E3, inner
from .curves import torus_family_report
from .forms import TorusGrid, constant_form, scalar_form, tensor_form
from .gauge import Connection, residual_report, zero_connection
from .holonomy import (AnalyticTorusPotential, aharonov_bohm_monodromy,
                       torus_circle, torus_loop, wilson_loop, wong_evolve)
from .spectrum import harmonic_space_dim
from .suites import run_verify

_SU2 = {"e1": E1, "e2": E2, "e3": E3}

_TOLERANCES = {
    "ab-monodromy": 1e-8,
    "ac-agreement": 1e-8,
    "ad-invariance": 1e-10,
    "adjointness": 1e-10,
    "d-compose-zero": 1e-12,
    "first-variation-relative": 1e-6,
    "flat-threshold": 1e-8,
    "gauge-orbit-ce": 1e-6,
    "harmonic-threshold": 1e-6,
    "jet-stencil-exactness": 1e-12,
    "star-isometry": 1e-12,
    "su2-two-path-agreement": 1e-8,
    "wong-conservation": 1e-9,
    "ym-gauge-invariance-relative": 5e-4,
}


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def _complex_arg(text):
    try:
        return complex(text)
    except ValueError as exc:
        raise CliError(f"cannot parse complex number {text!r}") from exc


def _positive_int(name, value, minimum=1):
    if value is None or value < minimum:
        raise CliError(f"{name} must be an integer >= {minimum}, got {value}")
    return int(value)


def build_parser():
    parser = _Parser(prog="gaugecalc", description=__doc__)
    parser.add_argument("--config", help="JSON file mirroring the flags", default=None)
    sub = parser.add_subparsers(dest="command")

    def common(p, grid_default=64):
        p.add_argument("--grid", type=int, default=grid_default)
        p.add_argument("--steps", type=int, default=1000)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)
        p.add_argument("--format", default="report-text",
                       choices=("report-text", "structured-record", "csv"))

    p = sub.add_parser("verify", description="run every invariant suite")
    common(p, grid_default=32)

    p = sub.add_parser("torus-curve", description="claim report for the torus family")
    common(p)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=11)

    p = sub.add_parser("residual", description="Yang-Mills residual of a named field")
    common(p)
    p.add_argument("--family", default="zero")

    p = sub.add_parser("holonomy", description="Wilson loop of a named field")
    common(p)
    p.add_argument("--family", default="zero")
    p.add_argument("--loop", default="torus:wx=1,wy=0")

    p = sub.add_parser("ab", description="Aharonov-Bohm monodromy")
    common(p)
    p.add_argument("--k", type=str, default="0.5")
    p.add_argument("--winding", type=int, default=1)

    p = sub.add_parser("wong", description="spin transport cases")
    common(p)
    p.add_argument("--case", default="constant",
                   choices=("constant", "flat-contractible"))
    p.add_argument("--i0", default="e1", choices=tuple(_SU2))

    p = sub.add_parser("spectrum", description="harmonic space dimensions")
    common(p, grid_default=16)
    p.add_argument("--rank", type=int, default=1)
    p.add_argument("--degree", default="all", choices=("0", "1", "2", "all"))
    return parser


def parse_params(text):
    """Parse 'name:key=val,key=val' selectors; values become floats when possible."""
    name, _, rest = text.partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            key, sep, val = item.partition("=")
            if not sep:
                raise CliError(f"malformed selector parameter {item!r}")
            try:
                params[key] = float(val)
            except ValueError:
                params[key] = val
    return name, params


def _su2_direction(params):
    name = params.get("dir", "e1")
    if name not in _SU2:
        raise CliError(f"unknown algebra direction {name!r}")
    return _SU2[name]


def build_family(grid, selector):
    """Named connection families for the residual and holonomy commands."""
    name, params = parse_params(selector)
    if name == "zero":
        return zero_connection(grid, 2)
    if name == "const-dx":
        c = float(params.get("c", np.pi))
        mat = _su2_direction(params)
        return Connection(constant_form(grid, 1, c * mat, np.zeros((2, 2))))
    if name == "const-mix":
        c = float(params.get("c", np.pi))
        lam = float(params.get("lam", 1.0))
        mat = E1 + lam * E2
        return Connection(constant_form(grid, 1, c * mat, np.zeros((2, 2))))
    if name == "sin-dy":
        freq = float(params.get("freq", 1.0))
        mat = _su2_direction(params)
        x, _ = grid.nodes()
        prof = scalar_form(grid, 1, np.zeros((grid.n, grid.n)),
                           np.sin(2.0 * np.pi * freq * x))
        return Connection(tensor_form(prof, mat))
    raise CliError(f"unknown field family {name!r}")


def build_loop(selector):
    name, params = parse_params(selector)
    if name == "torus":
        return torus_loop((int(params.get("wx", 1)), int(params.get("wy", 0))),
                          (float(params.get("x0", 0.0)), float(params.get("y0", 0.0))))
    if name == "tcircle":
        return torus_circle((float(params.get("cx", 0.5)), float(params.get("cy", 0.5))),
                            float(params.get("r", 0.2)), int(params.get("n", 1)))
    raise CliError(f"unknown loop family {name!r}")


def _matrix_entries(mat):
    return [[float(z.real), float(z.imag)] for z in np.asarray(mat).ravel(order="C")]


def _config_echo(args):
    skip = {"command", "config", "out"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _base_record(args, body):
    return {
        "version": __version__,
        "command": args.command,
        "config": _config_echo(args),
        "seed": args.seed,
        "tolerances": _TOLERANCES,
        **body,
    }


def _render_text(record, indent=0):
    lines = []
    pad = "  " * indent
    for key, val in record.items():
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_render_text(val, indent + 1))
        elif isinstance(val, (list, tuple)) and val and isinstance(val[0], dict):
            lines.append(f"{pad}{key}:")
            for i, item in enumerate(val):
                lines.append(f"{pad}  - [{i}]")
                lines.extend(_render_text(item, indent + 2))
        else:
            lines.append(f"{pad}{key}: {_fmt_value(val)}")
    return lines if indent else "\n".join(lines) + "\n"


def _fmt_value(val):
    if isinstance(val, float):
        return format(val, ".12e")
    if isinstance(val, complex):
        return f"{format(val.real, '.12e')}{'+' if val.imag >= 0 else '-'}{format(abs(val.imag), '.12e')}j"
    if isinstance(val, (list, tuple)):
        return "[" + ", ".join(_fmt_value(v) for v in val) + "]"
    return str(val)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def _emit(record, args, csv_header=None, csv_rows=None):
    if args.format == "structured-record":
        text = json.dumps(_jsonable(record), sort_keys=True, indent=2) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        for key in ("version", "command", "seed"):
            buf.write(f"# {key}: {record[key]}\n")
        buf.write(f"# config: {json.dumps(_jsonable(record['config']), sort_keys=True)}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(csv_header or ("key", "value"))
        for row in (csv_rows if csv_rows is not None else _flat_rows(record)):
            writer.writerow(row)
        text = buf.getvalue()
    else:
        text = _render_text(record)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _flat_rows(record, prefix=""):
    rows = []
    for key, val in record.items():
        if key in ("version", "command", "config", "seed", "tolerances"):
            continue
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            rows.extend(_flat_rows(val, name + "."))
        elif isinstance(val, (list, tuple)):
            rows.append((name, json.dumps(_jsonable(val))))
        else:
            rows.append((name, val))
    return rows


def _cmd_verify(args):
    grid_n = _positive_int("--grid", args.grid, 8)
    checks, passed = run_verify(args.seed, grid_n)
    record = _base_record(args, {
        "checks": [
            {"name": c.name, "value": c.value, "bound": c.bound, "kind": c.kind,
             "passed": c.passed}
            for c in checks
        ],
        "passed": passed,
        "summary": f"{sum(c.passed for c in checks)}/{len(checks)} checks passed",
    })
    rows = [(c.name, format(c.value, ".12e"), format(c.bound, ".12e"), c.kind,
             c.passed) for c in checks]
    _emit(record, args, ("name", "value", "bound", "kind", "passed"), rows)
    return 0 if passed else 2


def _cmd_torus_curve(args):
    samples = _positive_int("--samples", args.samples, 2)
    grid_n = _positive_int("--grid", args.grid, 8)
    flat_tol = args.tol if args.tol is not None else 1e-8
    if flat_tol <= 0:
        raise CliError("--tol must be positive")
    ts = [i / (samples - 1) for i in range(samples)]
    report = torus_family_report(args.lam, ts, n=grid_n, steps=args.steps,
                                 flat_tol=flat_tol)
    record = _base_record(args, {"report": report.to_record()})
    rows = [(format(t, ".12e"), format(c, ".12e"), format(r, ".12e"))
            for t, c, r in report.csv_rows()]
    _emit(record, args, ("t", "curvature_l2", "residual_l2"), rows)
    return 0


def _cmd_residual(args):
    grid = TorusGrid(_positive_int("--grid", args.grid, 8))
    flat_tol = args.tol if args.tol is not None else 1e-8
    conn = build_family(grid, args.family)
    rep = residual_report(conn, flat_tol)
    record = _base_record(args, {"report": rep})
    rows = [(k, format(v, ".12e") if isinstance(v, float) else v)
            for k, v in rep.items()]
    _emit(record, args, ("key", "value"), rows)
    return 0


def _cmd_holonomy(args):
    grid = TorusGrid(_positive_int("--grid", args.grid, 8))
    steps = _positive_int("--steps", args.steps, 100)
    conn = build_family(grid, args.family)
    loop = build_loop(args.loop)
    g, trace = wilson_loop(conn, loop, steps)
    record = _base_record(args, {
        "matrix": _matrix_entries(g),
        "trace": trace,
    })
    _emit(record, args, ("key", "value"),
          [("trace_re", format(trace.real, ".12e")),
           ("trace_im", format(trace.imag, ".12e"))])
    return 0


def _cmd_ab(args):
    k = _complex_arg(args.k)
    rec = aharonov_bohm_monodromy(k, args.winding)
    closed_form = complex(np.exp(2j * np.pi * k * args.winding))
    record = _base_record(args, {
        "monodromy": rec.monodromy,
        "closed_form": closed_form,
        "deviation": abs(rec.monodromy - closed_form),
        "flux": rec.flux,
        "transport_steps": rec.steps,
    })
    _emit(record, args, ("key", "value"),
          [("monodromy_re", format(rec.monodromy.real, ".12e")),
           ("monodromy_im", format(rec.monodromy.imag, ".12e")),
           ("deviation", format(abs(rec.monodromy - closed_form), ".12e"))])
    return 0


def _cmd_wong(args):
    steps = _positive_int("--steps", args.steps, 100)
    i0 = _SU2[args.i0]
    if args.case == "constant":
        pot = AnalyticTorusPotential(lambda x, y: E3,
                                     lambda x, y: np.zeros((2, 2), dtype=complex), 2)
        path = torus_loop((1, 0))
    else:
        pot = AnalyticTorusPotential(lambda x, y: np.pi * E1,
                                     lambda x, y: np.zeros((2, 2), dtype=complex), 2)
        path = torus_circle((0.5, 0.5), 0.2, 1)
    ts, traj = wong_evolve(pot, path, i0, steps)
    norms = np.array([inner(i, i) for i in traj])
    record = _base_record(args, {
        "initial": _matrix_entries(traj[0]),
        "final": _matrix_entries(traj[-1]),
        "norm_drift": float(np.max(np.abs(norms - norms[0]))),
        "final_shift": float(np.max(np.abs(traj[-1] - traj[0]))),
    })
    rows = [(format(t, ".12e"),) + tuple(format(v, ".12e")
            for entry in _matrix_entries(i) for v in entry)
            for t, i in zip(ts[::max(1, steps // 100)], traj[::max(1, steps // 100)])]
    header = ("t",) + tuple(f"I_{j}{l}_{p}" for j in range(2) for l in range(2)
                            for p in ("re", "im"))
    _emit(record, args, header, rows)
    return 0


def _cmd_spectrum(args):
    grid = TorusGrid(_positive_int("--grid", args.grid, 8))
    rank = _positive_int("--rank", args.rank, 1)
    threshold = args.tol if args.tol is not None else 1e-6
    if threshold <= 0:
        raise CliError("--tol must be positive")
    degrees = (0, 1, 2) if args.degree == "all" else (int(args.degree),)
    conn = zero_connection(grid, rank)
    dims = {str(k): harmonic_space_dim(conn, k, threshold) for k in degrees}
    record = _base_record(args, {"dims": dims, "threshold": threshold})
    _emit(record, args, ("degree", "dimension"),
          [(k, v) for k, v in dims.items()])
    return 0


_COMMANDS = {
    "verify": _cmd_verify,
    "torus-curve": _cmd_torus_curve,
    "residual": _cmd_residual,
    "holonomy": _cmd_holonomy,
    "ab": _cmd_ab,
    "wong": _cmd_wong,
    "spectrum": _cmd_spectrum,
}


def _load_config(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read config file: {exc}")
    except json.JSONDecodeError as exc:
        raise CliError(f"malformed config at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if not isinstance(data, dict):
        raise CliError("config must be a JSON object")
    if "command" not in data:
        raise CliError("config is missing the 'command' field")
    argv = [str(data["command"])]
    for key, val in data.items():
        if key == "command":
            continue
        flag = "--" + key.replace("_", "-")
        argv.extend([flag, str(val)])
    return argv


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        if argv and argv[0] == "--config":
            if len(argv) < 2:
                raise CliError("--config needs a file path")
            argv = _load_config(argv[1]) + list(argv[2:])
        args = parser.parse_args(argv)
        if args.command is None:
            raise CliError("no command given (try 'verify')")
        return _COMMANDS[args.command](args)
    except CliError as exc:
        print(f"gaugecalc: error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"gaugecalc: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
