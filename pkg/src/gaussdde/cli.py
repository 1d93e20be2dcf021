"""Command-line front end.

Subcommands: eval, compare, envelope, stability, roots, sweep. Exit status
0 on success, 2 for bad arguments or unsupported parameters, 3 for
numerical or I/O failure (with a JSON error record on stderr).
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .classify import characteristic_residual, characteristic_roots, fourier_transformable, stability_verdict
from .core import DdeParams, EvalGrid, Regime, classify_regime, derive_params
from .envelope import envelope_traces, max_estimate, n_star
from .errors import NUMERICAL_FAILURES, DdeError
from .export import PALETTE, SERIES_BLUE, column_traces, write_csv, write_svg
from .quadrature import QuadratureSpec, eval_integral
from .series import TruncationPolicy, choose_truncation, closed_form_no_delay, eval_series
from .stepper import InitialFunction, StepperConfig, history_sample, integrate_history

log = logging.getLogger(__name__)

FIG2_TAUS = (3.0, 5.0, 6.0, 8.0, 12.0, 20.0, 30.0, 40.0, 50.0)
DEFAULT_POINTS = 4000
SUBCOMMANDS = ("eval", "compare", "envelope", "stability", "roots", "sweep")


class UsageError(Exception):
    """Arguments parse but describe something we cannot run (exit 2)."""


@dataclass
class RunConfig:
    subcommand: str
    params: DdeParams
    grid: EvalGrid | None
    outputs: dict = field(default_factory=dict)  # format -> path ('-' is stdout)
    truncation: TruncationPolicy = TruncationPolicy()
    quad_tol: float = 1e-8

    def __post_init__(self):
        if not self.outputs:
            raise UsageError("at least one output format is required")


def _add_params(sp, need_a=True):
    if need_a:
        sp.add_argument("--a", type=float, required=True, help="coefficient of t X(t)")
    sp.add_argument("--b", type=float, required=True, help="delayed-feedback gain")
    sp.add_argument("--tau", type=float, required=True, help="delay (may be negative for the series)")
    sp.add_argument("--c", type=float, default=1.0, help="amplitude constant (default 1)")


def _add_grid(sp):
    sp.add_argument("--t-min", type=float, default=-10.0)
    sp.add_argument("--t-max", type=float, default=None, help="default max(60, 10|tau|)")
    sp.add_argument("--points", type=int, default=DEFAULT_POINTS)


def _add_truncation(sp):
    sp.add_argument("--truncation", choices=("adaptive", "fixed"), default="adaptive")
    sp.add_argument("--n-max", type=int, default=500)
    sp.add_argument("--epsilon", type=float, default=1e-15)


def _add_outputs(sp, formats=("csv", "json", "svg")):
    for fmt in formats:
        sp.add_argument(f"--{fmt}", metavar="PATH", default=None, help=f"write {fmt.upper()} ('-' for stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaussdde",
        description="Exact Gaussian-series solution of X'(t) + a t X(t) = b X(t - tau).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sp = sub.add_parser("eval", help="series trace on a grid")
    _add_params(sp)
    _add_grid(sp)
    _add_truncation(sp)
    _add_outputs(sp)
    sp.add_argument("--envelope", action="store_true", help="add g_env, e_env_plus, e_env_minus columns")

    sp = sub.add_parser("compare", help="series vs integral vs method of steps")
    _add_params(sp)
    _add_grid(sp)
    _add_truncation(sp)
    _add_outputs(sp)
    sp.add_argument("--quad-tol", type=float, default=1e-8)
    sp.add_argument("--h", type=float, default=None, help="RK4 step (default tau/3000, snapped to tau/m)")
    sp.add_argument("--seed-phi", default="series", help="series | const:<v> | table:<path>")

    sp = sub.add_parser("envelope", help="G(t), E(t), n* and the peak estimate")
    _add_params(sp)
    _add_grid(sp)
    _add_truncation(sp)
    _add_outputs(sp)

    sp = sub.add_parser("stability", help="stability verdict and transformability")
    _add_params(sp)
    _add_outputs(sp, ("json",))

    sp = sub.add_parser("roots", help="characteristic roots W_k(b tau)/tau for a = 0")
    _add_params(sp, need_a=False)
    sp.add_argument("--k-min", type=int, default=-10)
    sp.add_argument("--k-max", type=int, default=10)
    _add_outputs(sp, ("csv", "json"))

    sp = sub.add_parser("sweep", help="series traces over a list of delays")
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--b", type=float, required=True)
    sp.add_argument("--c", type=float, default=1.0)
    sp.add_argument("--taus", default=",".join("%g" % v for v in FIG2_TAUS), help="comma-separated delays")
    _add_grid(sp)
    _add_truncation(sp)
    _add_outputs(sp, ("csv", "svg"))
    return parser


def _policy(args):
    if args.truncation == "fixed":
        return TruncationPolicy.fixed(args.n_max)
    return TruncationPolicy.adaptive(args.epsilon, args.n_max)


def _grid(args, tau_scale):
    t_max = args.t_max if args.t_max is not None else max(60.0, 10.0 * abs(tau_scale))
    try:
        return EvalGrid(args.t_min, t_max, args.points)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _outputs(args, default):
    outputs = {}
    for fmt in ("csv", "json", "svg"):
        path = getattr(args, fmt, None)
        if path is not None:
            outputs[fmt] = path
    if not outputs:
        outputs[default] = "-"
    if list(outputs.values()).count("-") > 1:
        raise UsageError("only one output may go to stdout")
    return outputs


def _params(args):
    try:
        return DdeParams(args.a, args.b, args.tau, args.c)
    except DdeError as exc:
        raise UsageError(str(exc)) from exc


def _dump_json(dest, payload):
    text = json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n"
    if dest == "-":
        sys.stdout.write(text)
    else:
        with open(dest, "w") as fh:
            fh.write(text)


def _series_column(p, t, pol):
    regime = classify_regime(p)
    if regime is Regime.SERIES:
        return eval_series(p, t, pol)
    if regime is Regime.NO_DELAY and p.a > 0:
        return closed_form_no_delay(p, t)
    raise UsageError(
        f"unsupported regime {regime.value!r} for a={p.a}, tau={p.tau}: "
        "the Gaussian solution needs a > 0 (tau = 0 uses the closed form)"
    )


def _params_dict(p):
    return {"a": p.a, "b": p.b, "tau": p.tau, "c": p.c}


def _cmd_eval(args):
    p = _params(args)
    grid = _grid(args, p.tau)
    pol = _policy(args)
    cfg = RunConfig("eval", p, grid, _outputs(args, "csv"), pol)
    t = grid.nodes()
    columns = {"x_series": _series_column(p, t, pol)}
    if args.envelope:
        if classify_regime(p) is not Regime.SERIES:
            raise UsageError("envelope columns need the series regime (a > 0, tau != 0)")
        columns.update({k: v.values for k, v in envelope_traces(p, grid, pol).items()})
    summary = {
        "params": _params_dict(p),
        "regime": classify_regime(p).value,
        "points": grid.count,
        "max_abs": float(np.max(np.abs(columns["x_series"]))),
    }
    if classify_regime(p) is Regime.SERIES:
        summary["n_last"] = choose_truncation(p, pol)
    _emit(cfg, t, columns, {"summary": summary}, f"a={p.a:g}, b={p.b:g}, tau={p.tau:g}")
    return 0


def _emit(cfg, t, columns, report, title):
    if "csv" in cfg.outputs:
        write_csv(cfg.outputs["csv"], t, columns)
    if "json" in cfg.outputs:
        _dump_json(cfg.outputs["json"], report)
    if "svg" in cfg.outputs:
        write_svg(cfg.outputs["svg"], t, column_traces(columns), title)


def parse_seed(spec: str) -> InitialFunction:
    if spec == "series":
        return InitialFunction.from_series()
    kind, _, arg = spec.partition(":")
    try:
        if kind == "const":
            return InitialFunction.constant(float(arg))
        if kind == "table":
            return InitialFunction.from_file(arg)
    except (ValueError, OSError) as exc:
        raise UsageError(f"bad --seed-phi {spec!r}: {exc}") from exc
    raise UsageError(f"bad --seed-phi {spec!r}; expected series, const:<v> or table:<path>")


def deviation(reference, other) -> dict:
    """max abs, max abs relative to max|reference|, and RMS of the difference over finite rows."""
    ok = np.isfinite(other)
    diff = np.abs(other[ok] - reference[ok])
    if diff.size == 0:
        return {"max_abs": None, "max_rel": None, "rms": None, "rows": 0}
    scale = float(np.max(np.abs(reference)))
    max_abs = float(np.max(diff))
    return {
        "max_abs": max_abs,
        "max_rel": max_abs / scale if scale > 0 else None,
        "rms": float(np.sqrt(np.mean(diff * diff))),
        "rows": int(diff.size),
    }


def _cmd_compare(args):
    p = _params(args)
    if classify_regime(p) is not Regime.SERIES:
        raise UsageError("compare needs the series regime (a > 0, tau != 0)")
    grid = _grid(args, p.tau)
    pol = _policy(args)
    cfg = RunConfig("compare", p, grid, _outputs(args, "csv"), pol, args.quad_tol)
    t = grid.nodes()
    series = eval_series(p, t, pol)
    columns = {"x_series": series, "x_integral": eval_integral(p, t, QuadratureSpec(cfg.quad_tol))}
    report = {"params": _params_dict(p)}
    if p.tau > 0 and grid.t_max > 0:
        phi = parse_seed(args.seed_phi)
        h = args.h if args.h is not None else p.tau / 3000.0
        hist = integrate_history(p, phi, StepperConfig(h, grid.t_max))
        steps = np.full_like(t, np.nan)
        covered = t >= -p.tau
        steps[covered] = history_sample(hist, t[covered])
        columns["x_steps"] = steps
        report["steps"] = {"h": hist.h, "seed_phi": args.seed_phi, "covered_from": -p.tau}
    else:
        report["steps"] = {"skipped": "method of steps needs tau > 0 and t_max > 0"}
    report["deviations"] = {
        name: deviation(series, columns[name]) for name in ("x_integral", "x_steps") if name in columns
    }
    _emit(cfg, t, columns, report, f"compare a={p.a:g}, b={p.b:g}, tau={p.tau:g}")
    return 0


def _cmd_envelope(args):
    p = _params(args)
    if classify_regime(p) is not Regime.SERIES:
        raise UsageError("envelope needs the series regime (a > 0, tau != 0)")
    grid = _grid(args, p.tau)
    pol = _policy(args)
    cfg = RunConfig("envelope", p, grid, _outputs(args, "csv"), pol)
    t = grid.nodes()
    series = eval_series(p, t, pol)
    columns = {"x_series": series}
    columns.update({k: v.values for k, v in envelope_traces(p, grid, pol).items()})
    est = max_estimate(p, pol)
    peak = n_star(derive_params(p), max(choose_truncation(p, pol), 1))
    i = int(np.argmax(np.abs(series)))
    report = {
        "params": _params_dict(p),
        "envelope": {
            "n_star": list(peak.indices),
            "peak_log_amp": peak.peak_log_amp + math.log(abs(p.c)) if p.c else None,
            "max_estimate": {
                "t_star": est.t_star,
                "amp": est.amp,
                "ambiguous": est.ambiguous,
                "runner_up_ratio": est.runner_up_ratio,
            },
            "grid_max": {"t": float(t[i]), "amp": float(abs(series[i]))},
        },
    }
    _emit(cfg, t, columns, report, f"X, G, E: a={p.a:g}, b={p.b:g}, tau={p.tau:g}")
    return 0


def _cmd_stability(args):
    p = _params(args)
    outputs = _outputs(args, "json")
    verdict = stability_verdict(p)
    ft = fourier_transformable(p)
    payload = {
        "params": _params_dict(p),
        "verdict": verdict.to_dict(),
        "fourier": {"transformable": ft.transformable, "reason": ft.reason},
    }
    _dump_json(outputs["json"], payload)
    return 0


def _cmd_roots(args):
    if args.k_min > args.k_max:
        raise UsageError("--k-min must not exceed --k-max")
    try:
        roots = characteristic_roots(args.b, args.tau, (args.k_min, args.k_max))
    except (DdeError, ValueError) as exc:
        if isinstance(exc, NUMERICAL_FAILURES):
            raise
        raise UsageError(str(exc)) from exc
    outputs = _outputs(args, "json")
    rows = [
        {"k": r.k, "re": r.value.real, "im": r.value.imag, "residual": characteristic_residual(args.b, args.tau, r.value)}
        for r in roots
    ]
    if "json" in outputs:
        _dump_json(outputs["json"], {"b": args.b, "tau": args.tau, "roots": rows})
    if "csv" in outputs:
        lines = ["k,re,im,residual"] + [
            "%d,%.17g,%.17g,%.17g" % (r["k"], r["re"], r["im"], r["residual"]) for r in rows
        ]
        text = "\n".join(lines) + "\n"
        if outputs["csv"] == "-":
            sys.stdout.write(text)
        else:
            with open(outputs["csv"], "w") as fh:
                fh.write(text)
    return 0


def parse_taus(text: str) -> list:
    try:
        taus = [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --taus {text!r}") from exc
    if not taus:
        raise UsageError("--taus is empty")
    return taus


def _cmd_sweep(args):
    taus = parse_taus(args.taus)
    pol = _policy(args)
    grid = _grid(args, max(abs(v) for v in taus))
    outputs = _outputs(args, "csv")
    t = grid.nodes()
    columns = {}
    for tau in taus:
        p = _params(argparse.Namespace(a=args.a, b=args.b, tau=tau, c=args.c))
        RunConfig("sweep", p, grid, outputs, pol)
        columns["x_tau_%g" % tau] = _series_column(p, t, pol)
    names = list(columns)
    if "csv" in outputs:
        write_csv(outputs["csv"], t, columns, order=names)
    if "svg" in outputs:
        traces = [
            (f"tau = {name[6:]}", columns[name], SERIES_BLUE if len(names) == 1 else PALETTE[i % len(PALETTE)])
            for i, name in enumerate(names)
        ]
        write_svg(outputs["svg"], t, traces, f"sweep a={args.a:g}, b={args.b:g}")
    return 0


_HANDLERS = {
    "eval": _cmd_eval,
    "compare": _cmd_compare,
    "envelope": _cmd_envelope,
    "stability": _cmd_stability,
    "roots": _cmd_roots,
    "sweep": _cmd_sweep,
}


def _error_record(exc):
    record = {"error": type(exc).__name__, "message": str(exc)}
    for attr in ("escape_time", "estimate", "tol"):
        value = getattr(exc, attr, None)
        if value is not None:
            record[attr] = value
    return record


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return _HANDLERS[args.subcommand](args)
    except UsageError as exc:
        print(f"gaussdde {args.subcommand}: error: {exc}", file=sys.stderr)
        return 2
    except NUMERICAL_FAILURES as exc:
        print(json.dumps(_error_record(exc)), file=sys.stderr)
        return 3
    except OSError as exc:
        print(json.dumps({"error": "IOError", "message": str(exc)}), file=sys.stderr)
        return 3
    except DdeError as exc:
        print(f"gaussdde {args.subcommand}: error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())
