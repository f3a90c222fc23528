"""Command-line surface.

Subcommands: dimer, ising2d corr|mi|sweep|exponents, tfim mi|sweep|scaling,
oracle compare, fit power|log|logcube, props.  Output is CSV (stable
header, 12 significant digits, deterministic row order) or JSON validating
against the schemas shipped in critent/schemas/.

Exit codes: 0 success, 1 validation/usage error, 2 numerical
non-convergence, 3 acceptance-check failure (oracle compare, exponents and
scaling in --check mode, props).

A JSON config file (--config) may supply any long option, underscored
(e.g. {"t_min": 0.1}); explicit flags override it.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import analysis, density, dimer, exact, ising2d, tfim
from .analysis import FitResult
from .errors import ConvergenceError

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NONCONVERGENCE = 2
EXIT_CHECK_FAILED = 3


class CheckFailure(Exception):
    """An acceptance-style check did not pass (exit code 3)."""


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _emit_json(payload: dict, path: str | None) -> None:
    _emit(json.dumps(payload, indent=2, allow_nan=False) + "\n", path)


def _records_out(records, fmt: str, path: str | None) -> None:
    if fmt == "csv":
        _emit(analysis.records_to_csv(records), path)
    else:
        _emit_json(analysis.records_to_json(records), path)


def _grid(lo: float, hi: float, count: int) -> np.ndarray:
    if count < 1:
        raise ValueError("grid count must be >= 1")
    return np.linspace(lo, hi, count) if count > 1 else np.array([lo])


def _fit_payload(fit: FitResult, **extra) -> dict:
    payload = fit.to_dict()
    if fit.kind == "power_law":
        payload["exponent"] = fit.coefficients[0]
    payload.update(extra)
    return payload


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------

def _cmd_dimer(args) -> int:
    records = analysis.sweep(
        "dimer",
        axes={"T": _grid(args.t_min, args.t_max, args.t_count)},
        workers=args.workers,
    )
    _records_out(records, args.format, args.output)
    return EXIT_OK


def _cmd_ising2d(args) -> int:
    if args.action == "corr":
        lines = ["# T in units of Ising coupling", "model,T,N,correlation"]
        for n in range(args.n_min, args.n_max + 1):
            g = ising2d.diagonal_correlation(args.t, n)
            lines.append(f"ising2d,{args.t:.12g},{n},{g:.12g}")
        _emit("\n".join(lines) + "\n", args.output)
        return EXIT_OK
    if args.action == "mi":
        records = analysis.sweep(
            "ising2d",
            axes={"T": [args.t], "N": list(range(args.n_min, args.n_max + 1))},
            fixed={"ensemble": args.ensemble},
            workers=args.workers,
        )
        _records_out(records, args.format, args.output)
        return EXIT_OK
    if args.action == "sweep":
        records = analysis.sweep(
            "ising2d",
            axes={
                "T": _grid(args.t_min, args.t_max, args.t_count),
                "N": list(range(args.n_min, args.n_max + 1, args.n_step)),
            },
            fixed={"ensemble": args.ensemble},
            workers=args.workers,
        )
        _records_out(records, args.format, args.output)
        return EXIT_OK
    # exponents
    result = analysis.ising2d_derivative_exponent(args.side, args.n)
    fit = result["fit"]
    payload = _fit_payload(
        fit,
        side=args.side,
        separation=args.n,
        relative_residual=result["relative_residual"],
    )
    if args.check:
        if args.side == "below":
            ok = abs(fit.coefficients[0] - (-0.75)) <= 0.05
            payload["check"] = {"target_exponent": -0.75, "tolerance": 0.05, "passed": ok}
        else:
            ok = result["relative_residual"] < 0.05
            payload["check"] = {"max_relative_residual": 0.05, "passed": ok}
        payload["passed"] = ok
        _emit_json(payload, args.output)
        if not ok:
            raise CheckFailure(f"ising2d exponents --side {args.side}")
        return EXIT_OK
    _emit_json(payload, args.output)
    return EXIT_OK


def _cmd_tfim(args) -> int:
    if args.action == "mi":
        records = analysis.sweep(
            "tfim",
            axes={
                "T": [args.t],
                "lam": [getattr(args, "lambda")],
                "r": list(range(args.r_min, args.r_max + 1, args.r_step)),
            },
            fixed={"N": args.n, "sector": args.sector},
            workers=args.workers,
        )
        _records_out(records, args.format, args.output)
        return EXIT_OK
    if args.action == "sweep":
        records = analysis.sweep(
            "tfim",
            axes={
                "T": [args.t],
                "lam": _grid(args.lambda_min, args.lambda_max, args.lambda_count),
                "r": list(range(args.r_min, args.r_max + 1, args.r_step)),
            },
            fixed={"N": args.n, "sector": args.sector},
            workers=args.workers,
        )
        _records_out(records, args.format, args.output)
        return EXIT_OK
    # scaling
    if args.kind == "nn":
        result = analysis.tfim_nn_scaling()
        fit = result["fit"]
        payload = _fit_payload(
            fit,
            kind_of_scaling="nn",
            sites=result["sites"],
            derivatives=result["derivatives"],
            relative_residual=result["relative_residual"],
        )
        ok = fit.coefficients[1] > 0 and result["relative_residual"] < 0.05
    else:
        result = analysis.tfim_far_scaling()
        fit = result["fit"]
        payload = _fit_payload(
            fit,
            kind_of_scaling="far",
            sites=result["sites"],
            peaks=result["peaks"],
            peak_locations=result["peak_locations"],
            relative_residual=result["relative_residual"],
            relative_residual_linear=result["relative_residual_linear"],
        )
        ok = (
            fit.coefficients[1] > 0
            and result["relative_residual"] < 0.10
            and fit.residual_norm < result["fit_linear"].residual_norm
        )
    if args.check:
        payload["passed"] = ok
        _emit_json(payload, args.output)
        if not ok:
            raise CheckFailure(f"tfim scaling --kind {args.kind}")
        return EXIT_OK
    _emit_json(payload, args.output)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    lam = getattr(args, "lambda")
    seps = [args.r] if args.r is not None else list(range(1, args.n // 2 + 1))
    rows = []
    worst = 0.0
    ground_energy = None
    for r in seps:
        report = exact.observables(args.n, lam, args.t, r)
        ground_energy = report.ground_energy
        params = tfim.TfimParams(
            coupling=lam, temperature=args.t, sites=args.n, separation=r,
        )
        free = tfim.correlations(params)
        free_mi = tfim.correlation_mi(params)
        diffs = {
            "mz": abs(free.mz - report.correlations.mz),
            "gxx": abs(free.gxx - report.correlations.gxx),
            "gyy": abs(free.gyy - report.correlations.gyy),
            "gzz": abs(free.gzz - report.correlations.gzz),
            "MI": abs(free_mi - report.mi),
        }
        max_abs = max(diffs.values())
        worst = max(worst, max_abs)
        rows.append({
            "r": r,
            "free_fermion": {
                "mz": free.mz, "gxx": free.gxx, "gyy": free.gyy,
                "gzz": free.gzz, "MI": free_mi,
            },
            "exact": {
                "mz": report.correlations.mz, "gxx": report.correlations.gxx,
                "gyy": report.correlations.gyy, "gzz": report.correlations.gzz,
                "MI": report.mi,
            },
            "abs_diff": diffs,
            "max_abs_diff": max_abs,
        })
    payload = {
        "N": args.n,
        "lambda": lam,
        "T": args.t,
        "ground_energy": ground_energy,
        "rows": rows,
        "max_abs_diff": worst,
        "threshold": args.max_abs_diff,
        "passed": worst <= args.max_abs_diff,
    }
    if args.format == "csv":
        lines = ["r,quantity,free_fermion,exact,abs_diff"]
        for row in rows:
            for q in ("mz", "gxx", "gyy", "gzz", "MI"):
                lines.append(
                    f"{row['r']},{q},{row['free_fermion'][q]:.12g},"
                    f"{row['exact'][q]:.12g},{row['abs_diff'][q]:.12g}"
                )
        lines.append(f"max,all,,,{worst:.12g}")
        _emit("\n".join(lines) + "\n", args.output)
    else:
        _emit_json(payload, args.output)
    if worst > args.max_abs_diff:
        raise CheckFailure(
            f"oracle divergence {worst:.3e} exceeds {args.max_abs_diff:.3e}"
        )
    return EXIT_OK


def _read_xy(path: str, x_col: str | None, y_col: str | None):
    import csv as _csv

    with open(path, newline="") as fh:
        rows = [r for r in _csv.reader(fh) if r and not r[0].startswith("#")]
    header, data = rows[0], rows[1:]
    if x_col is None or y_col is None:
        xi, yi = 0, 1
    else:
        xi, yi = header.index(x_col), header.index(y_col)
    xs, ys = [], []
    for row in data:
        try:
            xs.append(float(row[xi]))
            ys.append(float(row[yi]))
        except (ValueError, IndexError):
            continue  # skip non-numeric rows (error rows, blanks)
    return np.array(xs), np.array(ys)


def _cmd_fit(args) -> int:
    xs, ys = _read_xy(args.input, args.x_col, args.y_col)
    if args.action == "power":
        fit = analysis.power_law_fit(xs, ys)
    elif args.action == "log":
        fit = analysis.log_poly_fit(xs, ys, degree=1, full=args.full)
    else:
        fit = analysis.log_poly_fit(xs, ys, degree=3, full=args.full)
    _emit_json(_fit_payload(fit), args.output)
    return EXIT_OK


def _cmd_props(args) -> int:
    rng = np.random.default_rng(args.seed)
    trials = args.trials
    failures = []

    def check(name, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'} {name}"
        if detail:
            line += f" ({detail})"
        print(line)
        if not ok:
            failures.append(name)

    worst_klein = math.inf
    for _ in range(trials):
        rho = density.random_density_matrix(4, rng)
        sigma = density.random_density_matrix(4, rng)
        worst_klein = min(worst_klein, density.relative_entropy(rho, sigma))
    check("klein-inequality", worst_klein >= -1e-9, f"min = {worst_klein:.3e}")

    worst_mi, worst_gap = math.inf, 0.0
    for dims in ((2, 2), (2, 3)):
        for _ in range(trials):
            rho = density.random_density_matrix(dims, rng)
            mi = density.mutual_information(rho)
            worst_mi = min(worst_mi, mi)
            product = density.tensor_product(
                density.partial_trace(rho, {0}), density.partial_trace(rho, {1})
            )
            worst_gap = max(worst_gap, abs(density.relative_entropy(rho, product) - mi))
    check("mi-nonnegative", worst_mi >= -1e-9, f"min = {worst_mi:.3e}")
    check("mi-equals-relative-entropy", worst_gap <= 1e-9, f"max gap = {worst_gap:.3e}")

    worst_prod = 0.0
    for _ in range(trials):
        rho = density.tensor_product(
            density.random_density_matrix(2, rng), density.random_density_matrix(2, rng)
        )
        worst_prod = max(worst_prod, density.mutual_information(rho))
    check("product-state-mi-zero", worst_prod < 1e-9, f"max = {worst_prod:.3e}")

    if failures:
        raise CheckFailure(f"property suites failed: {', '.join(failures)}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

PHYSICS_DEFAULTS = (
    "Physics defaults: ensemble=symmetric, sector=even, quadrature starts "
    "at 4096 points (tolerance 1e-10, cap 2^20), temperature-derivative "
    "step min(1e-3, |T-Tc|/10), coupling-derivative step 1e-4 for scaling "
    "fits."
)


def _add_common(parser, *, output=True, fmt=True, workers=True):
    parser.epilog = PHYSICS_DEFAULTS
    parser.add_argument("--config", help="JSON file of option defaults")
    if output:
        parser.add_argument("--output", help="write to this path instead of stdout")
    if fmt:
        parser.add_argument("--format", choices=("csv", "json"), default="csv")
    if workers:
        parser.add_argument("--workers", type=int, default=1,
                            help="concurrent sweep workers (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="critent",
        description="Two-site mutual information in exactly solvable spin models. "
        "Defaults: ensemble=symmetric, sector=even, quadrature starts at 4096 "
        "points (tolerance 1e-10), derivative steps min(1e-3, |T-Tc|/10) in T "
        "and 1e-4 in lambda for scaling fits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dimer", help="dimer MI against temperature")
    p.add_argument("--t-min", type=float, default=0.1)
    p.add_argument("--t-max", type=float, default=10.0)
    p.add_argument("--t-count", type=int, default=100)
    _add_common(p)
    p.set_defaults(func=_cmd_dimer)

    p = sub.add_parser("ising2d", help="2D Ising correlations and MI")
    p.add_argument("action", choices=("corr", "mi", "sweep", "exponents"))
    p.add_argument("--t", type=float, default=None,
                   help="temperature (default: critical)")
    p.add_argument("--t-min", type=float, default=1.5)
    p.add_argument("--t-max", type=float, default=3.5)
    p.add_argument("--t-count", type=int, default=21)
    p.add_argument("--n", type=int, default=30, help="separation for exponents")
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=50)
    p.add_argument("--n-step", type=int, default=1)
    p.add_argument("--ensemble", choices=ising2d.ENSEMBLES, default="symmetric")
    p.add_argument("--side", choices=("below", "above"), default="below")
    p.add_argument("--check", action="store_true",
                   help="exit 3 unless the fitted law matches the expected band")
    _add_common(p)
    p.set_defaults(func=_cmd_ising2d)

    p = sub.add_parser("tfim", help="transverse-field Ising chain MI")
    p.add_argument("action", choices=("mi", "sweep", "scaling"))
    p.add_argument("--lambda", type=float, default=1.0)
    p.add_argument("--lambda-min", type=float, default=0.0)
    p.add_argument("--lambda-max", type=float, default=2.0)
    p.add_argument("--lambda-count", type=int, default=41)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--n", type=int, default=1000, help="ring size")
    p.add_argument("--r-min", type=int, default=1)
    p.add_argument("--r-max", type=int, default=50)
    p.add_argument("--r-step", type=int, default=1)
    p.add_argument("--sector", choices=tfim.SECTORS, default="even")
    p.add_argument("--kind", choices=("nn", "far"), default="nn",
                   help="scaling: nearest-neighbour (ln N) or farthest pair (ln^3 N)")
    p.add_argument("--check", action="store_true")
    _add_common(p)
    p.set_defaults(func=_cmd_tfim)

    p = sub.add_parser("oracle", help="exact-diagonalization comparison")
    p.add_argument("action", choices=("compare",))
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--lambda", type=float, default=1.0)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--r", type=int, default=None,
                   help="single separation (default: all r <= N/2)")
    p.add_argument("--max-abs-diff", type=float, default=1e-8)
    _add_common(p, workers=False)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("fit", help="fit a CSV's (x, y) columns")
    p.add_argument("action", choices=("power", "log", "logcube"))
    p.add_argument("--input", required=True)
    p.add_argument("--x-col", default=None)
    p.add_argument("--y-col", default=None)
    p.add_argument("--full", action="store_true",
                   help="log fits: carry every power of ln x (diagnostic)")
    _add_common(p, fmt=False, workers=False)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("props", help="random-state property suites")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=12345)
    _add_common(p, output=False, fmt=False, workers=False)
    p.set_defaults(func=_cmd_props)

    return parser


def _apply_config(parser: argparse.ArgumentParser, args, argv) -> None:
    """Config supplies values only for options not given on the command line."""
    if not getattr(args, "config", None):
        return
    with open(args.config) as fh:
        config = json.load(fh)
    given = {tok.split("=", 1)[0].lstrip("-").replace("-", "_")
             for tok in argv if tok.startswith("--")}
    for key, value in config.items():
        key = key.replace("-", "_")
        if not hasattr(args, key):
            raise ValueError(f"config key {key!r} is not an option here")
        if key not in given:
            setattr(args, key, value)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code not in (0, None) else EXIT_OK
    try:
        _apply_config(parser, args, argv)
        if args.command == "ising2d" and args.t is None:
            args.t = ising2d.critical_temperature()
        return args.func(args)
    except CheckFailure as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except ConvergenceError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
