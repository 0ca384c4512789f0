"""Command-line interface.

Subcommands: periodogram, smooth, acf, whittle, simulate, experiment,
verify.  Input series are CSV files holding one numeric column (an optional
single header row is skipped); outputs are CSV or JSON (chosen by the
output path's extension), always carrying a comment line recording the
exact invocation so results can be reproduced.

Exit codes: 0 success, 2 input/usage errors, 3 numerical failures.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .arfit import ArmaModel
from .complete import AutoAIC, FixedOrder
from .core import FrequencyGrid, TimeSeries
from .estimators import ESTIMATOR_KINDS, EstimatorSpec, evaluate_estimator
from .exceptions import DomainError, NumericalError
from .integrated import (
    FourierSum,
    RiemannIntegral,
    SpectralMeanConfig,
    acf_estimate,
    ar_family,
    smooth_periodogram,
    spectral_window,
    whittle_fit,
)
from .complete import threshold_real
from .simulation import ExperimentSpec, builtin_models, run_experiment, simulate_arma
from . import verify as verify_mod

THREADS_ENV = "PREDSPEC_THREADS"


# ---------------------------------------------------------------- I/O helpers

def _fmt(x) -> str:
    """Shortest decimal that round-trips the float."""
    return repr(float(x))


def _read_series(path: str) -> TimeSeries:
    values = []
    first_data_line = True
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                values.append(float(line))
                first_data_line = False
            except ValueError:
                if first_data_line:
                    # a single header row is tolerated at the top
                    first_data_line = False
                    continue
                raise DomainError(f"non-numeric value in {path!r}: {line!r}")
    if not values:
        raise DomainError(f"no numeric data found in {path!r}")
    return TimeSeries(np.asarray(values))


def _write_columns(out: str | None, comment: str, columns: dict) -> None:
    names = list(columns)
    rows = len(next(iter(columns.values())))
    if out is not None and out.endswith(".json"):
        payload = {"command": comment, "columns": {k: [float(v) for v in vals] for k, vals in columns.items()}}
        with open(out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        return
    lines = [f"# {comment}", ",".join(names)]
    for i in range(rows):
        lines.append(",".join(_fmt(columns[k][i]) for k in names))
    text = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _comment(argv: list) -> str:
    return "predspec " + " ".join(argv)


# ------------------------------------------------------------- flag plumbing

def _parse_model_token(token: str) -> ArmaModel:
    name, _, param = token.partition(":")
    name = name.strip().lower()
    if name == "m1":
        if not param:
            raise DomainError("model m1 needs a parameter, e.g. m1:0.9")
        return builtin_models("m1", float(param))
    if name == "m2":
        if param:
            raise DomainError("model m2 takes no parameter")
        return builtin_models("m2")
    raise DomainError(f"unknown model {token!r} (use m1:LAMBDA or m2)")


def _parse_threshold(value: str):
    if value.lower() == "none":
        return None
    try:
        delta = float(value)
    except ValueError:
        raise DomainError(f"threshold must be a number or 'none', got {value!r}")
    if delta <= 0:
        raise DomainError("threshold must be positive")
    return delta


def _parse_grid(value: str, n: int) -> FrequencyGrid:
    if value == "fourier":
        return FrequencyGrid.fourier(n)
    if value.startswith("uniform:"):
        return FrequencyGrid.uniform(int(value.split(":", 1)[1]))
    raise DomainError(f"grid must be 'fourier' or 'uniform:N', got {value!r}")


def _estimator_from_flags(args) -> EstimatorSpec:
    kind = args.kind
    source = None
    if kind in ("complete", "tapered-complete"):
        if args.order != "auto":
            source = FixedOrder(int(args.order))
        else:
            source = AutoAIC()
    taper_d = getattr(args, "taper_d", None)
    return EstimatorSpec(kind=kind, source=source, taper_d=taper_d)


def _add_series_flags(p: argparse.ArgumentParser, kinds=ESTIMATOR_KINDS) -> None:
    p.add_argument("input", help="CSV file with one numeric column")
    p.add_argument("--kind", choices=[k for k in kinds if k != "complete-true"],
                   default="regular", help="periodogram variant")
    p.add_argument("--order", default="auto",
                   help="AR order for completed kinds: 'auto' (AIC) or an integer")
    p.add_argument("--taper-d", dest="taper_d", type=int, default=None,
                   help="taper rise length (default: ceil(n/10))")
    p.add_argument("--threshold", default="none",
                   help="floor for the real part: a positive number or 'none'")
    p.add_argument("--center", action=argparse.BooleanOptionalAction, default=True,
                   help="subtract the sample mean first (default on)")
    p.add_argument("--out", default=None, help="output path (.csv or .json; default stdout CSV)")


def _load_input(args) -> TimeSeries:
    ts = _read_series(args.input)
    return ts.center() if args.center else ts


# ---------------------------------------------------------------- subcommands

def _cmd_periodogram(args, argv) -> int:
    ts = _load_input(args)
    grid = _parse_grid(args.grid, ts.n)
    est = _estimator_from_flags(args)
    pg = evaluate_estimator(ts, est, grid)
    delta = _parse_threshold(args.threshold)
    if delta is not None:
        pg = threshold_real(pg, delta)
    _write_columns(
        args.out,
        _comment(argv),
        {
            "frequency": pg.grid.frequencies,
            "re": pg.values.real,
            "im": pg.values.imag,
        },
    )
    return 0


def _cmd_smooth(args, argv) -> int:
    ts = _load_input(args)
    grid = FrequencyGrid.fourier(ts.n)
    est = _estimator_from_flags(args)
    pg = evaluate_estimator(ts, est, grid)
    delta = _parse_threshold(args.threshold)
    if delta is not None:
        pg = threshold_real(pg, delta)
    window = spectral_window(args.window, args.m)
    sm = smooth_periodogram(pg, window)
    _write_columns(
        args.out,
        _comment(argv),
        {"frequency": sm.grid.frequencies, "value": sm.values.real},
    )
    return 0


def _cmd_acf(args, argv) -> int:
    ts = _load_input(args)
    est = _estimator_from_flags(args)
    mode = FourierSum() if args.mode == "fourier" else RiemannIntegral(args.points)
    cfg = SpectralMeanConfig(mode=mode, threshold=_parse_threshold(args.threshold))
    autocov, acf = acf_estimate(ts, args.lags, est, cfg)
    _write_columns(
        args.out,
        _comment(argv),
        {"lag": np.arange(args.lags + 1), "autocov": autocov, "acf": acf},
    )
    return 0


def _cmd_whittle(args, argv) -> int:
    ts = _load_input(args)
    name, _, param = args.family.partition(":")
    if name.strip().lower() != "ar" or not param:
        raise DomainError("family must be 'ar:P' for an AR(P) spectral family")
    family = ar_family(int(param))
    if args.init is not None:
        init = [float(tok) for tok in args.init.split(",")]
    else:
        init = [0.0] * family.dim
    est = _estimator_from_flags(args)
    mode = FourierSum() if args.mode == "fourier" else RiemannIntegral(args.points)
    cfg = SpectralMeanConfig(mode=mode, threshold=_parse_threshold(args.threshold))
    result = whittle_fit(ts, family, est, init, cfg)
    _write_columns(
        args.out,
        _comment(argv),
        {
            "parameter": np.arange(1, family.dim + 1),
            "estimate": result.theta,
        },
    )
    status = "converged" if result.converged else "did not converge"
    print(
        f"# objective {_fmt(result.value)} after {len(result.trace)} evaluations ({status})",
        file=sys.stderr,
    )
    return 0


def _cmd_simulate(args, argv) -> int:
    model = _parse_model_token(args.model)
    ts = simulate_arma(model, args.n, args.seed)
    _write_columns(args.out, _comment(argv), {"value": ts.values})
    return 0


def _cmd_experiment(args, argv) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        spec = parse_experiment_config(fh.read())
    threads = args.threads
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV, "1"))
    table = run_experiment(spec, threads=threads)
    acf_mode = table.mode == "acf"
    cols = {
        "estimator": [row.estimator for row in table.rows],
        ("mse" if acf_mode else "imse"): [row.imse for row in table.rows],
        ("bias" if acf_mode else "ibias"): [row.ibias for row in table.rows],
        ("mse_se" if acf_mode else "imse_se"): [row.imse_se for row in table.rows],
        ("bias_se" if acf_mode else "ibias_se"): [row.ibias_se for row in table.rows],
    }
    names = list(cols)
    lines = [f"# {_comment(argv)} (mode={table.mode}, runtime={table.runtime_seconds:.2f}s)"]
    lines.append(",".join(names))
    for i in range(len(table.rows)):
        cells = [cols[names[0]][i]] + [_fmt(cols[k][i]) for k in names[1:]]
        lines.append(",".join(cells))
    text = "\n".join(lines) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return 0


def _cmd_verify(args, argv) -> int:
    results = verify_mod.run_suite(args.suite)
    all_passed = True
    for res in results:
        flag = "PASS" if res.passed else "FAIL"
        all_passed &= res.passed
        print(f"{flag} {res.name}: max error {res.error:.3e} (tol {res.tol:.0e})")
    return 0 if all_passed else 3


# ------------------------------------------------------- experiment config

def parse_experiment_config(text: str) -> ExperimentSpec:
    """Parse the key = value experiment format (see README for the keys)."""
    entries: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DomainError(f"config line {lineno} is not 'key = value': {raw!r}")
        key, _, value = line.partition("=")
        entries[key.strip().lower()] = value.strip()

    def pop(key, default=None):
        return entries.pop(key, default)

    model_token = pop("model")
    if model_token is None:
        raise DomainError("config must set 'model'")
    lam = pop("lambda", None)
    if lam is not None:
        if ":" in model_token:
            raise DomainError("give the model parameter once: either 'lambda =' or 'model = m1:L'")
        model_token = f"{model_token}:{lam}"
    model = _parse_model_token(model_token)
    try:
        n = int(pop("n", ""))
        replications = int(pop("b", pop("replications", "")))
        seed = int(pop("seed", ""))
    except ValueError:
        raise DomainError("config must set integer 'n', 'B', and 'seed'")

    order_token = pop("order", "auto")
    source = AutoAIC() if order_token == "auto" else FixedOrder(int(order_token))
    taper_token = pop("taper_d", None)
    taper_d = int(taper_token) if taper_token is not None else None

    est_tokens = [tok.strip() for tok in pop("estimators", "").split(",") if tok.strip()]
    if not est_tokens:
        raise DomainError("config must list at least one estimator")
    estimators = []
    for tok in est_tokens:
        if tok not in ESTIMATOR_KINDS:
            raise DomainError(f"unknown estimator {tok!r}")
        estimators.append(
            EstimatorSpec(
                kind=tok,
                source=source if tok in ("complete", "tapered-complete") else None,
                taper_d=taper_d if tok in ("tapered", "tapered-complete") else None,
            )
        )

    kwargs: dict = {}
    threshold = pop("threshold", None)
    if threshold is not None:
        kwargs["threshold"] = float(threshold)
    window = pop("window", None)
    m_token = pop("m", None)
    if (window is None) != (m_token is None):
        raise DomainError("smoothing needs both 'window' and 'm'")
    if window is not None:
        kwargs["smoothing"] = (window, int(m_token))
    acf_lags = pop("acf_lags", None)
    if acf_lags is not None:
        kwargs["acf_lags"] = int(acf_lags)
    acf_points = pop("acf_points", None)
    if acf_points is not None:
        kwargs["acf_points"] = int(acf_points)
    if entries:
        raise DomainError(f"unknown config keys: {', '.join(sorted(entries))}")
    return ExperimentSpec(
        model=model,
        n=n,
        replications=replications,
        estimators=tuple(estimators),
        seed=seed,
        **kwargs,
    )


def format_experiment_config(spec: ExperimentSpec) -> str:
    """Serialize a spec back to the config format (shared-flag estimators)."""
    lines = ["model = m2"]
    if spec.model.q == 0 and spec.model.p == 2 and spec.model.ar[0] == 0.0:
        lam = float(np.sqrt(-spec.model.ar[1]))
        lines = ["model = m1", f"lambda = {_fmt(lam)}"]
    lines += [
        f"n = {spec.n}",
        f"B = {spec.replications}",
        f"seed = {spec.seed}",
        f"estimators = {', '.join(est.kind for est in spec.estimators)}",
        f"threshold = {_fmt(spec.threshold)}",
    ]
    for est in spec.estimators:
        if isinstance(est.source, FixedOrder):
            lines.append(f"order = {est.source.p}")
            break
    for est in spec.estimators:
        if est.taper_d is not None:
            lines.append(f"taper_d = {est.taper_d}")
            break
    if spec.smoothing is not None:
        lines.append(f"window = {spec.smoothing[0]}")
        lines.append(f"m = {spec.smoothing[1]}")
    if spec.acf_lags is not None:
        lines.append(f"acf_lags = {spec.acf_lags}")
        lines.append(f"acf_points = {spec.acf_points}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------- parser

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="predspec",
        description="Boundary-corrected spectral estimation via predictive DFT completion.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("periodogram", help="periodogram variants on a series")
    _add_series_flags(p)
    p.add_argument("--grid", default="fourier", help="'fourier' or 'uniform:N'")
    p.set_defaults(func=_cmd_periodogram)

    p = sub.add_parser("smooth", help="window-smoothed periodogram")
    _add_series_flags(p)
    p.add_argument("--window", required=True, choices=["daniell", "bartlett", "hann"])
    p.add_argument("--m", required=True, type=int, help="window half-width")
    p.set_defaults(func=_cmd_smooth)

    p = sub.add_parser("acf", help="autocovariance/ACF from a periodogram estimate")
    _add_series_flags(p)
    p.add_argument("--lags", required=True, type=int)
    p.add_argument("--mode", default="riemann", choices=["riemann", "fourier"])
    p.add_argument("--riemann-points", dest="points", default=500, type=int,
                   help="Riemann cells")
    p.set_defaults(func=_cmd_acf)

    p = sub.add_parser("whittle", help="fit a parametric spectral family")
    _add_series_flags(p)
    p.add_argument("--family", required=True, help="'ar:P'")
    p.add_argument("--init", default=None, help="comma-separated start point")
    p.add_argument("--mode", default="riemann", choices=["riemann", "fourier"])
    p.add_argument("--riemann-points", dest="points", default=500, type=int)
    p.set_defaults(func=_cmd_whittle)

    p = sub.add_parser("simulate", help="simulate a builtin model")
    p.add_argument("--model", required=True, help="m1:LAMBDA or m2")
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("experiment", help="run a Monte Carlo experiment config")
    p.add_argument("config", help="key = value config file")
    p.add_argument("--threads", type=int, default=None,
                   help=f"worker processes (default: ${THREADS_ENV} or 1)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("verify", help="run oracle identity checks")
    p.add_argument("--suite", default="all", choices=["unbiasedness", "oracle", "all"])
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, argv)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
