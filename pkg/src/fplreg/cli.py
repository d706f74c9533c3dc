"""Command-line front end: simulate, fit, predict, benchmark, crossval.

Exit codes: 0 success, 2 user error (flags or file formats), 3 estimator
failure (rank deficiency, degenerate data), 4 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import fileio
from .errors import (
    DegenerateData,
    DimensionMismatch,
    DomainError,
    EmptyNeighborhood,
    GridMismatch,
    InvalidConfig,
    RankDeficient,
)
from .fplm import FitConfig, cross_validate, fit_fplm, predict_g
from .funcspace import inner_product
from .kernelreg import KernelSpec, median_bandwidth
from .simstudy import SimConfig, error_report, generate, run_benchmark

EXIT_USER = 2
EXIT_ESTIMATOR = 3
EXIT_IO = 4

_USER_ERRORS = (InvalidConfig, DomainError, GridMismatch, DimensionMismatch)
_ESTIMATOR_ERRORS = (RankDeficient, DegenerateData)


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _cmd_simulate(args) -> int:
    config = SimConfig(
        n=args.n,
        seed=args.seed,
        noise_sd=args.noise_sd,
        grid_points=args.grid_points,
    )
    data, truth = generate(config)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    fileio.write_curves_csv(out / "X.csv", data.X)
    fileio.write_curves_csv(out / "T.csv", data.T)
    fileio.write_curves_csv(out / "b_true.csv", [truth.b_true])
    fileio.write_manifest(
        out / "manifest.json", "X.csv", "T.csv", data.Y,
        truth=truth, b_true_path="b_true.csv",
    )
    print(f"wrote {out / 'manifest.json'} (n={config.n}, seed={config.seed})")
    return 0


def _cmd_fit(args) -> int:
    data, truth = fileio.load_dataset(args.manifest)
    cfg = FitConfig(
        m=args.m,
        h=args.bandwidth,
        bandwidth_multiplier=(
            args.bandwidth_multiplier if args.bandwidth is None else None
        ),
        kernel=KernelSpec(args.kernel),
    )
    h_base = median_bandwidth(data.T)
    model = fit_fplm(data, cfg)
    fileio.save_model(args.out_model, model)
    print(f"n = {data.n}")
    print(f"median bandwidth = {h_base!r}")
    print(f"h = {model.h!r}")
    print(f"m = {model.m}")
    print("eigenvalues used =", " ".join(repr(v) for v in model.eigenvalues_used))
    if truth is not None:
        rep = error_report(model, data, truth)
        print(f"mse1 = {rep.mse1!r}")
        print(f"mse2 = {rep.mse2!r}")
        print(f"mse3 = {rep.mse3!r}")
    print(f"model written to {args.out_model}")
    return 0


def _cmd_predict(args) -> int:
    model = fileio.load_model(args.model)
    X = fileio.read_curves_csv(args.x_curves)
    T = fileio.read_curves_csv(args.t_curves)
    if len(X) != len(T):
        raise InvalidConfig(f"curve counts differ: {len(X)} x-curves, {len(T)} t-curves")
    lines = ["linear,g,total,empty_neighborhood"]
    successes = 0
    for x, t in zip(X, T):
        linear = inner_product(model.b_hat, x)
        try:
            g = predict_g(model, t)
        except EmptyNeighborhood:
            lines.append(f"{linear!r},,,1")
            continue
        successes += 1
        lines.append(f"{linear!r},{g!r},{linear + g!r},0")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if successes else EXIT_ESTIMATOR


def _cmd_benchmark(args) -> int:
    config = SimConfig(
        n=args.n,
        seed=args.seed,
        noise_sd=args.noise_sd,
        grid_points=args.grid_points,
    )
    table = run_benchmark(
        config,
        m_grid=args.m_grid,
        multipliers=args.multipliers,
        replications=args.replications,
        mode=args.mode,
        jobs=args.jobs,
    )
    fileio.write_benchmark_csv(args.out_csv, table)
    print(
        f"wrote {args.out_csv} ({table.mode}, n={table.n}, "
        f"{table.replications} replications, {len(table.cells)} cells)"
    )
    return 0


def _cmd_crossval(args) -> int:
    data, _ = fileio.load_dataset(args.manifest)
    best_m, best_mult, table = cross_validate(
        data,
        m_grid=args.m_grid,
        h_multipliers=args.multipliers,
        folds=args.folds,
        seed=args.seed,
    )
    if args.out_csv:
        fileio.write_cv_csv(args.out_csv, table)
    print(f"selected m = {best_m}, bandwidth multiplier = {best_mult!r}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fplreg",
        description="Functional partial linear regression toolkit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="draw a dataset from the simulation design")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise-sd", type=float, default=0.5)
    p.add_argument("--grid-points", type=int, default=201)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("fit", help="fit the partial linear model to a dataset")
    p.add_argument("--manifest", required=True)
    p.add_argument("--m", type=int, required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--bandwidth", type=float, default=None)
    group.add_argument("--bandwidth-multiplier", type=float, default=1.0)
    p.add_argument(
        "--kernel",
        choices=[k.value for k in KernelSpec],
        default=KernelSpec.QUADRATIC.value,
    )
    p.add_argument("--out-model", required=True)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("predict", help="predict responses for new curve pairs")
    p.add_argument("--model", required=True)
    p.add_argument("--x-curves", required=True)
    p.add_argument("--t-curves", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("benchmark", help="run the Monte Carlo benchmark")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--replications", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise-sd", type=float, default=0.5)
    p.add_argument("--grid-points", type=int, default=201)
    p.add_argument("--mode", choices=["fplm", "flm", "npfr"], default="fplm")
    p.add_argument("--m-grid", type=_int_list, default=[1, 2, 3, 4, 5])
    p.add_argument("--multipliers", type=_float_list, default=[1, 2, 4, 8, 16])
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out-csv", required=True)
    p.set_defaults(func=_cmd_benchmark)

    p = sub.add_parser("crossval", help="K-fold selection of (m, bandwidth multiplier)")
    p.add_argument("--manifest", required=True)
    p.add_argument("--m-grid", type=_int_list, default=[1, 2, 3, 4, 5])
    p.add_argument("--multipliers", type=_float_list, default=[1, 2, 4, 8, 16])
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-csv", default=None)
    p.set_defaults(func=_cmd_crossval)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _ESTIMATOR_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ESTIMATOR
    except _USER_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
