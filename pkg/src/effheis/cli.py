"""Batch front-end.

    effheis <validate|evolve|verify|order-study|boson-check> --config FILE
            [--out FILE] [--csv FILE] [--order K] [--lambdas L1,L2,...]
            [--jobs N] [--seed S] [--expect-stable]

Exit codes: 0 ok, 1 runtime error, 2 config error, 3 validation failure,
4 verification failure, 5 failed expectation.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import linalg
from .boson import divergence_demo, stability_check
from .config import ModelConfig, encode_matrix, load_config
from .dynamics import (
    ORDER_STUDY_MAX_DT,
    TimeGrid,
    compare,
    exact_series,
    integrate_time_local,
)
from .errors import ConfigError, DegenerateFit, EffheisError, TooManyModes
from .perturbation import kappa12
from .verify import run_verification

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2
EXIT_VALIDATION = 3
EXIT_VERIFICATION = 4
EXIT_EXPECTATION = 5


def _emit(report: dict, out_path: str | None):
    text = json.dumps(report, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _report(command: str, cfg: ModelConfig, payload: dict, t0: float) -> dict:
    return {
        "command": command,
        "config_digest": cfg.digest(),
        "payload": payload,
        "wall_time_s": time.monotonic() - t0,
    }


def _write_series_csv(path: str, series) -> None:
    dim = series.values[0].shape[0]
    header = ["t"]
    for a in range(dim):
        for b in range(dim):
            header += [f"re_{a}_{b}", f"im_{a}_{b}"]
    lines = [",".join(header)]
    for t, M in zip(series.grid.times, series.values):
        row = [repr(float(t))]
        for a in range(dim):
            for b in range(dim):
                row += [repr(float(M[a, b].real)), repr(float(M[a, b].imag))]
        lines.append(",".join(row))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _series_payload(series) -> dict:
    return {
        "label": series.label,
        "times": [float(t) for t in series.grid.times],
        "values": [encode_matrix(M) for M in series.values],
    }


def cmd_validate(cfg: ModelConfig, args) -> tuple[dict, int]:
    payload = {}
    if cfg.H0_spec is not None and cfg.HI_spec is not None:
        cfg.split()
        payload["fermion"] = "valid"
    if cfg.boson is not None:
        cfg.boson_h0()
        payload["boson"] = "valid"
    if not payload:
        raise ConfigError("config declares neither fermionic nor bosonic Hamiltonians")
    return payload, EXIT_OK


def cmd_evolve(cfg: ModelConfig, args) -> tuple[dict, int]:
    split = cfg.split()
    grid = TimeGrid(t_end=cfg.grid_t_end, steps=cfg.grid_steps)
    exact = exact_series(split, cfg.m, grid, cfg.resonance_tol)
    if args.order == "exact":
        series = exact
        free_gen = kappa12(split, cfg.m, cfg.resonance_tol).h0
        free = [linalg.matrix_exponential(free_gen * t) for t in grid.times]
        sup = max(linalg.max_abs(a - b) for a, b in zip(series.values, free))
        comparison = {"sup_error_vs_free": sup}
    else:
        order = int(args.order)
        series = integrate_time_local(kappa12(split, cfg.m, cfg.resonance_tol), order, grid)
        comparison = {"sup_error_vs_exact": compare(exact, series)["sup_error"]}
    csv_path = args.csv or (args.out + ".csv" if args.out else None)
    if csv_path:
        _write_series_csv(csv_path, series)
    payload = {"series": _series_payload(series), **comparison}
    if csv_path:
        payload["csv_path"] = csv_path
    return payload, EXIT_OK


def cmd_verify(cfg: ModelConfig, args) -> tuple[dict, int]:
    if cfg.n > 3:
        raise TooManyModes(f"verify requires n <= 3, got n={cfg.n}")
    split = cfg.split()
    thresholds = None
    if cfg.report_tol is not None:
        thresholds = {name: cfg.report_tol for name in
                      ("heisenberg_reduction", "matrix_laws", "superoperator_laws", "moment_equivalence", "stationarity")}
    seed = cfg.seed if args.seed is None else args.seed
    result = run_verification(
        split, cfg.m, seed=seed, resonance_tol=cfg.resonance_tol, thresholds=thresholds
    )
    return result, EXIT_OK if result["all_pass"] else EXIT_VERIFICATION


def cmd_order_study(cfg: ModelConfig, args) -> tuple[dict, int]:
    if not args.lambdas:
        raise ConfigError("order-study requires --lambdas L1,L2,...")
    lambdas = [float(x) for x in args.lambdas.split(",")]
    if len(lambdas) < 3:
        raise ConfigError("order-study needs at least 3 coupling values")
    split = cfg.split()
    grid = TimeGrid(t_end=cfg.grid_t_end, steps=cfg.grid_steps)
    order = int(args.order) if args.order not in (None, "exact") else 2

    def error_for(lam: float) -> float:
        from dataclasses import replace

        split_lam = replace(split, coupling=lam)
        exact = exact_series(split_lam, cfg.m, grid, cfg.resonance_tol)
        approx = integrate_time_local(
            kappa12(split_lam, cfg.m, cfg.resonance_tol),
            order,
            grid,
            max_dt=ORDER_STUDY_MAX_DT,
        )
        return compare(exact, approx)["sup_error"]

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            errors = list(pool.map(error_for, lambdas))
    else:
        errors = [error_for(lam) for lam in lambdas]
    payload = {"order": order, "lambdas": lambdas, "errors": errors}
    if all(e < 1e-13 for e in errors):
        payload["degenerate_fit"] = True
        payload["slope"] = None
    else:
        payload["degenerate_fit"] = False
        payload["slope"] = float(np.polyfit(np.log(lambdas), np.log(errors), 1)[0])
    return payload, EXIT_OK


def cmd_boson_check(cfg: ModelConfig, args) -> tuple[dict, int]:
    H0 = cfg.boson_h0()
    report = stability_check(H0)
    payload = {
        "classification": report.classification,
        "max_imag": report.max_imag,
        "eigenvalues": [[float(z.real), float(z.imag)] for z in report.eigenvalues],
    }
    boson = cfg.boson or {}
    if "X" in boson and "T_list" in boson:
        from .config import decode_matrix

        demo = divergence_demo(H0, decode_matrix(boson["X"]), boson["T_list"])
        payload["divergence_demo"] = {
            "T": demo["T"],
            "norms": [v if np.isfinite(v) else "overflow" for v in demo["norms"]],
            "classification": demo["classification"],
            "overflow": demo["overflow"],
        }
    code = EXIT_OK
    if args.expect_stable and report.classification == "unstable":
        code = EXIT_EXPECTATION
    return payload, code


COMMANDS = {
    "validate": cmd_validate,
    "evolve": cmd_evolve,
    "verify": cmd_verify,
    "order-study": cmd_order_study,
    "boson-check": cmd_boson_check,
}

VALIDATION_ERRORS = (
    "NotAntisymmetric",
    "NotTildeAntisymmetric",
    "NotSymmetric",
    "NotTildeSymmetric",
    "NotHermitian",
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="effheis", description=__doc__)
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True)
    parser.add_argument("--out", default=None)
    parser.add_argument("--csv", default=None)
    parser.add_argument("--order", default="2", help="exact, 1 or 2")
    parser.add_argument("--lambdas", default=None)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--expect-stable", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.monotonic()
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        payload, code = COMMANDS[args.command](cfg, args)
    except (ConfigError, TooManyModes) as exc:
        print(f"config error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EffheisError as exc:
        name = type(exc).__name__
        print(f"{name}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION if name in VALIDATION_ERRORS else EXIT_RUNTIME
    _emit(_report(args.command, cfg, payload, t0), args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
