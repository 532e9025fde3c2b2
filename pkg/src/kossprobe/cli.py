"""Command-line interface.

Machine-readable payloads go to stdout, human-readable diagnostics to stderr.
Exit codes: 0 success, 2 input error, 3 numerical refusal (singular probe
matrix), 4 closed-form adjudication failure.  Every JSON payload carries a
``schema_version`` field.  The environment variable KOSSPROBE_TOLERANCE
supplies the tolerance when the --tolerance flag is not given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .experiment import ConfigError, ExperimentConfig, ExperimentRun, estimate, run, save_run
from .inversion import SingularProbeMatrixError, invert_noisy, psd_project
from .kossakowski import BlochState, KossakowskiMatrix, bloch_evolve
from .oracle import adjudicate, exact_lifted_evolution
from .probe import (
    CANONICAL_PHASE,
    CHANNELS,
    build_matrix_appendix,
    build_matrix_programmatic,
    compare_matrices,
    forward,
)
from .scattering import ScatteringParams, coefficients
from .spin import basis

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_ADJUDICATION = 4


def _resolved_tolerance(args, default: float) -> float:
    if args.tolerance is not None:
        return args.tolerance
    env = os.environ.get("KOSSPROBE_TOLERANCE")
    if env is not None:
        try:
            return float(env)
        except ValueError as exc:
            raise ValueError(f"KOSSPROBE_TOLERANCE is not a number: {env!r}") from exc
    return default


def _emit_json(payload: dict) -> None:
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _read_c_file(path: str) -> KossakowskiMatrix:
    data = json.loads(Path(path).read_text())
    return KossakowskiMatrix.from_dict(data)


def _coeffs_from_args(args) -> tuple[object, float | None]:
    physical = [args.J, args.E, args.mass]
    if args.g is not None:
        if any(v is not None for v in physical):
            raise ValueError("give either --g or the physical set --J --E --mass")
        params = ScatteringParams(g=args.g)
    elif all(v is not None for v in physical):
        params = ScatteringParams.from_physical(args.J, args.E, args.mass, args.hbar)
    else:
        raise ValueError("coupling required: --g, or all of --J --E --mass")
    return coefficients(params), params.k


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_coeffs(args) -> int:
    co, k = _coeffs_from_args(args)
    rows = [
        ("t0", co.t0),
        ("t1", co.t1),
        ("r0", co.r0),
        ("r1", co.r1),
    ]
    if args.output == "json":
        payload = {
            "g": co.g,
            "k": k,
            **{name: [z.real, z.imag] for name, z in rows},
            "T0": abs(co.t0) ** 2,
            "T1": abs(co.t1) ** 2,
            "R0": abs(co.r0) ** 2,
            "R1": abs(co.r1) ** 2,
        }
        _emit_json(payload)
    elif args.output == "csv":
        sys.stdout.write("name,re,im,prob\n")
        for name, z in rows:
            sys.stdout.write(f"{name},{z.real!r},{z.imag!r},{abs(z) ** 2!r}\n")
    else:
        sys.stdout.write(f"g = {co.g:g}\n")
        for name, z in rows:
            sys.stdout.write(
                f"{name} = {z.real:+.12f} {z.imag:+.12f}i   |{name}|^2 = {abs(z) ** 2:.12f}\n"
            )
    return EXIT_OK


def _cmd_forward(args) -> int:
    c = _read_c_file(args.c_file)
    result = forward(c, coefficients(ScatteringParams(g=args.g)), args.phase)
    if args.output == "json":
        _emit_json(
            {
                "g": result.g,
                "phase": result.phase,
                "canonical_phase": result.is_canonical_phase,
                "rates": result.by_channel(),
            }
        )
    elif args.output == "csv":
        sys.stdout.write("channel,rate\n")
        for label, value in result.by_channel().items():
            sys.stdout.write(f"{label},{value!r}\n")
    else:
        for label, value in result.by_channel().items():
            sys.stdout.write(f"{label}  {value:+.12f}\n")
    return EXIT_OK


def _build_matrices(args):
    co = coefficients(ScatteringParams(g=args.g))
    out = {}
    if args.source in ("programmatic", "both"):
        out["programmatic"] = build_matrix_programmatic(co, args.phase)
    if args.source in ("appendix", "both"):
        out["appendix"] = build_matrix_appendix(co)
    return out


def _cmd_build_matrix(args) -> int:
    matrices = _build_matrices(args)
    if args.output == "json":
        payload = {name: m.to_dict() for name, m in matrices.items()}
        if len(matrices) == 2:
            payload["comparison"] = compare_matrices(
                matrices["programmatic"], matrices["appendix"]
            )
        _emit_json(payload)
    elif args.output == "csv":
        if len(matrices) != 1:
            raise ValueError("csv output requires a single --source")
        (m,) = matrices.values()
        for row in m.matrix:
            sys.stdout.write(",".join(repr(float(x)) for x in row) + "\n")
    else:
        for name, m in matrices.items():
            sys.stdout.write(
                f"{name} matrix (g = {m.g:g}, det = {m.det:.6g}, "
                f"cond = {m.condition_number:.6g})\n"
            )
            for row in m.matrix:
                sys.stdout.write("  " + "  ".join(f"{x:+10.6f}" for x in row) + "\n")
    return EXIT_OK


def _read_rates_file(path: str):
    """Returns ('run', ExperimentRun) or ('rates', rates, sigmas-or-None)."""
    text = Path(path).read_text()
    if path.endswith(".csv"):
        rates: dict[str, float] = {}
        sigmas: dict[str, float] = {}
        lines = [line for line in text.splitlines() if line.strip()]
        header = [h.strip() for h in lines[0].split(",")]
        if header[:2] != ["label", "rate"]:
            raise ValueError("rates csv must have header 'label,rate[,sigma]'")
        for line in lines[1:]:
            parts = [p.strip() for p in line.split(",")]
            rates[parts[0]] = float(parts[1])
            if len(parts) > 2 and len(header) > 2:
                sigmas[parts[0]] = float(parts[2])
        missing = [label for label in CHANNELS if label not in rates]
        if missing:
            raise ValueError(f"rates csv missing channels: {missing}")
        r = np.array([rates[label] for label in CHANNELS])
        s = np.array([sigmas[label] for label in CHANNELS]) if sigmas else None
        return "rates", r, s
    data = json.loads(text)
    if isinstance(data, dict) and "channels" in data:
        return "run", ExperimentRun.from_dict(data), None
    if isinstance(data, list):
        return "rates", np.asarray(data, dtype=float), None
    if isinstance(data, dict) and "rates" in data:
        sigmas = np.asarray(data["sigmas"], dtype=float) if "sigmas" in data else None
        return "rates", np.asarray(data["rates"], dtype=float), sigmas
    raise ValueError(f"unrecognized rates file format: {path}")


def _cmd_invert(args) -> int:
    kind, payload, sigmas = _read_rates_file(args.rates)
    seed = args.seed if args.seed is not None else 0
    if kind == "run":
        experiment_run = payload
        if abs(experiment_run.config.g - args.g) > 1e-12:
            raise ValueError(
                f"--g {args.g} does not match the run's coupling {experiment_run.config.g}"
            )
        m = build_matrix_programmatic(coefficients(ScatteringParams(g=args.g)),
                                      experiment_run.config.phase)
        result = estimate(experiment_run, m, z=args.z, bootstrap=args.bootstrap, seed=seed)
    else:
        rates = payload
        if args.sigmas is not None:
            sigmas = np.asarray(json.loads(Path(args.sigmas).read_text()), dtype=float)
        if sigmas is None:
            sigmas = np.zeros(6)
        m = build_matrix_programmatic(coefficients(ScatteringParams(g=args.g)), args.phase)
        result = invert_noisy(rates, sigmas, m, z=args.z, bootstrap=args.bootstrap, seed=seed)

    out = result.to_dict()
    out["cp_report"] = result.c_hat.cp_check().to_dict()
    if args.project_psd:
        out["c_hat_projected"] = psd_project(result.c_hat).to_dict()
    _emit_json(out)
    return EXIT_OK


def _cmd_cp_check(args) -> int:
    c = _read_c_file(args.c_file)
    tol = _resolved_tolerance(args, 1e-10)
    report = c.cp_check(tol)
    if args.output == "text":
        sys.stdout.write(f"eigenvalues: {report.eigenvalues}\n")
        sys.stdout.write(f"positive semidefinite: {report.psd}\n")
        for name, margin in report.conditions.items():
            flag = "ok " if report.conditions_ok[name] else "VIOLATED"
            sys.stdout.write(f"  {name:10s} margin {margin:+.6g}  {flag}\n")
    else:
        _emit_json({"c": c.to_dict(), **report.to_dict()})
    return EXIT_OK


def _cmd_simulate(args) -> int:
    config = ExperimentConfig(
        true_c=_read_c_file(args.c_file),
        g=args.g,
        phase=args.phase,
        exposure=args.exposure,
        calibration=args.calibration,
        shots_per_channel=args.shots,
        seed=args.seed_required,
    )
    experiment_run = run(config)
    json_path, csv_path = save_run(experiment_run, args.out)
    _emit_json(
        {
            "written": [json_path, csv_path],
            "config_hash": config.hash(),
            "flagged_channels": list(experiment_run.flagged_channels),
            "detections": dict(zip(CHANNELS, experiment_run.detections)),
        }
    )
    return EXIT_OK


def _cmd_demo_negative(args) -> int:
    g = args.g
    c = KossakowskiMatrix.diagonal(1.0, 1.0, -1.0)
    co = coefficients(ScatteringParams(g=g))
    rates = forward(c, co)
    report = c.cp_check()

    # single-qubit evolution stays positive: Bloch norms never grow
    times = np.linspace(0.0, 5.0, 11)
    rng = np.random.default_rng(0)
    worst_growth = 0.0
    min_state_eig = np.inf
    for _ in range(32):
        v = rng.normal(size=3)
        v *= rng.uniform(0.0, 1.0) ** (1 / 3) / np.linalg.norm(v)
        state = BlochState(*v)
        previous = state.norm
        for t in times[1:]:
            evolved = bloch_evolve(c, state, float(t))
            worst_growth = max(worst_growth, evolved.norm - previous)
            previous = evolved.norm
            min_state_eig = min(
                min_state_eig, float(np.linalg.eigvalsh(evolved.density_matrix)[0])
            )

    # the lifted map on the entangled probe state develops a negative eigenvalue
    probe_state = basis("canonical").probe_state
    rho = np.outer(probe_state, probe_state.conj())
    small_t = 0.01
    lifted_min_eig = float(
        np.linalg.eigvalsh(exact_lifted_evolution(c, rho, small_t))[0]
    )

    payload = {
        "g": g,
        "kossakowski": c.to_dict(),
        "eigenvalues": list(report.eigenvalues),
        "positive_semidefinite": report.psd,
        "verdict": "not completely positive",
        "rates": rates.by_channel(),
        "negative_transmitted_rate": float(rates.rates[0]),
        "single_qubit_evolution": {
            "bloch_norm_max_growth": worst_growth,
            "min_state_eigenvalue": min_state_eig,
            "positive": bool(worst_growth <= 1e-12 and min_state_eig >= -1e-12),
        },
        "lifted_evolution": {
            "t": small_t,
            "min_eigenvalue": lifted_min_eig,
            "positive": bool(lifted_min_eig >= -1e-12),
        },
    }
    if args.output == "text":
        sys.stdout.write(
            f"Kossakowski matrix diag(1, 1, -1): eigenvalues {report.eigenvalues}, "
            "not positive semidefinite, so the map is not completely positive.\n"
            f"Single-qubit evolution is positive (max Bloch-norm growth "
            f"{worst_growth:.2e}, min state eigenvalue {min_state_eig:.3g}).\n"
            f"Yet the canonical transmitted detection rate at g = {g:g} is "
            f"{rates.rates[0]:+.6f}, a negative probability, and the lifted map "
            f"on the entangled probe state has eigenvalue {lifted_min_eig:+.6f} "
            f"at t = {small_t}.\n"
        )
    else:
        _emit_json(payload)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    tol = _resolved_tolerance(args, 1e-12)
    report = adjudicate(trials=args.trials, tol=tol)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    _emit_json(report)
    if not report["ok"]:
        sys.stderr.write("closed forms deviate from the brute-force oracle\n")
        return EXIT_ADJUDICATION
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("json", "csv", "text"), default="text")
    common.add_argument(
        "--tolerance",
        type=float,
        default=None,
        help="numerical tolerance (default per subcommand; KOSSPROBE_TOLERANCE overrides)",
    )

    parser = argparse.ArgumentParser(
        prog="kossprobe",
        description="Noise-matrix estimation from impurity scattering probabilities.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", parents=[common], help="transmission/reflection table")
    p.add_argument("--g", type=float, default=None, help="dimensionless coupling")
    p.add_argument("--J", type=float, default=None, help="magnetic coupling")
    p.add_argument("--E", type=float, default=None, help="electron energy")
    p.add_argument("--mass", type=float, default=None, help="electron mass")
    p.add_argument("--hbar", type=float, default=1.0)
    p.set_defaults(handler=_cmd_coeffs)

    p = sub.add_parser("forward", parents=[common], help="six detection rates for a given C")
    p.add_argument("--c-file", required=True, help="JSON file with keys c11..c33")
    p.add_argument("--g", type=float, required=True)
    p.add_argument("--phase", type=float, default=CANONICAL_PHASE)
    p.set_defaults(handler=_cmd_forward)

    p = sub.add_parser("build-matrix", parents=[common], help="assemble the 6x6 rate matrix")
    p.add_argument("--g", type=float, required=True)
    p.add_argument("--phase", type=float, default=CANONICAL_PHASE)
    p.add_argument(
        "--source", choices=("programmatic", "appendix", "both"), default="programmatic"
    )
    p.set_defaults(handler=_cmd_build_matrix)

    p = sub.add_parser("invert", parents=[common], help="recover C from rates")
    p.add_argument("--rates", required=True, help="rates JSON/CSV or a simulate run file")
    p.add_argument("--g", type=float, required=True)
    p.add_argument("--phase", type=float, default=CANONICAL_PHASE)
    p.add_argument("--sigmas", default=None, help="JSON array of six rate uncertainties")
    p.add_argument("--project-psd", action="store_true")
    p.add_argument("--z", type=float, default=3.0, help="significance for the not-CP verdict")
    p.add_argument("--bootstrap", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=None, help="seed for the verdict bootstrap")
    p.set_defaults(handler=_cmd_invert)

    p = sub.add_parser("cp-check", parents=[common], help="complete-positivity diagnostics")
    p.add_argument("--c-file", required=True)
    p.set_defaults(handler=_cmd_cp_check)

    p = sub.add_parser("simulate", parents=[common], help="run the virtual experiment")
    p.add_argument("--c-file", required=True)
    p.add_argument("--g", type=float, required=True)
    p.add_argument("--shots", type=int, required=True)
    p.add_argument("--exposure", type=float, required=True)
    p.add_argument("--calibration", type=float, required=True)
    p.add_argument("--seed", dest="seed_required", type=int, required=True)
    p.add_argument("--phase", type=float, default=CANONICAL_PHASE)
    p.add_argument("--out", required=True, help="output directory for run.json/run.csv")
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser(
        "demo-negative",
        parents=[common],
        help="positive-but-not-completely-positive counterexample",
    )
    p.add_argument("--g", type=float, default=2.0)
    p.set_defaults(handler=_cmd_demo_negative)

    p = sub.add_parser("oracle", parents=[common], help="closed-form adjudication report")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--out", default=None, help="also write the report to this path")
    p.set_defaults(handler=_cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except SingularProbeMatrixError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NUMERICAL
    except (ValueError, ConfigError, OSError, KeyError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
