"""``spyvspam`` command line: solve, verify, sweep, simulate.

Exit codes: 0 success, 1 invalid input, 2 structural solver and oracle
fallback both failed, 3 not an equilibrium (verify), 4 simulation disagrees
with the analytic equilibrium by more than 5 standard errors (simulate).
Set ``SPYVSPAM_LOG`` to a logging level name for diagnostics on stderr.
"""

from __future__ import annotations

import argparse
import copy
import csv
import itertools
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import io as sio
from .errors import SolverError, ValidationError
from .game import build_matrices, check_distribution
from .oracle import verify_ne
from .simulate import SimConfig, analytic_values, compare, simulate
from .solver import solve_ne

logger = logging.getLogger("spyvspam")

EXIT_OK, EXIT_INVALID, EXIT_SOLVER, EXIT_NOT_NE, EXIT_MISMATCH = 0, 1, 2, 3, 4
SWEEPABLE = ("N", "p", "c_d", "c_a", "c_fa", "epsilon", "theta0")


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _error(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


def cmd_solve(args) -> int:
    try:
        config = sio.load_config(args.config)
    except ValidationError as exc:
        _error(str(exc))
        return EXIT_INVALID
    try:
        result = solve_ne(config.params, config.model)
    except SolverError as exc:
        _error(str(exc))
        return EXIT_SOLVER
    _emit(sio.dumps(sio.result_document(config, result)), args.out)
    if args.csv:
        Path(args.csv).write_text(sio.strategy_csv(result, config.model))
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        config = sio.load_config(args.config)
        N = config.params.N
        alpha = check_distribution(sio.read_vector(args.alpha, "alpha"), N + 1, name="alpha")
        beta = check_distribution(sio.read_vector(args.beta, "beta"), N + 2, name="beta")
    except ValidationError as exc:
        _error(str(exc))
        return EXIT_INVALID
    tol = args.tol if args.tol is not None else config.verify_tol
    report = verify_ne(build_matrices(config.params, config.model), alpha, beta, tol=tol)
    sys.stdout.write(sio.dumps(report.as_dict()))
    return EXIT_OK if report.is_ne else EXIT_NOT_NE


def parse_vary(text: str):
    """``name=start:stop:steps`` -> (name, values)."""
    try:
        name, rng = text.split("=", 1)
        start, stop, steps = rng.split(":")
        start, stop, steps = float(start), float(stop), int(steps)
    except ValueError:
        raise ValidationError(f"--vary expects name=start:stop:steps, got {text!r}")
    name = name.strip()
    if name not in SWEEPABLE:
        raise ValidationError(f"cannot vary {name!r}; choose from {', '.join(SWEEPABLE)}")
    if steps < 1:
        raise ValidationError(f"--vary {name}: empty grid (steps={steps})")
    values = np.linspace(start, stop, steps)
    if name == "N":
        if not np.allclose(values, np.round(values)):
            raise ValidationError(f"--vary N: grid {values.tolist()} is not integral")
        values = [int(round(v)) for v in values]
    else:
        values = [float(v) for v in values]
    return name, values


def _apply(raw: dict, name: str, value) -> dict:
    if name == "theta0":
        if "theta0" not in raw["spammer"]:
            raise ValidationError("theta0 can only be varied for a binomial spammer")
        raw["spammer"] = {"theta0": value}
    else:
        raw[name] = value
    return raw


def cmd_sweep(args) -> int:
    try:
        base = sio.load_config(args.config)
        if not args.vary or len(args.vary) > 2:
            raise ValidationError("sweep needs one or two --vary options")
        axes = [parse_vary(v) for v in args.vary]
        if len({name for name, _ in axes}) != len(axes):
            raise ValidationError("the same parameter is varied twice")
    except ValidationError as exc:
        _error(str(exc))
        return EXIT_INVALID
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    names = [name for name, _ in axes]
    header = (["point"] + names
              + ["status", "form", "s", "theta_hat", "delta", "beta_s", "beta_last", "error"])
    rows = []
    failures = 0
    for idx, values in enumerate(itertools.product(*(vals for _, vals in axes))):
        row = {"point": idx, **dict(zip(names, values))}
        try:
            raw = copy.deepcopy(base.raw)
            for name, value in zip(names, values):
                _apply(raw, name, value)
            config = sio.parse_config(raw)
            result = solve_ne(config.params, config.model)
        except (ValidationError, SolverError) as exc:
            failures += 1
            row.update(status="error", error=str(exc))
            rows.append(row)
            continue
        (outdir / f"point_{idx:04d}.json").write_text(
            sio.dumps(sio.result_document(config, result)))
        row.update(status="ok", form=result.form, s=result.s,
                   theta_hat=repr(result.theta_hat), delta=repr(result.delta),
                   beta_s=repr(float(result.beta[result.s])),
                   beta_last=repr(float(result.beta[-1])), error="")
        rows.append(row)
    with open(outdir / "index.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=header, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    if failures == len(rows):
        _error("every grid point failed")
        return EXIT_INVALID
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        config = sio.load_config(args.config)
        trials = args.trials if args.trials is not None else config.trials
        seed = args.seed if args.seed is not None else config.seed
        if (args.alpha is None) != (args.beta is None):
            raise ValidationError("--alpha and --beta must be given together")
        N = config.params.N
        supplied = None
        if args.alpha is not None:
            supplied = (
                check_distribution(sio.read_vector(args.alpha, "alpha"), N + 1, name="alpha"),
                check_distribution(sio.read_vector(args.beta, "beta"), N + 2, name="beta"),
            )
    except ValidationError as exc:
        _error(str(exc))
        return EXIT_INVALID
    try:
        eq = solve_ne(config.params, config.model)
    except SolverError as exc:
        _error(str(exc))
        return EXIT_SOLVER
    alpha, beta = supplied if supplied is not None else (eq.alpha, eq.beta)
    try:
        sim = SimConfig.from_params(config.params, config.model, alpha, beta,
                                    trials=trials, seed=seed)
    except ValidationError as exc:
        _error(str(exc))
        return EXIT_INVALID
    report = simulate(sim)
    exact = analytic_values(sim)
    # the defender's raw payoff is checked against the equilibrium value, the
    # rest against exact expectations under the simulated strategies
    reference = dict(exact, defender_payoff_raw=config.params.p * eq.theta_hat)
    scores = compare(report, reference)
    worst = max(scores.values())
    doc = {
        "trials": int(trials),
        "seed": int(seed),
        "report": report.as_dict(),
        "analytic": reference,
        "analytic_under_strategies": exact,
        "z_scores": scores,
        "pass_3se": bool(worst <= 3.0),
    }
    sys.stdout.write(sio.dumps(doc))
    return EXIT_MISMATCH if worst > 5.0 else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spyvspam", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute a verified Nash equilibrium")
    p.add_argument("config")
    p.add_argument("--out", help="write the result document here instead of stdout")
    p.add_argument("--csv", help="write the per-index strategy table here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a strategy pair for equilibrium")
    p.add_argument("config")
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="solve over a grid of one or two parameters")
    p.add_argument("config")
    p.add_argument("--vary", action="append", metavar="NAME=START:STOP:STEPS")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", help="Monte Carlo check of equilibrium payoffs")
    p.add_argument("config")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    level = os.environ.get("SPYVSPAM_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
