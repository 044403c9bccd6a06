"""Command-line front end emitting CSV datasets.

Subcommands: ``steady``, ``evolve``, ``spectrum``, ``spingas``,
``measures``, ``verify``.  All data commands read a JSON experiment
config (see :mod:`resetlb.config`) and write CSV with a comment header
carrying the fully resolved config and seed, so identical inputs yield
byte-identical files (apart from the timestamp line, which
``--no-timestamp`` suppresses).

Exit codes: 0 success, 1 configuration error, 2 solver error, 3 verify
failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone

import numpy as np

from resetlb import qop
from resetlb.config import (
    ConfigError,
    ExperimentConfig,
    build_liouvillian,
    gas_config,
    hamiltonian_from_config,
    initial_state_from_config,
    parse_config,
    reset_spec_from_config,
)
from resetlb.dynamics import SteadyStateError, evolve, spectrum, steady_state
from resetlb.entanglement import (
    PoissonWeighting,
    average_negativity,
    negativity,
    negativity_of_average_reduction,
    poisson_average_negativity,
    poisson_reduced_negativity,
)
from resetlb.liouville import (
    GasNoiseParams,
    Superoperator,
    ThermalBathParams,
    assemble,
    local_noise_generator,
    reset_generator,
    thermal_generator,
)
from resetlb.spingas import bootstrap_stderr, run_ensemble


class SolverError(RuntimeError):
    """Numerical solve failed; carries grid coordinates when available."""


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _write_csv(path, cfg: ExperimentConfig, command: str, columns, rows, no_timestamp: bool):
    lines = [f"# resetlb {command} dataset"]
    if not no_timestamp:
        stamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
        lines.append(f"# timestamp: {stamp}")
    lines.append(f"# config: {cfg.canonical_json()}")
    lines.append(f"# seed: {cfg.seed}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _sweep_points(cfg: ExperimentConfig):
    """Ordered grid of (override dict) for up to two axes."""
    if not cfg.sweep:
        return [{}], []
    axes = cfg.sweep
    if len(axes) == 1:
        return [{axes[0].param: v} for v in axes[0].values()], [axes[0].param]
    outer, inner = axes
    points = [
        {outer.param: vo, inner.param: vi}
        for vo in outer.values()
        for vi in inner.values()
    ]
    return points, [outer.param, inner.param]


def _thread_count(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("RESETLB_THREADS")
    return max(1, int(env)) if env else 1


def _run_grid(points, worker, threads: int):
    if threads <= 1:
        return [worker(p) for p in points]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, points))


def _pair_negativity(state: qop.DensityMatrix) -> float:
    if state.n_qubits == 2:
        return negativity(state, (0,))
    return average_negativity(state).average


def cmd_steady(cfg: ExperimentConfig, args) -> int:
    points, params = _sweep_points(cfg)

    def worker(overrides):
        try:
            lam = build_liouvillian(cfg.with_overrides(overrides))
            state = steady_state(lam)
        except (SteadyStateError, qop.DensityMatrixError) as exc:
            raise SolverError(f"steady-state solve failed at {overrides}: {exc}") from exc
        return overrides, state

    results = _run_grid(points, worker, _thread_count(args))
    columns = params + ["negativity"]
    rows = [
        [overrides[p] for p in params] + [_pair_negativity(state)]
        for overrides, state in results
    ]
    _write_csv(args.out, cfg, "steady", columns, rows, args.no_timestamp)
    if args.dump_states:
        dump = [
            {
                "params": overrides,
                "re": np.real(state.matrix).tolist(),
                "im": np.imag(state.matrix).tolist(),
            }
            for overrides, state in results
        ]
        with open(args.out + ".states.json", "w", encoding="utf-8") as fh:
            json.dump(dump, fh, indent=1, sort_keys=True)
    return 0


def cmd_evolve(cfg: ExperimentConfig, args) -> int:
    lam = build_liouvillian(cfg)
    rho0 = initial_state_from_config(cfg)
    times = np.linspace(0.0, args.t_max, args.points)
    try:
        result = evolve(lam, rho0, times)
    except (qop.DensityMatrixError, ValueError) as exc:
        raise SolverError(f"evolution failed: {exc}") from exc
    rows = []
    for t, state in zip(result.times, result.states):
        evals = np.linalg.eigvalsh(state.matrix)
        rows.append([t, _pair_negativity(state), float(np.trace(state.matrix).real), float(evals[0])])
    _write_csv(
        args.out, cfg, "evolve", ["t", "negativity", "trace", "min_eigenvalue"], rows, args.no_timestamp
    )
    return 0


def cmd_spectrum(cfg: ExperimentConfig, args) -> int:
    lam = build_liouvillian(cfg)
    report = spectrum(lam)
    rows = [[ev.real, ev.imag, mult] for ev, mult in zip(report.eigenvalues, report.multiplicities)]
    _write_csv(
        args.out, cfg, "spectrum", ["real", "imag", "multiplicity"], rows, args.no_timestamp
    )
    return 0


def cmd_spingas(cfg: ExperimentConfig, args) -> int:
    points, params = _sweep_points(cfg)

    def worker(overrides):
        gc = gas_config(cfg.with_overrides(overrides))
        res = run_ensemble(gc, args.runs)
        stderr = bootstrap_stderr(res.per_run, n_boot=200, seed=cfg.seed)
        return overrides, res.negativity, stderr

    results = _run_grid(points, worker, _thread_count(args))
    columns = params + ["negativity", "stderr"]
    rows = [[ov[p] for p in params] + [neg, se] for ov, neg, se in results]
    _write_csv(args.out, cfg, "spingas", columns, rows, args.no_timestamp)
    return 0


def _measure_states(cfg: ExperimentConfig, r: float, n_range) -> dict[int, qop.DensityMatrix]:
    states = {}
    for n in n_range:
        lam0, unit_reset = _measure_generators(cfg, n)
        lam = Superoperator(lam0.matrix + r * unit_reset.matrix, n)
        try:
            states[n] = steady_state(lam)
        except SteadyStateError as exc:
            raise SolverError(f"steady-state solve failed at r={r}, n={n}: {exc}") from exc
    return states


_MEASURE_CACHE: dict = {}


def _measure_generators(cfg: ExperimentConfig, n: int):
    key = (cfg.canonical_json(), n)
    if key in _MEASURE_CACHE:
        return _MEASURE_CACHE[key]
    try:
        h = hamiltonian_from_config(cfg.hamiltonian, n)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    gens = []
    if cfg.model == "gas":
        params = GasNoiseParams(
            B=float(cfg.noise.get("B", 0.0)),
            C=float(cfg.noise.get("C", 0.0)),
            s=float(cfg.noise.get("s", 0.5)),
        )
        gens.append(local_noise_generator(n, params))
    else:
        try:
            params = ThermalBathParams(
                gamma=float(cfg.noise.get("gamma", 0.0)), beta=float(cfg.noise.get("beta", 1.0))
            )
            # gradient fields lift degeneracies only at second order for n > 2,
            # so the multipartite scans need the quasi-degenerate grouping
            gens.append(thermal_generator(h, params, merge_degenerate=True))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    lam0 = assemble(h, gens, n=n)
    spec = reset_spec_from_config({**cfg.reset, "r": 1.0}, n)
    unit = reset_generator(n, spec)
    _MEASURE_CACHE[key] = (lam0, unit)
    return lam0, unit


def cmd_measures(cfg: ExperimentConfig, args) -> int:
    if not cfg.measures:
        raise ConfigError("measures command requires a measures section")
    lam = float(cfg.measures.get("lam", 2.0))
    n_min = int(cfg.measures.get("n_min", 0))
    n_max = int(cfg.measures.get("n_max", 5))
    if n_max > 5 and not args.force_large:
        raise ConfigError(
            f"measures with n_max={n_max} exceeds the desk-scale guard; pass --force-large to override"
        )
    w_full = PoissonWeighting(lam, n_min, n_max)
    w_red = w_full.restricted(2)
    n_range = range(max(2, n_min), n_max + 1)
    points, params = _sweep_points(cfg)
    if params != ["reset.r"]:
        raise ConfigError("measures expects exactly one sweep axis over reset.r")

    def worker(overrides):
        r = overrides["reset.r"]
        states = _measure_states(cfg, r, n_range)
        return (
            r,
            poisson_average_negativity(states, w_full),
            poisson_reduced_negativity(states, w_red),
            negativity_of_average_reduction(states, w_red),
        )

    results = _run_grid(points, worker, _thread_count(args))
    _write_csv(
        args.out,
        cfg,
        "measures",
        ["r", "measure_i", "measure_ii", "measure_iii"],
        [list(row) for row in results],
        args.no_timestamp,
    )
    return 0


def cmd_verify(args) -> int:
    from resetlb.verify import run_checks

    checks = run_checks(tol_scale=args.tol)
    for check in checks:
        print(check.line())
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    if failed:
        for c in failed:
            print(f"failed: {c.name} [{c.target}] max deviation {c.max_dev:.3e}", file=sys.stderr)
        return 3
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="resetlb",
        description="Steady states, dynamics and entanglement of dissipative qubit systems with reset",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, dump=False):
        p.add_argument("--config", required=True, help="JSON experiment config")
        p.add_argument("--out", default=None, help="output CSV path (overrides config)")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.add_argument("--threads", type=int, default=None, help="worker threads (RESETLB_THREADS fallback)")
        p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp header line")
        if dump:
            p.add_argument("--dump-states", action="store_true", help="dump state matrices as JSON")

    p_steady = sub.add_parser("steady", help="steady-state negativity over a sweep grid")
    add_common(p_steady, dump=True)

    p_evolve = sub.add_parser("evolve", help="time evolution of negativity, trace, min eigenvalue")
    add_common(p_evolve)
    p_evolve.add_argument("--t-max", type=float, required=True, help="final time")
    p_evolve.add_argument("--points", type=int, default=101, help="time grid points")

    p_spec = sub.add_parser("spectrum", help="Liouvillian spectrum with multiplicities")
    add_common(p_spec)

    p_gas = sub.add_parser("spingas", help="Monte Carlo spin-gas ensemble sweep")
    add_common(p_gas)
    p_gas.add_argument("--runs", type=int, default=1000, help="ensemble size")

    p_meas = sub.add_parser("measures", help="Poisson-weighted multipartite measures vs reset rate")
    add_common(p_meas)
    p_meas.add_argument("--force-large", action="store_true", help="lift the n_max <= 5 guard")

    p_verify = sub.add_parser("verify", help="run the closed-form vs numerical cross-check suite")
    p_verify.add_argument("--tol", type=float, default=1.0, help="scale factor on check tolerances")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1

    if args.command == "verify":
        return cmd_verify(args)

    try:
        cfg = parse_config(args.config)
        if args.seed is not None:
            from dataclasses import replace

            cfg = replace(cfg, seed=args.seed)
        args.out = args.out or cfg.output
        if not args.out:
            raise ConfigError("no output path: set --out or config.output")
        handler = {
            "steady": cmd_steady,
            "evolve": cmd_evolve,
            "spectrum": cmd_spectrum,
            "spingas": cmd_spingas,
            "measures": cmd_measures,
        }[args.command]
        return handler(cfg, args)
    except (ConfigError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (SolverError, SteadyStateError, qop.DensityMatrixError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
