"""Command-line front end.

Three commands: ``solve`` writes the converged trajectory plus a JSON
summary, ``compare`` costs the four control strategies at one parameter
point, and ``sweep`` repeats the comparison over a parameter range.  All
numeric text is written with 17 significant digits, which re-parses to the
exact in-memory doubles, and identical inputs produce byte-identical
artifacts.

Exit status: 0 on success with convergence, 2 when a sweep solve did not
converge (artifacts are still written), 1 on unusable input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

from .config import (
    ConfigError,
    RunConfig,
    config_from_scenario,
    dump_config,
    load_config,
)
from .experiments import (
    ComparisonTable,
    SweepSpec,
    compare_strategies,
    default_sweep_values,
    run_sweep,
)
from .model import State
from .pmp import Costate, switching_functions
from .scenarios import PRESET_NAMES, preset_scenario
from .solver import DivergenceError, SolveResult, solve

TRAJECTORY_COLUMNS = ("t", "R", "C", "P", "u1", "u2", "p1", "p2", "p3", "phi1", "phi2")


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _trajectory_rows(result: SolveResult, cfg: RunConfig) -> list[tuple[float, ...]]:
    scenario = cfg.scenario
    ts = result.state.grid.nodes()
    rows = []
    for i, t in enumerate(ts):
        R, C, P = result.state.values[i]
        p1, p2, p3 = result.costate.values[i]
        u1, u2 = result.controls.values[i]
        phi = switching_functions(
            State(R, C, P),
            Costate(p1, p2, p3),
            scenario.params,
            scenario.weights,
            scenario.n0,
        )
        rows.append((t, R, C, P, u1, u2, p1, p2, p3, phi.phi1, phi.phi2))
    return rows


def _write_trajectory(result: SolveResult, cfg: RunConfig, out_dir: Path) -> None:
    rows = _trajectory_rows(result, cfg)
    if cfg.out_format == "csv":
        lines = [",".join(TRAJECTORY_COLUMNS)]
        lines.extend(",".join(_fmt(v) for v in row) for row in rows)
        (out_dir / "trajectory.csv").write_text("\n".join(lines) + "\n")
    else:
        doc = {
            "columns": list(TRAJECTORY_COLUMNS),
            "rows": [[float(v) for v in row] for row in rows],
        }
        (out_dir / "trajectory.json").write_text(json.dumps(doc) + "\n")


def _write_summary(result: SolveResult, cfg: RunConfig, out_dir: Path) -> None:
    doc = {
        "cost": result.cost,
        "iterations": result.iterations,
        "converged": result.converged,
        "settings": {
            "objective": cfg.scenario.objective,
            "grid_n": cfg.grid_n,
            "tol_delta": cfg.tol_delta,
            "relaxation": cfg.relaxation,
            "max_iters": cfg.max_iters,
            "eps_singular": cfg.eps_singular,
            "t_f": cfg.scenario.t_f,
            "n0": cfg.scenario.n0,
        },
    }
    (out_dir / "summary.json").write_text(json.dumps(doc, indent=2) + "\n")


def _table_json_rows(table: ComparisonTable) -> list[dict]:
    rows = []
    for row in table.rows:
        rows.append(
            {
                "param": row.parameter,
                "value": row.value,
                "strategy": row.strategy.value,
                "cost": None if math.isnan(row.cost) else row.cost,
                "converged": row.converged,
                "iterations": row.iterations,
            }
        )
    return rows


def _write_table(table: ComparisonTable, cfg: RunConfig, out_dir: Path) -> None:
    if cfg.out_format == "csv":
        lines = ["param_value,strategy,cost,converged,iterations"]
        for row in table.rows:
            value = "" if row.value is None else _fmt(row.value)
            cost = "nan" if math.isnan(row.cost) else _fmt(row.cost)
            converged = "true" if row.converged else "false"
            lines.append(
                f"{value},{row.strategy.value},{cost},{converged},{row.iterations}"
            )
        (out_dir / "table.csv").write_text("\n".join(lines) + "\n")
    doc = {"rows": _table_json_rows(table)}
    (out_dir / "table.json").write_text(json.dumps(doc, indent=2) + "\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="marketopt",
        description="Optimal marketing-control policies for customer dynamics",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("solve", "solve one scenario and write its trajectory"),
        ("compare", "cost the four control strategies at one point"),
        ("sweep", "cost the strategies over a parameter range"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--preset", help=f"one of: {', '.join(PRESET_NAMES)}")
        cmd.add_argument("--config", help="path to a JSON run configuration")
        cmd.add_argument("--objective", choices=("l1", "l2"))
        cmd.add_argument("--n", type=int, help="number of grid intervals")
        cmd.add_argument("--tol", type=float, help="relative convergence tolerance")
        cmd.add_argument("--relax", type=float, help="control update blend weight")
        cmd.add_argument("--max-iters", type=int, help="sweep iteration cap")
        cmd.add_argument("--out", help="output directory (default: out)")
        cmd.add_argument("--format", choices=("csv", "json"))
        if name == "sweep":
            cmd.add_argument(
                "--param", choices=("gamma", "kappa2", "beta", "tf"),
                help="parameter to sweep",
            )
    return parser


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    if args.config and args.preset:
        raise ConfigError("use either --preset or --config, not both")
    if args.config:
        cfg = load_config(args.config)
    elif args.preset:
        try:
            cfg = config_from_scenario(preset_scenario(args.preset))
        except ValueError as err:
            raise ConfigError(str(err)) from None
    else:
        raise ConfigError("one of --preset or --config is required")

    scenario = cfg.scenario
    if args.objective:
        scenario = replace(scenario, objective=args.objective)
    updates: dict = {"scenario": scenario}
    if args.n is not None:
        updates["grid_n"] = args.n
    if args.tol is not None:
        updates["tol_delta"] = args.tol
    if args.relax is not None:
        updates["relaxation"] = args.relax
    if args.max_iters is not None:
        updates["max_iters"] = args.max_iters
    if args.out is not None:
        updates["out_dir"] = args.out
    if args.format is not None:
        updates["out_format"] = args.format
    if getattr(args, "param", None) is not None:
        updates["sweep_param"] = args.param
    try:
        return replace(cfg, **updates)
    except ValueError as err:
        raise ConfigError(str(err)) from None


def _cmd_solve(cfg: RunConfig, out_dir: Path) -> int:
    result = solve(cfg.scenario, cfg.sweep_settings())
    _write_trajectory(result, cfg, out_dir)
    _write_summary(result, cfg, out_dir)
    return 0 if result.converged else 2


def _cmd_compare(cfg: RunConfig, out_dir: Path) -> int:
    table = compare_strategies(
        cfg.scenario, cfg.sweep_settings(), cfg.sweep_strategies
    )
    _write_table(table, cfg, out_dir)
    return 0 if all(row.converged for row in table.rows) else 2


def _cmd_sweep(cfg: RunConfig, out_dir: Path) -> int:
    if cfg.sweep_param is None:
        raise ConfigError("sweep needs --param or a sweep section in the config")
    values = cfg.sweep_values or default_sweep_values(cfg.sweep_param)
    spec = SweepSpec(
        parameter=cfg.sweep_param,
        values=values,
        base=cfg.scenario,
        strategies=cfg.sweep_strategies,
    )
    table = run_sweep(spec, cfg.sweep_settings())
    _write_table(table, cfg, out_dir)
    return 0 if all(row.converged for row in table.rows) else 2


def main(argv: list[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        # keep exit 2 reserved for non-convergence; argparse errors are input
        # errors (--help still exits 0)
        return 0 if not exc.code else 1
    try:
        cfg = _resolve_config(args)
        out_dir = Path(cfg.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        dump_config(cfg, out_dir / "config.json")
        if args.command == "solve":
            return _cmd_solve(cfg, out_dir)
        if args.command == "compare":
            return _cmd_compare(cfg, out_dir)
        return _cmd_sweep(cfg, out_dir)
    except ValueError as err:  # includes ConfigError
        print(f"error: {err}", file=sys.stderr)
        return 1
    except DivergenceError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
