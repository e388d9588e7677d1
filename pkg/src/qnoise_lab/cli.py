"""Command-line interface: run, sweep, check-stability, derive-experiment.

Exit codes: 0 success, 2 config/parse error, 3 unstable system,
4 pole on the frequency grid, 1 unexpected failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .lti_core import PoleOnGridError, UnstableSystemError
from .scenarios import (
    ConfigError,
    RunResult,
    Scenario,
    load_scenario,
    parse_rate,
    run_scenario,
    scenario_drift,
    write_csv,
    write_json_table,
    write_manifest,
)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_UNSTABLE = 3
EXIT_POLE = 4


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("config", help="scenario TOML file (or a manifest JSON to reproduce)")
    parser.add_argument("--config", dest="config_flag", help=argparse.SUPPRESS)
    parser.add_argument("--out", type=Path, default=None, help="output directory (default: cwd)")
    parser.add_argument("--format", choices=("csv", "json"), default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--omega-min", dest="omega_min", default=None)
    parser.add_argument("--omega-max", dest="omega_max", default=None)
    parser.add_argument("--omega-points", dest="omega_points", type=int, default=None)


def _apply_overrides(sc: Scenario, args) -> Scenario:
    grid = dict(sc.grid)
    if args.omega_min is not None:
        grid["omega_min"] = parse_rate(args.omega_min, "--omega-min")
    if args.omega_max is not None:
        grid["omega_max"] = parse_rate(args.omega_max, "--omega-max")
    if args.omega_points is not None:
        grid["points"] = args.omega_points
    output = dict(sc.output)
    if args.format is not None:
        output["format"] = args.format
    seed = sc.seed if args.seed is None else args.seed
    return Scenario(sc.kind, sc.task, grid, sc.params, sc.sweep, sc.curves, output, seed)


def _emit(result: RunResult, config_path: Path, out_dir: Path | None) -> Path:
    out_dir = out_dir or Path.cwd()
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = result.scenario.output.get("path") or (config_path.stem + ".csv")
    fmt = result.scenario.output.get("format", "csv")
    table_path = out_dir / stem
    if fmt == "json" and table_path.suffix == ".csv":
        table_path = table_path.with_suffix(".json")
    if fmt == "csv":
        write_csv(result, table_path)
    else:
        write_json_table(result, table_path)
    write_manifest(result, table_path, table_path.with_suffix(".manifest.json"))
    return table_path


def _cmd_run(args) -> int:
    sc = _apply_overrides(load_scenario(args.config), args)
    result = run_scenario(sc)
    path = _emit(result, Path(args.config), args.out)
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    sc = _apply_overrides(load_scenario(args.config), args)
    values = []
    for chunk in args.values.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            values.append(float(chunk))
        except ValueError:
            values.append(parse_rate(chunk, "--values"))
    if not values:
        raise ConfigError("--values produced an empty list")
    base_params = dict(sc.params)
    if args.param not in base_params and not any(args.param in c for c in sc.curves):
        raise ConfigError(f"sweep parameter {args.param!r} not present in scenario params")
    rows: list[tuple] = []
    header = None
    for v in values:
        one = Scenario(
            sc.kind,
            sc.task,
            sc.grid,
            {**base_params, args.param: v},
            None,
            sc.curves,
            sc.output,
            sc.seed,
        )
        res = run_scenario(one)
        names = [c[0] for c in res.columns]
        if header is None:
            header = ["param", "value"] + names
        x = res.columns[0][1]
        for i in range(len(x)):
            rows.append((args.param, v) + tuple(col[1][i] for col in res.columns))
    out_dir = args.out or Path.cwd()
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / (Path(args.config).stem + f"_sweep_{args.param}.csv")
    from .scenarios import _format_cell

    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_format_cell(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_check_stability(args) -> int:
    sc = _apply_overrides(load_scenario(args.config), args)
    reports = scenario_drift(sc)
    from .lti_core import stability_check

    all_stable = True
    for label, drift, info in reports:
        verdict = stability_check(drift)
        all_stable &= verdict.stable
        eigs = ", ".join(f"{e.real:.6g}{e.imag:+.6g}j" for e in sorted(verdict.eigenvalues, key=lambda z: z.real))
        print(f"{label}: {'STABLE' if verdict.stable else 'UNSTABLE'} "
              f"(max Re = {verdict.max_real_part:.6g})")
        print(f"  eigenvalues: {eigs}")
        for key, value in info.items():
            print(f"  {key}: {value}")
    return EXIT_OK if all_stable else EXIT_UNSTABLE


def _cmd_derive_experiment(args) -> int:
    from . import parametric
    from .scenarios import _number, _rate

    if Path(args.config).suffix == ".json":
        raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
    else:
        import sys as _sys

        if _sys.version_info >= (3, 11):
            import tomllib as _toml
        else:
            import tomli as _toml
        try:
            raw = _toml.loads(Path(args.config).read_text(encoding="utf-8"))
        except _toml.TOMLDecodeError as exc:
            raise ConfigError(f"{args.config}: {exc}") from exc
    targets = raw.get("targets", {})
    fixed = raw.get("fixed", {})
    import numpy as np
    from scipy import constants

    g0 = fixed.get("g0")
    if g0 is None:
        mass = _number(fixed, "mass_kg", "fixed")
        omega_m = _rate(fixed, "omega_m", "fixed")
        length = _number(fixed, "cavity_length_m", "fixed")
        omega_c = _rate(fixed, "omega_c", "fixed")
        x_zpf = np.sqrt(constants.hbar / (2.0 * mass * omega_m))
        g0 = x_zpf * omega_c / length
    else:
        g0 = parse_rate(g0, "fixed.g0")
    derivation = parametric.experiment_derive(
        _number(targets, "C0", "targets"),
        _number(targets, "C1", "targets"),
        N_atoms=_number(fixed, "N_atoms", "fixed"),
        g_a=_rate(fixed, "g_a", "fixed"),
        g0=g0,
        omega_R=_rate(fixed, "omega_R", "fixed"),
        gamma_m=_rate(fixed, "gamma_m", "fixed"),
        gamma_d=_rate(fixed, "gamma_d", "fixed"),
        omega_m=_rate(fixed, "omega_m", "fixed"),
        kappa=_rate(fixed, "kappa", "fixed"),
        omega_a=_rate(fixed, "omega_a", "fixed"),
        omega_c=_rate(fixed, "omega_c", "fixed"),
    )
    payload = {
        "g0": g0,
        "omega_sw": derivation.omega_sw,
        "Delta_a": derivation.Delta_a,
        "omega_L": derivation.omega_L,
        "Delta0": derivation.Delta0,
        "n_cav": derivation.n_cav,
        "E_L": derivation.E_L,
        "U0": derivation.U0,
        "G0": derivation.G0,
    }
    text = json.dumps(payload, indent=2)
    print(text)
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / (Path(args.config).stem + "_derived.json")).write_text(text + "\n", encoding="utf-8")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qnoise-lab",
        description="Noise spectra and sensing figures of merit for hybrid optomechanical sensors",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario and write CSV + manifest")
    _add_common(p_run)
    p_run.set_defaults(fn=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="long-format CSV over values of one parameter")
    _add_common(p_sweep)
    p_sweep.add_argument("--param", required=True)
    p_sweep.add_argument("--values", required=True, help="comma-separated values (rate strings allowed)")
    p_sweep.set_defaults(fn=_cmd_sweep)

    p_stab = sub.add_parser("check-stability", help="eigenvalue report for the scenario's drift")
    _add_common(p_stab)
    p_stab.set_defaults(fn=_cmd_check_stability)

    p_der = sub.add_parser("derive-experiment", help="drive-side settings for target cooperativities")
    p_der.add_argument("config")
    p_der.add_argument("--out", type=Path, default=None)
    p_der.set_defaults(fn=_cmd_derive_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except UnstableSystemError as exc:
        print(f"unstable system: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except PoleOnGridError as exc:
        print(f"pole on grid: {exc}", file=sys.stderr)
        return EXIT_POLE
    except Exception as exc:  # pragma: no cover - defensive
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    raise SystemExit(main())
