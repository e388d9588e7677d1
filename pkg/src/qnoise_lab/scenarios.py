"""Declarative scenario runner behind the command-line interface.

A scenario file (TOML) names a physics kind, a task, a grid, parameters,
and optionally a parameter sweep or a list of labelled curves.  Frequencies
are plain rad/s numbers or strings with the "2pi*" sugar, e.g. "2pi*1.3MHz".
Every run emits a CSV table and a JSON manifest that contains the fully
resolved scenario; feeding the manifest back to ``run`` reproduces the CSV
byte for byte.
"""

from __future__ import annotations

import hashlib
import json
import re
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - depends on interpreter
    import tomli as tomllib

from scipy import constants

from . import __version__, bec_qnd, cqnc, parametric, standard_oms
from .lti_core import stability_check

__all__ = [
    "ConfigError",
    "Scenario",
    "parse_rate",
    "load_scenario",
    "run_scenario",
    "scenario_drift",
    "RunResult",
]


class ConfigError(ValueError):
    """Malformed scenario file; message carries the offending location."""


_UNITS = {
    "": 1.0,
    "mHz": 1e-3,
    "Hz": 1.0,
    "kHz": 1e3,
    "MHz": 1e6,
    "GHz": 1e9,
}
_RATE_RE = re.compile(
    r"^\s*(?P<sign>-?)(?P<twopi>2pi\*)?(?P<num>[0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?)"
    r"\s*(?P<unit>mHz|Hz|kHz|MHz|GHz)?\s*$"
)


def parse_rate(value, where: str = "value") -> float:
    """Angular frequency in rad/s from a number or a '2pi*<x><unit>' string."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"{where}: expected a number or rate string, got {value!r}")
    m = _RATE_RE.match(value)
    if not m:
        raise ConfigError(f"{where}: cannot parse rate {value!r}")
    out = float(m.group("num")) * _UNITS[m.group("unit") or ""]
    if m.group("twopi"):
        out *= 2.0 * np.pi
    return -out if m.group("sign") else out


def _require(table: dict, key: str, where: str):
    if key not in table:
        raise ConfigError(f"{where}: missing required key '{key}'")
    return table[key]


def _rate(table: dict, key: str, where: str, default=None) -> float:
    if key not in table:
        if default is None:
            raise ConfigError(f"{where}: missing required key '{key}'")
        return float(default)
    return parse_rate(table[key], f"{where}.{key}")


def _number(table: dict, key: str, where: str, default=None) -> float:
    if key not in table:
        if default is None:
            raise ConfigError(f"{where}: missing required key '{key}'")
        return float(default)
    v = table[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}.{key}: expected a number, got {v!r}")
    return float(v)


_KINDS = ("standard", "qnd", "cqnc", "parametric", "oracle")
_TASKS = {
    "standard": ("optimal_noise_spectrum", "force_vs_coupling"),
    "qnd": ("added_noise_vs_pump", "min_added_noise_vs_collision"),
    "cqnc": ("force_spectrum", "force_vs_power"),
    "parametric": ("response_and_noise",),
    "oracle": ("vs_analytic",),
}


@dataclass(frozen=True)
class Scenario:
    kind: str
    task: str
    grid: dict
    params: dict
    sweep: dict | None
    curves: tuple[dict, ...]
    output: dict
    seed: int = 0

    def resolved(self) -> dict:
        return {
            "kind": self.kind,
            "task": self.task,
            "grid": self.grid,
            "params": self.params,
            "sweep": self.sweep,
            "curves": list(self.curves),
            "output": self.output,
            "seed": self.seed,
        }


@dataclass
class RunResult:
    columns: list[tuple[str, np.ndarray]]
    derived: dict
    scenario: Scenario

    def table(self) -> np.ndarray:
        return np.column_stack([c[1] for c in self.columns])


def load_scenario(source) -> Scenario:
    """Parse a scenario from a TOML path, a manifest path, or a dict."""
    if isinstance(source, (str, Path)):
        path = Path(source)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        if path.suffix == ".json":
            manifest = json.loads(path.read_text(encoding="utf-8"))
            if "scenario" not in manifest:
                raise ConfigError(f"{path}: manifest has no 'scenario' block")
            raw = manifest["scenario"]
        else:
            try:
                raw = tomllib.loads(path.read_text(encoding="utf-8"))
            except tomllib.TOMLDecodeError as exc:
                raise ConfigError(f"{path}: {exc}") from exc
    elif isinstance(source, dict):
        raw = source
    else:
        raise ConfigError(f"unsupported scenario source {type(source)!r}")
    return _validate(raw)


def _validate(raw: dict) -> Scenario:
    kind = _require(raw, "kind", "scenario")
    if kind not in _KINDS:
        raise ConfigError(f"scenario.kind: unknown kind {kind!r}; expected one of {_KINDS}")
    task = raw.get("task", _TASKS[kind][0])
    if task not in _TASKS[kind]:
        raise ConfigError(f"scenario.task: {task!r} is not valid for kind {kind!r}")
    grid = dict(raw.get("grid", {}))
    params = dict(raw.get("params", {}))
    sweep = raw.get("sweep")
    if sweep is not None:
        sweep = dict(sweep)
        if "param" not in sweep or "values" not in sweep:
            raise ConfigError("sweep: needs 'param' and 'values'")
        if not isinstance(sweep["values"], list) or not sweep["values"]:
            raise ConfigError("sweep.values: must be a nonempty list")
    curves = tuple(dict(c) for c in raw.get("curves", []))
    output = dict(raw.get("output", {}))
    fmt = output.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"output.format: must be 'csv' or 'json', got {fmt!r}")
    seed = raw.get("seed", 0)
    if not isinstance(seed, int):
        raise ConfigError("scenario.seed: must be an integer")
    known = {"kind", "task", "grid", "params", "sweep", "curves", "output", "seed", "cases"}
    for key in raw:
        if key not in known:
            raise ConfigError(f"scenario: unknown top-level key {key!r}")
    if kind == "oracle":
        params["cases"] = dict(raw.get("cases", {}))
    return Scenario(kind, task, grid, params, sweep, curves, output, seed)


def _omega_grid(sc: Scenario, where: str = "grid") -> np.ndarray:
    g = sc.grid
    lo = _rate(g, "omega_min", where)
    hi = _rate(g, "omega_max", where)
    n = int(_number(g, "points", where, 2001))
    if not (hi > lo) or n < 2:
        raise ConfigError(f"{where}: need omega_max > omega_min and points >= 2")
    return np.linspace(lo, hi, n)


def _x_grid(sc: Scenario, where: str = "grid") -> np.ndarray:
    g = sc.grid
    lo = _rate(g, "min", where)
    hi = _rate(g, "max", where)
    n = int(_number(g, "points", where, 400))
    scale = g.get("scale", "linear")
    if scale not in ("linear", "log"):
        raise ConfigError(f"{where}.scale: must be 'linear' or 'log'")
    if not (hi > lo) or n < 2:
        raise ConfigError(f"{where}: need max > min and points >= 2")
    if scale == "log":
        if lo <= 0:
            raise ConfigError(f"{where}: log scale needs min > 0")
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


def _sweep_cases(sc: Scenario) -> list[tuple[str, dict]]:
    """Expand sweep/curves into labelled parameter overrides."""
    if sc.curves:
        out = []
        for i, c in enumerate(sc.curves):
            c = dict(c)
            label = str(c.pop("label", f"curve{i}"))
            out.append((label, c))
        return out
    if sc.sweep is not None:
        name = sc.sweep["param"]
        return [
            (f"{name}={v}", {name: v})
            for v in sc.sweep["values"]
        ]
    return [("", {})]


# ---------------------------------------------------------------------------
# task implementations
# ---------------------------------------------------------------------------

def _standard_params(p: dict, where: str) -> standard_oms.StandardOmsParams:
    return standard_oms.StandardOmsParams.from_geometry(
        omega_m=_rate(p, "omega_m", where),
        gamma_m=_rate(p, "gamma_m", where),
        kappa=_rate(p, "kappa", where),
        mass=_number(p, "mass_kg", where),
        cavity_length=_number(p, "cavity_length_m", where),
        wavelength=_number(p, "wavelength_m", where),
        temperature=_number(p, "temperature_K", where, 0.0),
    )


def _task_optimal_noise_spectrum(sc: Scenario) -> RunResult:
    omegas = _omega_grid(sc)
    base = sc.params
    p0 = _standard_params(base, "params")
    cols = [
        ("omega_rad_s", omegas),
        ("omega_over_omega_m", omegas / p0.omega_m),
        ("value_sql_over_gamma_m", standard_oms.sql(omegas, p0) / p0.gamma_m),
    ]
    derived = {"g0": p0.g0, "thermal_kT_over_hbar_omega_m":
               constants.k * p0.temperature / (constants.hbar * p0.omega_m)}
    for label, over in _sweep_cases(sc):
        p = {**base, **over}
        sp = _standard_params(p, "params")
        lpn = standard_oms.LpnParams(
            Gamma_L=_rate(p, "Gamma_L", "params", 0.0),
            omega_N=_rate(p, "omega_N", "params", 0.0),
            gamma_tilde=_rate(p, "gamma_tilde", "params", 0.0),
        )
        spec = standard_oms.optimal_noise_spectrum(omegas, sp, lpn)
        name = f"value__{label}" if label else "value"
        cols.append((name, spec.values / sp.gamma_m))
    return RunResult(cols, derived, sc)


def _task_force_vs_coupling(sc: Scenario) -> RunResult:
    ratio = _x_grid(sc)
    total = standard_oms.force_noise_vs_coupling(ratio)
    shot = 0.5 / ratio**2
    ba = 0.5 * ratio**2
    cols = [
        ("g_over_g_opt", ratio),
        ("value", total),
        ("shot_branch", shot),
        ("backaction_branch", ba),
    ]
    i_min = int(np.argmin(total))
    derived = {"min_value": float(total[i_min]), "argmin_g_over_g_opt": float(ratio[i_min])}
    return RunResult(cols, derived, sc)


def _qnd_coupling(p: dict, where: str) -> float:
    if "G0" in p:
        return parse_rate(p["G0"], f"{where}.G0")
    derived = parametric.bec_derive(
        N_atoms=_number(p, "N_atoms", where),
        g_a=_rate(p, "g_a", where),
        Delta_a=_rate(p, "Delta_a", where),
        omega_R=_rate(p, "omega_R", where),
        omega_sw=0.0,
    )
    return derived.G0


def _task_added_noise_vs_pump(sc: Scenario) -> RunResult:
    eta_ratio = _x_grid(sc)
    base = sc.params
    cols = [("eta_over_kappa", eta_ratio)]
    derived = {}
    for label, over in _sweep_cases(sc):
        p = {**base, **over}
        kap = _rate(p, "kappa", "params")
        gamma = _rate(p, "gamma", "params")
        g0_mode = _qnd_coupling(p, "params")
        modes = bec_qnd.bogoliubov_derive(
            _rate(p, "omega_R", "params"), _rate(p, "omega_sw", "params"), g0_mode
        )
        values = np.empty_like(eta_ratio)
        for i, r in enumerate(eta_ratio):
            drive = bec_qnd.QndDrive.from_pump(r * kap, kap, gamma, modes.omega_m)
            values[i] = bec_qnd.n_add(0.0, drive, modes.G)
        name = f"value__{label}" if label else "value"
        cols.append((name, values))
        derived[name] = {
            "omega_m": modes.omega_m,
            "eta_opt_closed": bec_qnd.optimal_pump(kap, gamma, modes.omega_m, modes.G),
            "n_add_min_closed": bec_qnd.n_add_min(modes.omega_m, kap),
        }
    return RunResult(cols, derived, sc)


def _task_min_added_noise_vs_collision(sc: Scenario) -> RunResult:
    omega_sw = _x_grid(sc)
    base = sc.params
    omega_r = _rate(base, "omega_R", "params")
    cols = [("omega_sw_rad_s", omega_sw)]
    for label, over in _sweep_cases(sc):
        p = {**base, **over}
        kap = _rate(p, "kappa", "params")
        values = np.array(
            [
                bec_qnd.n_add_min(bec_qnd.bogoliubov_derive(omega_r, s, 1.0).omega_m, kap)
                for s in omega_sw
            ]
        )
        name = f"value__{label}" if label else "value"
        cols.append((name, values))
    return RunResult(cols, {}, sc)


def _cqnc_params(p: dict, where: str, matched: bool = True) -> cqnc.CqncParams:
    omega_m = _rate(p, "omega_m", where)
    gamma_m = _rate(p, "gamma_m", where)
    kappa = _rate(p, "kappa", where)
    g0 = _rate(p, "g0", where)
    wavelength = _number(p, "wavelength_m", where)
    base = cqnc.CqncParams(
        omega_m=omega_m,
        gamma_m=gamma_m,
        kappa=kappa,
        g=g0,  # placeholder until the drive power fixes it
        G=0.0,  # mean-field pull from the ensemble neglected in the conversion
        Gamma=gamma_m if matched else _rate(p, "Gamma", where, gamma_m),
        Delta_c=_rate(p, "Delta_c", where, 0.0),
        temperature=_number(p, "temperature_K", where, 0.0),
        g0=g0,
        wavelength=wavelength,
    )
    if "power_W" in p:
        g = cqnc.power_to_coupling(_number(p, "power_W", where), base)
    else:
        g = _rate(p, "g", where)
    return cqnc.CqncParams(
        omega_m=omega_m,
        gamma_m=gamma_m,
        kappa=kappa,
        g=g,
        G=g if matched else _rate(p, "G", where, g),
        Gamma=base.Gamma,
        Delta_c=base.Delta_c,
        temperature=base.temperature,
        g0=g0,
        wavelength=wavelength,
    )


def _squeeze_from(p: dict, where: str) -> cqnc.SqueezedInput:
    n = _number(p, "squeeze_n", where, 0.0)
    phi_raw = p.get("squeeze_phi", "opt")
    if phi_raw == "opt":
        phi = cqnc.phi_opt(_rate(p, "Delta_c", where, 0.0) / _rate(p, "kappa", where))
    else:
        phi = _number(p, "squeeze_phi", where, 0.0)
    return cqnc.SqueezedInput.pure(n, phi)


def _task_cqnc_force_spectrum(sc: Scenario) -> RunResult:
    omegas = _omega_grid(sc)
    base = sc.params
    p0 = _cqnc_params(base, "params")
    from .lti_core import chi_mech_lorentzian

    sql_dimless = 1.0 / (p0.gamma_m * np.abs(chi_mech_lorentzian(omegas, p0.omega_m, p0.gamma_m)))
    cols = [
        ("omega_rad_s", omegas),
        ("omega_over_omega_m", omegas / p0.omega_m),
        ("value_sql", sql_dimless),
    ]
    derived = {"g": p0.g, "g_over_g0_squared": (p0.g / p0.g0) ** 2 if p0.g0 else None}
    for label, over in _sweep_cases(sc):
        p = {**base, **over}
        cp = _cqnc_params(p, "params")
        sq = _squeeze_from(p, "params")
        values = cqnc.force_noise_spectrum_perfect(omegas, cp, sq)
        name = f"value__{label}" if label else "value"
        cols.append((name, values))
    return RunResult(cols, derived, sc)


def _task_cqnc_force_vs_power(sc: Scenario) -> RunResult:
    x = _x_grid(sc)  # (g / g0)^2
    base = sc.params
    p0 = _cqnc_params(base, "params")
    offset = _number(base, "omega_offset_gamma_m", "params", 0.0)
    omega_eval = p0.omega_m + offset * p0.gamma_m
    cols = [("g2_over_g02", x)]
    derived = {"omega_eval": omega_eval}
    for label, over in _sweep_cases(sc):
        p = {**base, **over}
        cp = _cqnc_params(p, "params")
        sq = _squeeze_from(p, "params")
        g_values = cp.g0 * np.sqrt(x)
        with_cqnc = np.array(
            [cqnc.force_noise_spectrum_perfect(omega_eval, cp, sq, g=g) for g in g_values]
        )
        without = np.array(
            [cqnc.standard_force_noise_squeezed(omega_eval, cp, sq, g=g) for g in g_values]
        )
        suffix = f"__{label}" if label else ""
        cols.append((f"value_cqnc{suffix}", with_cqnc))
        cols.append((f"value_standard{suffix}", without))
        derived[f"argmin_standard{suffix}"] = float(x[np.argmin(without)])
        derived[f"min_standard{suffix}"] = float(np.min(without))
    return RunResult(cols, derived, sc)


def _parametric_curve(p: dict, where: str) -> tuple[parametric.HybridParams, dict]:
    c0 = _number(p, "C0", where)
    c1 = _number(p, "C1", where, 0.0)
    xi_m = p.get("xi_m")
    xi_d = p.get("xi_d")
    if xi_m is None and xi_d is None:
        raise ConfigError(f"{where}: give xi_m or xi_d (the other is solved for matching)")
    if xi_m is None:
        xi_m = parametric.impedance_match(c0, c1, float(xi_d))
    elif xi_d is None:
        # bare cavity: the atomic modulation depth is irrelevant
        if c1 == 0.0:
            xi_d = 0.0
        else:
            xi_d = parametric.impedance_solve(C0=c0, C1=c1, xi_m=float(xi_m), xi_d=None)["xi_d"]
    params = parametric.HybridParams.from_cooperativities(
        C0=c0,
        C1=c1,
        xi_m=float(xi_m),
        xi_d=float(xi_d),
        omega_m=_rate(p, "omega_m", where),
        gamma_m=_rate(p, "gamma_m", where),
        kappa=_rate(p, "kappa", where),
        gamma_d=_rate(p, "gamma_d", where),
        mass=_number(p, "mass_kg", where, 0.0),
        n_c_T=_number(p, "n_c_T", where, 0.0),
        n_m_T=_number(p, "n_m_T", where, 0.0),
        n_d_T=_number(p, "n_d_T", where, 0.0),
    )
    verdict = stability_check(parametric.build_drift(params).drift)
    info = {
        "C0": c0,
        "C1": c1,
        "xi_m": float(xi_m),
        "xi_d": float(xi_d),
        "sqrt_gain": parametric.optical_gain(c0, c1, float(xi_m), float(xi_d)),
        "stable": bool(verdict.stable),
        "max_real_eigenvalue": verdict.max_real_part,
        "lambda_max": parametric.lambda_max(params),
        "threshold_margin": parametric.modulation_threshold_margin(params),
    }
    if params.mass > 0:
        info["sensitivity_N_per_sqrtHz"] = float(parametric.sensitivity(0.0, params))
    return params, info


def _task_response_and_noise(sc: Scenario) -> RunResult:
    omegas = _omega_grid(sc)
    base = sc.params
    allow_unstable = bool(base.get("allow_unstable", False))
    cols_x = None
    cols = []
    derived = {}
    for label, over in _sweep_cases(sc):
        p = {**base, **over}
        params, info = _parametric_curve(p, "params")
        if not info["stable"] and not allow_unstable:
            from .lti_core import UnstableSystemError

            raise UnstableSystemError(
                f"curve {label or '(default)'} is unstable "
                f"(max Re eig = {info['max_real_eigenvalue']:.4g}); "
                "set allow_unstable = true to evaluate the formulas anyway"
            )
        if cols_x is None:
            cols_x = [
                ("omega_rad_s", omegas),
                ("omega_over_omega_m", omegas / params.omega_m),
            ]
        rm, n_add = parametric.response_and_noise(omegas, params)
        suffix = f"__{label}" if label else ""
        cols.append((f"value_n_add{suffix}", n_add))
        cols.append((f"value_R_m{suffix}", rm))
        derived[label or "curve"] = info
    return RunResult(cols_x + cols, derived, sc)


def _task_oracle(sc: Scenario) -> RunResult:
    from . import oracle_cases

    cases_cfg = sc.params.get("cases", {})
    results = oracle_cases.run_cases(cases_cfg, seed=sc.seed)
    rows_case, rows_channel, rows_n, rows_frac, rows_max = [], [], [], [], []
    derived = {}
    for case in results:
        for ch in case.channels:
            rows_case.append(case.name)
            rows_channel.append(ch.label)
            rows_n.append(ch.n_points)
            rows_frac.append(ch.fraction_within_3sigma)
            rows_max.append(ch.max_abs_sigma)
        derived[case.name] = case.summary()
    cols = [
        ("case", np.array(rows_case)),
        ("channel", np.array(rows_channel)),
        ("n_points", np.array(rows_n)),
        ("fraction_within_3sigma", np.array(rows_frac)),
        ("max_abs_sigma", np.array(rows_max)),
    ]
    return RunResult(cols, derived, sc)


_TASK_FNS = {
    ("standard", "optimal_noise_spectrum"): _task_optimal_noise_spectrum,
    ("standard", "force_vs_coupling"): _task_force_vs_coupling,
    ("qnd", "added_noise_vs_pump"): _task_added_noise_vs_pump,
    ("qnd", "min_added_noise_vs_collision"): _task_min_added_noise_vs_collision,
    ("cqnc", "force_spectrum"): _task_cqnc_force_spectrum,
    ("cqnc", "force_vs_power"): _task_cqnc_force_vs_power,
    ("parametric", "response_and_noise"): _task_response_and_noise,
    ("oracle", "vs_analytic"): _task_oracle,
}


def run_scenario(sc: Scenario) -> RunResult:
    fn = _TASK_FNS.get((sc.kind, sc.task))
    if fn is None:
        raise ConfigError(f"no implementation for kind={sc.kind!r} task={sc.task!r}")
    return fn(sc)


def scenario_drift(sc: Scenario):
    """Drift matrix of the scenario's linear system, for stability reports."""
    if sc.kind == "parametric":
        cases = _sweep_cases(sc)
        out = []
        for label, over in cases:
            params, info = _parametric_curve({**sc.params, **over}, "params")
            out.append((label or "(default)", parametric.build_drift(params).drift, info))
        return out
    if sc.kind == "standard":
        p = _standard_params(sc.params, "params")
        lpn = standard_oms.LpnParams(
            Gamma_L=_rate(sc.params, "Gamma_L", "params", 0.0),
            omega_N=_rate(sc.params, "omega_N", "params", 1.0),
            gamma_tilde=_rate(sc.params, "gamma_tilde", "params", 1.0),
        )
        g = _rate(sc.params, "g", "params", 0.0)
        sp = standard_oms.StandardOmsParams(
            omega_m=p.omega_m, gamma_m=p.gamma_m, kappa=p.kappa, g0=p.g0, g=g,
            mass=p.mass, temperature=p.temperature, cavity_length=p.cavity_length,
        )
        return [("standard", standard_oms.standard_oms_drift(sp, lpn).drift, {})]
    raise ConfigError(f"check-stability supports 'parametric' and 'standard' kinds, not {sc.kind!r}")


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _format_cell(v) -> str:
    if isinstance(v, (np.floating, float)):
        return format(float(v), ".12g")
    return str(v)


def write_csv(result: RunResult, path: Path) -> None:
    names = [c[0] for c in result.columns]
    arrays = [np.atleast_1d(c[1]) for c in result.columns]
    n = len(arrays[0])
    lines = [",".join(names)]
    for i in range(n):
        lines.append(",".join(_format_cell(a[i]) for a in arrays))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _json_ready(obj):
    if isinstance(obj, dict):
        return {str(k): _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return obj


def write_manifest(result: RunResult, csv_path: Path, manifest_path: Path) -> None:
    digest = hashlib.sha256(csv_path.read_bytes()).hexdigest() if csv_path.exists() else None
    manifest = {
        "tool": "qnoise-lab",
        "version": __version__,
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "seed": result.scenario.seed,
        "scenario": _json_ready(result.scenario.resolved()),
        "derived": _json_ready(result.derived),
        "outputs": {"csv": csv_path.name, "sha256": digest},
    }
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def write_json_table(result: RunResult, path: Path) -> None:
    payload = {name: _json_ready(np.atleast_1d(values)) for name, values in result.columns}
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
