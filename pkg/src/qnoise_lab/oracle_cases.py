"""Canned analytic-vs-time-domain comparison cases.

Each case builds a linear (or periodically modulated) system, runs the
time-domain integrator, Welch-estimates channel spectra, and scores them
against the frequency-domain prediction in units of the Monte-Carlo
standard error.  Sampling windows and segment lengths are derived from the
system's slowest decay rate so that resolution bias stays well inside the
statistical error.

Optical channels of the stiff hybrid case are not scored: the cavity
linewidth lies far above any tractable Nyquist frequency, so their sampled
spectra are alias-dominated there.  The cavity quadratures are validated in
the standard-cavity case instead, where the linewidth is resolvable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bec_qnd, parametric, standard_oms
from .lti_core import stability_check
from .mc_oracle import PeriodicSystem, SdeRun, alias_corrected_spectrum, welch_psd_mc

__all__ = ["ChannelComparison", "CaseResult", "run_cases"]


@dataclass(frozen=True)
class ChannelComparison:
    label: str
    omegas: np.ndarray
    mc: np.ndarray
    stderr: np.ndarray
    analytic: np.ndarray
    n_points: int
    fraction_within_3sigma: float
    max_abs_sigma: float


@dataclass(frozen=True)
class CaseResult:
    name: str
    channels: list[ChannelComparison]

    def summary(self) -> dict:
        return {
            c.label: {
                "n_points": c.n_points,
                "fraction_within_3sigma": c.fraction_within_3sigma,
                "max_abs_sigma": c.max_abs_sigma,
            }
            for c in self.channels
        }

    @property
    def passed(self) -> bool:
        return all(c.fraction_within_3sigma >= 0.95 for c in self.channels)


def _segment_plan(dt: float, slowest_rate: float, k_segments: int = 14):
    """Segment length resolving the narrowest line to ~1/6 of its width."""
    d_omega = max(slowest_rate / 6.0, 1e-12)
    nperseg = 2 ** int(np.ceil(np.log2(2.0 * np.pi / (d_omega * dt))))
    noverlap = nperseg // 2
    n_samples = noverlap * (k_segments + 1)
    return nperseg, noverlap, n_samples


def _score(label, est, analytic, window) -> ChannelComparison:
    mask = (est.omegas >= window[0]) & (est.omegas <= window[1]) & (est.stderr > 0)
    om = est.omegas[mask]
    mc = est.values[mask]
    se = est.stderr[mask]
    ana = np.asarray(analytic, dtype=float)[mask]
    nsig = np.abs(mc - ana) / se
    return ChannelComparison(
        label=label,
        omegas=om,
        mc=mc,
        stderr=se,
        analytic=ana,
        n_points=int(mask.sum()),
        fraction_within_3sigma=float(np.mean(nsig <= 3.0)),
        max_abs_sigma=float(nsig.max()),
    )


def standard_cavity_case(seed: int, n_trajectories: int = 200) -> CaseResult:
    """Resonantly driven sensor with phase-noise block, exact sampling."""
    p = standard_oms.StandardOmsParams(
        omega_m=1.2e3, gamma_m=60.0, kappa=4.0e3, g0=40.0, g=400.0, temperature=0.0
    )
    lpn = standard_oms.LpnParams(Gamma_L=0.5, omega_N=900.0, gamma_tilde=450.0)
    system = standard_oms.standard_oms_drift(p, lpn)
    dt = 1.0e-4
    slowest = abs(stability_check(system.drift).max_real_part)
    nperseg, noverlap, n_samples = _segment_plan(dt, slowest)
    run = SdeRun(
        system=system,
        dt=dt,
        duration=n_samples * dt,
        n_trajectories=n_trajectories,
        seed=seed,
        psd_window=(nperseg, noverlap),
        method="exact",
    )
    estimates = welch_psd_mc(run, channels=tuple(range(6)))
    sample_rate = 2.0 * np.pi / dt
    window = (-5.0e3, 5.0e3)
    channels = []
    for idx, label in enumerate(system.labels):
        est = estimates[idx]
        ana = alias_corrected_spectrum(system, est.omegas, idx, sample_rate, n_alias=2)
        channels.append(_score(label, est, ana, window))
    return CaseResult("standard_oms", channels)


def parametric_hybrid_case(seed: int, n_trajectories: int = 200) -> CaseResult:
    """Impedance-matched hybrid amplifier; matter channels scored.

    Uses the matched (C0, C1, xi_m) = (0.04, 0.05, 0.30) operating point:
    the high-C1 matched sets with xi_d > 1 lie past the exact parametric
    threshold of the drift, so no stationary spectrum exists there to
    validate against.
    """
    c0, c1, xi_m = 0.04, 0.05, 0.30
    xi_d = parametric.impedance_solve(C0=c0, C1=c1, xi_m=xi_m, xi_d=None)["xi_d"]
    params = parametric.HybridParams.from_cooperativities(
        C0=c0,
        C1=c1,
        xi_m=xi_m,
        xi_d=xi_d,
        omega_m=1.0e5,
        gamma_m=2.0 * np.pi * 100.0,
        kappa=2.0 * np.pi * 1.3e6,
        gamma_d=2.0 * np.pi * 100.0,
    )
    system = parametric.build_drift(params)
    dt = 2.0e-4
    slowest = abs(stability_check(system.drift).max_real_part)
    nperseg, noverlap, n_samples = _segment_plan(dt, slowest)
    run = SdeRun(
        system=system,
        dt=dt,
        duration=n_samples * dt,
        n_trajectories=n_trajectories,
        seed=seed,
        psd_window=(nperseg, noverlap),
        method="exact",
    )
    matter = (2, 3, 4, 5)
    estimates = welch_psd_mc(run, channels=matter)
    sample_rate = 2.0 * np.pi / dt
    window = (-2.5e3, 2.5e3)
    channels = []
    for idx in matter:
        est = estimates[idx]
        ana = alias_corrected_spectrum(system, est.omegas, idx, sample_rate, n_alias=2)
        channels.append(_score(system.labels[idx], est, ana, window))
    return CaseResult("parametric_hybrid", channels)


def qnd_periodic_case(seed: int, n_trajectories: int = 200) -> CaseResult:
    """Two-tone modulated condensate readout, frozen-step integration."""
    kappa, gamma, omega_m = 4.0e3, 60.0, 600.0
    coupling = 150.0  # G alpha_max
    eta = np.sqrt(0.25 * kappa**2 + omega_m**2)  # alpha_max = 1
    drive = bec_qnd.QndDrive.from_pump(eta, kappa, gamma, omega_m)
    a0, ac, a_sin, b, corr, mod_freq = bec_qnd.qnd_periodic_coefficients(drive, coupling)
    system = PeriodicSystem(a0, ac, a_sin, b, corr, mod_freq)
    period = 2.0 * np.pi / mod_freq
    dt = period / 256.0
    nperseg, noverlap, n_samples = _segment_plan(dt, gamma / 2.0)
    run = SdeRun(
        system=system,
        dt=dt,
        duration=n_samples * dt,
        n_trajectories=n_trajectories,
        seed=seed,
        psd_window=(nperseg, noverlap),
        method="euler",
        burn_in=12.0 / gamma,
    )
    estimates = welch_psd_mc(run, channels=(2, 3))
    window = (-5.0 * gamma, 5.0 * gamma)
    sample_rate = 2.0 * np.pi / dt

    def fold(fn, omegas):
        return sum(fn(omegas + k * sample_rate) for k in (-1, 0, 1))

    est_q = estimates[2]
    ana_q = fold(lambda w: bec_qnd.spectrum_Q(w, drive, coupling), est_q.omegas)
    est_p = estimates[3]
    ana_p = fold(lambda w: bec_qnd.spectrum_P(w, drive, coupling), est_p.omegas)
    channels = [
        _score("Q", est_q, ana_q, window),
        _score("P", est_p, ana_p, window),
    ]
    return CaseResult("qnd_periodic", channels)


_BUILDERS = {
    "standard": standard_cavity_case,
    "parametric": parametric_hybrid_case,
    "qnd": qnd_periodic_case,
}


def run_cases(cases_cfg: dict, seed: int) -> list[CaseResult]:
    """Run the configured subset (default: all three) of comparison cases."""
    results = []
    for name, builder in _BUILDERS.items():
        cfg = dict(cases_cfg.get(name, {}))
        if not cfg.pop("enabled", True):
            continue
        n_traj = int(cfg.pop("n_trajectories", 200))
        if cfg:
            raise ValueError(f"cases.{name}: unknown keys {sorted(cfg)}")
        results.append(builder(seed=seed, n_trajectories=n_traj))
    return results
