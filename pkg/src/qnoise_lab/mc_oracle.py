"""Time-domain oracle: integrate the linear Langevin systems and estimate
power spectra, independently of the frequency-domain solver.

Two integrators are provided.

* ``exact``: for a stable time-independent drift the linear SDE has an
  exact discrete-time update x -> F x + w, F = exp(A dt),
  w ~ N(0, Sigma - F Sigma F^T) with Sigma the stationary covariance.
  There is no step-size constraint (stiff systems can be sampled far
  below their fastest rate) and trajectories start from the exact
  stationary distribution, so no burn-in is needed.
* ``euler`` / periodic: for drifts modulated as
  A(t) = A0 + Ac cos(W t) + As sin(W t), steps use the frozen-coefficient
  exact update at the midpoint of each step, precomputed over one
  modulation period.  Long Welch segments (many modulation periods)
  perform the phase averaging that defines the stationary spectrum of a
  periodically driven system.

Randomness is counter-based (Philox keyed by seed and trajectory index),
so results are bit-identical for a given seed regardless of batching or
evaluation order.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg as sla
from scipy import signal

from .lti_core import (
    LinearSystem,
    Spectrum,
    UnstableSystemError,
    lti_spectrum,
    stability_check,
    stationary_covariance,
)

__all__ = [
    "PeriodicSystem",
    "SdeRun",
    "PsdEstimate",
    "simulate",
    "estimate_psd",
    "welch_psd_mc",
    "alias_corrected_spectrum",
]


@dataclass(frozen=True)
class PeriodicSystem:
    """Drift A0 + Ac cos(W t) + As sin(W t) with white input noise."""

    a0: np.ndarray
    a_cos: np.ndarray
    a_sin: np.ndarray
    noise_in: np.ndarray
    corr: np.ndarray
    mod_freq: float

    @property
    def dim(self) -> int:
        return np.asarray(self.a0).shape[0]

    def drift_at(self, t: float) -> np.ndarray:
        wt = self.mod_freq * t
        return self.a0 + self.a_cos * np.cos(wt) + self.a_sin * np.sin(wt)

    def diffusion(self) -> np.ndarray:
        b = np.asarray(self.noise_in, dtype=float)
        return b @ np.asarray(self.corr, dtype=float) @ b.T


@dataclass(frozen=True)
class SdeRun:
    """One reproducible simulation request."""

    system: LinearSystem | PeriodicSystem
    dt: float
    duration: float
    n_trajectories: int
    seed: int
    psd_window: tuple[int, int] | None = None  # (nperseg, noverlap)
    method: str = "exact"
    burn_in: float = 0.0
    channels: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.dt <= 0 or self.duration <= 0 or self.n_trajectories < 1:
            raise ValueError("dt, duration and n_trajectories must be positive")
        if self.method not in ("exact", "euler"):
            raise ValueError("method must be 'exact' or 'euler'")
        if isinstance(self.system, PeriodicSystem) and self.method == "exact":
            raise ValueError("periodic systems use the 'euler' (stepped) integrator")
        if self.method == "euler":
            a_scale = self._max_rate()
            if self.dt > 0.05 / a_scale:
                raise ValueError(
                    f"dt = {self.dt:g} too coarse for stepped integration; "
                    f"need dt <= {0.05 / a_scale:g}"
                )
        relax = self._relaxation_time()
        if np.isfinite(relax) and self.duration < 50.0 * relax:
            warnings.warn(
                f"duration {self.duration:g} s is below 50 relaxation times "
                f"({50.0 * relax:g} s); spectra may be poorly resolved",
                RuntimeWarning,
                stacklevel=2,
            )

    def _max_rate(self) -> float:
        if isinstance(self.system, PeriodicSystem):
            mats = (self.system.a0, self.system.a_cos, self.system.a_sin)
            entry = max(np.abs(m).max() for m in mats)
            return max(entry, self.system.mod_freq)
        return float(np.abs(self.system.drift).max())

    def _relaxation_time(self) -> float:
        a0 = self.system.a0 if isinstance(self.system, PeriodicSystem) else self.system.drift
        verdict = stability_check(a0)
        if verdict.max_real_part >= 0:
            return np.inf
        return 1.0 / abs(verdict.max_real_part)

    @property
    def n_samples(self) -> int:
        return int(round(self.duration / self.dt))


@dataclass(frozen=True)
class PsdEstimate:
    """Welch PSD averaged over trajectories, with per-point standard error."""

    omegas: np.ndarray
    values: np.ndarray
    stderr: np.ndarray
    n_segments: int
    channel: int

    def as_spectrum(self, normalization: str = "dimensionless") -> Spectrum:
        return Spectrum(self.omegas, self.values, normalization)


def _rng_for(seed: int, trajectory: int) -> np.random.Generator:
    # counter-based stream: independent of batching and scheduling
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(trajectory,))))


def _van_loan(a: np.ndarray, diffusion: np.ndarray, dt: float):
    """Exact one-step propagator F = e^{A dt} and noise covariance Q.

    Block-exponential form; requires |A| dt of order one (the growing
    block overflows otherwise), which the stepped integrator guarantees.
    """
    n = a.shape[0]
    block = np.zeros((2 * n, 2 * n))
    block[:n, :n] = -a
    block[:n, n:] = diffusion
    block[n:, n:] = a.T
    phi = sla.expm(block * dt)
    f = phi[n:, n:].T
    q = f @ phi[:n, n:]
    return f, 0.5 * (q + q.T)


def _exact_update_stable(system: LinearSystem, dt: float):
    """Exact discretization for a stable drift at arbitrary step size:
    F = e^{A dt}, Q = Sigma - F Sigma F^T with Sigma the stationary
    covariance.  No overflow for stiff systems sampled slowly."""
    sigma = stationary_covariance(system)
    f = sla.expm(system.drift * dt)
    q = sigma - f @ sigma @ f.T
    return f, 0.5 * (q + q.T), sigma


def _chol_psd(mat: np.ndarray) -> np.ndarray:
    # tolerate tiny negative eigenvalues from finite-precision Q
    try:
        return np.linalg.cholesky(mat)
    except np.linalg.LinAlgError:
        w, v = np.linalg.eigh(mat)
        w = np.maximum(w, 0.0)
        return v * np.sqrt(w)


def _periodic_steps(system: PeriodicSystem, dt: float):
    period = 2.0 * np.pi / system.mod_freq
    n_per = max(int(round(period / dt)), 1)
    if abs(n_per * dt - period) > 1e-9 * period:
        raise ValueError(
            "dt must divide the modulation period; "
            f"use dt = period / n with integer n (period = {period:g} s)"
        )
    diffusion = system.diffusion()
    props, chols = [], []
    for k in range(n_per):
        a_k = system.drift_at((k + 0.5) * dt)
        f, q = _van_loan(a_k, diffusion, dt)
        props.append(f)
        chols.append(_chol_psd(q))
    return props, chols, n_per


def simulate(run: SdeRun) -> np.ndarray:
    """Integrate trajectories; returns (n_trajectories, n_samples, n_channels).

    Recorded channels default to the full state vector.  Deterministic for a
    given seed; each trajectory consumes its own counter-based stream, so
    the result is independent of batching (see ``_simulate_reference`` for
    the plain per-trajectory implementation it is checked against).
    """
    return _simulate_batch_vectorized(run, range(run.n_trajectories))


def _simulate_reference(run: SdeRun) -> np.ndarray:
    """Plain one-trajectory-at-a-time integrator; ground truth for tests."""
    system = run.system
    dim = system.dim
    channels = run.channels or tuple(range(dim))
    n_keep = run.n_samples
    n_burn = int(round(run.burn_in / run.dt))

    if isinstance(system, PeriodicSystem):
        props, chols, n_per = _periodic_steps(system, run.dt)
        frozen = LinearSystem(system.drift_at(0.0), system.noise_in, system.corr)
        chol0 = _chol_psd(stationary_covariance(frozen))
    else:
        verdict = stability_check(system.drift)
        if not verdict.stable:
            raise UnstableSystemError("time-domain run requires a stable drift")
        f, q, sigma = _exact_update_stable(system, run.dt)
        props, chols, n_per = [f], [_chol_psd(q)], 1
        chol0 = _chol_psd(sigma)

    out = np.empty((run.n_trajectories, n_keep, len(channels)), dtype=np.float64)
    chan_idx = np.asarray(channels, dtype=int)
    total = n_burn + n_keep
    for j in range(run.n_trajectories):
        rng = _rng_for(run.seed, j)
        x = chol0 @ rng.standard_normal(dim)
        noise = rng.standard_normal((total, dim))
        for i in range(total):
            k = i % n_per
            x = props[k] @ x + chols[k] @ noise[i]
            if i >= n_burn:
                out[j, i - n_burn] = x[chan_idx]
            if i % 4096 == 0 and not np.all(np.isfinite(x)):
                raise RuntimeError(
                    f"trajectory {j} diverged at step {i} (t = {i * run.dt:g} s); "
                    "the system is unstable at this drive"
                )
    return out


def _simulate_batch_vectorized(run: SdeRun, trajectories: range) -> np.ndarray:
    """Same output as ``simulate`` for a subset, stepping all paths at once.

    Noise for each trajectory comes from its own counter-based stream in
    step-sized chunks, so results do not depend on the batch split.
    """
    system = run.system
    dim = system.dim
    channels = run.channels or tuple(range(dim))
    chan_idx = np.asarray(channels, dtype=int)
    n_keep = run.n_samples
    n_burn = int(round(run.burn_in / run.dt))
    total = n_burn + n_keep
    n_traj = len(trajectories)

    if isinstance(system, PeriodicSystem):
        props, chols, n_per = _periodic_steps(system, run.dt)
        frozen = LinearSystem(system.drift_at(0.0), system.noise_in, system.corr)
        chol0 = _chol_psd(stationary_covariance(frozen))
    else:
        f, q, sigma = _exact_update_stable(system, run.dt)
        props, chols, n_per = [f], [_chol_psd(q)], 1
        chol0 = _chol_psd(sigma)

    rngs = [_rng_for(run.seed, j) for j in trajectories]
    x = np.stack([chol0 @ r.standard_normal(dim) for r in rngs], axis=1)  # (dim, n_traj)
    out = np.empty((n_traj, n_keep, len(chan_idx)), dtype=np.float64)
    chunk = 8192
    i = 0
    while i < total:
        span = min(chunk, total - i)
        # (span, dim, n_traj): one contiguous block per trajectory stream
        noise = np.empty((span, dim, n_traj))
        for j, r in enumerate(rngs):
            noise[:, :, j] = r.standard_normal((span, dim))
        for s in range(span):
            k = (i + s) % n_per
            x = props[k] @ x + chols[k] @ noise[s]
            if i + s >= n_burn:
                out[:, i + s - n_burn, :] = x[chan_idx].T
        if not np.all(np.isfinite(x)):
            raise RuntimeError(f"divergence near step {i + span}; system unstable at this drive")
        i += span
    return out


def estimate_psd(
    trajectories: np.ndarray,
    channel: int,
    dt: float,
    psd_window: tuple[int, int] | None = None,
) -> PsdEstimate:
    """Welch PSD of one recorded channel, two-sided in angular frequency.

    Averages the per-trajectory estimates; the standard error is the
    trajectory-to-trajectory spread.  Requires at least 8 segments.
    """
    x = np.asarray(trajectories)
    if x.ndim != 3:
        raise ValueError("trajectories must have shape (n_traj, n_samples, n_channels)")
    n_samples = x.shape[1]
    nperseg, noverlap = psd_window or (n_samples // 8, n_samples // 16)
    n_segments = (n_samples - noverlap) // (nperseg - noverlap)
    if n_segments < 8:
        raise ValueError(f"only {n_segments} Welch segments; need at least 8 (longer run or shorter segments)")
    freqs, pxx = signal.welch(
        x[:, :, channel],
        fs=1.0 / dt,
        window="hann",
        nperseg=nperseg,
        noverlap=noverlap,
        detrend=False,
        return_onesided=False,
        axis=1,
    )
    order = np.argsort(freqs)
    omegas = 2.0 * np.pi * freqs[order]
    pxx = pxx[:, order]
    # spectral density per unit ordinary frequency equals the two-sided
    # symmetrized density in angular-frequency convention
    mean = pxx.mean(axis=0)
    stderr = pxx.std(axis=0, ddof=1) / np.sqrt(x.shape[0]) if x.shape[0] > 1 else np.zeros_like(mean)
    return PsdEstimate(omegas, mean, stderr, int(n_segments), channel)


def welch_psd_mc(
    run: SdeRun, channels: tuple[int, ...], batch_size: int = 25
) -> dict[int, PsdEstimate]:
    """Batched simulate + Welch driver for runs too large to hold in memory.

    ``channels`` index the recorded channels of the run.  Per-trajectory
    PSDs are accumulated batch by batch; the result is identical to a
    single full-memory pass with the same seed.
    """
    run = SdeRun(
        system=run.system,
        dt=run.dt,
        duration=run.duration,
        n_trajectories=run.n_trajectories,
        seed=run.seed,
        psd_window=run.psd_window,
        method=run.method,
        burn_in=run.burn_in,
        channels=tuple(channels),
    )
    keep = {c: [] for c in channels}
    omegas = None
    n_segments = 0
    for start in range(0, run.n_trajectories, batch_size):
        batch = range(start, min(start + batch_size, run.n_trajectories))
        data = _simulate_batch_vectorized(run, batch)
        for c in channels:
            rec = run.channels.index(c)
            omegas, per_traj, n_segments = _per_traj_psd(data, rec, run.dt, run.psd_window)
            keep[c].append(per_traj)
    out = {}
    for c in channels:
        all_psd = np.concatenate(keep[c], axis=0)
        mean = all_psd.mean(axis=0)
        stderr = all_psd.std(axis=0, ddof=1) / np.sqrt(all_psd.shape[0])
        out[c] = PsdEstimate(omegas, mean, stderr, n_segments, c)
    return out


def _per_traj_psd(data, rec, dt, psd_window):
    n_samples = data.shape[1]
    nperseg, noverlap = psd_window or (n_samples // 8, n_samples // 16)
    n_segments = (n_samples - noverlap) // (nperseg - noverlap)
    if n_segments < 8:
        raise ValueError(f"only {n_segments} Welch segments; need at least 8")
    freqs, pxx = signal.welch(
        data[:, :, rec],
        fs=1.0 / dt,
        window="hann",
        nperseg=nperseg,
        noverlap=noverlap,
        detrend=False,
        return_onesided=False,
        axis=1,
    )
    order = np.argsort(freqs)
    return 2.0 * np.pi * freqs[order], pxx[:, order], int(n_segments)


def alias_corrected_spectrum(
    system: LinearSystem, omegas: np.ndarray, channel: int, sample_rate: float, n_alias: int = 1
) -> np.ndarray:
    """Analytic spectrum folded at the sampling rate for fair comparison
    with spectra estimated from exactly sampled trajectories."""
    total = np.zeros_like(omegas, dtype=float)
    for k in range(-n_alias, n_alias + 1):
        s = lti_spectrum(system, omegas + k * sample_rate)
        total += s[:, channel, channel].real
    return total
