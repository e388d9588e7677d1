"""Shared numeric kernel for linearized cavity/oscillator noise models.

Everything downstream reduces to linear stochastic systems

    du/dt = A u + B n(t),   <n_i(t) n_j(t')>_sym = C_ij delta(t - t'),

solved in the frequency domain through complex susceptibilities.  This
module provides the scalar susceptibilities, the matrix-valued symmetrized
power spectrum of such a system, a stability check, and the stationary
covariance (Lyapunov) solver used for cross-checks.

Two mechanical susceptibility conventions coexist on purpose: the full
Lorentzian ``chi_mech_lorentzian`` (weak-damping oscillator measured far
from a rotating frame) and the single-pole ``chi_mech_rwa`` (quadratures
co-rotating with the mode).  Callers state explicitly which one they use.

All functions are pure and broadcast over frequency grids; there is no
shared mutable state, so grid points may be evaluated in parallel.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg as sla

__all__ = [
    "PoleOnGridError",
    "UnstableSystemError",
    "LinearSystem",
    "Spectrum",
    "StabilityResult",
    "chi_cavity",
    "chi_mech_lorentzian",
    "chi_mech_rwa",
    "chi_negative_mass",
    "lti_spectrum",
    "spectrum_of_channel",
    "stability_check",
    "stationary_covariance",
    "squeezed_pair_corr",
    "default_grid",
]

# Spectrum normalization tags.  "rad_per_s" covers detected spectra quoted
# as rates before division by the mechanical linewidth.
NORMALIZATIONS = ("dimensionless", "per_gamma_m", "N2_per_Hz", "rad_per_s")

_NEAR_POLE_COND = 1e12
_POLE_COND = 1e15


class PoleOnGridError(ValueError):
    """A frequency grid point sits on (or numerically at) a system pole."""

    def __init__(self, omega: float, message: str | None = None):
        self.omega = omega
        super().__init__(message or f"response has a pole at omega = {omega!r} rad/s")


class UnstableSystemError(RuntimeError):
    """Stationary spectra were requested for a non-stable drift matrix."""


def default_grid(center: float, halfwidth: float, points: int = 2001) -> np.ndarray:
    """Dense linear frequency grid around a scenario's natural window."""
    return np.linspace(center - halfwidth, center + halfwidth, points)


# ---------------------------------------------------------------------------
# scalar susceptibilities
# ---------------------------------------------------------------------------

def chi_cavity(omega, kappa: float):
    """Cavity amplitude response 1 / (kappa/2 - i omega)."""
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    omega = np.asarray(omega, dtype=float)
    out = 1.0 / (0.5 * kappa - 1j * omega)
    return out[()] if out.ndim == 0 else out


def chi_mech_lorentzian(omega, omega_m: float, gamma_m: float):
    """Lorentzian oscillator response omega_m / ((omega_m^2 - omega^2) + i omega gamma_m)."""
    if omega_m <= 0 or gamma_m <= 0:
        raise ValueError("omega_m and gamma_m must be positive")
    omega = np.asarray(omega, dtype=float)
    out = omega_m / ((omega_m**2 - omega**2) + 1j * omega * gamma_m)
    return out[()] if out.ndim == 0 else out


def chi_mech_rwa(omega, gamma: float):
    """Single-pole co-rotating response (gamma/2 - i omega)^-1."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    omega = np.asarray(omega, dtype=float)
    out = 1.0 / (0.5 * gamma - 1j * omega)
    return out[()] if out.ndim == 0 else out


def chi_negative_mass(omega, omega_m: float, Gamma: float, drop_gamma_sq: bool = False):
    """Inverted-ensemble (negative-mass) response.

    Returns -omega_m / ((omega_m^2 - omega^2 + Gamma^2/4) + i omega Gamma).
    With ``drop_gamma_sq`` the Gamma^2/4 term is removed, which makes the
    response the exact negative of ``chi_mech_lorentzian`` when Gamma equals
    the mechanical damping rate (the perfect anti-noise condition).
    """
    if omega_m <= 0 or Gamma < 0:
        raise ValueError("omega_m must be positive and Gamma nonnegative")
    omega = np.asarray(omega, dtype=float)
    offset = 0.0 if drop_gamma_sq else 0.25 * Gamma**2
    out = -omega_m / ((omega_m**2 - omega**2 + offset) + 1j * omega * Gamma)
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# value types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearSystem:
    """Linearized Langevin system du/dt = A u + B n(t).

    ``corr`` is the symmetrized input correlation matrix: real, symmetric,
    positive semidefinite.  Antisymmetric (imaginary) parts of quantum input
    correlations drop out of every symmetrized spectrum, so they are not
    stored.
    """

    drift: np.ndarray
    noise_in: np.ndarray
    corr: np.ndarray
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        a = np.asarray(self.drift, dtype=float)
        b = np.asarray(self.noise_in, dtype=float)
        c = np.asarray(self.corr, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("drift must be square")
        if b.shape[0] != a.shape[0]:
            raise ValueError("noise_in rows must match drift dimension")
        if c.shape != (b.shape[1], b.shape[1]):
            raise ValueError("corr must be m x m for noise_in of shape n x m")
        if not np.allclose(c, c.T, atol=1e-12 * max(1.0, abs(c).max())):
            raise ValueError("corr must be symmetric")
        eigmin = np.linalg.eigvalsh(c).min() if c.size else 0.0
        if eigmin < -1e-9 * max(1.0, abs(c).max()):
            raise ValueError("corr must be positive semidefinite")
        object.__setattr__(self, "drift", a)
        object.__setattr__(self, "noise_in", b)
        object.__setattr__(self, "corr", c)
        if self.labels and len(self.labels) != a.shape[0]:
            raise ValueError("labels length must match system dimension")

    @property
    def dim(self) -> int:
        return self.drift.shape[0]

    def diffusion(self) -> np.ndarray:
        """B C B^T, the white-noise diffusion matrix of the state equation."""
        return self.noise_in @ self.corr @ self.noise_in.T


@dataclass(frozen=True)
class Spectrum:
    """Real, nonnegative spectral values on a strictly increasing grid."""

    omegas: np.ndarray
    values: np.ndarray
    normalization: str = "dimensionless"

    def __post_init__(self):
        om = np.asarray(self.omegas, dtype=float)
        va = np.asarray(self.values)
        if om.ndim != 1 or np.any(np.diff(om) <= 0):
            raise ValueError("frequency grid must be strictly increasing")
        if va.shape[0] != om.shape[0]:
            raise ValueError("values must align with the frequency grid")
        if np.iscomplexobj(va):
            scale = max(1.0, np.abs(va).max())
            if np.abs(va.imag).max() > 1e-9 * scale:
                raise ValueError("spectrum has a non-negligible imaginary part")
            va = va.real
        va = np.asarray(va, dtype=float)
        if not np.all(np.isfinite(va)):
            raise ValueError("spectrum contains non-finite values")
        floor = -1e-9 * max(1.0, va.max(initial=0.0))
        if va.min(initial=0.0) < floor:
            raise ValueError("spectrum has significantly negative values")
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(f"unknown normalization tag {self.normalization!r}")
        object.__setattr__(self, "omegas", om)
        object.__setattr__(self, "values", np.maximum(va, 0.0))


@dataclass(frozen=True)
class StabilityResult:
    stable: bool
    max_real_part: float
    eigenvalues: np.ndarray

    def __bool__(self) -> bool:
        return self.stable


# ---------------------------------------------------------------------------
# frequency-domain solution
# ---------------------------------------------------------------------------

def _transfer(system: LinearSystem, omegas: np.ndarray) -> np.ndarray:
    """T(omega) = (-i omega I - A)^-1 B, stacked over the grid."""
    n = system.dim
    eye = np.eye(n)
    m = (-1j * omegas)[:, None, None] * eye[None, :, :] - system.drift[None, :, :]
    conds = np.linalg.cond(m)
    worst = np.argmax(conds)
    if conds[worst] > _POLE_COND:
        raise PoleOnGridError(float(omegas[worst]))
    if conds[worst] > _NEAR_POLE_COND:
        warnings.warn(
            f"near-pole response at omega = {omegas[worst]:.6g} rad/s "
            f"(condition number {conds[worst]:.3g})",
            RuntimeWarning,
            stacklevel=3,
        )
    rhs = np.broadcast_to(system.noise_in, (len(omegas), *system.noise_in.shape))
    return np.linalg.solve(m, rhs)


def lti_spectrum(system: LinearSystem, omegas) -> np.ndarray:
    """Symmetrized spectral matrix S(omega) of a stable linear system.

    Returns an array of shape (n_omegas, n, n):
    S = 1/2 [T(w) C T(w)^dag + (T(-w) C T(-w)^dag)^T] with T = (-iwI - A)^-1 B.
    Diagonal entries are checked to be real and nonnegative.
    """
    omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
    verdict = stability_check(system.drift)
    if not verdict.stable:
        raise UnstableSystemError(
            f"stationary spectrum of unstable system (max Re eig = {verdict.max_real_part:.3g})"
        )
    t_pos = _transfer(system, omegas)
    t_neg = np.conj(t_pos)  # A real -> T(-w) = conj(T(w))
    c = system.corr
    s_pos = np.einsum("wij,jk,wlk->wil", t_pos, c, np.conj(t_pos))
    s_neg = np.einsum("wij,jk,wlk->wil", t_neg, c, np.conj(t_neg))
    s = 0.5 * (s_pos + np.transpose(s_neg, (0, 2, 1)))
    diag = np.einsum("wii->wi", s)
    scale = max(1.0, np.abs(diag).max())
    if np.abs(diag.imag).max() > 1e-9 * scale:
        raise AssertionError("diagonal spectra acquired an imaginary part")
    if diag.real.min() < -1e-9 * scale:
        raise AssertionError("diagonal spectra acquired negative values")
    return s


def spectrum_of_channel(
    system: LinearSystem, omegas, channel: int, normalization: str = "dimensionless"
) -> Spectrum:
    """One diagonal entry of ``lti_spectrum`` wrapped as a Spectrum."""
    omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
    s = lti_spectrum(system, omegas)
    return Spectrum(omegas, s[:, channel, channel].real, normalization)


def stability_check(drift) -> StabilityResult:
    """Eigenvalue test: stable iff all real parts < -1e-12 * ||A||."""
    a = np.asarray(drift, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("drift must be a square matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError("drift contains non-finite entries")
    eig = np.linalg.eigvals(a)
    tol = 1e-12 * max(np.linalg.norm(a), 1e-300)
    max_re = float(eig.real.max())
    return StabilityResult(stable=bool(max_re < -tol), max_real_part=max_re, eigenvalues=eig)


def stationary_covariance(system: LinearSystem) -> np.ndarray:
    """Stationary covariance from A Sigma + Sigma A^T + B C B^T = 0."""
    verdict = stability_check(system.drift)
    if not verdict.stable:
        raise UnstableSystemError("no stationary covariance for an unstable system")
    return sla.solve_continuous_lyapunov(system.drift, -system.diffusion())


def squeezed_pair_corr(n_mean: float, m_corr: complex) -> np.ndarray:
    """Symmetrized (X, P) input correlation block for a squeezed bath.

    Enforces |M|^2 <= N (N + 1); equality is pure squeezing, M = N = 0 vacuum.
    """
    if n_mean < 0:
        raise ValueError("mean photon number must be nonnegative")
    m_corr = complex(m_corr)
    if abs(m_corr) ** 2 > n_mean * (n_mean + 1.0) * (1.0 + 1e-9) + 1e-12:
        raise ValueError("|M|^2 must not exceed N(N+1)")
    return np.array(
        [
            [n_mean + 0.5 + m_corr.real, m_corr.imag],
            [m_corr.imag, n_mean + 0.5 - m_corr.real],
        ]
    )
