"""Coherent cancellation of measurement back-action in force sensing.

An inverted atomic ensemble inside the sensing cavity responds to light
with the opposite sign of the mechanical oscillator.  When couplings and
damping rates are matched, the two radiation-pressure noise paths
interfere destructively at every frequency and the force measurement is
limited only by shot noise, the ensemble's own vacuum noise, and thermal
noise.  Injecting squeezed vacuum then suppresses the remaining shot-noise
term at fixed drive power.

The force-noise spectra are dimensionless; multiply by
hbar m omega_m gamma_m to convert to N^2/Hz.

Three routes to the spectrum are provided:

* ``force_noise_spectrum_exact``: assembles the output-quadrature
  coefficients at any detuning/mismatch and contracts them with the
  squeezed input correlations (default: symmetrized over +-omega).
* ``force_noise_spectrum_perfect``: closed form under perfect matching in
  the wideband cavity limit kappa >> omega.
* ``force_noise_spectrum_mismatch``: closed form at zero detuning with
  coupling and damping mismatch, transcribed verbatim (not re-symmetrized).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import constants

from .lti_core import chi_mech_lorentzian, chi_negative_mass

__all__ = [
    "CqncParams",
    "SqueezedInput",
    "QuadratureCoeffs",
    "output_phase_quadrature_coeffs",
    "force_noise_spectrum_exact",
    "force_noise_spectrum_perfect",
    "cqnc_floor",
    "squeeze_objective",
    "phi_opt",
    "h_min",
    "shot_noise_optimized",
    "force_noise_spectrum_mismatch",
    "power_to_coupling",
]

HBAR = constants.hbar
KB = constants.k


@dataclass(frozen=True)
class CqncParams:
    """Cavity + mechanical oscillator + inverted-ensemble sensor parameters."""

    omega_m: float
    gamma_m: float
    kappa: float
    g: float
    G: float
    Gamma: float
    Delta_c: float = 0.0
    mass: float = 0.0
    temperature: float = 0.0
    g0: float = 0.0
    wavelength: float = 0.0
    kappa_in: float = 0.0

    def __post_init__(self):
        for name in ("omega_m", "gamma_m", "kappa"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.Gamma < 0 or self.temperature < 0:
            raise ValueError("Gamma and temperature must be nonnegative")

    @property
    def matched(self) -> bool:
        """Couplings and damping rates matched (the anti-noise condition)."""
        return self.g == self.G and self.Gamma == self.gamma_m

    def g_opt(self, omega) -> np.ndarray:
        """Drive strength minimizing the bare shot/back-action sum at omega."""
        chi_m = chi_mech_lorentzian(omega, self.omega_m, self.gamma_m)
        return np.sqrt(0.25 * self.kappa / np.abs(chi_m))


@dataclass(frozen=True)
class SqueezedInput:
    """Stationary squeezed vacuum: N photons, correlation M = |M| e^{i phi}."""

    N: float
    M: complex

    def __post_init__(self):
        if self.N < 0:
            raise ValueError("N must be nonnegative")
        m = complex(self.M)
        if abs(m) ** 2 > self.N * (self.N + 1.0) * (1.0 + 1e-9) + 1e-12:
            raise ValueError("|M|^2 must not exceed N(N+1)")
        object.__setattr__(self, "M", m)

    @classmethod
    def vacuum(cls) -> "SqueezedInput":
        return cls(0.0, 0.0)

    @classmethod
    def pure(cls, N: float, phi: float = 0.0) -> "SqueezedInput":
        return cls(N, np.sqrt(N * (N + 1.0)) * np.exp(1j * phi))


def _chi_a(omega, kappa):
    # cavity response in the Fourier sign convention of this module
    return 1.0 / (0.5 * kappa + 1j * omega)


def _chi_a_effective(omega, p: CqncParams, drop_gamma_sq: bool):
    chi_a = _chi_a(omega, p.kappa)
    chi_m = chi_mech_lorentzian(omega, p.omega_m, p.gamma_m)
    chi_d = chi_negative_mass(omega, p.omega_m, p.Gamma, drop_gamma_sq=drop_gamma_sq)
    inv = 1.0 / chi_a - chi_a * p.Delta_c * (p.g**2 * chi_m + p.G**2 * chi_d - p.Delta_c)
    if np.any(np.abs(inv) == 0.0):
        from .lti_core import PoleOnGridError

        omega = np.atleast_1d(np.asarray(omega, dtype=float))
        raise PoleOnGridError(float(omega[np.argmin(np.abs(np.atleast_1d(inv)))]))
    return 1.0 / inv


@dataclass(frozen=True)
class QuadratureCoeffs:
    """Force-noise coefficients of the rescaled output phase quadrature.

    F_N = thermal + c_p P_a_in + c_x X_a_in + d_p P_d_in + d_x X_d_in,
    with c_x carrying both the detuning leakage and the combined
    mechanical/atomic back-action term g^2 chi_m + G^2 chi_d.
    """

    omega: np.ndarray
    c_p: np.ndarray
    c_x: np.ndarray
    d_p: np.ndarray
    d_x: np.ndarray
    backaction_sum: np.ndarray


def output_phase_quadrature_coeffs(
    omega, p: CqncParams, drop_gamma_sq: bool = False
) -> QuadratureCoeffs:
    """Frequency-dependent input-noise coefficients of the force estimate."""
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    chi_a = _chi_a(omega, p.kappa)
    chi_ap = _chi_a_effective(omega, p, drop_gamma_sq)
    chi_m = chi_mech_lorentzian(omega, p.omega_m, p.gamma_m)
    chi_d = chi_negative_mass(omega, p.omega_m, p.Gamma, drop_gamma_sq=drop_gamma_sq)
    ba_sum = p.g**2 * chi_m + p.G**2 * chi_d
    root_k = np.sqrt(p.kappa / p.gamma_m)
    c_p = -root_k / (p.g * chi_m) * (1.0 - 1.0 / (chi_ap * p.kappa))
    c_x = root_k / (p.g * chi_m) * p.Delta_c * chi_a - ba_sum / (p.g * chi_m) * root_k * chi_a
    atom = (p.G * chi_d / (p.g * chi_m)) * np.sqrt(p.Gamma / p.gamma_m)
    d_p = atom
    d_x = -atom * (0.5 * p.Gamma + 1j * omega) / p.omega_m
    return QuadratureCoeffs(omega, c_p, c_x, d_p, d_x, ba_sum)


def _thermal_level(p: CqncParams, classical: bool) -> float:
    if classical:
        return KB * p.temperature / (HBAR * p.omega_m)
    x = HBAR * p.omega_m / (KB * p.temperature) if p.temperature > 0 else np.inf
    n = 0.0 if x > 700 else 1.0 / np.expm1(x)
    return n + 0.5


def force_noise_spectrum_exact(
    omega,
    p: CqncParams,
    sq: SqueezedInput | None = None,
    n_atom: float = 0.0,
    drop_gamma_sq: bool = False,
    classical_thermal: bool = True,
    symmetrize: bool = True,
):
    """Force-noise spectrum from the exact coefficient assembly.

    Valid at any detuning and any mismatch.  ``symmetrize`` averages the
    raw stationary expression over +-omega, which removes odd-frequency
    vacuum cross terms and is the convention used for detector comparisons.
    """
    sq = sq or SqueezedInput.vacuum()

    def raw(om):
        c = output_phase_quadrature_coeffs(om, p, drop_gamma_sq)
        nxx = sq.N + 0.5 + sq.M.real
        npp = sq.N + 0.5 - sq.M.real
        cross = c.c_p * np.conj(c.c_x)
        optical = (
            np.abs(c.c_p) ** 2 * npp
            + np.abs(c.c_x) ** 2 * nxx
            + 2.0 * cross.real * sq.M.imag
            + cross.imag
        )
        datom = c.d_p * np.conj(c.d_x)
        atomic = (n_atom + 0.5) * (np.abs(c.d_p) ** 2 + np.abs(c.d_x) ** 2) + datom.imag
        return optical + atomic

    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    values = raw(omega)
    if symmetrize:
        values = 0.5 * (values + raw(-omega))
    return _thermal_level(p, classical_thermal) + values


def cqnc_floor(omega, p: CqncParams):
    """Residual ensemble vacuum noise (1/2)(1 + (w^2 + gamma_m^2/4)/w_m^2),
    the drive-independent price of the anti-noise path."""
    omega = np.asarray(omega, dtype=float)
    return 0.5 * (1.0 + (omega**2 + 0.25 * p.gamma_m**2) / p.omega_m**2)


def force_noise_spectrum_perfect(
    omega,
    p: CqncParams,
    sq: SqueezedInput | None = None,
    classical_thermal: bool = True,
    g: float | None = None,
):
    """Closed-form spectrum under perfect matching, wideband cavity limit.

    thermal + floor + (kappa / g^2 gamma_m |chi_m|^2)
    [ (1/2)(1/2 + 2 y^2)^2 + Sigma(M, N, y) ],  y = Delta_c / kappa.
    """
    if not p.matched:
        raise ValueError("perfect-cancellation spectrum requires matched parameters")
    sq = sq or SqueezedInput.vacuum()
    g = p.g if g is None else g
    omega = np.asarray(omega, dtype=float)
    chi_m = chi_mech_lorentzian(omega, p.omega_m, p.gamma_m)
    y = p.Delta_c / p.kappa
    base = (0.5 + 2.0 * y**2) ** 2
    sigma = (
        sq.N * base
        + 2.0 * y * sq.M.imag * (4.0 * y**2 - 1.0)
        + sq.M.real * (8.0 * y**2 - base)
    )
    shot = (p.kappa / (g**2 * p.gamma_m * np.abs(chi_m) ** 2)) * (0.5 * base + sigma)
    return _thermal_level(p, classical_thermal) + cqnc_floor(omega, p) + shot


def _ab(y):
    a = 2.0 * y * (1.0 - 4.0 * y**2)
    b = (0.5 + 2.0 * y**2) ** 2 - 8.0 * y**2
    return a, b


def squeeze_objective(M: complex, N: float, y: float) -> float:
    """Shot-noise bracket h(M, N, y) to be minimized over squeezing and detuning."""
    M = complex(M)
    a, b = _ab(y)
    return (N + 0.5) * (0.5 + 2.0 * y**2) ** 2 - abs(M) * (
        a * np.sin(np.angle(M)) + b * np.cos(np.angle(M))
    )


def phi_opt(y: float) -> float:
    """Optimal squeezing phase, quadrant fixed by the signs of (a, b)."""
    a, b = _ab(y)
    return float(np.arctan2(a, b))


def h_min(N: float) -> float:
    """Minimum of the shot-noise bracket: (1/4)[N + 1/2 - sqrt(N(N+1))],
    attained for pure squeezing at zero detuning."""
    return 0.25 * (N + 0.5 - np.sqrt(N * (N + 1.0)))


def shot_noise_optimized(omega, p: CqncParams, N: float, g: float | None = None):
    """Shot-noise term after optimizing squeezing phase and detuning:
    (kappa / 4 g^2 gamma_m |chi_m|^2)[N + 1/2 - sqrt(N(N+1))]."""
    g = p.g if g is None else g
    omega = np.asarray(omega, dtype=float)
    chi_m = chi_mech_lorentzian(omega, p.omega_m, p.gamma_m)
    return (
        0.25
        * p.kappa
        / (g**2 * p.gamma_m * np.abs(chi_m) ** 2)
        * (N + 0.5 - np.sqrt(N * (N + 1.0)))
    )


def standard_force_noise_squeezed(
    omega,
    p: CqncParams,
    sq: SqueezedInput | None = None,
    classical_thermal: bool = True,
    g: float | None = None,
):
    """Bare-sensor (no ensemble) force noise with squeezed input, zero
    detuning, wideband cavity limit:
    thermal + (kappa/4 g^2 gamma_m |chi_m|^2)(N + 1/2 - Re M)
    + (4 g^2 / kappa gamma_m)(N + 1/2 + Re M).
    """
    sq = sq or SqueezedInput.vacuum()
    g = p.g if g is None else g
    omega = np.asarray(omega, dtype=float)
    chi_m = chi_mech_lorentzian(omega, p.omega_m, p.gamma_m)
    shot = 0.25 * p.kappa / (g**2 * p.gamma_m * np.abs(chi_m) ** 2) * (sq.N + 0.5 - sq.M.real)
    backaction = 4.0 * g**2 / (p.kappa * p.gamma_m) * (sq.N + 0.5 + sq.M.real)
    return _thermal_level(p, classical_thermal) + shot + backaction


def force_noise_spectrum_mismatch(
    omega,
    p: CqncParams,
    sq: SqueezedInput | None = None,
    classical_thermal: bool = True,
):
    """Zero-detuning spectrum with coupling and damping mismatch.

    R(w) = chi_d / chi_m = -(1 + r(w)) with
    r(w) = i w (gamma_m - Gamma) / ((w_m^2 - w^2) + i w Gamma).
    The final imaginary-part term is kept exactly as the stationary
    expression produces it; it vanishes under perfect matching, which is
    what the continuity check relies on.
    """
    if p.Delta_c != 0.0:
        raise ValueError("mismatch closed form is derived at zero detuning")
    sq = sq or SqueezedInput.vacuum()
    omega = np.asarray(omega, dtype=float)
    chi_m = chi_mech_lorentzian(omega, p.omega_m, p.gamma_m)
    r_small = 1j * omega * (p.gamma_m - p.Gamma) / ((p.omega_m**2 - omega**2) + 1j * omega * p.Gamma)
    big_r = -(1.0 + r_small)
    ratio2 = (p.G / p.g) ** 2
    shot = (
        0.25 * p.kappa / (p.g**2 * p.gamma_m * np.abs(chi_m) ** 2) * (sq.N + 0.5 - sq.M.real)
    )
    backaction = (
        (4.0 * p.g**2 / (p.kappa * p.gamma_m))
        * (sq.N + 0.5 + sq.M.real)
        * np.abs(1.0 + ratio2 * big_r) ** 2
    )
    atomic = (
        0.5
        * ratio2
        * (p.Gamma / p.gamma_m)
        * np.abs(big_r) ** 2
        * (1.0 + (omega**2 + 0.25 * p.Gamma**2) / p.omega_m**2)
    )
    last = np.imag(
        (2j * sq.M.imag - 1.0) / (p.gamma_m * np.conj(chi_m)) * (1.0 + ratio2 * big_r)
    )
    return _thermal_level(p, classical_thermal) + shot + backaction + atomic + last


def power_to_coupling(P_L: float, p: CqncParams) -> float:
    """Drive power to enhanced coupling g = 2 g0 |alpha_ss|.

    The intracavity amplitude solves the linear mean-field balance
    (kappa/2 + i Delta_c) alpha = E_L - i G^2 w_m Re(alpha) / (Gamma^2/4 + w_m^2)
    with E_L = sqrt(P_L kappa_in / hbar w_L); g scales as sqrt(P_L).
    """
    if P_L < 0:
        raise ValueError("power must be nonnegative")
    if p.g0 <= 0 or p.wavelength <= 0:
        raise ValueError("g0 and wavelength are required for the power conversion")
    kappa_in = p.kappa_in if p.kappa_in > 0 else p.kappa
    omega_l = 2.0 * np.pi * constants.c / p.wavelength
    e_l = np.sqrt(P_L * kappa_in / (HBAR * omega_l))
    pull = p.G**2 * p.omega_m / (0.25 * p.Gamma**2 + p.omega_m**2)
    # real 2x2 system for (Re alpha, Im alpha)
    a = np.array([[0.5 * p.kappa, -p.Delta_c], [p.Delta_c + pull, 0.5 * p.kappa]])
    if abs(np.linalg.det(a)) == 0.0:
        raise ValueError("mean-field equation is singular for these parameters")
    re_im = np.linalg.solve(a, np.array([e_l, 0.0]))
    return 2.0 * p.g0 * float(np.hypot(*re_im))
