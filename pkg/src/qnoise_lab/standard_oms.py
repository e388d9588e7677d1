"""Noise budget of a single-cavity optomechanical displacement sensor.

Covers the shot-noise / back-action trade-off that defines the standard
quantum limit, the classical laser-phase-noise (LPN) contribution filtered
by a second-order response, and the zero-detuning force-noise and
signal-power baselines that the cancellation and amplification schemes in
the other modules are judged against.

The detected spectrum here is expressed in rate units (rad/s); plots
conventionally divide by the mechanical linewidth.  Force-noise baselines
are dimensionless (1 = quantum limit at mechanical resonance).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import constants

from .lti_core import LinearSystem, Spectrum, chi_mech_lorentzian

__all__ = [
    "StandardOmsParams",
    "LpnParams",
    "thermal_occupation",
    "lpn_response",
    "lpn_psd",
    "effective_cooperativity",
    "detected_spectrum",
    "sql",
    "optimal_cooperativity",
    "optimal_noise_spectrum",
    "standard_force_noise",
    "force_noise_vs_coupling",
    "standard_signal_power",
    "standard_oms_drift",
]

HBAR = constants.hbar
KB = constants.k


@dataclass(frozen=True)
class StandardOmsParams:
    """Single-cavity optomechanical sensor parameters (angular rates, SI)."""

    omega_m: float
    gamma_m: float
    kappa: float
    g0: float
    g: float
    Delta: float = 0.0
    mass: float = 0.0
    temperature: float = 0.0
    cavity_length: float = 0.0

    def __post_init__(self):
        for name in ("omega_m", "gamma_m", "kappa"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.temperature < 0:
            raise ValueError("temperature must be nonnegative")

    @classmethod
    def from_geometry(
        cls,
        omega_m: float,
        gamma_m: float,
        kappa: float,
        mass: float,
        cavity_length: float,
        wavelength: float,
        g: float = 0.0,
        Delta: float = 0.0,
        temperature: float = 0.0,
    ) -> "StandardOmsParams":
        """Derive the single-photon coupling from cavity geometry.

        g0 = (omega_c / L) sqrt(hbar / (m omega_m)) for an end mirror, with
        omega_c fixed by the drive wavelength.
        """
        omega_c = 2.0 * np.pi * constants.c / wavelength
        g0 = (omega_c / cavity_length) * np.sqrt(HBAR / (mass * omega_m))
        return cls(
            omega_m=omega_m,
            gamma_m=gamma_m,
            kappa=kappa,
            g0=g0,
            g=g,
            Delta=Delta,
            mass=mass,
            temperature=temperature,
            cavity_length=cavity_length,
        )


@dataclass(frozen=True)
class LpnParams:
    """Laser phase noise: linewidth, central frequency and bandwidth of the
    frequency-fluctuation spectrum (all in rad/s)."""

    Gamma_L: float
    omega_N: float
    gamma_tilde: float

    def __post_init__(self):
        if self.Gamma_L < 0 or self.omega_N < 0 or self.gamma_tilde < 0:
            raise ValueError("LPN parameters must be nonnegative")


def thermal_occupation(omega: float, temperature: float) -> float:
    """Bose occupation 1 / (exp(hbar w / kB T) - 1); zero at T = 0."""
    if temperature <= 0:
        return 0.0
    x = HBAR * omega / (KB * temperature)
    if x > 700:
        return 0.0
    return 1.0 / np.expm1(x)


def _thermal_phonon_level(p: StandardOmsParams, classical: bool) -> float:
    # n + 1/2, or its classical limit kB T / (hbar omega_m)
    if classical:
        return KB * p.temperature / (HBAR * p.omega_m)
    return thermal_occupation(p.omega_m, p.temperature) + 0.5


def lpn_response(omega, lpn: LpnParams):
    """Second-order filter h(w) mapping white drive noise to frequency noise."""
    omega = np.asarray(omega, dtype=float)
    denom = (omega**2 - lpn.omega_N**2) + 1j * lpn.gamma_tilde * omega
    num = lpn.omega_N**2 * np.sqrt(2.0 * lpn.Gamma_L)
    if lpn.Gamma_L == 0.0:
        out = np.zeros_like(omega, dtype=complex)
        return out[()] if out.ndim == 0 else out
    bad = np.abs(denom) == 0.0
    if np.any(bad):
        from .lti_core import PoleOnGridError

        raise PoleOnGridError(float(np.atleast_1d(omega)[np.argmax(np.atleast_1d(bad))]))
    out = num / denom
    return out[()] if out.ndim == 0 else out


def lpn_psd(omega, lpn: LpnParams):
    """Laser frequency-noise spectrum 2 Gamma_L w_N^4 / ((w^2-w_N^2)^2 + g~^2 w^2)."""
    h = lpn_response(omega, lpn)
    return np.abs(h) ** 2


def effective_cooperativity(omega, p: StandardOmsParams):
    """Frequency-dependent cooperativity (4 g^2 / kappa gamma_m)(1 - 2iw/kappa)^-2."""
    omega = np.asarray(omega, dtype=float)
    c0 = 4.0 * p.g**2 / (p.kappa * p.gamma_m)
    out = c0 / (1.0 - 2j * omega / p.kappa) ** 2
    return out[()] if out.ndim == 0 else out


def detected_spectrum(
    omega,
    p: StandardOmsParams,
    lpn: LpnParams | None = None,
    signal_psd=None,
    classical_thermal: bool = True,
) -> Spectrum:
    """Spectrum of the rescaled output phase quadrature at zero detuning.

    Sum of imprecision shot noise, radiation-pressure back-action, the LPN
    imprecision term, the (optional) signal spectrum, and the thermal floor
    gamma_m (2 n + 1).  ``classical_thermal`` selects the high-temperature
    form kB T / hbar omega_m for the phonon level.
    """
    if p.Delta != 0.0:
        raise ValueError("detected spectrum is defined on resonance (Delta = 0)")
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    chi_m = chi_mech_lorentzian(omega, p.omega_m, p.gamma_m)
    c_eff = np.abs(effective_cooperativity(omega, p))
    shot = 1.0 / (4.0 * p.gamma_m * np.abs(chi_m) ** 2 * c_eff)
    back_action = p.gamma_m * c_eff
    values = shot + back_action
    if lpn is not None and lpn.Gamma_L > 0.0:
        if p.g0 <= 0:
            raise ValueError("g0 must be positive to scale the LPN term")
        values = values + lpn_psd(omega, lpn) / (p.g0**2 * np.abs(chi_m) ** 2)
    if signal_psd is not None:
        values = values + np.asarray(signal_psd, dtype=float)
    values = values + 2.0 * p.gamma_m * _thermal_phonon_level(p, classical_thermal)
    return Spectrum(omega, values, "rad_per_s")


def sql(omega, p: StandardOmsParams):
    """Standard quantum limit 1 / |chi_m(w)| in rad/s."""
    omega = np.asarray(omega, dtype=float)
    return 1.0 / np.abs(chi_mech_lorentzian(omega, p.omega_m, p.gamma_m))


def optimal_cooperativity(omega, p: StandardOmsParams):
    """|C|_opt = 1 / (2 gamma_m |chi_m|): the shot/back-action sweet spot."""
    omega = np.asarray(omega, dtype=float)
    return 1.0 / (2.0 * p.gamma_m * np.abs(chi_mech_lorentzian(omega, p.omega_m, p.gamma_m)))


def optimal_noise_spectrum(
    omega, p: StandardOmsParams, lpn: LpnParams | None = None, classical_thermal: bool = True
) -> Spectrum:
    """Noise floor after optimizing the drive at every frequency.

    S = 2 gamma_m (thermal level) + 1/|chi_m| + LPN/(g0^2 |chi_m|^2); the
    first term uses kB T / hbar omega_m in the classical limit (default).
    """
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    chi_m = chi_mech_lorentzian(omega, p.omega_m, p.gamma_m)
    values = 2.0 * p.gamma_m * _thermal_phonon_level(p, classical_thermal) + 1.0 / np.abs(chi_m)
    if lpn is not None and lpn.Gamma_L > 0.0:
        values = values + lpn_psd(omega, lpn) / (p.g0**2 * np.abs(chi_m) ** 2)
    return Spectrum(omega, values, "rad_per_s")


def optimal_coupling(omega, p: StandardOmsParams):
    """g_opt(w)^2 = (kappa/4) / |chi_m(w)|, returned as g_opt."""
    omega = np.asarray(omega, dtype=float)
    return np.sqrt(0.25 * p.kappa / np.abs(chi_mech_lorentzian(omega, p.omega_m, p.gamma_m)))


def standard_force_noise(omega, p: StandardOmsParams, g: float | None = None):
    """Dimensionless force-noise spectrum of the bare sensor at zero detuning.

    kB T / hbar omega_m + (1/2)[(kappa / 4 g^2 gamma_m)/|chi_m|^2
    + 4 g^2 / kappa gamma_m], valid in the steady-state window |w| << kappa.
    """
    g = p.g if g is None else g
    if g <= 0:
        raise ValueError("coupling must be positive")
    omega = np.asarray(omega, dtype=float)
    chi_m = chi_mech_lorentzian(omega, p.omega_m, p.gamma_m)
    thermal = KB * p.temperature / (HBAR * p.omega_m)
    shot = 0.25 * p.kappa / (g**2 * p.gamma_m * np.abs(chi_m) ** 2)
    back_action = 4.0 * g**2 / (p.kappa * p.gamma_m)
    return thermal + 0.5 * (shot + back_action)


def force_noise_vs_coupling(g_over_gopt):
    """Resonant zero-temperature force noise vs normalized drive,
    (1/2)[(g/g_opt)^2 + (g_opt/g)^2]; equal to 1 at the optimum."""
    r = np.asarray(g_over_gopt, dtype=float)
    if np.any(r <= 0):
        raise ValueError("coupling ratio must be positive")
    return 0.5 * (r**2 + 1.0 / r**2)


def standard_signal_power(omega, p: StandardOmsParams, g: float | None = None):
    """Signal response kappa gamma_m |g chi_m chi_a|^2 at zero detuning."""
    g = p.g if g is None else g
    omega = np.asarray(omega, dtype=float)
    chi_m = chi_mech_lorentzian(omega, p.omega_m, p.gamma_m)
    chi_a = 1.0 / (0.5 * p.kappa + 1j * omega)  # zero detuning: no dressing
    return p.kappa * p.gamma_m * g**2 * np.abs(chi_m * chi_a) ** 2


def standard_oms_drift(
    p: StandardOmsParams,
    lpn: LpnParams | None = None,
    alpha: float | None = None,
    classical_thermal: bool = False,
) -> LinearSystem:
    """Six-dimensional drift (X, Y, q, p, zeta, theta) for time-domain checks.

    Mechanical damping acts on momentum only (no rotating-wave approximation
    for the bath), and the laser frequency noise enters the optical phase
    through the mean field amplitude alpha.  The frequency-noise block is
    written in its damped form; the filter response reproduces the LPN
    spectrum exactly.
    """
    lpn = lpn or LpnParams(0.0, 1.0, 1.0)
    alpha = p.g / p.g0 if alpha is None else alpha
    sqrt2 = np.sqrt(2.0)
    a = np.array(
        [
            [-0.5 * p.kappa, p.Delta, 0.0, 0.0, 0.0, 0.0],
            [-p.Delta, -0.5 * p.kappa, sqrt2 * p.g, 0.0, sqrt2 * alpha, 0.0],
            [0.0, 0.0, 0.0, p.omega_m, 0.0, 0.0],
            [sqrt2 * p.g, 0.0, -p.omega_m, -p.gamma_m, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, lpn.omega_N],
            [0.0, 0.0, 0.0, 0.0, -lpn.omega_N, -lpn.gamma_tilde],
        ]
    )
    b = np.zeros((6, 4))
    b[0, 0] = np.sqrt(p.kappa)
    b[1, 1] = np.sqrt(p.kappa)
    b[3, 2] = np.sqrt(2.0 * p.gamma_m)
    b[5, 3] = lpn.omega_N * np.sqrt(2.0 * lpn.Gamma_L)
    corr = np.diag([0.5, 0.5, _thermal_phonon_level(p, classical_thermal), 1.0])
    labels = ("X_a", "P_a", "q", "p", "zeta", "theta")
    return LinearSystem(a, b, corr, labels)
