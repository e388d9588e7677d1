"""Back-action-evading measurement of a condensate quadrature.

A two-tone pump, modulated at the collective-mode frequency, freezes the
measured quadrature Q of the condensate's momentum side mode while dumping
the measurement back-action into its conjugate P.  The added noise of the
readout then drops below the half-quantum limit; the collision frequency
acts as a tuning knob for how far below.

All results here assume a resonant two-tone drive (effective detuning zero);
the formulas keep exact cavity filter factors, the quoted approximations are
exposed separately.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .lti_core import Spectrum, chi_cavity, chi_mech_rwa

__all__ = [
    "BogoliubovParams",
    "QndDrive",
    "bogoliubov_derive",
    "collision_freq_for_mode",
    "mean_field_fourier",
    "n_bad",
    "n_ba",
    "spectrum_Q",
    "spectrum_P",
    "gain_coefficient",
    "sideband_weight",
    "output_phase_spectrum",
    "n_add",
    "n_add_resonant_approx",
    "optimal_pump",
    "optimal_pump_numeric",
    "n_add_min",
    "qnd_periodic_coefficients",
]


@dataclass(frozen=True)
class BogoliubovParams:
    """Collective-mode parameters derived from recoil and collision rates."""

    omega_R: float
    omega_sw: float
    G0: float

    def __post_init__(self):
        if self.omega_R <= 0:
            raise ValueError("recoil frequency must be positive")
        if self.omega_sw < 0:
            raise ValueError("only repulsive collisions (omega_sw >= 0) are supported")
        if self.Omega_minus <= 0:
            raise ValueError("Omega_minus must be positive")

    @property
    def omega_d(self) -> float:
        return 4.0 * self.omega_R + self.omega_sw

    @property
    def Omega_plus(self) -> float:
        return self.omega_d + 0.5 * self.omega_sw

    @property
    def Omega_minus(self) -> float:
        return self.omega_d - 0.5 * self.omega_sw

    @property
    def chi_factor(self) -> float:
        return (self.Omega_plus / self.Omega_minus) ** 0.25

    @property
    def omega_m(self) -> float:
        """Diagonalized mode frequency sqrt(Omega_- Omega_+)."""
        return np.sqrt(self.Omega_plus * self.Omega_minus)

    @property
    def G(self) -> float:
        """Coupling after diagonalization, G0 / chi."""
        return self.G0 / self.chi_factor


def bogoliubov_derive(omega_R: float, omega_sw: float, G0: float) -> BogoliubovParams:
    """Build the diagonalized-mode parameter set from raw rates."""
    return BogoliubovParams(omega_R=omega_R, omega_sw=omega_sw, G0=G0)


def collision_freq_for_mode(omega_R: float, omega_m_target: float) -> float:
    """Invert omega_m = sqrt((4wR + wsw/2)(4wR + 3wsw/2)) for omega_sw."""
    a = 4.0 * omega_R
    if omega_m_target < a:
        raise ValueError("target mode frequency below the collisionless value 4 omega_R")
    # (3/4) s^2 + 2 a s + (a^2 - T^2) = 0, positive root
    return (2.0 / 3.0) * (-2.0 * a + np.sqrt(a**2 + 3.0 * omega_m_target**2))


@dataclass(frozen=True)
class QndDrive:
    """Two-tone drive resolved into intracavity modulation amplitude."""

    alpha_max: float
    eta_max: float
    phi: float
    kappa: float
    gamma: float
    omega_m: float
    n_th_b: float = 0.0

    def __post_init__(self):
        if min(self.kappa, self.gamma, self.omega_m) <= 0:
            raise ValueError("kappa, gamma and omega_m must be positive")
        if self.n_th_b < 0:
            raise ValueError("thermal occupation must be nonnegative")

    @classmethod
    def from_pump(
        cls, eta_max: float, kappa: float, gamma: float, omega_m: float, n_th_b: float = 0.0
    ) -> "QndDrive":
        alpha_max = eta_max / np.sqrt(0.25 * kappa**2 + omega_m**2)
        phi = np.arctan(2.0 * omega_m / kappa)
        return cls(alpha_max, eta_max, phi, kappa, gamma, omega_m, n_th_b)


def mean_field_fourier(G: float, alpha_max: float, omega_m: float, gamma: float, approx: bool = False):
    """Nonzero harmonics (beta_0, beta_2, beta_-2) of the matter mean field."""
    if G == 0.0 or alpha_max == 0.0:
        return 0.0 + 0.0j, 0.0 + 0.0j, 0.0 + 0.0j
    a2 = alpha_max**2
    if approx:
        # leading order in gamma / omega_m, all real
        return (
            complex(-G * a2 / (2.0 * omega_m)),
            complex(-G * a2 / (12.0 * omega_m)),
            complex(G * a2 / (4.0 * omega_m)),
        )
    b0 = -1j * G * a2 / (2.0 * (1j * omega_m + 0.5 * gamma))
    b2 = -1j * G * a2 / (4.0 * (3j * omega_m + 0.5 * gamma))
    bm2 = -1j * G * a2 / (4.0 * (-1j * omega_m + 0.5 * gamma))
    return b0, b2, bm2


def n_bad(omega, d: QndDrive, G: float):
    """Residual quanta fed into Q by the off-resonant modulation sidebands."""
    omega = np.asarray(omega, dtype=float)
    u = (G * d.alpha_max) ** 2
    side = (
        np.abs(chi_cavity(omega + 2.0 * d.omega_m, d.kappa)) ** 2
        + np.abs(chi_cavity(omega - 2.0 * d.omega_m, d.kappa)) ** 2
    )
    return (d.kappa / (8.0 * d.gamma)) * u * side


def n_ba(omega, d: QndDrive, G: float):
    """Back-action quanta pumped into the conjugate quadrature P."""
    omega = np.asarray(omega, dtype=float)
    u = (G * d.alpha_max) ** 2
    return (d.kappa / (2.0 * d.gamma)) * u * np.abs(chi_cavity(omega, d.kappa)) ** 2


def spectrum_Q(omega, d: QndDrive, G: float):
    """Stationary spectrum of the frozen quadrature,
    gamma |chi|^2 [1/2 + n_th + n_bad]."""
    omega = np.asarray(omega, dtype=float)
    lor = d.gamma * np.abs(chi_mech_rwa(omega, d.gamma)) ** 2
    return lor * (0.5 + d.n_th_b + n_bad(omega, d, G))


def spectrum_P(omega, d: QndDrive, G: float):
    """Conjugate-quadrature spectrum; picks up the full back-action n_BA."""
    omega = np.asarray(omega, dtype=float)
    lor = d.gamma * np.abs(chi_mech_rwa(omega, d.gamma)) ** 2
    return lor * (0.5 + d.n_th_b + n_bad(omega, d, G) + n_ba(omega, d, G))


def gain_coefficient(omega, d: QndDrive, G: float):
    """Transduction gain sqrt(kappa) G alpha_max chi_c(w) from Q to the output phase."""
    omega = np.asarray(omega, dtype=float)
    return np.sqrt(d.kappa) * G * d.alpha_max * chi_cavity(omega, d.kappa)


def sideband_weight(omega, d: QndDrive):
    """A(w): response weight combining carrier and +-2 omega_m mode sidebands."""
    omega = np.asarray(omega, dtype=float)
    return d.gamma * np.abs(chi_mech_rwa(omega, d.gamma)) ** 2 + 0.5 * d.gamma * (
        np.abs(chi_mech_rwa(omega + 2.0 * d.omega_m, d.gamma)) ** 2
        + np.abs(chi_mech_rwa(omega - 2.0 * d.omega_m, d.gamma)) ** 2
    )


def output_phase_spectrum(omega, d: QndDrive, G: float) -> Spectrum:
    """Homodyne spectrum of the output phase quadrature,
    |G(w)|^2 A(w) [1/2 + n_th + n_add(w)]."""
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    gain2 = np.abs(gain_coefficient(omega, d, G)) ** 2
    values = gain2 * sideband_weight(omega, d) * (0.5 + d.n_th_b + n_add(omega, d, G))
    return Spectrum(omega, values, "dimensionless")


def n_add(omega, d: QndDrive, G: float):
    """Measurement-added quanta in the output phase spectrum.

    Imprecision term, sideband leakage n_bad, sideband-weighted back-action,
    and the classical mean-field harmonics leaking through the cavity filter.
    """
    omega = np.asarray(omega, dtype=float)
    if d.alpha_max == 0.0 or G == 0.0:
        raise ValueError("added noise diverges for zero pump or coupling")
    a_w = sideband_weight(omega, d)
    gain2 = np.abs(gain_coefficient(omega, d, G)) ** 2
    imprecision = 1.0 / (2.0 * gain2 * a_w)
    sideband_ba = (d.gamma * n_ba(omega, d, G) / (4.0 * a_w)) * (
        np.abs(chi_mech_rwa(omega + 2.0 * d.omega_m, d.gamma)) ** 2
        + np.abs(chi_mech_rwa(omega - 2.0 * d.omega_m, d.gamma)) ** 2
    )
    b0, b2, bm2 = mean_field_fourier(G, d.alpha_max, d.omega_m, d.gamma, approx=True)
    classical = (d.kappa / (2.0 * d.alpha_max**2 * a_w)) * (
        b0.real**2 * np.abs(chi_cavity(omega, d.kappa)) ** 2
        + b2.real
        * bm2.real
        * (
            np.abs(chi_cavity(omega + 2.0 * d.omega_m, d.kappa)) ** 2
            + np.abs(chi_cavity(omega - 2.0 * d.omega_m, d.kappa)) ** 2
        )
    )
    return imprecision + n_bad(omega, d, G) + sideband_ba + classical


def n_add_resonant_approx(d: QndDrive, G: float) -> float:
    """On-resonance added noise for gamma << omega_m, kappa:
    1/(16 n_BA) + (1/8) kappa^2/(4 w_m^2 + kappa^2/4) n_BA."""
    nba0 = float(n_ba(0.0, d, G))
    weight = d.kappa**2 / (4.0 * d.omega_m**2 + 0.25 * d.kappa**2)
    return 1.0 / (16.0 * nba0) + 0.125 * weight * nba0


def optimal_pump(kappa: float, gamma: float, omega_m: float, G: float) -> float:
    """Closed-form pump amplitude minimizing the resonant added noise."""
    if G == 0.0:
        raise ValueError("coupling must be nonzero")
    num = gamma * (omega_m**2 + 0.25 * kappa**2) * np.sqrt(4.0 * omega_m**2 + 0.25 * kappa**2)
    return float(np.sqrt(num / (2.0 * np.sqrt(2.0) * G**2)))


def optimal_pump_numeric(
    kappa: float, gamma: float, omega_m: float, G: float, n_th_b: float = 0.0
) -> tuple[float, float]:
    """Golden-section minimum of the full resonant added noise over the pump.

    Returns (eta_opt, n_add_min).  Serves as the oracle for the closed form.
    """
    guess = optimal_pump(kappa, gamma, omega_m, G)

    def objective(log_eta: float) -> float:
        drive = QndDrive.from_pump(np.exp(log_eta), kappa, gamma, omega_m, n_th_b)
        return float(n_add(0.0, drive, G))

    res = optimize.minimize_scalar(
        objective,
        bracket=(np.log(guess) - 1.5, np.log(guess), np.log(guess) + 1.5),
        method="golden",
        options={"xtol": 1e-10},
    )
    return float(np.exp(res.x)), float(res.fun)


def n_add_min(omega_m: float, kappa: float) -> float:
    """Minimum resonant added noise (sqrt2/4) kappa / sqrt(kappa^2 + 16 w_m^2);
    strictly below the half-quantum limit for any positive rates."""
    if omega_m <= 0 or kappa <= 0:
        raise ValueError("omega_m and kappa must be positive")
    return float(0.25 * np.sqrt(2.0) * kappa / np.sqrt(kappa**2 + 16.0 * omega_m**2))


def qnd_periodic_coefficients(d: QndDrive, G: float):
    """Drift decomposition A(t) = A0 + Ac cos(2 w_m t) + As sin(2 w_m t)
    for the (X, Y, Q, P) quadratures under the modulated, resonant drive.

    Noise mapping and symmetrized correlations come along for the
    time-domain oracle.
    """
    k2 = 0.5 * d.kappa
    g2 = 0.5 * d.gamma
    ga = G * d.alpha_max
    a0 = np.array(
        [
            [-k2, 0.0, 0.0, 0.0],
            [0.0, -k2, -ga, 0.0],
            [0.0, 0.0, -g2, 0.0],
            [-ga, 0.0, 0.0, -g2],
        ]
    )
    ac = np.zeros((4, 4))
    ac[1, 2] = -ga
    ac[3, 0] = -ga
    a_s = np.zeros((4, 4))
    a_s[1, 3] = -ga
    a_s[2, 0] = ga
    b = np.diag([np.sqrt(d.kappa), np.sqrt(d.kappa), np.sqrt(d.gamma), np.sqrt(d.gamma)])
    corr = np.diag([0.5, 0.5, 0.5 + d.n_th_b, 0.5 + d.n_th_b])
    return a0, ac, a_s, b, corr, 2.0 * d.omega_m
