"""Parametric single-quadrature force sensing in a condensate-hybrid cavity.

Modulating the mechanical spring constant and the atomic collision
frequency at twice their mode frequencies turns the red-detuned hybrid
cavity into a phase-sensitive amplifier: under an impedance-matching
condition the optical gain of the output phase quadrature is zero, the
mechanical response to the input force is amplified, and the measurement
added noise can sit far below the half-quantum limit.

State ordering everywhere: (X_a, P_a, X_b, P_b, X_d, P_d).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import constants, optimize

from .lti_core import LinearSystem

__all__ = [
    "HybridParams",
    "BecDerived",
    "Cooperativities",
    "bec_derive",
    "build_drift",
    "lambda_max",
    "modulation_threshold_margin",
    "susceptibility_elements",
    "response_and_noise",
    "optical_gain",
    "on_resonance_closed",
    "off_modulation_closed",
    "mech_mod_only_closed",
    "impedance_match",
    "impedance_solve",
    "force_noise",
    "sensitivity",
    "snr",
    "ExperimentDerivation",
    "experiment_derive",
]

HBAR = constants.hbar
KB = constants.k


@dataclass(frozen=True)
class HybridParams:
    """Hybrid sensor: cavity, mechanical mode, collective atomic mode."""

    omega_m: float
    gamma_m: float
    kappa: float
    gamma_d: float
    g: float
    G: float
    lambda_m: float = 0.0
    lambda_d: float = 0.0
    n_c_T: float = 0.0
    n_m_T: float = 0.0
    n_d_T: float = 0.0
    mass: float = 0.0

    def __post_init__(self):
        for name in ("omega_m", "gamma_m", "kappa", "gamma_d"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @property
    def xi_m(self) -> float:
        return 2.0 * self.lambda_m / self.gamma_m

    @property
    def xi_d(self) -> float:
        return 2.0 * self.lambda_d / self.gamma_d

    @property
    def C0(self) -> float:
        return 4.0 * self.g**2 / (self.kappa * self.gamma_m)

    @property
    def C1(self) -> float:
        return 4.0 * self.G**2 / (self.kappa * self.gamma_d)

    @classmethod
    def from_cooperativities(
        cls,
        C0: float,
        C1: float,
        xi_m: float,
        xi_d: float,
        omega_m: float,
        gamma_m: float,
        kappa: float,
        gamma_d: float,
        mass: float = 0.0,
        n_c_T: float = 0.0,
        n_m_T: float = 0.0,
        n_d_T: float = 0.0,
    ) -> "HybridParams":
        return cls(
            omega_m=omega_m,
            gamma_m=gamma_m,
            kappa=kappa,
            gamma_d=gamma_d,
            g=np.sqrt(C0 * kappa * gamma_m / 4.0),
            G=np.sqrt(C1 * kappa * gamma_d / 4.0),
            lambda_m=0.5 * xi_m * gamma_m,
            lambda_d=0.5 * xi_d * gamma_d,
            n_c_T=n_c_T,
            n_m_T=n_m_T,
            n_d_T=n_d_T,
            mass=mass,
        )


@dataclass(frozen=True)
class BecDerived:
    """Dispersive-coupling quantities of the trapped condensate."""

    U0: float
    delta0: float
    G0: float
    omega_d: float
    g_CK: float  # cross-Kerr strength, reported but never evolved
    omega_sw: float


@dataclass(frozen=True)
class Cooperativities:
    C0: float
    C1: float
    Cm: float
    Cd: float


def bec_derive(
    N_atoms: float, g_a: float, Delta_a: float, omega_R: float, omega_sw: float
) -> BecDerived:
    """Lattice depth per photon and mode coupling from atomic parameters."""
    if Delta_a == 0.0:
        raise ValueError("atom-laser detuning must be nonzero")
    u0 = -g_a**2 / Delta_a
    return BecDerived(
        U0=u0,
        delta0=0.5 * N_atoms * u0,
        G0=np.sqrt(2.0 * N_atoms) * u0 / 4.0,
        omega_d=4.0 * omega_R + omega_sw,
        g_CK=0.5 * u0,
        omega_sw=omega_sw,
    )


def build_drift(p: HybridParams) -> LinearSystem:
    """Time-independent drift of the co-rotating quadratures.

    Noise mapping is diag(sqrt(kappa), sqrt(kappa), sqrt(gamma_m),
    sqrt(gamma_m), sqrt(gamma_d), sqrt(gamma_d)); correlations carry
    n + 1/2 per quadrature.
    """
    k2, gm2, gd2 = 0.5 * p.kappa, 0.5 * p.gamma_m, 0.5 * p.gamma_d
    a = np.array(
        [
            [-k2, 0.0, 0.0, -p.g, 0.0, p.G],
            [0.0, -k2, p.g, 0.0, -p.G, 0.0],
            [0.0, -p.g, p.lambda_m - gm2, 0.0, 0.0, 0.0],
            [p.g, 0.0, 0.0, -(p.lambda_m + gm2), 0.0, 0.0],
            [0.0, p.G, 0.0, 0.0, p.lambda_d - gd2, 0.0],
            [-p.G, 0.0, 0.0, 0.0, 0.0, -(p.lambda_d + gd2)],
        ]
    )
    b = np.diag(
        [
            np.sqrt(p.kappa),
            np.sqrt(p.kappa),
            np.sqrt(p.gamma_m),
            np.sqrt(p.gamma_m),
            np.sqrt(p.gamma_d),
            np.sqrt(p.gamma_d),
        ]
    )
    corr = np.diag(
        [
            p.n_c_T + 0.5,
            p.n_c_T + 0.5,
            p.n_m_T + 0.5,
            p.n_m_T + 0.5,
            p.n_d_T + 0.5,
            p.n_d_T + 0.5,
        ]
    )
    labels = ("X_a", "P_a", "X_b", "P_b", "X_d", "P_d")
    return LinearSystem(a, b, corr, labels)


def collective_cooperativities(p: HybridParams) -> Cooperativities:
    """Modulation-dressed cooperativities entering the gain thresholds."""

    def dressed(c_self, c_other, xi_other):
        num = 1.0 + c_other - xi_other**2
        den = num**2 - (xi_other * c_other) ** 2
        if den == 0.0:
            raise ZeroDivisionError("collective cooperativity denominator vanishes")
        return c_self * num / den

    cm = dressed(p.C0, p.C1, p.xi_d)
    cd = dressed(p.C1, p.C0, p.xi_m)
    return Cooperativities(C0=p.C0, C1=p.C1, Cm=cm, Cd=cd)


def lambda_max(p: HybridParams) -> tuple[float, float]:
    """Parametric-gain thresholds (gamma/2)(1 + C) for both modes.

    Exact when only one mode is modulated; under joint modulation the
    eigenvalue boundary of the drift deviates from this form, see
    ``modulation_threshold_margin``.
    """
    cc = collective_cooperativities(p)
    return 0.5 * p.gamma_m * (1.0 + cc.Cm), 0.5 * p.gamma_d * (1.0 + cc.Cd)


def modulation_threshold_margin(p: HybridParams) -> float:
    """Exact zero-eigenvalue margin of the amplified quadrature sector.

    The (P_a, X_b, X_d) block of the drift crosses a zero eigenvalue when
    (1 + C0 - xi_m)(1 + C1 - xi_d) = C0 C1; the system is stable iff this
    margin is positive and xi_m < 1 + C0 (equivalently both amplified
    quadratures remain net damped after cavity loading).  Derived from
    det = 0 of that sector; agrees with the eigenvalue test everywhere,
    including jointly modulated points where ``lambda_max`` does not.
    """
    return (1.0 + p.C0 - p.xi_m) * (1.0 + p.C1 - p.xi_d) - p.C0 * p.C1


def susceptibility_elements(omega, p: HybridParams):
    """(chi22, chi23, chi25): output-phase rows of the susceptibility matrix.

    chi0^-1 = kappa/2 - i w, chi_{-m(d)}^-1 = gamma/2 - lambda - i w.
    """
    omega = np.asarray(omega, dtype=float)
    chi0_inv = 0.5 * p.kappa - 1j * omega
    chim_inv = 0.5 * p.gamma_m - p.lambda_m - 1j * omega
    chid_inv = 0.5 * p.gamma_d - p.lambda_d - 1j * omega
    chi22 = 1.0 / (chi0_inv + p.g**2 / chim_inv + p.G**2 / chid_inv)
    chi23 = p.g / (chi0_inv * chim_inv + p.g**2 + p.G**2 * chim_inv / chid_inv)
    chi25 = -p.G / (chi0_inv * chid_inv + p.G**2 + p.g**2 * chid_inv / chim_inv)
    return chi22, chi23, chi25


def response_and_noise(omega, p: HybridParams):
    """(R_m, n_add): mechanical signal response and measurement added noise.

    R_m = kappa gamma_m |chi23|^2;
    n_add = (n_c + 1/2)|A|^2/|B|^2 + (n_d + 1/2)|D|^2/|B|^2 with
    A = 1 - kappa chi22, B = sqrt(kappa gamma_m) chi23,
    D = sqrt(kappa gamma_d) chi25.
    """
    omega = np.asarray(omega, dtype=float)
    chi22, chi23, chi25 = susceptibility_elements(omega, p)
    b2 = p.kappa * p.gamma_m * np.abs(chi23) ** 2
    if np.any(b2 == 0.0):
        raise ZeroDivisionError("signal blind spot: chi23 vanishes on the grid")
    a2 = np.abs(1.0 - p.kappa * chi22) ** 2
    d2 = p.kappa * p.gamma_d * np.abs(chi25) ** 2
    n_add = (p.n_c_T + 0.5) * a2 / b2 + (p.n_d_T + 0.5) * d2 / b2
    return b2, n_add


def optical_gain(C0: float, C1: float, xi_m: float, xi_d: float) -> float:
    """sqrt(G_a): output-photon gain of the phase quadrature at resonance."""
    lever = C1 * (1.0 - xi_m) / (1.0 - xi_d)
    return (C0 - (1.0 - xi_m) + lever) / (C0 + (1.0 - xi_m) + lever)


def on_resonance_closed(p: HybridParams) -> tuple[float, float]:
    """Closed forms for (n_add(0), R_m(0)) in terms of cooperativities."""
    sqrt_ga = optical_gain(p.C0, p.C1, p.xi_m, p.xi_d)
    one_m = 1.0 - p.xi_m
    rm0 = p.C0 * ((sqrt_ga - 1.0) / one_m) ** 2
    optical = sqrt_ga**2 / (sqrt_ga - 1.0) ** 2 * (p.n_c_T + 0.5)
    atomic = p.C1 / (1.0 - p.xi_d) ** 2 * (p.n_d_T + 0.5)
    n0 = (one_m**2 / p.C0) * (optical + atomic)
    return n0, rm0


def off_modulation_closed(
    C0: float, C1: float, n_c: float = 0.0, n_d: float = 0.0
) -> tuple[float, float]:
    """Resonant (n_add, R_m) with both modulations off."""
    n0 = (1.0 / C0) * (0.25 * (C0 + C1 - 1.0) ** 2 * (n_c + 0.5) + C1 * (n_d + 0.5))
    rm0 = 4.0 * C0 / (1.0 + C0 + C1) ** 2
    return n0, rm0


def mech_mod_only_closed(
    C0: float, C1: float, xi_m: float, n_d: float = 0.0
) -> tuple[float, float]:
    """Resonant (n_add, R_m) with atomic modulation off and matched xi_m."""
    n0 = (C1 / C0) * (1.0 - xi_m) ** 2 * (n_d + 0.5)
    rm0 = C0 / (1.0 - xi_m) ** 2
    return n0, rm0


def impedance_match(C0: float, C1: float, xi_d: float) -> float:
    """Mechanical modulation depth that nulls the optical gain:
    xi_m = 1 - C0 / (1 - C1/(1 - xi_d)), requiring C0 + C1 <= 1."""
    if C0 + C1 > 1.0 + 1e-12:
        raise ValueError("impedance matching requires C0 + C1 <= 1")
    if xi_d == 1.0:
        raise ZeroDivisionError("xi_d = 1 makes the matching condition singular")
    lever = 1.0 - C1 / (1.0 - xi_d)
    if lever == 0.0:
        raise ZeroDivisionError("matching condition singular: 1 - C1/(1-xi_d) = 0")
    return 1.0 - C0 / lever


def impedance_solve(
    C0: float | None = None,
    C1: float | None = None,
    xi_m: float | None = None,
    xi_d: float | None = None,
) -> dict:
    """Solve the matching condition for whichever single argument is None."""
    unknowns = [k for k, v in (("C0", C0), ("C1", C1), ("xi_m", xi_m), ("xi_d", xi_d)) if v is None]
    if len(unknowns) != 1:
        raise ValueError("exactly one of C0, C1, xi_m, xi_d must be left unknown")
    name = unknowns[0]

    def residual(x):
        vals = {"C0": C0, "C1": C1, "xi_m": xi_m, "xi_d": xi_d}
        vals[name] = x
        lever = 1.0 - vals["C1"] / (1.0 - vals["xi_d"])
        return vals["C0"] + (vals["xi_m"] - 1.0) * lever

    if name == "xi_m":
        value = impedance_match(C0, C1, xi_d)
    else:
        bracket = {"C0": (1e-9, 1.0), "C1": (1e-9, 1.0), "xi_d": (-10.0, 1.0 - 1e-9)}[name]
        value = float(optimize.brentq(residual, *bracket, xtol=1e-14))
    out = {"C0": C0, "C1": C1, "xi_m": xi_m, "xi_d": xi_d}
    out[name] = value
    return out


def force_noise(omega, p: HybridParams):
    """Noise-force power spectrum m hbar w_m gamma_m [(n_m + 1/2) + n_add(w)], N^2/Hz."""
    if p.mass <= 0:
        raise ValueError("mass is required for dimensional force noise")
    _, n_add = response_and_noise(omega, p)
    return p.mass * HBAR * p.omega_m * p.gamma_m * ((p.n_m_T + 0.5) + n_add)


def sensitivity(omega, p: HybridParams):
    """Minimum detectable force sqrt(S_N), N/sqrt(Hz)."""
    return np.sqrt(force_noise(omega, p))


def snr(omega, p: HybridParams, F_tilde: float):
    """Signal-to-noise ratio of a transduced force amplitude (N at +-w_m)."""
    return F_tilde / sensitivity(omega, p)


@dataclass(frozen=True)
class ExperimentDerivation:
    """Drive-side settings realizing target cooperativities."""

    omega_sw: float
    Delta_a: float
    omega_L: float
    Delta0: float
    n_cav: float
    E_L: float
    U0: float
    G0: float


def experiment_derive(
    C0: float,
    C1: float,
    *,
    N_atoms: float,
    g_a: float,
    g0: float,
    omega_R: float,
    gamma_m: float,
    gamma_d: float,
    omega_m: float,
    kappa: float,
    omega_a: float,
    omega_c: float,
) -> ExperimentDerivation:
    """Solve the red-detuned operating point for target cooperativities.

    omega_sw matches the collective mode to the mechanics; Delta_a fixes the
    cooperativity ratio; the laser frequency follows from the atomic line;
    the intracavity photon number balances the light-shift against the
    red-detuning condition; E_L is the pump rate that sustains it.
    """
    omega_sw = omega_m - 4.0 * omega_R
    if omega_sw < 0:
        raise ValueError("omega_m below 4 omega_R: no repulsive collision rate matches")
    delta_a = -(g_a**2 / g0) * np.sqrt(N_atoms * gamma_m * C0 / (8.0 * gamma_d * C1))
    derived = bec_derive(N_atoms, g_a, delta_a, omega_R, omega_sw)
    omega_l = omega_a - delta_a
    # laser-minus-cavity detuning plus collective light shift
    delta0 = (omega_l - omega_c) + 0.5 * N_atoms * derived.U0
    n_cav = (omega_m * delta0 - omega_m**2) / (2.0 * (g0**2 + derived.G0**2))
    if n_cav <= 0:
        raise ValueError(
            "targets are inconsistent: derived intracavity photon number is not positive"
        )
    e_l = np.sqrt(n_cav * (0.25 * kappa**2 + omega_m**2))
    return ExperimentDerivation(
        omega_sw=omega_sw,
        Delta_a=delta_a,
        omega_L=omega_l,
        Delta0=delta0,
        n_cav=float(n_cav),
        E_L=float(e_l),
        U0=derived.U0,
        G0=derived.G0,
    )
