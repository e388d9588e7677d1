"""Quantum-noise engine for hybrid optomechanical force sensors."""

from . import bec_qnd, cqnc, lti_core, mc_oracle, parametric, standard_oms

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "lti_core",
    "standard_oms",
    "bec_qnd",
    "cqnc",
    "parametric",
    "mc_oracle",
]
