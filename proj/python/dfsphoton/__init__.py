"""Python interface to the dfsphoton library.

Rates and times are in units of Gamma_1D and 1/Gamma_1D.
"""

import json

from ._core import (
    PhysicalParams,
    TargetSuperposition,
    amplitude_exact,
    amplitude_hp,
    effective_rabi,
    optimal_detuning,
    overlap_hp_closed,
    overlap_hp_numeric,
)
from . import _core

__all__ = [
    "PhysicalParams",
    "TargetSuperposition",
    "amplitude_exact",
    "amplitude_hp",
    "effective_rabi",
    "error_rates",
    "feasibility",
    "optimal_detuning",
    "overlap_hp_closed",
    "overlap_hp_numeric",
    "plan_superposition",
    "simulate_raman_step",
    "simulate_target",
    "total_infidelities",
]


def simulate_target(target, params, raman_ratio=0.02, omega_c=1.0, delta_e=None, k_max=2):
    """Plans and runs the protocol for `target`; returns the result summary."""
    return json.loads(_core._simulate_target(target, params, raman_ratio, omega_c, delta_e, k_max))


def simulate_raman_step(m, params, raman_ratio=0.02, omega_c=1.0, delta_e=None, k_max=2):
    """One Raman pi step on rung m in the full restricted dynamics."""
    return json.loads(_core._simulate_raman_step(m, params, raman_ratio, omega_c, delta_e, k_max))


def plan_superposition(target, n_atoms, omega_r, delta_e, omega_c=1.0):
    """Pulse sequence preparing `target` from the ground state."""
    return json.loads(_core._plan_superposition(target, n_atoms, omega_r, delta_e, omega_c))


def error_rates(m, n_atoms, omega_r, delta_e, params, post_selected=False):
    return json.loads(_core._error_rates(m, n_atoms, omega_r, delta_e, params, post_selected))


def total_infidelities(m_max, params):
    return json.loads(_core._total_infidelities(m_max, params))


def feasibility(n_atoms=100):
    """Purcell ratio, propagation loss and retardation limit for the Cs/SiN preset."""
    return json.loads(_core._feasibility(n_atoms))
