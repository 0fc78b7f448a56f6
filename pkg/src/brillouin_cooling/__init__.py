"""Pulsed Brillouin cooling of acoustic phonons in the strong-coupling regime.

Second-order moment dynamics of the linearized anti-Stokes photon/phonon
interaction, closed-form limits, noise-kernel integrals, pulsed-coupling
protocols, wavenumber sweeps and a stochastic-trajectory oracle.
"""
from .analytic import (analytic_nb_full, analytic_nb_reduced, approx_rabi_frequency, coefficients,
                       instantaneous_limit, rabi_frequency_numeric, rabi_period, steady_state_limit,
                       upper_limit)
from .continuum import KSweep, SweepPoint, sweep
from .core import (CouplingParams, MomentState, ParameterError, RegimeTag, backward_params,
                   forward_params, regime_flags, thermal_initial_state, validate)
from .dynamics import SimulationResult, drift_matrix, integrate, moment_rhs, stationary_state
from .kernels import forward_kernels, kernel_cross, kernel_xi1a, kernel_xi2b, quartic_roots
from .pulses import CoolingMetrics, build_schedule, run_protocol, switchability_trace
from .schedule import Event, Mode, PulseSchedule, ScheduleError, Segment
from .stochastic import EnsembleSpec, run_ensemble

__all__ = [
    "CouplingParams", "MomentState", "ParameterError", "RegimeTag", "backward_params",
    "forward_params", "regime_flags", "thermal_initial_state", "validate",
    "SimulationResult", "drift_matrix", "integrate", "moment_rhs", "stationary_state",
    "analytic_nb_full", "analytic_nb_reduced", "approx_rabi_frequency", "coefficients",
    "instantaneous_limit", "rabi_frequency_numeric", "rabi_period", "steady_state_limit",
    "upper_limit", "forward_kernels", "kernel_cross", "kernel_xi1a", "kernel_xi2b", "quartic_roots",
    "CoolingMetrics", "build_schedule", "run_protocol", "switchability_trace",
    "Event", "Mode", "PulseSchedule", "ScheduleError", "Segment",
    "KSweep", "SweepPoint", "sweep", "EnsembleSpec", "run_ensemble",
]
