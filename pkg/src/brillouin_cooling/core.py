"""Parameter model and moment-state types shared by every solver.

All rates are dimensionless multiples of one reference rate (the acoustic
damping for backward scattering, the optical damping for forward intermodal
scattering).  Time is measured in the inverse of that reference rate.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, fields

import numpy as np


class ParameterError(ValueError):
    """Raised when a parameter set violates a hard invariant."""


class RegimeTag(enum.Enum):
    """Scattering geometry a scenario models. Purely descriptive."""

    BACKWARD = "backward"
    FORWARD_INTERMODAL = "forward_intermodal"


@dataclass(frozen=True)
class CouplingParams:
    """Rates of the linearized anti-Stokes photon/phonon interaction.

    Parameters
    ----------
    gamma : float
        Optical (anti-Stokes) energy damping rate.
    Gamma : float
        Acoustic energy damping rate.
    g : float
        Pump-enhanced coupling strength.
    delta1, delta2 : float
        Wavenumber-induced frequency shifts of the optical and acoustic mode.
    n_th : float
        Thermal phonon occupation of the acoustic bath.
    """

    gamma: float
    Gamma: float
    g: float
    delta1: float = 0.0
    delta2: float = 0.0
    n_th: float = 0.0

    @property
    def beta(self) -> float:
        """Decay rate of the cross coherence, (gamma + Gamma) / 2."""
        return 0.5 * (self.gamma + self.Gamma)

    @property
    def detuning(self) -> float:
        """Relative detuning delta1 - delta2 rotating the coherence."""
        return self.delta1 - self.delta2

    def with_(self, **changes) -> "CouplingParams":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update(changes)
        return CouplingParams(**values)

    def scaled_load(self, factor: float) -> "CouplingParams":
        return self.with_(n_th=self.n_th * factor)


@dataclass(frozen=True)
class ValidationReport:
    """Advisory regime flags; never errors."""

    strong_coupling: bool
    detunings_within_linewidth: bool
    notes: tuple[str, ...] = field(default_factory=tuple)


def positivity_tolerance(n_th: float) -> float:
    return 1e-9 * max(1.0, n_th)


def validate(params: CouplingParams) -> CouplingParams:
    """Return ``params`` unchanged, raising :class:`ParameterError` on a violation."""
    for f in fields(params):
        value = getattr(params, f.name)
        if not isinstance(value, (int, float, np.floating, np.integer)) or not math.isfinite(value):
            raise ParameterError(f"{f.name} must be a finite real number, got {value!r}")
    if params.gamma <= 0:
        raise ParameterError(f"non-positive dissipation: gamma={params.gamma}")
    if params.Gamma <= 0:
        raise ParameterError(f"non-positive dissipation: Gamma={params.Gamma}")
    if params.g < 0:
        raise ParameterError(f"negative coupling: g={params.g}")
    if params.n_th < 0:
        raise ParameterError(f"negative thermal occupation: n_th={params.n_th}")
    return params


def regime_flags(params: CouplingParams) -> ValidationReport:
    """Check the inequalities the closed-form approximations rely on.

    Strong coupling is tested as ``g > 5 max(gamma, Gamma)``; the detuning
    condition as ``|delta1|, |delta2| < Gamma``.
    """
    validate(params)
    strong = params.g > 5.0 * max(params.gamma, params.Gamma)
    within = abs(params.delta1) < params.Gamma and abs(params.delta2) < params.Gamma
    notes = []
    if not strong:
        notes.append("outside strong-coupling regime; reduced closed forms are inaccurate")
    if not within:
        notes.append("detuning exceeds acoustic linewidth")
    return ValidationReport(strong, within, tuple(notes))


@dataclass(frozen=True)
class MomentState:
    """Second-order moments N_a, N_b and the coherence <a^dagger b> at one instant."""

    n_a: float
    n_b: float
    c_re: float = 0.0
    c_im: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.n_a, self.n_b, self.c_re, self.c_im], dtype=float)

    @classmethod
    def from_array(cls, x) -> "MomentState":
        x = np.asarray(x, dtype=float)
        return cls(float(x[0]), float(x[1]), float(x[2]), float(x[3]))

    def is_physical(self, n_th: float = 0.0) -> bool:
        eps = positivity_tolerance(n_th)
        if self.n_a < -eps or self.n_b < -eps:
            return False
        coh = self.c_re**2 + self.c_im**2
        return coh <= max(self.n_a, 0.0) * max(self.n_b, 0.0) * (1 + 1e-6) + eps**2


def thermal_initial_state(params: CouplingParams) -> MomentState:
    """Optical vacuum, acoustic mode in equilibrium with its bath."""
    return MomentState(0.0, float(params.n_th), 0.0, 0.0)


# Reference parameter sets, dimensionless in the reference rate.
def backward_params(g: float = 10.0, *, delta1: float = 0.3, delta2: float = 3e-5,
                    n_th: float = 1000.0) -> CouplingParams:
    """Backward-scattering reference set (rates in units of Gamma)."""
    return CouplingParams(gamma=0.01, Gamma=1.0, g=g, delta1=delta1, delta2=delta2, n_th=n_th)


def forward_params(g: float = 15.0, *, Gamma: float = 0.1, delta1: float = 0.05,
                   delta2: float = 5e-6, n_th: float = 1000.0) -> CouplingParams:
    """Forward intermodal reference set (rates in units of gamma)."""
    return CouplingParams(gamma=1.0, Gamma=Gamma, g=g, delta1=delta1, delta2=delta2, n_th=n_th)
