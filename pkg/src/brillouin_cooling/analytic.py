"""Closed-form phonon-number solutions, Rabi frequencies and cooling limits.

The closed forms assume constant coupling and the thermal initial condition
``N_a(0) = 0``, ``N_b(0) = n_th``. They use ``delta1`` alone (the acoustic
shift is dropped, as it is negligible next to the optical one).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CouplingParams, validate
from .dynamics import drift_matrix


@dataclass(frozen=True)
class AnalyticCoefficients:
    Omega: float
    Gamma0: float
    Upsilon: float
    C1: float
    C2: float
    C3: float
    C4: float
    Nb_ss: float
    # reduced (strong-coupling) form
    Omega_reduced: float
    C1_reduced: float
    C2_reduced: float
    C3_reduced: float


def steady_state_limit(params: CouplingParams) -> float:
    """Long-time phonon number under constant coupling."""
    validate(params)
    gam, Gam, g, d1, n = params.gamma, params.Gamma, params.g, params.delta1, params.n_th
    s = Gam + gam
    num = 4 * g**2 * s + gam * s**2 + 4 * gam * d1**2
    den = 4 * g**2 * s + gam * Gam * s + 4 * gam * Gam * d1**2 / s
    return num / den * Gam / s * n


def forward_steady_state_limit(params: CouplingParams) -> float:
    """Detuning-free steady state used for forward intermodal scattering."""
    gam, Gam, g = params.gamma, params.Gamma, params.g
    return (4 * g**2 + gam * (gam + Gam)) / (4 * g**2 + gam * Gam) * Gam / (Gam + gam) * params.n_th


def _upsilon_terms(params: CouplingParams) -> tuple[float, float]:
    gam, Gam, g, d1 = params.gamma, params.Gamma, params.g, params.delta1
    x = 8 * g**2 + 2 * d1**2 - 0.5 * (Gam - gam) ** 2
    ups = x**2 + 4 * (Gam - gam) ** 2 * d1**2
    return x, ups


def approx_rabi_frequency(params: CouplingParams, variant: str = "appendix") -> float:
    """Printed strong-coupling approximations of the Rabi frequency.

    ``variant="appendix"`` is sqrt(4g^2 + d1^2 - (Gamma-gamma)^2/4);
    ``variant="main"`` doubles the detuning term. Neither is used for
    scheduling; see :func:`rabi_frequency_numeric`.
    """
    weight = {"appendix": 1.0, "main": 2.0}[variant]
    val = 4 * params.g**2 + weight * params.delta1**2 - (params.Gamma - params.gamma) ** 2 / 4
    return float(np.sqrt(max(val, 0.0)))


def coefficients(params: CouplingParams) -> AnalyticCoefficients:
    validate(params)
    gam, Gam, g, d1, n = params.gamma, params.Gamma, params.g, params.delta1, params.n_th
    s = Gam + gam
    x, ups = _upsilon_terms(params)
    root = np.sqrt(ups)
    Om = 0.5 * np.sqrt(max(root + x, 0.0))
    G0 = 0.5 * np.sqrt(max(root - x, 0.0))
    nss = steady_state_limit(params)
    D = 16 * G0 * (Om**2 + G0**2)
    Q = s**2 + 4 * Om**2
    with np.errstate(divide="ignore", invalid="ignore"):
        C1 = (-(-16 * g**2 * gam + s * Q) * n - 2 * (8 * g**2 - s**2 - 4 * Om**2) * G0 * n
              + Q * (s - 2 * G0) * nss) / D
        C2 = (-(16 * g**2 * gam - s * Q) * n - 2 * (8 * g**2 - s**2 - 4 * Om**2) * G0 * n
              - Q * (s + 2 * G0) * nss) / D
        C4 = ((16 * g**2 * gam + 4 * s * G0**2 - s**3) * n
              + (s**2 - 4 * G0**2) * s * nss) / (8 * Om * (Om**2 + G0**2))
    C3 = ((8 * g**2 + 4 * G0**2 - s**2) * n + (s**2 - 4 * G0**2) * nss) / (4 * (Om**2 + G0**2))

    Om_r = np.float64(approx_rabi_frequency(params))
    with np.errstate(divide="ignore", invalid="ignore"):
        C1r = -(2 * (Gam - gam) * g**2 - gam * (d1**2 + gam * Gam)) / (s * Om_r**2) * n
        C2r = (2 * g**2 - gam * s / 4) / Om_r**2 * n
        C3r = (gam * g - gam * s**2 / (16 * np.float64(g))) / Om_r**2 * n
    return AnalyticCoefficients(float(Om), float(G0), float(ups), float(C1), float(C2),
                                float(C3), float(C4), float(nss), float(Om_r), float(C1r),
                                float(C2r), float(C3r))


def _sinhc_t(rate: float, t: np.ndarray) -> np.ndarray:
    """sinh(rate t)/rate, finite as rate -> 0."""
    z = rate * t
    small = np.abs(z) < 1e-4
    safe = np.where(small, 1.0, z)
    return np.where(small, t * (1 + z**2 / 6), np.sinh(safe) / np.where(small, 1.0, rate))


def _sinc_t(rate: float, t: np.ndarray) -> np.ndarray:
    """sin(rate t)/rate, finite as rate -> 0."""
    z = rate * t
    small = np.abs(z) < 1e-4
    safe = np.where(small, 1.0, z)
    return np.where(small, t * (1 - z**2 / 6), np.sin(safe) / np.where(small, 1.0, rate))


def analytic_nb_full(params: CouplingParams, t):
    """Exact constant-coupling phonon number N_b(t).

    The pair ``C1 exp(-(beta+Gamma0) t) + C2 exp(-(beta-Gamma0) t)`` has a
    removable 1/Gamma0 singularity; it is evaluated in the equivalent
    sinh/cosh form, which stays finite as Gamma0 -> 0. Likewise ``C4 sin``
    is evaluated through sin(Omega t)/Omega.
    """
    validate(params)
    gam, Gam, g, n = params.gamma, params.Gamma, params.g, params.n_th
    t_arr = np.asarray(t, dtype=float)
    s = Gam + gam
    beta = 0.5 * s
    x, ups = _upsilon_terms(params)
    root = np.sqrt(ups)
    Om = 0.5 * np.sqrt(max(root + x, 0.0))
    G0 = 0.5 * np.sqrt(max(root - x, 0.0))
    nss = steady_state_limit(params)
    Q = s**2 + 4 * Om**2
    v = 8 * g**2 - s**2 - 4 * Om**2
    u = -16 * g**2 * gam + s * Q
    E = u * n - Q * s * nss
    F = 2 * v * n + 2 * Q * nss
    Dp = 16 * (Om**2 + G0**2)
    pair = (2 * E * _sinhc_t(G0, t_arr) - 2 * F * np.cosh(G0 * t_arr)) / Dp
    C3 = ((8 * g**2 + 4 * G0**2 - s**2) * n + (s**2 - 4 * G0**2) * nss) / (4 * (Om**2 + G0**2))
    C4_times_Om = ((16 * g**2 * gam + 4 * s * G0**2 - s**3) * n
                   + (s**2 - 4 * G0**2) * s * nss) / (8 * (Om**2 + G0**2))
    osc = C3 * np.cos(Om * t_arr) + C4_times_Om * _sinc_t(Om, t_arr)
    out = np.exp(-beta * t_arr) * (pair + osc) + nss
    return float(out) if np.ndim(out) == 0 else out


def analytic_nb_reduced(params: CouplingParams, t):
    """Three-term strong-coupling approximation of N_b(t)."""
    c = coefficients(params)
    s = params.Gamma + params.gamma
    t_arr = np.asarray(t, dtype=float)
    env = np.exp(-0.5 * s * t_arr)
    W = c.Omega_reduced
    out = (env * (c.C1_reduced + c.C2_reduced * np.cos(W * t_arr) + c.C3_reduced * np.sin(W * t_arr))
           + params.Gamma / s * params.n_th)
    return float(out) if np.ndim(out) == 0 else out


def rabi_frequency_numeric(params: CouplingParams, g: float | None = None) -> tuple[float, float]:
    """Rabi frequency and envelope decay from the drift-matrix spectrum.

    Returns the largest imaginary part among the eigenvalues of the
    homogeneous drift matrix and the negated real part of that eigenvalue.
    """
    A, _ = drift_matrix(params, g)
    try:
        lam = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise RuntimeError(f"eigenvalue solver failed: {exc}") from exc
    i = int(np.argmax(lam.imag))
    return float(lam[i].imag), float(-lam[i].real)


def rabi_period(params: CouplingParams, g: float | None = None) -> float:
    omega, _ = rabi_frequency_numeric(params, g)
    if omega <= 0:
        raise ValueError("no oscillation: the drift matrix has no complex eigenpair")
    return 2 * np.pi / omega


def instantaneous_limit(params: CouplingParams) -> float:
    """Lower edge of the pulsed plateau, pi Gamma n_th / (4 g)."""
    if params.g <= 0:
        raise ValueError("instantaneous limit needs g > 0")
    return np.pi * params.Gamma * params.n_th / (4 * params.g)


def upper_limit(params: CouplingParams) -> float:
    """Upper edge of the pulsed plateau, (1 + pi) Gamma n_th / (4 g)."""
    if params.g <= 0:
        raise ValueError("upper limit needs g > 0")
    return (1 + np.pi) * params.Gamma * params.n_th / (4 * params.g)
