"""Frequency-domain noise integrals feeding the moment equations.

Every kernel is a line integral over the real frequency axis of a rational
function whose denominator exceeds the numerator by at least two degrees.
Two independent routes are provided:

* residues: close the contour in the upper half-plane and sum
  ``2 pi i * Res`` over the enclosed poles (roots from companion matrices);
* quadrature: adaptive Gauss-Kronrod on the compactified axis
  ``omega = c + a tan(u)``.

The residue route falls back to quadrature with a warning if two poles
nearly coincide.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial
from scipy import integrate

from .core import CouplingParams, validate

DOUBLE_ROOT_TOL = 1e-8


class KernelError(RuntimeError):
    pass


class NearDoubleRootWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class LineIntegral:
    value: complex
    route: str  # "residue" or "quadrature"
    abs_scale: float  # integral of |integrand|, the natural error scale


def _poly_roots(den: Polynomial) -> np.ndarray:
    c = np.trim_zeros(np.asarray(den.coef, dtype=complex), "b")
    # companion-matrix eigenvalues, highest degree first for np.roots
    return np.roots(c[::-1])


def _nearly_degenerate(roots: np.ndarray) -> bool:
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if abs(roots[i] - roots[j]) < DOUBLE_ROOT_TOL * max(abs(roots[i]), 1e-300):
                return True
    return False


def residue_coefficients(num: Polynomial, den: Polynomial, roots: np.ndarray | None = None) -> np.ndarray:
    """Partial-fraction coefficients ``A_j`` with ``num/den = sum A_j/(w - r_j)``."""
    if roots is None:
        roots = _poly_roots(den)
    lead = np.trim_zeros(np.asarray(den.coef, dtype=complex), "b")[-1]
    out = np.empty(len(roots), dtype=complex)
    for j, r in enumerate(roots):
        others = np.delete(roots, j)
        out[j] = num(r) / (lead * np.prod(r - others))
    return out


def _abs_scale(num, den, center, width) -> float:
    u = np.linspace(-np.pi / 2, np.pi / 2, 4001)[1:-1]
    w = center + width * np.tan(u)
    vals = np.abs(num(w) / den(w)) * width / np.cos(u) ** 2
    return float(np.trapezoid(vals, u))


def quadrature_integral(num: Polynomial, den: Polynomial, center: float, width: float,
                        breakpoints=()) -> complex:
    """Real-axis integral of ``num/den`` by adaptive quadrature after ``w = c + a tan u``."""
    # scalar Horner on plain Python numbers: Polynomial.__call__ dominates otherwise
    nc = [complex(c) for c in num.coef[::-1]]
    dc = [complex(c) for c in den.coef[::-1]]

    def f(u, part):
        w = center + width * math.tan(u)
        a = 0j
        for c in nc:
            a = a * w + c
        b = 0j
        for c in dc:
            b = b * w + c
        v = a / b * width / math.cos(u) ** 2
        return v.real if part == 0 else v.imag

    pts = []
    for p in sorted(float(np.arctan((b - center) / width)) for b in breakpoints):
        # coincident breakpoints make QUADPACK report spurious divergence
        if -np.pi / 2 + 1e-9 < p < np.pi / 2 - 1e-9 and (not pts or p - pts[-1] > 1e-9):
            pts.append(p)
    pts = pts or None
    scale = _abs_scale(num, den, center, width)
    opts = dict(points=pts, limit=2000, epsabs=1e-13 * scale, epsrel=1e-12)
    re, _ = integrate.quad(f, -np.pi / 2, np.pi / 2, args=(0,), **opts)
    has_imag = np.iscomplexobj(num.coef) or np.iscomplexobj(den.coef)
    im = integrate.quad(f, -np.pi / 2, np.pi / 2, args=(1,), **opts)[0] if has_imag else 0.0
    return complex(re, im)


def residue_integral(num: Polynomial, den: Polynomial, center: float, width: float,
                     expected_upper: int | None = None) -> LineIntegral:
    """Real-axis integral of ``num/den`` as ``2 pi i`` times the upper-half-plane residues."""
    if den.degree() - num.degree() < 2:
        raise KernelError("integrand does not decay fast enough for contour closure")
    roots = _poly_roots(den)
    scale_width = max(width, 1e-300)
    if np.any(np.abs(roots.imag) < 1e-14 * np.maximum(np.abs(roots), scale_width)):
        raise KernelError("pole on the real axis; the integral diverges")
    scale = _abs_scale(num, den, center, width)
    if _nearly_degenerate(roots):
        warnings.warn("near-double pole: using the quadrature route", NearDoubleRootWarning,
                      stacklevel=3)
        val = quadrature_integral(num, den, center, width, roots.real)
        return LineIntegral(val, "quadrature", scale)
    upper = roots.imag > 0
    if expected_upper is not None and int(upper.sum()) != expected_upper:
        raise KernelError(f"expected {expected_upper} poles in the upper half-plane, found {int(upper.sum())}")
    A = residue_coefficients(num, den, roots)
    return LineIntegral(complex(2j * np.pi * A[upper].sum()), "residue", scale)


# --- integrands -----------------------------------------------------------------

def _alpha_beta(p: CouplingParams) -> tuple[float, float]:
    return float(np.sqrt(p.g**2 + p.gamma * p.Gamma / 4)), p.beta


def _response_parts(p: CouplingParams) -> tuple[Polynomial, Polynomial]:
    """Real and imaginary parts ``P``, ``Q`` of the response determinant on the real axis."""
    alpha, beta = _alpha_beta(p)
    d1, d2 = p.delta1, p.delta2
    P = Polynomial([alpha**2 - d1 * d2, -(d1 + d2), -1.0])
    Q = Polynomial([(p.gamma * d2 + p.Gamma * d1) / 2, beta])
    return P, Q


def drive_integrand(p: CouplingParams) -> tuple[Polynomial, Polynomial]:
    """Numerator and denominator of the thermal-drive kernel (exact, detunings kept)."""
    alpha, _ = _alpha_beta(p)
    P, Q = _response_parts(p)
    num = Polynomial([p.gamma * alpha**2, 0.0]) + p.Gamma * Polynomial([p.delta1, 1.0]) ** 2
    return num, P**2 + Q**2


def cross_integrand(p: CouplingParams) -> tuple[Polynomial, Polynomial]:
    P, Q = _response_parts(p)
    return Polynomial([1.0 + 0j]), P + Q * 1j


def _geometry(p: CouplingParams) -> tuple[float, float]:
    alpha, beta = _alpha_beta(p)
    center = -0.5 * (p.delta1 + p.delta2)
    width = max(alpha, beta, abs(p.delta1 - p.delta2), 1e-12)
    return center, width


def _drive_integral(p: CouplingParams, route: str) -> LineIntegral:
    num, den = drive_integrand(p)
    c, w = _geometry(p)
    if route == "quadrature":
        return LineIntegral(quadrature_integral(num, den, c, w, _poly_roots(den).real), "quadrature",
                            _abs_scale(num, den, c, w))
    return residue_integral(num, den, c, w, expected_upper=2)


def _cross_integral(p: CouplingParams, route: str) -> LineIntegral:
    num, den = cross_integrand(p)
    c, w = _geometry(p)
    if route == "quadrature":
        return LineIntegral(quadrature_integral(num, den, c, w, _poly_roots(den).real), "quadrature",
                            _abs_scale(num, den, c, w))
    return residue_integral(num, den, c, w)


# --- public kernels -------------------------------------------------------------

def kernel_xi2b(params: CouplingParams, route: str = "residue") -> float:
    """Acoustic noise/phonon correlation <xi2^dag b> + c.c.

    Multiplied by sqrt(Gamma) this is the thermal forcing on the phonon
    number; the regime approximation gives sqrt(Gamma) n_th.
    """
    validate(params)
    if params.n_th == 0:
        return 0.0
    val = _drive_integral(params, route).value
    return float(np.sqrt(params.Gamma) * params.n_th / (2 * np.pi) * val.real)


def kernel_cross(params: CouplingParams, route: str = "residue") -> complex:
    """Noise contribution sqrt(gamma)<xi1^dag b> + sqrt(Gamma)<a^dag xi2> to the coherence."""
    validate(params)
    if params.g == 0 or params.n_th == 0:
        return 0j
    val = _cross_integral(params, route).value
    return complex(1j * params.g * params.Gamma * params.n_th / (2 * np.pi) * val)


def kernel_xi1a(params: CouplingParams, n_th_optical: float = 0.0) -> float:
    """Optical noise/photon correlation <xi1^dag a> + c.c.

    Zero for the vacuum optical bath. A thermal optical occupation is not
    modelled; passing one only emits a warning.
    """
    validate(params)
    if n_th_optical:
        warnings.warn("thermal optical bath is not supported; returning 0", RuntimeWarning,
                      stacklevel=2)
    return 0.0


def forward_kernels(params: CouplingParams, route: str = "residue") -> tuple[float, complex]:
    """Forward-scattering drive and cross kernels, already multiplied by their prefactors.

    Returns ``(Gamma n_th / 2pi * I1, i g Gamma n_th / 2pi * I2)`` where ``I1``
    and ``I2`` are the drive and cross frequency integrals.
    """
    validate(params)
    if params.n_th == 0:
        return 0.0, 0j
    drive = params.Gamma * params.n_th / (2 * np.pi) * _drive_integral(params, route).value.real
    return float(drive), kernel_cross(params, route)


def kernel_scales(params: CouplingParams) -> dict[str, float]:
    """Natural absolute error scales (prefactor times integral of |integrand|)."""
    c, w = _geometry(params)
    num, den = drive_integrand(params)
    cnum, cden = cross_integrand(params)
    return {
        "xi2b": float(np.sqrt(params.Gamma) * params.n_th / (2 * np.pi) * _abs_scale(num, den, c, w)),
        "drive": float(params.Gamma * params.n_th / (2 * np.pi) * _abs_scale(num, den, c, w)),
        "cross": float(params.g * params.Gamma * params.n_th / (2 * np.pi) * _abs_scale(cnum, cden, c, w)),
    }


# --- normalized quartic of the strong-coupling approximation --------------------

@dataclass(frozen=True)
class QuarticRoots:
    """Roots of w^4 - 2 eta2 w^3 + (eta2^2 - 2 eta1) w^2 + 2 eta2 w + 1.

    ``roots`` is ordered as (lower, lower, upper, upper), each pair sorted by
    real part; ``amplitude`` and ``phase`` are the polar form of the inner
    radicand.
    """

    roots: tuple[complex, complex, complex, complex]
    eta1: float
    eta2: float
    alpha: float
    beta: float
    amplitude: float
    phase: float

    def polynomial(self) -> Polynomial:
        return normalized_quartic(self.eta1, self.eta2)


def normalized_quartic(eta1: float, eta2: float) -> Polynomial:
    return Polynomial([1.0, 2 * eta2, eta2**2 - 2 * eta1, -2 * eta2, 1.0])


def quartic_roots(params: CouplingParams) -> QuarticRoots:
    alpha, beta = _alpha_beta(params)
    if alpha == 0:
        raise KernelError("normalized quartic undefined for alpha = 0")
    eta1 = 1 - beta**2 / (2 * alpha**2)
    eta2 = params.delta1 / alpha
    r = _poly_roots(normalized_quartic(eta1, eta2))
    lower = sorted(r[r.imag < 0], key=lambda z: z.real)
    upper = sorted(r[r.imag >= 0], key=lambda z: z.real)
    inner = (1 + eta1) / 2 + eta2**2 / 4 + 1j * eta2 * np.sqrt((1 - eta1) / 2)
    return QuarticRoots(tuple(lower + upper), eta1, eta2, alpha, beta, float(abs(inner)),
                        float(np.angle(inner)))


def printed_quartic_roots(qr: QuarticRoots) -> np.ndarray:
    """Closed-form roots in the same (lower, lower, upper, upper) order."""
    e1, e2 = qr.eta1, qr.eta2
    k = np.sqrt((1 - e1) / 2)
    sa, h = np.sqrt(qr.amplitude), qr.phase / 2
    l1 = e2 / 2 - sa * np.cos(h) + 1j * (sa * np.sin(h) - k)
    l2 = e2 / 2 + sa * np.cos(h) - 1j * (sa * np.sin(h) + k)
    l3 = e2 / 2 - sa * np.cos(h) - 1j * (sa * np.sin(h) - k)
    l4 = e2 / 2 + sa * np.cos(h) + 1j * (sa * np.sin(h) + k)
    return np.array([l1, l2, l3, l4])


def approximate_roots(qr: QuarticRoots) -> np.ndarray:
    """Strong-coupling simplification dropping the eta2 shifts."""
    k = np.sqrt((1 - qr.eta1) / 2)
    c = np.sqrt(qr.amplitude) * np.cos(qr.phase / 2)
    return np.array([-c - 1j * k, c - 1j * k, -c + 1j * k, c + 1j * k])


def approximate_kernel_xi2b(params: CouplingParams) -> float:
    """Drive kernel of the simplified integrand (gamma + Gamma w^2)/quartic."""
    qr = quartic_roots(params)
    num = Polynomial([params.gamma, 0.0, params.Gamma])
    roots = np.array(qr.roots)
    A = residue_coefficients(num, qr.polynomial(), roots)
    integral = 1j * np.pi * (-A[0] - A[1] + A[2] + A[3])
    return float(np.sqrt(params.Gamma) * params.n_th / (2 * np.pi * qr.alpha) * integral.real)
