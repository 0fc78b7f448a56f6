import warnings

import numpy as np
import pytest
from numpy.polynomial import Polynomial

from brillouin_cooling import (CouplingParams, backward_params, forward_kernels, forward_params,
                               kernel_cross, kernel_xi1a, kernel_xi2b, quartic_roots)
from brillouin_cooling.kernels import (KernelError, NearDoubleRootWarning, approximate_kernel_xi2b,
                                       cross_integrand, drive_integrand, kernel_scales,
                                       printed_quartic_roots, residue_coefficients, residue_integral)


def test_decoupled_lorentzian_identities():
    p = CouplingParams(0.3, 1.0, 0.0, 0.0, 0.0, 500.0)
    assert kernel_xi2b(p) == pytest.approx(np.sqrt(1.0) * 500.0, rel=1e-12)
    assert forward_kernels(p)[0] == pytest.approx(500.0, rel=1e-12)
    assert kernel_cross(p) == 0


def test_reference_values():
    p = backward_params(g=10.0)
    assert kernel_xi2b(p) == pytest.approx(1000.0, rel=0.01)
    assert abs(kernel_cross(p)) < 0.02 * 1000.0
    drive, cross = forward_kernels(forward_params(g=15.0))
    assert drive == pytest.approx(0.1 * 1000.0, rel=0.01)
    assert abs(cross) < 0.02 * 0.1 * 1000.0


@pytest.mark.parametrize("p", [backward_params(g=10.0), forward_params(g=15.0),
                               CouplingParams(0.05, 2.0, 0.7, -0.4, 0.01, 30.0)])
def test_routes_agree(p):
    assert kernel_xi2b(p) == pytest.approx(kernel_xi2b(p, route="quadrature"), rel=1e-6)
    scale = kernel_scales(p)["cross"]
    assert abs(kernel_cross(p) - kernel_cross(p, route="quadrature")) <= 1e-6 * scale


def test_vacuum_optical_kernel():
    assert kernel_xi1a(backward_params()) == 0.0
    assert kernel_xi1a(forward_params()) == 0.0
    with pytest.warns(RuntimeWarning):
        assert kernel_xi1a(backward_params(), n_th_optical=3.0) == 0.0


def test_kernel_convergence_on_log_grid():
    vals = [kernel_xi2b(backward_params(g=g)) / 1000.0 for g in (1, 3, 10, 30, 100)]
    # the exact integral is 2 pi for every parameter set, so the "convergence"
    # is identity up to roundoff
    assert np.max(np.abs(np.array(vals) - 1)) < 1e-10


def test_pole_placement():
    for p in (backward_params(g=10.0), forward_params(g=0.3), CouplingParams(1.0, 1.0, 0.0, 2.0, -1.0)):
        r = drive_integrand(p)[1].roots()
        assert np.sum(r.imag > 0) == 2 and np.sum(r.imag < 0) == 2
        # the cross response has both poles above the axis: its line integral vanishes
        r = cross_integrand(p)[1].roots()
        assert len(r) == 2 and np.all(r.imag > 0)


def test_residue_coefficients_partial_fractions():
    p = backward_params(g=4.0)
    num, den = drive_integrand(p)
    roots = den.roots()
    A = residue_coefficients(num, den, roots)
    assert abs(A.sum()) <= 1e-8 * np.max(np.abs(A))
    w = np.random.default_rng(1).normal(scale=10, size=100)
    recon = np.array([np.sum(A / (x - roots)) for x in w])
    exact = num(w) / den(w)
    assert np.allclose(recon, exact, rtol=1e-8, atol=1e-8 * np.max(np.abs(exact)))


def test_quartic_roots_and_printed_forms():
    qr = quartic_roots(backward_params(g=10.0))
    poly = qr.polynomial()
    for r in qr.roots:
        assert abs(poly(r)) < 1e-8 * max(1.0, abs(r) ** 4)
    assert np.allclose(printed_quartic_roots(qr), qr.roots, atol=1e-12)
    assert [np.sign(z.imag) for z in qr.roots] == [-1, -1, 1, 1]


def test_approximate_kernel_in_regime():
    p = backward_params(g=10.0, delta1=0.0, delta2=0.0)
    assert approximate_kernel_xi2b(p) == pytest.approx(kernel_xi2b(p), rel=0.01)


def test_linear_in_thermal_load():
    p = backward_params(g=3.0)
    assert kernel_xi2b(p.scaled_load(4.0)) == pytest.approx(4 * kernel_xi2b(p), rel=1e-12)
    assert forward_kernels(p.scaled_load(4.0))[0] == pytest.approx(4 * forward_kernels(p)[0], rel=1e-12)


def test_near_double_root_falls_back_to_quadrature():
    num, den = Polynomial([1.0]), Polynomial([1.0, 0.0, 1.0]) ** 2
    with pytest.warns(NearDoubleRootWarning):
        val = residue_integral(num, den, 0.0, 1.0)
    assert val.route == "quadrature"
    assert val.value.real == pytest.approx(np.pi / 2, rel=1e-10)


def test_real_axis_pole_rejected():
    with pytest.raises(KernelError):
        residue_integral(Polynomial([1.0]), Polynomial([-1.0, 0.0, 1.0]), 0.0, 1.0)
