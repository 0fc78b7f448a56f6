import numpy as np
import pytest

from brillouin_cooling import (CouplingParams, PulseSchedule, analytic_nb_full, analytic_nb_reduced,
                               approx_rabi_frequency, backward_params, coefficients, forward_params,
                               instantaneous_limit, integrate, rabi_frequency_numeric, rabi_period,
                               steady_state_limit, thermal_initial_state, upper_limit)
from brillouin_cooling.analytic import forward_steady_state_limit


@pytest.mark.parametrize("g", [0.05, 2.0, 10.0, 50.0])
def test_full_solution_starts_at_n_th(g):
    assert analytic_nb_full(backward_params(g=g), 0.0) == pytest.approx(1000.0, rel=1e-10)


def test_full_solution_long_time_limit():
    p = backward_params(g=10.0)
    assert analytic_nb_full(p, 400.0) == pytest.approx(steady_state_limit(p), rel=1e-12)


@pytest.mark.parametrize("g", [0.05, 2.0, 10.0])
def test_full_solution_matches_ode(g):
    p = backward_params(g=g)
    res = integrate(p, PulseSchedule.constant(g, 10.0), thermal_initial_state(p), 10.0, 0.01)
    tol = max(1e-2, 10 * abs(p.delta2) / p.Gamma) * p.n_th
    assert np.max(np.abs(res.n_b - analytic_nb_full(p, res.times))) < tol


def test_full_solution_is_finite_at_degenerate_gamma0():
    # with delta1 = 0 the pair rate Gamma0 vanishes exactly
    p = backward_params(g=3.0, delta1=0.0, delta2=0.0)
    c = coefficients(p)
    assert c.Gamma0 == 0.0 and not np.isfinite(c.C1)
    t = np.linspace(0, 8, 200)
    res = integrate(p, PulseSchedule.constant(3.0, 8.0), thermal_initial_state(p), 8.0, 0.04)
    assert np.max(np.abs(analytic_nb_full(p, res.times) - res.n_b)) < 1e-6 * p.n_th
    assert np.all(np.isfinite(analytic_nb_full(p, t)))


def test_coefficients_invariants():
    c = coefficients(backward_params(g=10.0))
    assert c.Upsilon >= 0
    assert 0 <= c.Nb_ss <= 1000.0


def test_reduced_form():
    p = backward_params(g=10.0)
    assert analytic_nb_reduced(p, 0.0) == pytest.approx(1000.0, rel=0.02)
    omega, _ = rabi_frequency_numeric(p)
    assert analytic_nb_reduced(p, np.pi / omega) == pytest.approx(instantaneous_limit(p), rel=0.15)


def test_steady_state_values():
    assert steady_state_limit(backward_params(g=10.0)) == pytest.approx(990.099, abs=1e-3)
    assert steady_state_limit(backward_params(g=0.0)) == pytest.approx(1000.0, rel=1e-12)
    p = forward_params(g=15.0)
    assert forward_steady_state_limit(p) == pytest.approx(91.0, abs=0.05)
    big = backward_params(g=1e5)
    assert steady_state_limit(big) == pytest.approx(1000 / 1.01, rel=1e-6)


def test_rabi_frequency_limits():
    undamped = CouplingParams(1e-300, 1e-300, 2.5)
    omega, decay = rabi_frequency_numeric(undamped)
    assert omega == pytest.approx(5.0) and decay == pytest.approx(0.0, abs=1e-12)
    free = CouplingParams(0.2, 1.0, 0.0, 0.7, 0.1)
    omega, decay = rabi_frequency_numeric(free)
    assert omega == pytest.approx(0.6) and decay == pytest.approx(0.6)


def test_rabi_frequency_against_printed_forms():
    p = backward_params(g=10.0)
    omega, _ = rabi_frequency_numeric(p)
    assert omega == pytest.approx(approx_rabi_frequency(p), rel=0.01)
    assert omega == pytest.approx(approx_rabi_frequency(p, "main"), rel=0.01)
    assert rabi_period(p) == pytest.approx(2 * np.pi / omega)


@pytest.mark.parametrize("g", [10.0, 30.0, 100.0])
def test_rabi_frequency_approaches_2g(g):
    p = backward_params(g=g)
    omega, _ = rabi_frequency_numeric(p)
    assert abs(omega / (2 * g) - 1) < (p.Gamma / g) ** 2 + (p.delta1 / g) ** 2


def test_limits():
    p = backward_params(g=10.0)
    assert instantaneous_limit(p) == pytest.approx(78.54, abs=0.01)
    assert upper_limit(p) == pytest.approx(103.54, abs=0.01)
    assert instantaneous_limit(backward_params(n_th=0.0)) == 0.0
    assert upper_limit(backward_params(n_th=0.0)) == 0.0
    assert instantaneous_limit(forward_params(g=15.0, Gamma=0.2)) == pytest.approx(10.47, abs=0.01)
    with pytest.raises(ValueError):
        instantaneous_limit(backward_params(g=0.0))
    with pytest.raises(ValueError):
        upper_limit(backward_params(g=0.0))
