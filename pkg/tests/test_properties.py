"""Property-based checks of the module invariants."""
import numpy as np
from hypothesis import given, settings, strategies as st

from brillouin_cooling import (CouplingParams, MomentState, PulseSchedule, Segment, integrate,
                               kernel_cross, kernel_xi2b, moment_rhs, stationary_state,
                               thermal_initial_state, validate)
from brillouin_cooling.kernels import kernel_scales

rates = st.floats(0.01, 3.0)
couplings = st.floats(0.0, 20.0)
detunings = st.floats(-2.0, 2.0)
loads = st.floats(0.0, 1e4)


@st.composite
def params(draw, g=couplings):
    return CouplingParams(draw(rates), draw(rates), draw(g), draw(detunings), draw(detunings), draw(loads))


@st.composite
def physical_states(draw):
    n_a, n_b = draw(st.floats(0, 1e3)), draw(st.floats(0, 1e3))
    r = np.sqrt(n_a * n_b) * draw(st.floats(0, 1))
    phi = draw(st.floats(0, 2 * np.pi))
    return MomentState(n_a, n_b, r * np.cos(phi), r * np.sin(phi))


@st.composite
def schedules(draw, g):
    n = draw(st.integers(1, 4))
    segs = [Segment(draw(st.floats(0.05, 0.5)), draw(st.sampled_from([0.0, g])),
                    reset_at_start=i > 0 and draw(st.booleans())) for i in range(n)]
    return PulseSchedule(tuple(segs))


SETTINGS = settings(max_examples=25, deadline=None)


@SETTINGS
@given(params())
def test_validate_idempotent(p):
    assert validate(validate(p)) == p
    assert thermal_initial_state(p).is_physical(p.n_th)


@SETTINGS
@given(params(), physical_states(), st.floats(0.1, 10.0), st.data())
def test_affine_linearity(p, x0, lam, data):
    sched = data.draw(schedules(p.g))
    t = sched.span
    a = integrate(p, sched, x0, t, t / 7, 1e-10)
    scaled = MomentState(*(lam * x0.as_array()))
    b = integrate(p.scaled_load(lam), sched, scaled, t, t / 7, 1e-10)
    scale = lam * max(1.0, p.n_th, np.max(np.abs(x0.as_array())))
    assert np.allclose(b.states, lam * a.states, rtol=0, atol=1e-7 * scale)


@SETTINGS
@given(params(g=st.just(0.0)), st.floats(0, 1e3))
def test_uncoupled_closed_form(p, nb0):
    res = integrate(p, PulseSchedule.constant(0.0, 3.0), MomentState(0.0, nb0), 3.0, 0.1)
    exact = p.n_th + (nb0 - p.n_th) * np.exp(-p.Gamma * res.times)
    assert np.allclose(res.n_b, exact, rtol=1e-9, atol=1e-9 * max(1.0, p.n_th, nb0))


@SETTINGS
@given(st.floats(0.1, 10.0), detunings, physical_states())
def test_undamped_number_conservation(g, d, x0):
    p = CouplingParams(1e-300, 1e-300, g, d, 0.0, 0.0)
    res = integrate(p, PulseSchedule.constant(g, 5.0), x0, 5.0, 0.1, 1e-10)
    total = res.n_a + res.n_b
    assert np.allclose(total, total[0], rtol=0, atol=1e-8 * max(1.0, total[0]))


@SETTINGS
@given(params(), physical_states(), st.data())
def test_cauchy_schwarz_preserved(p, x0, data):
    sched = data.draw(schedules(p.g))
    res = integrate(p, sched, x0, sched.span, sched.span / 9)
    for i in range(len(res)):
        assert res.state(i).is_physical(max(p.n_th, x0.n_a, x0.n_b))


@SETTINGS
@given(params())
def test_stationary_state_is_fixed_point(p):
    s = stationary_state(p)
    assert np.linalg.norm(moment_rhs(s, p, p.g)) < 1e-9 * max(1.0, p.n_th)


@SETTINGS
@given(params(g=st.floats(0.05, 20.0)).filter(lambda p: p.n_th > 0))
def test_kernel_routes_and_identities(p):
    xi = kernel_xi2b(p)
    assert xi == np.float64(xi) and abs(xi / (np.sqrt(p.Gamma) * p.n_th) - 1) < 1e-9
    assert abs(xi - kernel_xi2b(p, route="quadrature")) <= 1e-6 * abs(xi)
    c, q = kernel_cross(p), kernel_cross(p, route="quadrature")
    assert abs(c - q) <= 1e-6 * kernel_scales(p)["cross"]
    assert kernel_xi2b(p.scaled_load(3.0)) == np.float64(3 * xi) or abs(kernel_xi2b(p.scaled_load(3.0)) / (3 * xi) - 1) < 1e-12
