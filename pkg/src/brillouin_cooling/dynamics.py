"""Second-order moment equations and their piecewise integration.

The state is the real vector ``x = (N_a, N_b, Re<a^dag b>, Im<a^dag b>)`` and
obeys ``dx/dt = A(g) x + f`` with

    dN_a/dt  = -gamma N_a + 2 g Im c
    dN_b/dt  = -Gamma N_b - 2 g Im c + Gamma n_th
    dRe c/dt = -beta Re c + Delta Im c
    dIm c/dt = -Delta Re c - beta Im c + g (N_b - N_a)

where beta = (gamma + Gamma)/2 and Delta = delta1 - delta2.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .core import CouplingParams, MomentState, validate
from .schedule import Event, PulseSchedule, ScheduleError

DEFAULT_REL_TOL = 1e-9
# solver tolerances sit below the requested ones so the global error, not
# just the local step error, stays within rel_tol
TOL_SAFETY = 0.1


class IntegrationError(RuntimeError):
    def __init__(self, message: str, t: float):
        super().__init__(f"{message} (t={t:.6g})")
        self.t = t


def drift_matrix(params: CouplingParams, g: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Homogeneous drift ``A`` and thermal forcing ``f`` at coupling ``g``."""
    g = params.g if g is None else g
    gam, Gam, beta, delta = params.gamma, params.Gamma, params.beta, params.detuning
    A = np.array([
        [-gam, 0.0, 0.0, 2 * g],
        [0.0, -Gam, 0.0, -2 * g],
        [0.0, 0.0, -beta, delta],
        [-g, g, -delta, -beta],
    ])
    f = np.array([0.0, Gam * params.n_th, 0.0, 0.0])
    return A, f


def moment_rhs(state, params: CouplingParams, g_now: float) -> np.ndarray:
    """Time derivative of the moment vector at coupling ``g_now``."""
    x = state.as_array() if isinstance(state, MomentState) else np.asarray(state, dtype=float)
    A, f = drift_matrix(params, g_now)
    return A @ x + f


def stationary_state(params: CouplingParams, g: float | None = None) -> MomentState:
    """Solution of ``A x + f = 0`` at fixed coupling."""
    A, f = drift_matrix(params, g)
    return MomentState.from_array(np.linalg.solve(A, -f))


def apply_reset(x: np.ndarray) -> np.ndarray:
    """Vacuum reset: photons and coherence leave with the light, phonons stay."""
    y = np.array(x, dtype=float)
    y[0] = 0.0
    y[2] = 0.0
    y[3] = 0.0
    return y


@dataclass
class SimulationResult:
    times: np.ndarray
    states: np.ndarray  # shape (n, 4)
    g_trace: np.ndarray
    schedule_events: list[tuple[float, Event]] = field(default_factory=list)
    # realized (start, end, g) of every executed segment
    segments: list[tuple[float, float, float]] = field(default_factory=list)

    def __post_init__(self):
        n = len(self.times)
        if self.states.shape != (n, 4) or len(self.g_trace) != n:
            raise ValueError("times, states and g_trace must have equal length")
        if n > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")

    @property
    def n_a(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def n_b(self) -> np.ndarray:
        return self.states[:, 1]

    @property
    def c_re(self) -> np.ndarray:
        return self.states[:, 2]

    @property
    def c_im(self) -> np.ndarray:
        return self.states[:, 3]

    def state(self, i: int) -> MomentState:
        return MomentState.from_array(self.states[i])

    def events_at(self, t: float) -> list[Event]:
        return [e for (te, e) in self.schedule_events if te == t]

    def __len__(self):
        return len(self.times)


def _sample_grid(t0: float, t1: float, sampling: float) -> np.ndarray:
    """Multiples of ``sampling`` strictly inside ``(t0, t1)``."""
    k0 = int(np.floor(t0 / sampling)) + 1
    k1 = int(np.ceil(t1 / sampling))
    ts = np.arange(k0, k1) * sampling
    keep = (ts > t0 * (1 + 1e-14) + 1e-300) & (ts < t1 * (1 - 1e-12))
    return ts[keep]


def integrate(params: CouplingParams, schedule: PulseSchedule, initial: MomentState,
              t_end: float, sampling: float, rel_tol: float = DEFAULT_REL_TOL,
              abs_tol: float | None = None) -> SimulationResult:
    """Integrate the moment equations through a piecewise-constant schedule.

    Each segment is integrated separately with an embedded 8(5,3) Runge-Kutta
    pair, so no step ever straddles a switching time. A segment flagged
    ``reset_at_start`` applies the vacuum reset before integrating. Output is
    sampled on the multiples of ``sampling`` plus every segment boundary.

    Raises
    ------
    ScheduleError
        If the schedule does not reach ``t_end``.
    IntegrationError
        If the step size underflows.
    """
    validate(params)
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    if not 0 < rel_tol <= 1e-3:
        raise ValueError("rel_tol must lie in (0, 1e-3]")
    if not sampling > 0:
        raise ValueError("sampling must be positive")
    has_early_stop = any(s.stop_at_minimum for s in schedule.segments)
    if not has_early_stop and schedule.span < t_end * (1 - 1e-12):
        raise ScheduleError(f"schedule span {schedule.span:g} does not cover t_end={t_end:g}")
    if abs_tol is None:
        abs_tol = rel_tol * max(1.0, params.n_th)

    times = [0.0]
    states = [initial.as_array()]
    g_trace = [schedule.segments[0].g]
    events: list[tuple[float, Event]] = []
    realized: list[tuple[float, float, float]] = []

    x = initial.as_array()
    t = 0.0
    prev_g = None
    for seg in schedule.segments:
        if t >= t_end * (1 - 1e-14):
            break
        # switching bookkeeping at the segment start
        if prev_g is not None or seg.reset_at_start:
            if prev_g is not None and prev_g > 0 and seg.g == 0:
                events.append((t, Event.SWITCH_OFF))
            elif prev_g is not None and prev_g == 0 and seg.g > 0:
                events.append((t, Event.SWITCH_ON))
            if seg.reset_at_start:
                x = apply_reset(x)
                events.append((t, Event.VACUUM_RESET))
                states[-1] = x.copy()
            g_trace[-1] = seg.g
        prev_g = seg.g

        t1 = min(t + seg.duration, t_end)
        if t1 - t <= 1e-13 * max(1.0, t_end):
            t = t1
            continue
        x, t_stop, ts, xs = _integrate_segment(params, seg, x, t, t1, sampling, rel_tol, abs_tol)
        realized.append((t, t_stop, seg.g))
        times.extend(ts)
        states.extend(xs)
        g_trace.extend([seg.g] * len(ts))
        t = t_stop

    if t < t_end * (1 - 1e-12):
        raise ScheduleError(f"schedule exhausted at t={t:g} before t_end={t_end:g}")
    return SimulationResult(np.array(times), np.array(states), np.array(g_trace), events, realized)


def _integrate_segment(params, seg, x0, t0, t1, sampling, rel_tol, abs_tol):
    A, f = drift_matrix(params, seg.g)

    def fun(_t, y):
        return A @ y + f

    evts = None
    if seg.stop_at_minimum:
        row = A[1]
        fb = f[1]

        def at_minimum(_t, y):
            return row @ y + fb

        at_minimum.terminal = True
        at_minimum.direction = 1.0
        evts = [at_minimum]

    grid = _sample_grid(t0, t1, sampling)
    sol = solve_ivp(fun, (t0, t1), x0, method="DOP853", rtol=TOL_SAFETY * rel_tol,
                    atol=TOL_SAFETY * abs_tol,
                    dense_output=True, events=evts)
    if sol.status == -1:
        raise IntegrationError(f"integration failed: {sol.message}", float(sol.t[-1]))
    t_stop = t1
    if seg.stop_at_minimum and sol.status == 1 and len(sol.t_events[0]):
        t_stop = float(sol.t_events[0][0])
        grid = grid[grid < t_stop * (1 - 1e-12)]
    ts = list(grid) + [t_stop]
    xs = [np.asarray(v) for v in sol.sol(np.array(ts)).T]
    # the last sample is the segment end; take the solver's own endpoint there
    xs[-1] = sol.y[:, -1].copy() if t_stop == t1 else sol.sol(t_stop)
    return xs[-1].copy(), t_stop, ts, xs
