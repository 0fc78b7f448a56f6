"""Pulsed-coupling protocols and cooling metrics.

The pump is switched off at the end of each swapping-cooling half cycle,
held off for ``tau`` while the light leaves the waveguide (vacuum reset of
the optical mode), and switched back on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import instantaneous_limit, rabi_period, steady_state_limit, upper_limit
from .core import CouplingParams, MomentState, thermal_initial_state, validate
from .dynamics import DEFAULT_REL_TOL, SimulationResult, integrate
from .schedule import Event, Mode, PulseSchedule, ScheduleError, Segment

DEFAULT_TAU_FRACTION = 0.05  # pump-off time as a fraction of the Rabi period
PLATEAU_FRACTION = 0.5
MIN_PLATEAU_CYCLES = 5
SAMPLES_PER_PERIOD = 64


@dataclass(frozen=True)
class CoolingMetrics:
    nb_min: float
    plateau_mean: float
    plateau_lo: float
    plateau_hi: float
    R: float  # lower plateau edge over n_th
    R_mean: float  # plateau mean over n_th
    ins_limit: float
    upp_limit: float
    ss_limit: float
    window: tuple[float, float]
    zero_load: bool = False
    # the averaging window is a convention of this package, not a measured quantity
    window_convention: str = "final 50% of span, after at least 5 modulation cycles"


def build_schedule(params: CouplingParams, mode: Mode | str, span: float, *,
                   tau_fraction: float = DEFAULT_TAU_FRACTION, t_start: float | None = None,
                   n_cycles: int | None = None) -> PulseSchedule:
    """Build a coupling schedule covering ``[0, span]``.

    ``ANALYTIC_PERIODIC`` keeps the pump on until ``t_start`` (default half a
    Rabi period, where the first phonon minimum sits) and then repeats
    ``[off: tau][on + reset: T/2 - tau]``. ``MINIMUM_DETECT`` instead ends
    every on-window when the integrator sees the phonon number turn upward.
    The Rabi period ``T`` comes from the drift-matrix spectrum.
    """
    validate(params)
    mode = Mode(mode)
    if not span > 0:
        raise ScheduleError("span must be positive")
    g = params.g
    if mode is Mode.CONSTANT_ON:
        return PulseSchedule.constant(g, span)
    if mode is Mode.CUSTOM:
        raise ScheduleError("custom schedules are built directly from segments")
    if g <= 0:
        raise ScheduleError("periodic modes need g > 0")

    T = rabi_period(params)
    half = T / 2
    tau = tau_fraction * T
    if span < half:
        raise ScheduleError(f"span {span:g} shorter than one half Rabi period {half:g}")
    if not 0 < tau < half:
        raise ScheduleError(f"tau={tau:g} must lie inside the on-window (0, {half:g})")
    settings = {"T": T, "tau": tau, "tau_fraction": tau_fraction, "g": g}

    if mode is Mode.ANALYTIC_PERIODIC:
        t_start = half if t_start is None else float(t_start)
        if t_start <= 0:
            raise ScheduleError("t_start must be positive")
        segs = [Segment(min(t_start, span), g)]
        t = t_start
        cycles = 0
        while t < span * (1 - 1e-12) and (n_cycles is None or cycles < n_cycles):
            off = min(tau, span - t)
            segs.append(Segment(off, 0.0))
            t += off
            if t >= span * (1 - 1e-12):
                break
            on = min(half - tau, span - t)
            segs.append(Segment(on, g, reset_at_start=True))
            t += on
            cycles += 1
        if t < span * (1 - 1e-12):
            segs.append(Segment(span - t, g))
        settings.update(t_start=t_start, half_period=half, n_cycles=cycles)
        return PulseSchedule(tuple(segs), mode, settings)

    # MINIMUM_DETECT: on-window lengths are only known while integrating
    n = n_cycles if n_cycles is not None else int(math.ceil(span / half)) + 1
    segs = [Segment(span, g, stop_at_minimum=True)]
    for _ in range(n):
        segs.append(Segment(tau, 0.0))
        segs.append(Segment(span, g, reset_at_start=True, stop_at_minimum=True))
    segs.append(Segment(span, g, reset_at_start=True))
    settings.update(n_cycles=n)
    return PulseSchedule(tuple(segs), mode, settings)


def _time_weighted_mean(t: np.ndarray, y: np.ndarray) -> float:
    if len(t) < 2:
        return float(y[0])
    return float(np.trapezoid(y, t) / (t[-1] - t[0]))


def cooling_metrics(params: CouplingParams, result: SimulationResult, span: float | None = None,
                    g_on: float | None = None) -> CoolingMetrics:
    """Plateau statistics over the final half of the run.

    ``R`` is the lower plateau edge (the instantaneous cooling limit reached
    at the end of each on-window) divided by n_th; ``R_mean`` uses the
    time-weighted plateau mean instead.

    The window starts at ``span/2`` or at the fifth switch-off, whichever is
    later (falling back to ``span/2`` when the run is too short for that).
    """
    span = float(result.times[-1]) if span is None else span
    g_on = params.g if g_on is None else g_on
    start = PLATEAU_FRACTION * span
    offs = [t for t, e in result.schedule_events if e is Event.SWITCH_OFF]
    if len(offs) >= MIN_PLATEAU_CYCLES and offs[MIN_PLATEAU_CYCLES - 1] < 0.9 * span:
        start = max(start, offs[MIN_PLATEAU_CYCLES - 1])
    mask = result.times >= start
    t, nb = result.times[mask], result.n_b[mask]
    mean = _time_weighted_mean(t, nb)
    on = params.with_(g=g_on)
    ins = instantaneous_limit(on) if g_on > 0 else math.nan
    upp = upper_limit(on) if g_on > 0 else math.nan
    zero = params.n_th == 0
    lo = float(nb.min())
    R = 1.0 if zero else lo / params.n_th
    R_mean = 1.0 if zero else mean / params.n_th
    return CoolingMetrics(float(result.n_b.min()), mean, lo, float(nb.max()), R, R_mean,
                          ins, upp, steady_state_limit(on), (float(t[0]), float(t[-1])), zero)


def run_protocol(params: CouplingParams, schedule: PulseSchedule, rel_tol: float = DEFAULT_REL_TOL,
                 *, initial: MomentState | None = None, sampling: float | None = None,
                 span: float | None = None) -> tuple[SimulationResult, CoolingMetrics]:
    """Integrate ``schedule`` from the thermal state and score the plateau."""
    validate(params)
    span = schedule.span if span is None else span
    if schedule.mode is Mode.MINIMUM_DETECT and span >= schedule.span:
        raise ScheduleError("give an explicit span for minimum-detect schedules")
    initial = thermal_initial_state(params) if initial is None else initial
    if sampling is None:
        sampling = _default_sampling(params, span)
    res = integrate(params, schedule, initial, span, sampling, rel_tol)
    g_on = max(s.g for s in schedule.segments)
    return res, cooling_metrics(params, res, span, g_on)


def _default_sampling(params: CouplingParams, span: float) -> float:
    if params.g > 0:
        try:
            return rabi_period(params) / SAMPLES_PER_PERIOD
        except ValueError:
            pass
    return span / 2000


def switchability_schedule(params: CouplingParams, on_windows, span: float, *,
                           tau_fraction: float = DEFAULT_TAU_FRACTION) -> PulseSchedule:
    """Constant coupling with pulsed modulation confined to ``on_windows``.

    Inside a window starting at ``t0 > 0`` the pump goes off immediately and
    the ``[off][on + reset]`` cycle restarts; a window starting at 0 first
    completes the initial cooling half cycle. Leaving a window during an
    off-segment switches the pump back on with a vacuum reset.
    """
    validate(params)
    windows = [(float(a), float(b)) for a, b in on_windows]
    for (a, b) in windows:
        if not 0 <= a < b:
            raise ScheduleError(f"bad window ({a}, {b})")
    for (a0, b0), (a1, b1) in zip(windows, windows[1:]):
        if a1 < b0:
            raise ScheduleError(f"overlapping windows ({a0}, {b0}) and ({a1}, {b1})")
    g = params.g
    T = rabi_period(params)
    half, tau = T / 2, tau_fraction * T
    segs: list[Segment] = []
    t = 0.0

    def add(duration, g_val, reset=False):
        nonlocal t
        if duration > 1e-12 * max(span, 1.0):
            segs.append(Segment(duration, g_val, reset))
            t += duration

    pending_reset = False
    for a, b in windows:
        b = min(b, span)
        if a >= span:
            break
        add(a - t, g, pending_reset)
        pending_reset = False
        tc = half if a == 0 else a
        add(min(tc, b) - t, g)
        while t < b * (1 - 1e-12):
            off = min(tau, b - t)
            add(off, 0.0)
            if t >= b * (1 - 1e-12):
                pending_reset = True
                break
            add(min(half - tau, b - t), g, True)
    add(span - t, g, pending_reset)
    return PulseSchedule(tuple(segs), Mode.CUSTOM,
                         {"T": T, "tau": tau, "windows": tuple(windows), "g": g})


def switchability_trace(params: CouplingParams, on_windows, span: float,
                        rel_tol: float = DEFAULT_REL_TOL, *, tau_fraction: float = DEFAULT_TAU_FRACTION,
                        sampling: float | None = None) -> SimulationResult:
    schedule = switchability_schedule(params, on_windows, span, tau_fraction=tau_fraction)
    res, _ = run_protocol(params, schedule, rel_tol, sampling=sampling, span=span)
    return res
