"""Named scenario presets and the pipelines that run them.

A scenario resolves to a :class:`ScenarioConfig` and produces tables keyed
by file name. Presets are self-contained; any key may still be overridden.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .analytic import rabi_period
from .continuum import KSweep, sweep
from .core import CouplingParams, RegimeTag, backward_params, forward_params, thermal_initial_state, validate
from .dynamics import DEFAULT_REL_TOL, SimulationResult, integrate
from .pulses import DEFAULT_TAU_FRACTION, build_schedule, run_protocol, switchability_schedule
from .schedule import Event, Mode, PulseSchedule
from .stochastic import EnsembleSpec, run_ensemble

TIMESERIES_HEADER = ("t", "g_t", "n_a", "n_b", "c_re", "c_im", "event")
SWEEP_HEADER = ("x", "label", "R", "nb_plateau_mean", "nb_plateau_lo", "nb_plateau_hi",
                "ins_limit", "upp_limit", "ss_limit")
ENSEMBLE_HEADER = ("t", "n_b_mean", "n_b_stderr", "n_a_mean", "n_a_stderr")


class ScenarioError(ValueError):
    pass


@dataclass
class ScenarioConfig:
    scenario: str
    params: CouplingParams
    regime: RegimeTag = RegimeTag.BACKWARD
    pipeline: str = "trace"  # trace | g_sweep | k_sweep | switch | ensemble
    mode: Mode = Mode.CONSTANT_ON
    tau_fraction: float = DEFAULT_TAU_FRACTION
    span: float | None = None  # absolute time
    span_periods: float | None = None  # span in Rabi periods
    t_start_periods: float | None = None
    windows_periods: tuple[tuple[float, float], ...] = ()
    windows: tuple[tuple[float, float], ...] = ()
    sampling: float | None = None
    g_values: tuple[float, ...] = ()
    k_extent: float = 3.0  # k grid spans +-k_extent * g
    n_points: int = 13
    k_offsets: tuple[float, ...] = ()
    v_ratio: float = 1e-4
    v_o: float = 1.0
    global_schedule: bool = False
    n_traj: int = 10_000
    dt: float = 1e-3
    n_checkpoints: int = 20
    t_end: float | None = None
    rel_tol: float = DEFAULT_REL_TOL
    seed: int = 0
    output: str = "out"

    @property
    def g_label(self) -> str:
        return "g_over_gamma" if self.regime is RegimeTag.FORWARD_INTERMODAL else "g_over_Gamma"

    @property
    def reference_rate(self) -> float:
        p = self.params
        return p.gamma if self.regime is RegimeTag.FORWARD_INTERMODAL else p.Gamma


def _bw(**kw) -> dict:
    return dict(params=backward_params(**kw), regime=RegimeTag.BACKWARD)


def _fw(**kw) -> dict:
    return dict(params=forward_params(**kw), regime=RegimeTag.FORWARD_INTERMODAL)


PRESETS: dict[str, tuple[str, Callable[[], dict]]] = {
    "fig2a": ("constant coupling trace, backward regime",
              lambda: {**_bw(g=10.0), "span": 10.0}),
    "fig2bc": ("pulsed trace, tau = 0.05 T, 20 Rabi periods",
               lambda: {**_bw(g=10.0), "mode": Mode.ANALYTIC_PERIODIC, "span_periods": 20.0}),
    "fig2bc_tau01": ("pulsed trace, tau = 0.1 T, 20 Rabi periods",
                     lambda: {**_bw(g=10.0), "mode": Mode.ANALYTIC_PERIODIC, "span_periods": 20.0,
                              "tau_fraction": 0.1}),
    "fig2d": ("pulsed trace, tau = 0.05 T, 30 Rabi periods",
              lambda: {**_bw(g=10.0), "mode": Mode.ANALYTIC_PERIODIC, "span_periods": 30.0}),
    "fig2e": ("cooling factor versus coupling strength",
              lambda: {**_bw(g=10.0), "pipeline": "g_sweep", "mode": Mode.ANALYTIC_PERIODIC,
                       "span_periods": 30.0, "g_values": (3.0, 5.0, 10.0, 15.0, 30.0)}),
    "fig3": ("constant coupling trace, forward intermodal regime",
             lambda: {**_fw(g=15.0), "span": 10.0}),
    "figS1": ("constant coupling trace for the closed-form overlay",
              lambda: {**_bw(g=5.0), "span": 8.0}),
    "figS2": ("modulation delayed to t = 2.1 T, tau = 0.1 T",
              lambda: {**_bw(g=10.0), "mode": Mode.ANALYTIC_PERIODIC, "span_periods": 20.0,
                       "tau_fraction": 0.1, "t_start_periods": 2.1}),
    "figS3": ("modulation switched on, off and on again, backward regime",
              lambda: {**_bw(g=10.0), "pipeline": "switch", "tau_fraction": 0.1,
                       "windows_periods": ((0.0, 20.0), (100.0, 120.0)), "span_periods": 200.0}),
    "figS4": ("cooling factor versus wavenumber offset",
              lambda: {**_bw(g=10.0), "pipeline": "k_sweep", "mode": Mode.ANALYTIC_PERIODIC,
                       "span_periods": 30.0, "g_values": (3.0, 5.0, 10.0, 15.0)}),
    "figS6": ("pulsed trace, forward regime, tau = 0.1 T",
              lambda: {**_fw(g=15.0), "mode": Mode.ANALYTIC_PERIODIC, "span_periods": 30.0,
                       "tau_fraction": 0.1}),
    "figS7": ("modulation switched on, off and on again, forward regime",
              lambda: {**_fw(g=15.0), "pipeline": "switch", "tau_fraction": 0.1,
                       "windows_periods": ((0.0, 20.0), (100.0, 120.0)), "span_periods": 200.0}),
    "oracle": ("stochastic-trajectory ensemble against the moment equations",
               lambda: {**_bw(g=2.0), "pipeline": "ensemble", "span": 5.0, "seed": 1}),
}

SCENARIOS = tuple(PRESETS) + ("custom",)


def preset(name: str) -> dict:
    if name not in PRESETS:
        raise ScenarioError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}")
    return PRESETS[name][1]()


# ---------------------------------------------------------------- pipelines


def _span(cfg: ScenarioConfig, params: CouplingParams) -> float:
    if cfg.span is not None:
        return cfg.span
    if cfg.span_periods is not None:
        return cfg.span_periods * rabi_period(params)
    return 10.0 / cfg.reference_rate


def _schedule(cfg: ScenarioConfig, params: CouplingParams, span: float) -> PulseSchedule:
    if cfg.mode is Mode.CONSTANT_ON:
        return PulseSchedule.constant(params.g, span)
    t_start = None
    if cfg.t_start_periods is not None:
        t_start = cfg.t_start_periods * rabi_period(params)
    if cfg.mode is Mode.MINIMUM_DETECT:
        return build_schedule(params, cfg.mode, 2 * span, tau_fraction=cfg.tau_fraction)
    return build_schedule(params, cfg.mode, span, tau_fraction=cfg.tau_fraction, t_start=t_start)


def _sampling(cfg: ScenarioConfig, params: CouplingParams, span: float) -> float:
    if cfg.sampling is not None:
        return cfg.sampling
    if params.g > 0:
        return rabi_period(params) / 64
    return span / 2000


def timeseries_rows(res: SimulationResult) -> list[tuple]:
    # one label per sample; a reset implies the switch-on at the same instant
    label: dict[float, str] = {}
    for t, e in res.schedule_events:
        if label.get(t) != Event.VACUUM_RESET.value:
            label[t] = e.value
    return [(t, g, *x, label.get(t, "")) for t, g, x in zip(res.times, res.g_trace, res.states)]


def _trace(cfg: ScenarioConfig) -> tuple[dict, dict]:
    p = cfg.params
    span = _span(cfg, p)
    schedule = _schedule(cfg, p, span)
    res, m = run_protocol(p, schedule, cfg.rel_tol, sampling=_sampling(cfg, p, span), span=span)
    summary = {"span": span, "plateau_mean": m.plateau_mean, "R": m.R, "R_mean": m.R_mean,
               "ss_limit": m.ss_limit, "window": list(m.window), "window_convention": m.window_convention}
    return {"timeseries.csv": (TIMESERIES_HEADER, timeseries_rows(res))}, summary


def _switch(cfg: ScenarioConfig) -> tuple[dict, dict]:
    p = cfg.params
    T = rabi_period(p)
    span = _span(cfg, p)
    windows = cfg.windows or tuple((a * T, b * T) for a, b in cfg.windows_periods)
    schedule = switchability_schedule(p, windows, span, tau_fraction=cfg.tau_fraction)
    res, _ = run_protocol(p, schedule, cfg.rel_tol, sampling=_sampling(cfg, p, span), span=span)
    return ({"timeseries.csv": (TIMESERIES_HEADER, timeseries_rows(res))},
            {"span": span, "windows": [list(w) for w in windows]})


def _sweep_row(x: float, label: str, m) -> tuple:
    return (x, label, m.R, m.plateau_mean, m.plateau_lo, m.plateau_hi, m.ins_limit, m.upp_limit, m.ss_limit)


def _g_sweep(cfg: ScenarioConfig) -> tuple[dict, dict]:
    rows = []
    ref = cfg.reference_rate
    for gr in cfg.g_values:
        p = cfg.params.with_(g=gr * ref)
        span = _span(cfg, p)
        _, m = run_protocol(p, _schedule(cfg, p, span), cfg.rel_tol, span=span)
        rows.append(_sweep_row(gr, cfg.g_label, m))
    return {"sweep.csv": (SWEEP_HEADER, rows)}, {"g_values": list(cfg.g_values)}


def _k_sweep(cfg: ScenarioConfig) -> tuple[dict, dict]:
    rows, errors = [], []
    ref = cfg.reference_rate
    g_values = cfg.g_values or (cfg.params.g / ref,)
    for gr in g_values:
        base = cfg.params.with_(g=gr * ref)
        if cfg.k_offsets:
            ks = tuple(cfg.k_offsets)
        else:
            half = cfg.k_extent * base.g / cfg.v_o
            ks = tuple(np.linspace(-half, half, cfg.n_points))
        spec = KSweep(ks, cfg.v_ratio, base, cfg.mode, cfg.v_o, cfg.tau_fraction, cfg.global_schedule)
        span = cfg.span if cfg.span is not None else (cfg.span_periods or 30.0) * rabi_period(
            base.with_(delta1=0.0, delta2=0.0))
        label = f"{cfg.g_label}={gr!r}"
        for pt in sweep(spec, span, cfg.rel_tol):
            if pt.error:
                errors.append(f"{label} k={pt.k_offset!r}: {pt.error}")
                continue
            rows.append(_sweep_row(cfg.v_o * pt.k_offset / ref, label, pt.metrics))
    if errors:
        raise ScenarioError("sweep points failed: " + "; ".join(errors))
    return {"sweep.csv": (SWEEP_HEADER, rows)}, {"g_values": list(g_values)}


def _ensemble(cfg: ScenarioConfig) -> tuple[dict, dict]:
    p = cfg.params
    t_end = cfg.t_end if cfg.t_end is not None else _span(cfg, p)
    schedule = _schedule(cfg, p, t_end)
    spec = EnsembleSpec(cfg.n_traj, cfg.dt, cfg.seed, p, schedule, t_end, cfg.n_checkpoints)
    ens = run_ensemble(spec)
    rows = list(zip(ens.times, ens.n_b_mean, ens.n_b_stderr, ens.n_a_mean, ens.n_a_stderr))
    ode = integrate(p, schedule, thermal_initial_state(p), t_end, _sampling(cfg, p, t_end), cfg.rel_tol)
    return ({"ensemble.csv": (ENSEMBLE_HEADER, rows),
             "timeseries.csv": (TIMESERIES_HEADER, timeseries_rows(ode))},
            {"t_end": t_end, "n_traj": cfg.n_traj, "dt": cfg.dt})


PIPELINES = {"trace": _trace, "switch": _switch, "g_sweep": _g_sweep, "k_sweep": _k_sweep,
             "ensemble": _ensemble}


def run_scenario(cfg: ScenarioConfig) -> tuple[dict, dict]:
    """Execute ``cfg`` and return ``(tables, summary)``.

    ``tables`` maps file names to ``(header, rows)``.
    """
    validate(cfg.params)
    if cfg.pipeline not in PIPELINES:
        raise ScenarioError(f"unknown pipeline {cfg.pipeline!r}")
    return PIPELINES[cfg.pipeline](cfg)


__all__ = ["ScenarioConfig", "ScenarioError", "PRESETS", "SCENARIOS", "preset", "run_scenario",
           "TIMESERIES_HEADER", "SWEEP_HEADER", "ENSEMBLE_HEADER"]
