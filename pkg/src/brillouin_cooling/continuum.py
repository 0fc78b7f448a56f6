"""Cooling across the continuum of acoustic wavenumber modes.

Under an undepleted pump every wavenumber offset k evolves independently,
with detunings delta1 = v_o k and delta2 = v_ratio delta1.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analytic import rabi_period
from .core import CouplingParams, validate
from .dynamics import DEFAULT_REL_TOL
from .pulses import DEFAULT_TAU_FRACTION, CoolingMetrics, build_schedule, run_protocol
from .schedule import Mode

DEFAULT_SPAN_PERIODS = 30


@dataclass(frozen=True)
class KSweep:
    k_offsets: tuple[float, ...]
    v_ratio: float
    base: CouplingParams
    schedule_mode: Mode = Mode.ANALYTIC_PERIODIC
    v_o: float = 1.0
    tau_fraction: float = DEFAULT_TAU_FRACTION
    # one pump schedule for all k (set by the phase-matched mode) instead of per-k
    global_schedule: bool = False

    def __post_init__(self):
        ks = tuple(float(k) for k in self.k_offsets)
        object.__setattr__(self, "k_offsets", ks)
        if not all(math.isfinite(k) for k in ks):
            raise ValueError("k_offsets must be finite")
        if any(b < a for a, b in zip(ks, ks[1:])):
            raise ValueError("k_offsets must be sorted")
        if not 0 < self.v_ratio < 1:
            raise ValueError("v_ratio must lie in (0, 1)")
        validate(self.base)

    def mode_params(self, k: float) -> CouplingParams:
        d1 = self.v_o * k
        return self.base.with_(delta1=d1, delta2=self.v_ratio * d1)


@dataclass(frozen=True)
class SweepPoint:
    k_offset: float
    R: float
    metrics: CoolingMetrics | None
    error: str | None = None


def _phase_matched(spec: KSweep) -> CouplingParams:
    return spec.base.with_(delta1=0.0, delta2=0.0)


def default_span(spec: KSweep) -> float:
    return DEFAULT_SPAN_PERIODS * rabi_period(_phase_matched(spec))


def _run_point(spec: KSweep, k: float, span: float, rel_tol: float) -> SweepPoint:
    try:
        p = spec.mode_params(k)
        sched_params = _phase_matched(spec) if spec.global_schedule else p
        schedule = build_schedule(sched_params, spec.schedule_mode, span, tau_fraction=spec.tau_fraction)
        kwargs = {"span": span} if spec.schedule_mode is Mode.MINIMUM_DETECT else {}
        _, m = run_protocol(p, schedule, rel_tol, **kwargs)
        return SweepPoint(k, m.R, m)
    except Exception as exc:  # recorded per point; the sweep goes on
        return SweepPoint(k, float("nan"), None, f"{type(exc).__name__}: {exc}")


def _worker_count(workers: int | None) -> int:
    if workers is not None:
        return max(1, workers)
    env = os.environ.get("BRILLOUIN_THREADS")
    return max(1, int(env)) if env else 1


def sweep(spec: KSweep, span: float | None = None, rel_tol: float = DEFAULT_REL_TOL,
          workers: int | None = None) -> list[SweepPoint]:
    """Run the pulsed protocol for every wavenumber offset.

    ``span`` defaults to 30 Rabi periods of the phase-matched mode so every
    k is simulated for the same physical time. Points are independent;
    with ``workers > 1`` they run in separate processes and are merged by
    index, so the output does not depend on the worker count.
    """
    span = default_span(spec) if span is None else span
    n = _worker_count(workers)
    if n == 1 or len(spec.k_offsets) < 2:
        return [_run_point(spec, k, span, rel_tol) for k in spec.k_offsets]
    with ProcessPoolExecutor(max_workers=n) as pool:
        futures = [pool.submit(_run_point, spec, k, span, rel_tol) for k in spec.k_offsets]
        return [f.result() for f in futures]


def r_profile(points: list[SweepPoint]) -> tuple[np.ndarray, np.ndarray]:
    return np.array([p.k_offset for p in points]), np.array([p.R for p in points])
