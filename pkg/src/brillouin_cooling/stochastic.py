"""Stochastic-trajectory check of the moment equations.

Each trajectory integrates the classical complex Langevin pair

    da = [(i delta1 - gamma/2) a - i g b] dt
    db = [(i delta2 - Gamma/2) b - i g a] dt + sqrt(Gamma) dW,   <|dW|^2> = n_th dt

by Euler-Maruyama. Vacuum optical noise does not enter normally ordered
moments of this linear system, so it is left out. Ensemble averages of
|a|^2, |b|^2 and conj(a) b are the moment-equation solution up to
O(dt) + O(1/sqrt(n_traj)); :func:`em_expected_moments` gives the exact
expectation of the scheme, isolating the O(dt) part.

Every trajectory draws from its own Philox stream keyed by (seed, index),
so results do not depend on blocking or thread count.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import CouplingParams, validate
from .schedule import PulseSchedule

BLOCK = 512
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class EnsembleSpec:
    n_traj: int
    dt: float
    seed: int
    params: CouplingParams
    schedule: PulseSchedule
    t_end: float | None = None
    n_checkpoints: int = 20

    def __post_init__(self):
        validate(self.params)
        if self.seed is None:
            raise ValueError("seed is mandatory")
        if self.n_traj < 100:
            raise ValueError("n_traj must be at least 100")
        p = self.params
        bound = 0.01 / max(p.g, p.Gamma, p.gamma, abs(p.delta1), max((s.g for s in self.schedule.segments)))
        if not 0 < self.dt <= bound * (1 + 1e-12):
            raise ValueError(f"dt={self.dt:g} violates the stability bound {bound:g}")
        if self.n_checkpoints < 1:
            raise ValueError("need at least one checkpoint")

    @property
    def horizon(self) -> float:
        return self.schedule.span if self.t_end is None else self.t_end


@dataclass
class EnsembleResult:
    times: np.ndarray
    n_a_mean: np.ndarray
    n_a_stderr: np.ndarray
    n_b_mean: np.ndarray
    n_b_stderr: np.ndarray
    c_mean: np.ndarray  # complex, <conj(a) b>
    c_stderr: np.ndarray  # complex: stderr of real and imaginary parts


def _time_grid(spec: EnsembleSpec):
    """Intervals between checkpoints and schedule boundaries with their segment index."""
    t_end = spec.horizon
    checkpoints = np.linspace(0.0, t_end, spec.n_checkpoints + 1)
    edges = spec.schedule.boundaries()
    points = sorted(set(float(t) for t in checkpoints) | {float(e) for e in edges if e < t_end})
    merged = [points[0]]
    for t in points[1:]:
        if t - merged[-1] > 1e-12 * max(1.0, t_end):
            merged.append(t)
    intervals = []
    for t0, t1 in zip(merged, merged[1:]):
        seg_idx = int(np.searchsorted(edges, t0, side="right") - 1)
        seg_idx = min(seg_idx, len(spec.schedule.segments) - 1)
        starts_segment = any(abs(t0 - e) <= 1e-12 * max(1.0, t_end) for e in edges[1:-1])
        intervals.append((t0, t1, seg_idx, starts_segment))
    record = [any(abs(t - c) <= 1e-12 * max(1.0, t_end) for c in checkpoints) for t in merged]
    return merged, intervals, record


def _generators(seed: int, start: int, stop: int):
    key0 = int(seed) & _MASK64
    return [np.random.Generator(np.random.Philox(key=np.array([key0, i], dtype=np.uint64)))
            for i in range(start, stop)]


def _run_block(spec: EnsembleSpec, start: int, stop: int, merged, intervals, record):
    p = spec.params
    gens = _generators(spec.seed, start, stop)
    B = stop - start
    init = np.stack([gen.standard_normal(2) for gen in gens])
    a = np.zeros(B, dtype=complex)
    b = np.sqrt(p.n_th / 2) * (init[:, 0] + 1j * init[:, 1])
    n_rec = sum(record)
    out = np.empty((3, n_rec, B), dtype=complex)
    k = 0

    def store():
        nonlocal k
        out[0, k] = np.abs(a) ** 2
        out[1, k] = np.abs(b) ** 2
        out[2, k] = np.conj(a) * b
        k += 1

    if record[0]:
        store()
    la = 1j * p.delta1 - p.gamma / 2
    lb = 1j * p.delta2 - p.Gamma / 2
    for j, (t0, t1, seg_idx, starts_segment) in enumerate(intervals):
        seg = spec.schedule.segments[seg_idx]
        if starts_segment and seg.reset_at_start:
            a[:] = 0.0
        n = int(np.ceil((t1 - t0) / spec.dt - 1e-9))
        h = (t1 - t0) / n
        g = seg.g
        sig = np.sqrt(p.Gamma * p.n_th * h / 2)
        noise = np.stack([gen.standard_normal((n, 2)) for gen in gens], axis=1)  # (n, B, 2)
        for s in range(n):
            dW = sig * (noise[s, :, 0] + 1j * noise[s, :, 1])
            a, b = a + (la * a - 1j * g * b) * h, b + (lb * b - 1j * g * a) * h + dW
        if record[j + 1]:
            store()
    return out


def em_expected_moments(spec: EnsembleSpec, dt: float | None = None) -> EnsembleResult:
    """Exact expectations of the Euler-Maruyama scheme, without sampling noise.

    The scheme is linear, so the covariance ``C = E[z z^H]`` of ``z = (a, b)``
    obeys ``C <- P C P^H + diag(0, Gamma n_th h)`` with ``P = I + h L``. The
    gap between this and the moment equations is the pure discretization
    bias; standard errors are returned as zeros.
    """
    dt = spec.dt if dt is None else dt
    p = spec.params
    merged, intervals, record = _time_grid(spec)
    C = np.diag([0.0, p.n_th]).astype(complex)
    rows = [C.copy()] if record[0] else []
    for j, (t0, t1, seg_idx, starts_segment) in enumerate(intervals):
        seg = spec.schedule.segments[seg_idx]
        if starts_segment and seg.reset_at_start:
            C[0, :] = 0.0
            C[:, 0] = 0.0
        n = int(np.ceil((t1 - t0) / dt - 1e-9))
        h = (t1 - t0) / n
        L = np.array([[1j * p.delta1 - p.gamma / 2, -1j * seg.g],
                      [-1j * seg.g, 1j * p.delta2 - p.Gamma / 2]])
        P = np.eye(2) + h * L
        Q = np.diag([0.0, p.Gamma * p.n_th * h])
        for _ in range(n):
            C = P @ C @ P.conj().T + Q
        if record[j + 1]:
            rows.append(C.copy())
    times = np.array([t for t, r in zip(merged, record) if r])
    Cs = np.array(rows)
    zeros = np.zeros(len(times))
    return EnsembleResult(times, Cs[:, 0, 0].real, zeros, Cs[:, 1, 1].real, zeros.copy(),
                          Cs[:, 1, 0], zeros.astype(complex))


def run_ensemble(spec: EnsembleSpec, workers: int | None = None) -> EnsembleResult:
    """Euler-Maruyama ensemble with exact stepping onto schedule boundaries."""
    merged, intervals, record = _time_grid(spec)
    times = np.array([t for t, r in zip(merged, record) if r])
    blocks = [(s, min(s + BLOCK, spec.n_traj)) for s in range(0, spec.n_traj, BLOCK)]
    if workers is None:
        env = os.environ.get("BRILLOUIN_THREADS")
        workers = max(1, int(env)) if env else 1
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda se: _run_block(spec, *se, merged, intervals, record), blocks))
    else:
        parts = [_run_block(spec, s, e, merged, intervals, record) for s, e in blocks]
    data = np.concatenate(parts, axis=2)  # (3, n_times, n_traj), trajectory order fixed
    n = spec.n_traj
    na, nb, c = data[0].real, data[1].real, data[2]

    def se(x):
        return x.std(axis=1, ddof=1) / np.sqrt(n)

    return EnsembleResult(
        times,
        na.mean(axis=1), se(na),
        nb.mean(axis=1), se(nb),
        c.mean(axis=1), se(c.real) + 1j * se(c.imag),
    )
