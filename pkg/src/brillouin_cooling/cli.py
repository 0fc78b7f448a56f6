"""Command-line scenario runner.

Usage::

    brillouin-cooling --config run.ini [--out DIR] [--emit-plot-script]
    brillouin-cooling --list-scenarios

The config is an INI file with sections ``[run]`` (scenario, rel_tol, seed),
``[params]``, ``[schedule]``, ``[sweep]``, ``[oracle]`` and ``[output]``.
Unknown sections or keys are rejected.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import dataclasses
import enum
import io
import json
import math
import os
import sys
import tempfile
import time
from importlib import metadata
from pathlib import Path

from .core import CouplingParams, RegimeTag
from .schedule import Mode
from .scenarios import PRESETS, SCENARIOS, ScenarioConfig, ScenarioError, preset, run_scenario


class ConfigError(ValueError):
    pass


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.replace(";", ",").split(",") if v.strip())


def _windows(text: str) -> tuple[tuple[float, float], ...]:
    out = []
    for part in text.split(","):
        if not part.strip():
            continue
        a, _, b = part.partition(":")
        if not b:
            raise ValueError(f"window {part.strip()!r} is not of the form start:end")
        out.append((float(a), float(b)))
    return tuple(out)


def _bool(text: str) -> bool:
    v = text.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


# section -> key -> converter
SCHEMA = {
    "run": {"scenario": str, "rel_tol": float, "seed": int},
    "params": {"gamma": float, "Gamma": float, "g": float, "delta1": float, "delta2": float,
               "n_th": float, "g_over_Gamma": float, "g_over_gamma": float, "regime": RegimeTag},
    "schedule": {"mode": Mode, "tau_fraction": float, "span": float, "span_periods": float,
                 "t_start_periods": float, "windows": _windows, "windows_periods": _windows,
                 "sampling": float},
    "sweep": {"kind": str, "g_values": _floats, "k_offsets": _floats, "k_extent": float,
              "n_points": int, "v_ratio": float, "v_o": float, "global_schedule": _bool},
    "oracle": {"n_traj": int, "dt": float, "n_checkpoints": int, "t_end": float},
    "output": {"dir": str},
}
CUSTOM_REQUIRED = ("gamma", "Gamma", "g", "n_th")


def read_config(path: str | os.PathLike) -> dict[str, dict]:
    """Parse and type-check an INI config, returning ``{section: {key: value}}``."""
    parser = configparser.ConfigParser(interpolation=None, strict=True)
    parser.optionxform = str  # keys are case-sensitive (gamma vs Gamma)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from exc
    out: dict[str, dict] = {}
    for section in parser.sections():
        if section not in SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        out[section] = {}
        for key, raw in parser.items(section):
            if key not in SCHEMA[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
            try:
                out[section][key] = SCHEMA[section][key](raw.strip())
            except ValueError as exc:
                raise ConfigError(f"bad value for {key!r} in [{section}]: {exc}") from exc
    return out


def resolve(cfg: dict[str, dict]) -> ScenarioConfig:
    """Merge a parsed config over its scenario preset."""
    run = cfg.get("run", {})
    if "scenario" not in run:
        raise ConfigError("missing required key 'scenario' in [run]")
    name = run["scenario"]
    pars = dict(cfg.get("params", {}))
    if name == "custom":
        for key in CUSTOM_REQUIRED:
            if key not in pars and not (key == "g" and ("g_over_Gamma" in pars or "g_over_gamma" in pars)):
                raise ConfigError(f"missing required key {key!r} in [params]")
        base: dict = {"params": CouplingParams(pars["gamma"], pars["Gamma"], 0.0, n_th=pars["n_th"])}
    else:
        try:
            base = preset(name)
        except ScenarioError as exc:
            raise ConfigError(str(exc)) from exc

    # parameters: explicit rates first, then the reduced-coupling aliases
    if "regime" in pars:
        base["regime"] = pars.pop("regime")
    p: CouplingParams = base["params"]
    rates = {k: pars[k] for k in ("gamma", "Gamma", "g", "delta1", "delta2", "n_th") if k in pars}
    p = p.with_(**rates)
    if "g_over_Gamma" in pars:
        p = p.with_(g=pars["g_over_Gamma"] * p.Gamma)
    if "g_over_gamma" in pars:
        p = p.with_(g=pars["g_over_gamma"] * p.gamma)
    base["params"] = p

    sched = dict(cfg.get("schedule", {}))
    if "span" in sched:
        base["span_periods"] = None
    elif "span_periods" in sched:
        base["span"] = None
    base.update(sched)

    sw = dict(cfg.get("sweep", {}))
    kind = sw.pop("kind", None)
    if kind is not None:
        if kind not in ("g", "k"):
            raise ConfigError("sweep kind must be 'g' or 'k'")
        base["pipeline"] = f"{kind}_sweep"
        base.setdefault("mode", Mode.ANALYTIC_PERIODIC)
    base.update(sw)

    if "oracle" in cfg:
        base.update(cfg["oracle"])
        if name == "custom":
            base["pipeline"] = "ensemble"
    if name == "custom" and base.get("pipeline", "trace") == "trace" and (
            "windows" in base or "windows_periods" in base):
        base["pipeline"] = "switch"

    base.update({k: v for k, v in run.items() if k != "scenario"})
    if "dir" in cfg.get("output", {}):
        base["output"] = cfg["output"]["dir"]
    try:
        return ScenarioConfig(scenario=name, **base)
    except TypeError as exc:  # pragma: no cover - schema and dataclass out of sync
        raise ConfigError(str(exc)) from exc


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    x = float(v)
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r} in output")
    return repr(x)


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _jsonable(obj):
    if dataclasses.is_dataclass(obj):
        return {f.name: _jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    return obj


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:  # pragma: no cover
        return "unknown"


PLOT_TEMPLATE = '''"""Plot the CSV files written by brillouin-cooling into this directory."""
import csv
from pathlib import Path

import matplotlib.pyplot as plt

HERE = Path(__file__).resolve().parent
FILES = {files!r}


def load(name):
    with open(HERE / name, newline="") as fh:
        return list(csv.DictReader(fh))


for name in FILES:
    rows = load(name)
    fig, ax = plt.subplots()
    if name == "timeseries.csv":
        ax.plot([float(r["t"]) for r in rows], [float(r["n_b"]) for r in rows], label="n_b")
        ax.set_xlabel("t")
    elif name == "ensemble.csv":
        t = [float(r["t"]) for r in rows]
        m = [float(r["n_b_mean"]) for r in rows]
        e = [float(r["n_b_stderr"]) for r in rows]
        ax.errorbar(t, m, yerr=e, fmt="o", label="ensemble n_b")
        ax.set_xlabel("t")
    else:
        for label in dict.fromkeys(r["label"] for r in rows):
            sub = [r for r in rows if r["label"] == label]
            ax.plot([float(r["x"]) for r in sub], [float(r["R"]) for r in sub], "o-", label=label)
        ax.set_xlabel("x")
        ax.set_ylabel("R")
    ax.legend()
    fig.savefig(HERE / (Path(name).stem + ".png"), dpi=150)
'''


def run(cfg: ScenarioConfig, out_dir: Path, emit_plot_script: bool = False) -> list[str]:
    """Run a resolved scenario and write its files. Returns the file names."""
    out_dir.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    tables, summary = run_scenario(cfg)
    wall = time.perf_counter() - t0
    written = []
    for name, (header, rows) in tables.items():
        _atomic_write(out_dir / name, render_csv(header, rows))
        written.append(name)
    if emit_plot_script:
        _atomic_write(out_dir / "plot_results.py", PLOT_TEMPLATE.format(files=tuple(written)))
        written.append("plot_results.py")
    meta = {
        "scenario": cfg.scenario,
        "config": _jsonable(cfg),
        "version": _version(),
        "seed": cfg.seed,
        "threads": os.environ.get("BRILLOUIN_THREADS"),
        "wall_time_s": wall,
        "summary": _jsonable(summary),
        "files": written,
    }
    _atomic_write(out_dir / "run.meta", json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return written


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="brillouin-cooling", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="INI scenario file")
    ap.add_argument("--out", help="output directory (overrides [output] dir)")
    ap.add_argument("--list-scenarios", action="store_true", help="list scenario presets and exit")
    ap.add_argument("--emit-plot-script", action="store_true",
                    help="also write a standalone matplotlib helper next to the CSVs")
    args = ap.parse_args(argv)

    if args.list_scenarios:
        for name in SCENARIOS:
            desc = PRESETS[name][0] if name in PRESETS else "parameters given in full in the config"
            print(f"{name:14s} {desc}")
        return 0
    if not args.config:
        ap.error("--config is required")
    try:
        cfg = resolve(read_config(args.config))
        out = Path(args.out if args.out else cfg.output)
        files = run(cfg, out, args.emit_plot_script)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {', '.join(files)} and run.meta to {out}")
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
