"""Command-line front end.

Every command reads one flat JSON config (system parameters plus run
settings), applies flag overrides (flag > file > default) and writes CSV or a
text report to ``--out`` or stdout.

Exit codes: 0 success, 2 config/validation error, 3 numerical failure,
4 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from . import adiabatic, dynamics, spectrum
from .errors import ConfigError, NumericalError
from .model import SystemParams, validate

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4
ISOLATION_CAP = 1e12
PARAM_FIELDS = frozenset(f.name for f in dataclasses.fields(SystemParams))


@dataclass
class RunConfig:
    params: SystemParams
    initial: Any = "a"
    t_end: float = 2.0
    samples: int = 201
    times: list[float] | None = None
    flux_points: int = 629
    t: float | None = None
    omega_lo: float = -50.0      # offset from omega_ag
    omega_hi: float = 150.0      # offset from omega_ag
    omega_points: int = 2001
    omega_probe: float | None = None  # absolute, same origin as omega_ag
    out: str | None = None
    comment: str = ""

    def time_grid(self) -> np.ndarray:
        if self.times is not None:
            return np.asarray(self.times, dtype=float)
        return np.linspace(0.0, self.t_end, self.samples)

    def flux_grid(self) -> np.ndarray:
        """``flux_points`` values evenly covering (-pi, pi]."""
        n = self.flux_points
        return -math.pi + 2.0 * math.pi * np.arange(1, n + 1) / n

    def omega_grid(self) -> np.ndarray:
        return spectrum.default_grid(self.params, self.omega_lo, self.omega_hi, self.omega_points)

    def initial_state(self) -> np.ndarray:
        init = self.initial
        if isinstance(init, str):
            return dynamics.basis_state(init)
        return np.array([complex(*a) if isinstance(a, list) else complex(a) for a in init])

    def probe(self) -> float:
        """Probe frequency; defaults to the line of the level not initially occupied."""
        if self.omega_probe is not None:
            return self.omega_probe
        return self.params.omega_ag if self.initial == "b" else self.params.omega_bg


_RUN_TYPES = {
    "initial": None, "t_end": float, "samples": int, "times": list, "flux_points": int,
    "t": float, "omega_lo": float, "omega_hi": float, "omega_points": int,
    "omega_probe": float, "out": str, "comment": str,
}


def _coerce(key: str, value: Any) -> Any:
    kind = _RUN_TYPES[key]
    if key == "initial":
        if isinstance(value, str):
            if value not in dynamics.LEVELS:
                raise ConfigError(f"initial must be one of a, b, c, d, got {value!r}", key)
            return value
        if isinstance(value, list) and len(value) == 4:
            for amp in value:
                ok_scalar = isinstance(amp, (int, float)) and not isinstance(amp, bool)
                ok_pair = isinstance(amp, list) and len(amp) == 2 and all(
                    isinstance(x, (int, float)) for x in amp)
                if not (ok_scalar or ok_pair):
                    raise ConfigError("initial amplitudes must be numbers or [re, im] pairs", key)
            return value
        raise ConfigError("initial must be a level name or a list of four amplitudes", key)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{key} must be an integer", key)
        return value
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{key} must be a number", key)
        return float(value)
    if kind is list:
        if not isinstance(value, list):
            raise ConfigError(f"{key} must be a list", key)
        return [float(v) for v in value]
    if not isinstance(value, str):
        raise ConfigError(f"{key} must be a string", key)
    return value


def config_from_dict(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(data) - PARAM_FIELDS - set(_RUN_TYPES))
    if unknown:
        raise ConfigError(f"unknown config field(s): {', '.join(unknown)}", unknown[0])
    params = validate(SystemParams.from_dict({k: v for k, v in data.items() if k in PARAM_FIELDS}))
    run = {k: _coerce(k, v) for k, v in data.items() if k in _RUN_TYPES}
    cfg = RunConfig(params=params, **run)
    check_config(cfg)
    return cfg


def check_config(cfg: RunConfig) -> None:
    if cfg.times is not None and not cfg.times:
        raise ConfigError("times must be nonempty", "times")
    if cfg.samples < 1:
        raise ConfigError("samples must be >= 1", "samples")
    if cfg.t_end < 0:
        raise ConfigError("t_end must be >= 0", "t_end")
    if cfg.samples > 1 and cfg.t_end == 0:
        raise ConfigError("t_end = 0 allows a single sample only", "samples")
    if cfg.flux_points < 1:
        raise ConfigError("flux_points must be >= 1", "flux_points")
    if not cfg.omega_lo < cfg.omega_hi:
        raise ConfigError("omega_lo must be below omega_hi", "omega_lo")
    if cfg.omega_points < 2:
        raise ConfigError("omega_points must be >= 2", "omega_points")
    if cfg.t is not None and cfg.t < 0:
        raise ConfigError("t must be >= 0", "t")


def preset_names() -> list[str]:
    root = resources.files("fluxion") / "presets"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def read_config_text(ref: str) -> str:
    """Read a config file; a bare preset name such as ``fig2a`` also works."""
    path = Path(ref)
    if path.exists() or ref not in preset_names():
        return path.read_text(encoding="utf-8")
    return (resources.files("fluxion") / "presets" / f"{ref}.json").read_text(encoding="utf-8")


def load_config(ref: str) -> RunConfig:
    text = read_config_text(ref)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return config_from_dict(data)


# -- commands ----------------------------------------------------------------

def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def _csv(header: Sequence[str], rows: Iterable[Sequence[float]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def cmd_simulate(cfg: RunConfig) -> str:
    traj = dynamics.evolve(cfg.params, cfg.initial_state(), cfg.time_grid())
    pops = traj.populations
    rows = ([t, *pop, pop.sum()] for t, pop in zip(traj.times, pops))
    return _csv(["t", "pop_a", "pop_b", "pop_c", "pop_d", "norm"], rows)


def cmd_sweep_flux(cfg: RunConfig) -> str:
    t = cfg.t if cfg.t is not None else adiabatic.adiabatic_report(cfg.params).t_m
    rows = []
    for phi, rec in zip(cfg.flux_grid(), dynamics.sweep_flux(cfg.params, cfg.flux_grid(), t)):
        capped = rec.isolation > ISOLATION_CAP
        rows.append([phi, rec.t_ab, rec.t_ba, min(rec.isolation, ISOLATION_CAP), int(capped)])
    return _csv(["phi", "t_ab", "t_ba", "isolation", "isolation_capped"], rows)


def cmd_spectrum(cfg: RunConfig) -> str:
    result = spectrum.emission_spectrum(cfg.params, cfg.initial_state(), cfg.omega_grid())
    rows = ([w, w - cfg.params.omega_ag, s] for w, s in zip(result.omegas, result.values))
    return _csv(["omega_k", "omega_k_minus_omega_ag", "s_value"], rows)


def cmd_spectrum_flux(cfg: RunConfig) -> str:
    pts = spectrum.spectrum_flux_sweep(cfg.params, cfg.initial_state(), cfg.probe(),
                                       cfg.flux_grid())
    return _csv(["phi", "s_value"], pts)


def _complex_line(name: str, z: complex) -> str:
    return f"  {name:<12}= {z.real:+.6f} {z.imag:+.6f}i   |{name}| = {abs(z):.3f}   arg = {math.atan2(z.imag, z.real):+.6f} rad"


def cmd_adiabatic(cfg: RunConfig) -> str:
    r = adiabatic.adiabatic_report(cfg.params)
    phis = ", ".join(f"{phi:+.6f}" for phi in r.optimal_phis) or "none"
    lines = [
        "adiabatic elimination of levels c, d",
        f"  flux Phi    = {cfg.params.flux:+.6f} rad",
        f"  gamma_a_eff = {r.gamma_a_eff:.3f}",
        f"  gamma_b_eff = {r.gamma_b_eff:.3f}",
        f"  delta_a_eff = {r.delta_a_eff:.3f}",
        f"  delta_b_eff = {r.delta_b_eff:.3f}",
        _complex_line("J_ab", r.j_ab),
        _complex_line("J_ba", r.j_ba),
        f"  t_M         = {r.t_m:.3f}   (a->b {r.t_m_a_to_b:.3f}, b->a {r.t_m_b_to_a:.3f})",
        f"  optimal Phi = {phis}",
        f"  validity    = {r.validity:.3f}",
    ]
    if not r.adiabatic_ok:
        lines.append(f"WARNING: validity ratio {r.validity:.3f} > {adiabatic.VALIDITY_WARN}; "
                     "adiabatic elimination is not reliable here")
    return "\n".join(lines) + "\n"


COMMANDS = {
    "simulate": cmd_simulate,
    "sweep-flux": cmd_sweep_flux,
    "spectrum": cmd_spectrum,
    "spectrum-flux": cmd_spectrum_flux,
    "adiabatic": cmd_adiabatic,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fluxion",
        description="Nonreciprocal transitions in a cyclic four-level system.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True,
                       help="JSON config path, or a bundled preset name (e.g. fig2a)")
        p.add_argument("--out", help="output path (overrides config 'out'; default stdout)")
        p.add_argument("--phi", type=float, help="total flux in rad; replaces the four link phases")
        p.add_argument("--t-end", type=float, help="end of the time grid (simulate)")
        p.add_argument("--samples", type=int, help="time samples including t=0 (simulate)")
        p.add_argument("--flux-points", type=int, help="flux grid size over (-pi, pi]")
        p.add_argument("--omega-lo", type=float, help="window start, offset from omega_ag")
        p.add_argument("--omega-hi", type=float, help="window end, offset from omega_ag")
        p.add_argument("--omega-points", type=int, help="frequency samples in the window")
        p.add_argument("--initial", choices=["a", "b"], help="initial level")
    return parser


def apply_overrides(cfg: RunConfig, args: argparse.Namespace) -> RunConfig:
    if args.phi is not None:
        cfg.params = cfg.params.with_flux(args.phi)
    for attr in ("t_end", "samples", "flux_points", "omega_lo", "omega_hi", "omega_points",
                 "initial", "out"):
        value = getattr(args, attr)
        if value is not None:
            setattr(cfg, attr, value)
    if args.t_end is not None or args.samples is not None:
        cfg.times = None
    validate(cfg.params)
    check_config(cfg)
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = apply_overrides(load_config(args.config), args)
        text = COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        if cfg.out:
            with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
