"""Energy scans: theory vs exact-circuit vs shot-sampled probabilities.

A ScanConfig (JSON file and/or CLI flags) selects one of three
scenarios:

- ``slab``: periodic two-density profile, single-qubit circuit;
- ``earth``: mantle-core-mantle crossing, single-qubit circuit;
- ``msw``: adiabatic solar survival via the two-qubit dilation, either
  applying the exact 4x4 matrix or a freshly optimized two-CNOT
  circuit per grid point.

Each grid point records the analytic oracle value, the exact
statevector probability, and a shot-sampled estimate with its binomial
standard error.  Per-point sampling seeds are seed XOR point-index, so
results do not depend on evaluation order and CSV output is
byte-reproducible for a fixed config and seed.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields, replace

import numpy as np

from .builders import (ENCODED, build_dilation, build_msw_circuit,
                       build_slab_circuit, earth_profile)
from .oscillation import (MatterLayer, OscParams, SlabProfile,
                          prob_msw_adiabatic, prob_slab)
from .optim import FidelityProblem, optimize
from .rng import scan_point_seed
from .simulator import apply_matrix, init_state, probabilities, run, sample


class ConfigError(ValueError):
    """Invalid scan configuration; messages name the offending field."""


SCENARIOS = ("slab", "earth", "msw")
SYNTHESIS_MODES = ("exact", "optimized")
ANGLE_MODES = ("atmospheric", "plain")

DEFAULT_GRIDS = {
    "slab": (1.0, 25.0, 50),
    "earth": (1.0, 25.0, 50),
    "msw": (0.001, 0.050, 50),
}


@dataclass(frozen=True)
class ScanConfig:
    scenario: str
    energies: tuple[float, ...] | None = None
    shots: int = 4096
    seed: int = 0
    compile: bool = False
    synthesis: str = "exact"
    angle_mode: str = "atmospheric"
    # physics overrides (degrees, eV^2, g/cm^3, km)
    theta12_deg: float = 33.5
    theta13_deg: float = 9.0
    theta23_deg: float = 45.0
    dm2_21: float = 7.5e-5
    dm2_31: float = 2.5e-3
    ye: float = 0.5
    rho1: float = 5.0
    rho2: float = 10.0
    dx1_km: float = 500.0
    dx2_km: float = 1000.0
    periods: int = 5
    production_rho: float = 150.0
    restarts: int = 1000
    # outputs
    csv: str | None = None
    svg: str | None = None
    dump_circuit: bool = False

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"field 'scenario': must be one of {SCENARIOS}, "
                              f"got {self.scenario!r}")
        if self.energies is None:
            lo, hi, n = DEFAULT_GRIDS[self.scenario]
            object.__setattr__(self, "energies",
                               tuple(np.linspace(lo, hi, n)))
        else:
            object.__setattr__(self, "energies",
                               tuple(float(e) for e in self.energies))
        if len(self.energies) < 1:
            raise ConfigError("field 'energies': needs at least one point")
        if any(e <= 0 for e in self.energies):
            raise ConfigError("field 'energies': all energies must be positive")
        if any(b <= a for a, b in zip(self.energies, self.energies[1:])):
            raise ConfigError("field 'energies': must be strictly ascending")
        if self.shots < 1:
            raise ConfigError(f"field 'shots': must be >= 1, got {self.shots}")
        if self.seed < 0:
            raise ConfigError(f"field 'seed': must be >= 0, got {self.seed}")
        if self.synthesis not in SYNTHESIS_MODES:
            raise ConfigError(f"field 'synthesis': must be one of "
                              f"{SYNTHESIS_MODES}, got {self.synthesis!r}")
        if self.angle_mode not in ANGLE_MODES:
            raise ConfigError(f"field 'angle_mode': must be one of "
                              f"{ANGLE_MODES}, got {self.angle_mode!r}")
        if self.periods < 1:
            raise ConfigError(f"field 'periods': must be >= 1, got {self.periods}")
        if self.restarts < 1:
            raise ConfigError(f"field 'restarts': must be >= 1, got {self.restarts}")

    @classmethod
    def from_dict(cls, data: dict) -> "ScanConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config field(s): {sorted(unknown)}")
        data = {k: _coerce_field(k, v) for k, v in data.items()}
        if "energies" in data and data["energies"] is not None:
            data["energies"] = _parse_energies(data["energies"])
        if "scenario" not in data:
            raise ConfigError("field 'scenario': required")
        return cls(**data)

    @classmethod
    def from_json(cls, path: str) -> "ScanConfig":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"config {path} line {exc.lineno}: {exc.msg}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config {path}: top level must be an object")
        return cls.from_dict(data)

    def override(self, **kwargs) -> "ScanConfig":
        """New config with the given fields replaced (flags win over file)."""
        updates = {k: v for k, v in kwargs.items() if v is not None}
        if "energies" in updates:
            updates["energies"] = _parse_energies(updates["energies"])
        return replace(self, **updates)


_INT_FIELDS = frozenset({"shots", "seed", "periods", "restarts"})
_FLOAT_FIELDS = frozenset({"theta12_deg", "theta13_deg", "theta23_deg",
                           "dm2_21", "dm2_31", "ye", "rho1", "rho2",
                           "dx1_km", "dx2_km", "production_rho"})
_BOOL_FIELDS = frozenset({"compile", "dump_circuit"})
_STR_FIELDS = frozenset({"scenario", "synthesis", "angle_mode", "csv", "svg"})


def _coerce_field(name: str, value):
    """Check/convert one config value; bad types become ConfigErrors."""
    if value is None or name == "energies":
        return value
    if name in _INT_FIELDS:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"field {name!r}: expected an integer, "
                              f"got {value!r}")
        return value
    if name in _FLOAT_FIELDS:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"field {name!r}: expected a number, "
                              f"got {value!r}")
        return float(value)
    if name in _BOOL_FIELDS:
        if not isinstance(value, bool):
            raise ConfigError(f"field {name!r}: expected true/false, "
                              f"got {value!r}")
        return value
    if name in _STR_FIELDS and not isinstance(value, str):
        raise ConfigError(f"field {name!r}: expected a string, got {value!r}")
    return value


def _parse_energies(spec) -> tuple[float, ...]:
    """Energy grid from a list, a {min,max,points} object, or 'min:max:n'."""
    if isinstance(spec, str):
        parts = spec.split(":")
        if len(parts) != 3:
            raise ConfigError("field 'energies': expected 'min:max:n'")
        try:
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise ConfigError(f"field 'energies': cannot parse {spec!r}") from None
        if n < 1:
            raise ConfigError("field 'energies': n must be >= 1")
        return tuple(np.linspace(lo, hi, n))
    if isinstance(spec, dict):
        extra = set(spec) - {"min", "max", "points"}
        if extra:
            raise ConfigError(f"field 'energies': unknown keys {sorted(extra)}")
        try:
            return tuple(np.linspace(float(spec["min"]), float(spec["max"]),
                                     int(spec["points"])))
        except KeyError as exc:
            raise ConfigError(f"field 'energies': missing key {exc}") from None
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"field 'energies': {exc}") from None
    if isinstance(spec, (list, tuple)):
        try:
            return tuple(float(e) for e in spec)
        except (TypeError, ValueError):
            raise ConfigError("field 'energies': entries must be numbers") \
                from None
    raise ConfigError("field 'energies': expected list, object, or 'min:max:n'")


@dataclass(frozen=True)
class ScanPoint:
    energy_gev: float
    channel: str | None        # None for slab/earth; "ee"/"emu" for msw
    p_theory: float
    p_exact: float
    p_sampled: float
    stderr_sampled: float


@dataclass(frozen=True)
class ScanResult:
    scenario: str
    shots: int
    points: tuple[ScanPoint, ...]


def slab_profile_from_config(config: ScanConfig) -> SlabProfile:
    return SlabProfile(
        (MatterLayer(config.rho1, config.ye, config.dx1_km),
         MatterLayer(config.rho2, config.ye, config.dx2_km)),
        period_count=config.periods)


def scenario_circuit(config: ScanConfig, energy_gev: float):
    """The circuit the scan would execute at one energy (for --dump-circuit)."""
    p, profile, th23 = _single_qubit_setup(config)
    if config.scenario in ("slab", "earth"):
        return build_slab_circuit(p, profile, energy_gev,
                                  compile=config.compile, theta23=th23)
    p12 = OscParams(math.radians(config.theta12_deg), config.dm2_21)
    layer = MatterLayer(config.production_rho, config.ye, 0.0)
    ds = build_dilation(p12, layer, energy_gev)
    res = optimize(FidelityProblem(target=ds.u2q, restarts=config.restarts),
                   scan_point_seed(config.seed, 0))
    return build_msw_circuit(res.params)


def _single_qubit_setup(config: ScanConfig):
    p = OscParams(math.radians(config.theta13_deg), config.dm2_31)
    profile = (earth_profile(config.ye) if config.scenario == "earth"
               else slab_profile_from_config(config))
    th23 = (math.radians(config.theta23_deg)
            if config.angle_mode == "atmospheric" else None)
    return p, profile, th23


def run_scan(config: ScanConfig) -> ScanResult:
    if config.scenario in ("slab", "earth"):
        points = _run_single_qubit_scan(config)
    else:
        points = _run_msw_scan(config)
    return ScanResult(scenario=config.scenario, shots=config.shots,
                      points=tuple(points))


def _run_single_qubit_scan(config: ScanConfig) -> list[ScanPoint]:
    p, profile, th23 = _single_qubit_setup(config)
    points = []
    for i, e in enumerate(config.energies):
        circuit = build_slab_circuit(p, profile, e, compile=config.compile,
                                     theta23=th23)
        state, measured = run(circuit)
        qubit = measured[0]
        p_exact = probabilities(state, qubit)[0]
        shot = sample(state, qubit, config.shots,
                      scan_point_seed(config.seed, i))
        p_hat = shot.counts["0"] / config.shots
        theory = prob_slab(p, profile, e, "mu", th23)
        points.append(ScanPoint(
            energy_gev=e, channel=None, p_theory=theory, p_exact=p_exact,
            p_sampled=p_hat, stderr_sampled=_binomial_stderr(p_hat, config.shots)))
    return points


def _run_msw_scan(config: ScanConfig) -> list[ScanPoint]:
    p = OscParams(math.radians(config.theta12_deg), config.dm2_21)
    layer = MatterLayer(config.production_rho, config.ye, 0.0)
    points = []
    for i, e in enumerate(config.energies):
        ds = build_dilation(p, layer, e)
        if config.synthesis == "exact":
            state = apply_matrix(init_state(2), ds.u2q)
        else:
            res = optimize(
                FidelityProblem(target=ds.u2q, restarts=config.restarts),
                scan_point_seed(config.seed, i))
            state, _ = run(build_msw_circuit(res.params))
        pee = probabilities(state, ENCODED)[0]
        shot = sample(state, ENCODED, config.shots,
                      scan_point_seed(config.seed, i))
        pee_hat = shot.counts["0"] / config.shots
        th_ee, th_emu = prob_msw_adiabatic(p, layer, e)
        err = _binomial_stderr(pee_hat, config.shots)
        points.append(ScanPoint(e, "ee", th_ee, pee, pee_hat, err))
        points.append(ScanPoint(e, "emu", th_emu, 1.0 - pee, 1.0 - pee_hat, err))
    return points


def _binomial_stderr(p_hat: float, shots: int) -> float:
    return math.sqrt(max(p_hat * (1.0 - p_hat), 0.0) / shots)


# --- CSV ----------------------------------------------------------------------

CSV_HEADER = "energy_gev,p_theory,p_exact,p_sampled,stderr"


def emit_csv(result: ScanResult, path: str) -> str:
    """Write one row per scan point; repr() floats round-trip exactly."""
    with_channel = any(pt.channel is not None for pt in result.points)
    lines = [CSV_HEADER + (",channel" if with_channel else "")]
    for pt in result.points:
        row = [repr(float(v)) for v in (pt.energy_gev, pt.p_theory,
                                        pt.p_exact, pt.p_sampled,
                                        pt.stderr_sampled)]
        if with_channel:
            row.append(pt.channel)
        lines.append(",".join(row))
    text = "\n".join(lines) + "\n"
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write CSV {path}: {exc}") from exc
    return path


# --- SVG ----------------------------------------------------------------------

_COLORS = ("#1f77b4", "#d62728")
_CHANNEL_LABELS = {None: "P(nu_mu -> nu_e)", "ee": "P(nu_e -> nu_e)",
                   "emu": "P(nu_e -> nu_mu)"}
_W, _H = 640, 440
_ML, _MR, _MT, _MB = 70, 24, 20, 56


def emit_plot(result: ScanResult, path: str) -> str:
    """Standalone SVG: theory polyline, sampled markers with error bars.

    Byte-deterministic for a fixed ScanResult (fixed-precision
    coordinates, no timestamps or generated ids).
    """
    energies = sorted({pt.energy_gev for pt in result.points})
    if len(energies) < 2:
        raise ValueError("plot needs at least 2 energy points")
    emin, emax = energies[0], energies[-1]

    def sx(e: float) -> float:
        return _ML + (e - emin) / (emax - emin) * (_W - _ML - _MR)

    def sy(prob: float) -> float:
        return _MT + (1.0 - prob) * (_H - _MT - _MB)

    channels: dict[str | None, list[ScanPoint]] = {}
    for pt in result.points:
        channels.setdefault(pt.channel, []).append(pt)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
    ]
    # axes
    x0, x1, y0, y1 = _ML, _W - _MR, _H - _MB, _MT
    parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" '
                 'stroke="black" stroke-width="1"/>')
    parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" '
                 'stroke="black" stroke-width="1"/>')
    for tick in np.linspace(emin, emax, 6):
        tx = sx(tick)
        parts.append(f'<line x1="{tx:.2f}" y1="{y0}" x2="{tx:.2f}" '
                     f'y2="{y0 + 5}" stroke="black" stroke-width="1"/>')
        parts.append(f'<text x="{tx:.2f}" y="{y0 + 20}" font-size="12" '
                     f'text-anchor="middle">{tick:g}</text>')
    for tick in (0.0, 0.25, 0.5, 0.75, 1.0):
        ty = sy(tick)
        parts.append(f'<line x1="{x0 - 5}" y1="{ty:.2f}" x2="{x0}" '
                     f'y2="{ty:.2f}" stroke="black" stroke-width="1"/>')
        parts.append(f'<text x="{x0 - 9}" y="{ty + 4:.2f}" font-size="12" '
                     f'text-anchor="end">{tick:g}</text>')
    parts.append(f'<text x="{(x0 + x1) / 2:.2f}" y="{_H - 14}" font-size="14" '
                 'text-anchor="middle">Energy [GeV]</text>')
    parts.append(f'<text x="18" y="{(y0 + y1) / 2:.2f}" font-size="14" '
                 f'text-anchor="middle" transform="rotate(-90 18 '
                 f'{(y0 + y1) / 2:.2f})">Probability</text>')

    for c_idx, (channel, pts) in enumerate(sorted(channels.items(),
                                                  key=lambda kv: str(kv[0]))):
        color = _COLORS[c_idx % len(_COLORS)]
        pts = sorted(pts, key=lambda pt: pt.energy_gev)
        poly = " ".join(f"{sx(pt.energy_gev):.2f},{sy(pt.p_theory):.2f}"
                        for pt in pts)
        parts.append(f'<polyline points="{poly}" fill="none" '
                     f'stroke="{color}" stroke-width="1.5"/>')
        for pt in pts:
            mx, my = sx(pt.energy_gev), sy(pt.p_sampled)
            lo = sy(max(pt.p_sampled - pt.stderr_sampled, 0.0))
            hi = sy(min(pt.p_sampled + pt.stderr_sampled, 1.0))
            parts.append(f'<line x1="{mx:.2f}" y1="{lo:.2f}" x2="{mx:.2f}" '
                         f'y2="{hi:.2f}" stroke="{color}" stroke-width="1"/>')
            parts.append(f'<line x1="{mx - 3:.2f}" y1="{my - 3:.2f}" '
                         f'x2="{mx + 3:.2f}" y2="{my + 3:.2f}" '
                         f'stroke="{color}" stroke-width="1.2"/>')
            parts.append(f'<line x1="{mx - 3:.2f}" y1="{my + 3:.2f}" '
                         f'x2="{mx + 3:.2f}" y2="{my - 3:.2f}" '
                         f'stroke="{color}" stroke-width="1.2"/>')
        label = _CHANNEL_LABELS.get(channel, str(channel))
        parts.append(f'<text x="{x1 - 6}" y="{y1 + 16 + 16 * c_idx}" '
                     f'font-size="12" text-anchor="end" '
                     f'fill="{color}">{label}</text>')

    parts.append("</svg>")
    text = "\n".join(parts) + "\n"
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write SVG {path}: {exc}") from exc
    return path
