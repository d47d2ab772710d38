"""Flat dotted-key configuration files for sweeps and state dumps.

The format is one ``key = value`` pair per line (``#`` starts a comment),
with dotted keys grouping related settings, e.g.::

    state.family = PADFS
    state.alpha.mag = 1.0
    state.alpha.phase = 0.0
    state.n = 1
    state.added = 1
    sweep.param = alpha.mag
    sweep.start = 0.0
    sweep.stop = 5.0
    sweep.steps = 51
    quantities = mandel_q, antibunching:2, linear_entropy
    output = qm_padfs.csv

The complex displacement is entered as (magnitude, phase-in-radians) via
``state.alpha.mag`` / ``state.alpha.phase``. A second swept axis may be
given with ``sweep2.*``; rows then iterate the outer sweep first.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, replace

from .core import TruncationPolicy
from .exceptions import ConfigError, InvalidParameterError
from .states import StateSpec, canonical_family

_STATE_INT_KEYS = ("n", "added", "subtracted", "M")
_STATE_FLOAT_KEYS = ("p", "chi", "alpha.mag", "alpha.phase")


def parse_flat_config(text: str) -> dict[str, str]:
    """Parse the flat key = value format, reporting line numbers on errors."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value in {raw!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


@dataclass(frozen=True)
class SweepAxis:
    param: str
    start: float
    stop: float
    steps: int

    def values(self) -> list[float]:
        if self.steps == 1:
            return [self.start]
        step = (self.stop - self.start) / (self.steps - 1)
        return [self.start + i * step for i in range(self.steps)]


@dataclass(frozen=True)
class SweepConfig:
    """A state template, one or two swept parameters, and requested outputs."""

    base_spec: StateSpec
    axes: tuple[SweepAxis, ...]
    quantities: tuple[str, ...]
    truncation: TruncationPolicy
    output_path: str

    def spec_at(self, values: tuple[float, ...]) -> StateSpec:
        spec = self.base_spec
        for axis, value in zip(self.axes, values):
            spec = _set_param(spec, axis.param, value)
        return spec


def _set_param(spec: StateSpec, param: str, value: float) -> StateSpec:
    if param == "alpha.mag":
        return replace(spec, alpha=value * cmath.exp(1j * spec.alpha_phase))
    if param == "alpha.phase":
        return replace(spec, alpha=abs(spec.alpha) * cmath.exp(1j * value))
    if param in _STATE_INT_KEYS:
        rounded = round(value)
        if abs(value - rounded) > 1e-9:
            raise InvalidParameterError(f"{param} must take integer values, got {value}")
        return replace(spec, **{param: int(rounded)})
    if param in ("p", "chi"):
        return replace(spec, **{param: value})
    raise ConfigError(f"unknown sweep parameter {param!r}")


def _sweepable(family: str, param: str) -> bool:
    groups = {
        "alpha.mag": ("Coherent", "DFS", "PADFS", "PSDFS", "PASDFS", "ECS", "VFECS", "PAECS", "Kerr", "VFKS", "PAKS"),
        "alpha.phase": ("Coherent", "DFS", "PADFS", "PSDFS", "PASDFS", "ECS", "VFECS", "PAECS", "Kerr", "VFKS", "PAKS"),
        "n": ("Fock", "DFS", "PADFS", "PSDFS", "PASDFS"),
        "added": ("PADFS", "PASDFS"),
        "subtracted": ("PSDFS", "PASDFS"),
        "p": ("Binomial", "VFBS", "PABS"),
        "M": ("Binomial", "VFBS", "PABS"),
        "chi": ("Kerr", "VFKS", "PAKS"),
    }
    return param in groups and family in groups[param]


def state_spec_from_config(cfg: dict[str, str], prefix: str = "state.") -> StateSpec:
    family = cfg.get(prefix + "family")
    if family is None:
        raise ConfigError(f"missing required key {prefix}family")
    kwargs: dict = {"family": canonical_family(family)}
    mag = float(cfg.get(prefix + "alpha.mag", "0"))
    phase = float(cfg.get(prefix + "alpha.phase", "0"))
    kwargs["alpha"] = 0j if mag == 0.0 else mag * cmath.exp(1j * phase)
    for key in _STATE_INT_KEYS:
        if prefix + key in cfg:
            kwargs[key] = int(cfg[prefix + key])
    for key in ("p", "chi"):
        if prefix + key in cfg:
            kwargs[key] = float(cfg[prefix + key])
    return StateSpec(**kwargs)


def truncation_from_config(cfg: dict[str, str]) -> TruncationPolicy:
    max_dim = int(cfg.get("truncation.max_dim", "512"))
    tail = float(cfg.get("truncation.tail_tolerance", "1e-12"))
    return TruncationPolicy(max_dim=max_dim, tail_tolerance=tail)


def _parse_axis(cfg: dict[str, str], prefix: str, family: str) -> SweepAxis:
    try:
        param = cfg[prefix + "param"]
        start = float(cfg[prefix + "start"])
        stop = float(cfg[prefix + "stop"])
        steps = int(cfg[prefix + "steps"])
    except KeyError as missing:
        raise ConfigError(f"missing sweep key {prefix}{missing.args[0]}") from None
    if steps < 1:
        raise ConfigError(f"{prefix}steps must be >= 1")
    if not _sweepable(family, param):
        raise ConfigError(f"parameter {param!r} does not exist on family {family!r}")
    return SweepAxis(param, start, stop, steps)


def sweep_config_from_text(text: str) -> SweepConfig:
    cfg = parse_flat_config(text)
    spec = state_spec_from_config(cfg)
    axes = [_parse_axis(cfg, "sweep.", spec.family)]
    if any(key.startswith("sweep2.") for key in cfg):
        axes.append(_parse_axis(cfg, "sweep2.", spec.family))
    if "quantities" not in cfg:
        raise ConfigError("missing required key 'quantities'")
    quantities = tuple(q.strip() for q in cfg["quantities"].split(",") if q.strip())
    if not quantities:
        raise ConfigError("'quantities' must name at least one output")
    if "output" not in cfg:
        raise ConfigError("missing required key 'output'")
    return SweepConfig(
        base_spec=spec,
        axes=tuple(axes),
        quantities=quantities,
        truncation=truncation_from_config(cfg),
        output_path=cfg["output"],
    )


DUMP_KINDS = ("amplitudes", "phase", "angular_q", "husimi_q")


@dataclass(frozen=True)
class DumpConfig:
    """What to dump: Fock amplitudes (default), a phase-distribution profile,
    the angular Q profile, or the Husimi Q sampled on its phase-space grid."""

    spec: StateSpec
    truncation: TruncationPolicy
    output_path: str
    kind: str = "amplitudes"
    angles: int = 720
    radial: int = 160
    amplitude_floor: float = 1e-15


def dump_config_from_text(text: str) -> DumpConfig:
    cfg = parse_flat_config(text)
    if "output" not in cfg:
        raise ConfigError("missing required key 'output'")
    kind = cfg.get("dump.kind", "amplitudes")
    if kind not in DUMP_KINDS:
        raise ConfigError(f"dump.kind must be one of {', '.join(DUMP_KINDS)}")
    return DumpConfig(
        spec=state_spec_from_config(cfg),
        truncation=truncation_from_config(cfg),
        output_path=cfg["output"],
        kind=kind,
        angles=int(cfg.get("dump.angles", "720")),
        radial=int(cfg.get("dump.radial", "160")),
    )
