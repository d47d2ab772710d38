"""Sweep execution and CSV emission.

Quantities are addressed by registered names, optionally carrying an
argument after a colon (``antibunching:3`` for the order, ``klyshko:2``
for the photon index, ``phase_uncertainty:1.5708`` for the interferometer
phase). Undefined values become empty cells; per-point failures land in
the ``error`` column without aborting the sweep. Output is byte-stable:
sequential evaluation, shortest round-trip floats, fixed column order.
"""

from __future__ import annotations

import csv
import math
from collections.abc import Callable
from dataclasses import dataclass

from .config import DumpConfig, SweepConfig
from .core import StateVector
from .exceptions import (
    ConfigError,
    DegenerateDenominatorError,
    DimensionError,
    FockLabError,
    PhaseUndefinedError,
    StationaryPointError,
    UndefinedWitnessError,
)
from .interferometry import linear_entropy, phase_estimation_uncertainty
from .moments import moment_oracle
from .phase import barnett_pegg_fluctuations, phase_dispersion, phase_distribution
from .quasiprob import angular_q, phase_space_grid, q_function
from .states import build_state
from . import witnesses

# Exceptions that mean "this quantity is undefined here", not "the sweep broke".
_UNDEFINED = (
    UndefinedWitnessError,
    PhaseUndefinedError,
    StationaryPointError,
    DegenerateDenominatorError,
    DimensionError,
)


@dataclass(frozen=True)
class Quantity:
    name: str
    evaluate: Callable[[StateVector, float | None], float | None]
    default_arg: float | None = None
    integer_arg: bool = True


def _fluct(which: str):
    def evaluate(state: StateVector, _arg):
        triple = barnett_pegg_fluctuations(state)
        return getattr(triple, which)

    return evaluate


_REGISTRY: dict[str, Quantity] = {
    q.name: q
    for q in (
        Quantity("mean_photon", lambda s, _: moment_oracle(s, 1, 1).real),
        Quantity("mandel_q", lambda s, _: witnesses.mandel_q(s).value),
        Quantity("antibunching", lambda s, a: witnesses.antibunching_d(s, int(a)).value, 2),
        Quantity("hosps", lambda s, a: witnesses.hosps(s, int(a)).value, 2),
        Quantity("hong_mandel", lambda s, a: witnesses.hong_mandel_squeezing(s, int(a)).value, 2),
        Quantity("klyshko", lambda s, a: witnesses.klyshko_b(s, int(a)).value, 0),
        Quantity("vogel", lambda s, _: witnesses.vogel_det(s).value),
        Quantity("agarwal_tara", lambda s, _: witnesses.agarwal_tara_a3(s).value),
        Quantity("phase_dispersion", lambda s, _: phase_dispersion(s)),
        Quantity("fluctuation_u", _fluct("u")),
        Quantity("fluctuation_s", _fluct("s")),
        Quantity("fluctuation_q", _fluct("q")),
        Quantity("linear_entropy", lambda s, _: linear_entropy(s)),
        Quantity(
            "phase_uncertainty",
            lambda s, a: phase_estimation_uncertainty(s, float(a)),
            math.pi / 2.0,
            integer_arg=False,
        ),
    )
}

QUANTITY_NAMES = tuple(sorted(_REGISTRY))


def parse_quantity(token: str) -> tuple[Quantity, float | None, str]:
    """Resolve ``name`` or ``name:arg`` into (quantity, argument, column label)."""
    name, _, arg_text = token.partition(":")
    name = name.strip()
    if name not in _REGISTRY:
        raise ConfigError(f"unknown quantity {name!r}; known: {', '.join(QUANTITY_NAMES)}")
    quantity = _REGISTRY[name]
    if arg_text:
        try:
            arg = int(arg_text) if quantity.integer_arg else float(arg_text)
        except ValueError:
            raise ConfigError(f"bad argument in quantity {token!r}") from None
    else:
        arg = quantity.default_arg
    return quantity, arg, token


def _format_cell(value: float | None) -> str:
    if value is None:
        return ""
    return repr(float(value))


def run_sweep(config: SweepConfig) -> None:
    """Evaluate the sweep and write one CSV row per grid point."""
    resolved = [parse_quantity(token) for token in config.quantities]
    header = [axis.param for axis in config.axes] + [label for _, _, label in resolved] + ["error"]

    grids = [axis.values() for axis in config.axes]
    points: list[tuple[float, ...]] = [()]
    for grid in grids:
        points = [existing + (v,) for existing in points for v in grid]

    with open(config.output_path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for point in points:
            row = [repr(float(v)) for v in point]
            cells: list[str] = []
            error = ""
            try:
                state = build_state(config.spec_at(point), config.truncation)
            except FockLabError as exc:
                cells = [""] * len(resolved)
                error = f"{type(exc).__name__}: {exc}"
            else:
                for quantity, arg, _label in resolved:
                    try:
                        cells.append(_format_cell(quantity.evaluate(state, arg)))
                    except _UNDEFINED:
                        cells.append("")
                    except FockLabError as exc:
                        cells.append("")
                        error = f"{type(exc).__name__}: {exc}"
            writer.writerow(row + cells + [error])


def dump_state(config: DumpConfig) -> None:
    """Write the configured view of the state as CSV.

    ``amplitudes`` (default) emits (n, Re c_n, Im c_n, p_n) rows, omitting
    rows whose magnitude falls below the floor (default 1e-15) so exact
    parity holes and trailing truncation zeros never appear. ``phase`` and
    ``angular_q`` emit (theta, density) profiles; ``husimi_q`` emits
    (re_beta, im_beta, value) over the state's phase-space grid.
    """
    state = build_state(config.spec, config.truncation)
    with open(config.output_path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        if config.kind == "amplitudes":
            writer.writerow(["n", "re", "im", "p"])
            for n, c in enumerate(state.amplitudes):
                if abs(c) < config.amplitude_floor:
                    continue
                writer.writerow(
                    [n, repr(float(c.real)), repr(float(c.imag)), repr(float(abs(c) ** 2))]
                )
        elif config.kind == "phase":
            profile = phase_distribution(state, config.angles)
            writer.writerow(["theta", "density"])
            for theta, value in zip(profile.theta, profile.density):
                writer.writerow([repr(float(theta)), repr(float(value))])
        elif config.kind == "angular_q":
            profile = angular_q(state, config.angles, config.radial)
            writer.writerow(["theta", "density"])
            for theta, value in zip(profile.theta, profile.density):
                writer.writerow([repr(float(theta)), repr(float(value))])
        else:  # husimi_q
            grid = phase_space_grid(state, n_angles=config.angles, n_radial=config.radial)
            values = q_function(state, grid.beta_samples)
            writer.writerow(["re_beta", "im_beta", "q"])
            for beta, value in zip(grid.beta_samples, values):
                writer.writerow(
                    [repr(float(beta.real)), repr(float(beta.imag)), repr(float(value))]
                )
