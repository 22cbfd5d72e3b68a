"""Named initial conditions and domains for the benchmark experiments.

Initial cell averages use the midpoint rule (values at cell centers).
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import ConfigError
from ..fom import SweState
from ..grid import Grid1D


def gaussian_bump_bed(x):
    return -1.0 + 0.5 * np.exp(-np.asarray(x, dtype=float) ** 2)


def dam_break_bed(x):
    return 0.2 * (1.0 - np.asarray(x, dtype=float) / 12.0)


@dataclass(frozen=True)
class Preset:
    name: str
    system: str
    x_min: float
    x_max: float
    t_final: float
    initial: Callable                 # (grid, cfg-like) -> state
    bathymetry: Callable | None = None
    n_b: float = 0.0


def _transport_stationary_ic(grid: Grid1D, cfg) -> np.ndarray:
    return np.exp(grid.centers)


def _transport_perturbation_ic(grid: Grid1D, cfg) -> np.ndarray:
    x = grid.centers
    return np.exp(x) + 0.3 * np.exp(-100.0 * (x - 0.3) ** 2)


def _burgers_stationary_ic(grid: Grid1D, cfg) -> np.ndarray:
    return 0.1 * np.exp(grid.centers)


def _burgers_perturbation_ic(grid: Grid1D, cfg) -> np.ndarray:
    x = grid.centers
    return 0.1 * np.exp(x) + 0.3 * np.exp(-100.0 * (x - 0.3) ** 2)


def _lake_at_rest_ic(grid: Grid1D, cfg) -> SweState:
    h = -gaussian_bump_bed(grid.centers)
    return SweState(h=h, q=np.zeros_like(h))


def _dam_break_ic(grid: Grid1D, cfg) -> SweState:
    x = grid.centers
    z = dam_break_bed(x)
    h = np.where(x <= 6.0, 2.0 - z, 1.0 - z)
    return SweState(h=h, q=np.zeros_like(h))


PRESETS = {
    "transport_stationary": Preset(
        "transport_stationary", "transport", 0.0, 2.0, 10.0,
        _transport_stationary_ic),
    "transport_perturbation": Preset(
        "transport_perturbation", "transport", 0.0, 2.0, 0.8,
        _transport_perturbation_ic),
    "burgers_stationary": Preset(
        "burgers_stationary", "burgers", 0.0, 2.0, 10.0,
        _burgers_stationary_ic),
    "burgers_perturbation": Preset(
        "burgers_perturbation", "burgers", 0.0, 2.0, 3.0,
        _burgers_perturbation_ic),
    "swe_lake_at_rest": Preset(
        "swe_lake_at_rest", "swe", -5.0, 5.0, 10.0,
        _lake_at_rest_ic, bathymetry=gaussian_bump_bed, n_b=0.0),
    "swe_dam_break": Preset(
        "swe_dam_break", "swe", 0.0, 12.0, 1.0,
        _dam_break_ic, bathymetry=dam_break_bed, n_b=0.1),
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        known = ", ".join(sorted(PRESETS))
        raise ConfigError(f"unknown preset {name!r}; known presets: {known}") \
            from None
