#!/usr/bin/env python3
"""
Figure presets for the parameter sweeps

Grid ranges are read from the plotted axes; densities are 40-60 points per axis.
Each preset sweeps one axis for a few values of a second parameter (the curves
of one figure panel).
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from simulation_errors import ConfigError

AXIS_FIELDS = {
    'length': ('geometry', 'L'),
    'pump': ('drive', 'pump_photons'),
    'photons': ('drive', 'Nm'),
    'frequency': ('drive', 'fm_hz'),
}

SERIES_FIELDS = {
    'fm_hz': ('drive', 'fm_hz'),
    'pump_photons': ('drive', 'pump_photons'),
}


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    axis: Optional[str]                 # None for the dispersion table
    grid: Tuple[float, ...]
    series_field: Optional[str] = None
    series_values: Tuple[float, ...] = ()
    overrides: Dict[str, Dict[str, float]] = field(default_factory=dict)
    assumed_range: str = ''

    @property
    def is_dispersion(self) -> bool:
        return self.axis is None

    def metadata(self) -> Dict:
        return {
            'preset': self.name,
            'description': self.description,
            'axis': self.axis,
            'points': len(self.grid),
            'grid_min': float(self.grid[0]),
            'grid_max': float(self.grid[-1]),
            'series_field': self.series_field,
            'series_values': [float(v) for v in self.series_values],
            'overrides': self.overrides,
            'assumed_range': self.assumed_range,
        }


def series_label(series_field: Optional[str], value: float) -> str:
    if series_field == 'fm_hz':
        return f"fm{value / 1e9:g}GHz"
    if series_field == 'pump_photons':
        return f"pump{value:.3g}".replace('+', '')
    return 'base'


def _linear(start: float, stop: float, points: int) -> Tuple[float, ...]:
    return tuple(float(v) for v in np.linspace(start, stop, points))


def _log(start: float, stop: float, points: int) -> Tuple[float, ...]:
    return tuple(float(v) for v in np.geomspace(start, stop, points))


LENGTH_GRID = _linear(0.5e-6, 6e-6, 56)
PUMP_GRID = _linear(1e6, 3e7, 50)
PHOTON_GRID = _log(1e2, 1e4, 41)
FREQUENCY_GRID = _linear(2e9, 120e9, 60)
OPTICAL_GRID = _linear(150e12, 250e12, 51)

OPTIMUM_LENGTH = {'geometry': {'L': 2.7e-6}}

PRESETS: Dict[str, Preset] = {
    'fig2': Preset(
        name='fig2', axis=None, grid=OPTICAL_GRID,
        description='SPP propagation constant, decay rate and group velocity versus optical frequency',
        assumed_range='150-250 THz, 51 points'),
    'fig3a': Preset(
        name='fig3a', axis='length', grid=LENGTH_GRID,
        series_field='fm_hz', series_values=(5e9, 15e9, 45e9),
        overrides={'drive': {'pump_photons': 1e6, 'Nm': 1e4}},
        description='Lambda versus interaction length',
        assumed_range='L 0.5-6 um, 56 points'),
    'fig3b': Preset(
        name='fig3b', axis='length', grid=LENGTH_GRID,
        series_field='fm_hz', series_values=(5e9, 15e9, 45e9),
        overrides={'drive': {'pump_photons': 1e6, 'Nm': 1e4}},
        description='Lower sideband photon number versus interaction length',
        assumed_range='L 0.5-6 um, 56 points'),
    'fig4a': Preset(
        name='fig4a', axis='pump', grid=PUMP_GRID,
        series_field='fm_hz', series_values=(5e9, 15e9, 20e9),
        overrides=OPTIMUM_LENGTH,
        description='Lambda versus pump intensity, low microwave frequencies',
        assumed_range='|A1|^2 1e6-3e7, 50 points'),
    'fig4b': Preset(
        name='fig4b', axis='pump', grid=PUMP_GRID,
        series_field='fm_hz', series_values=(60e9, 80e9, 90e9),
        overrides=OPTIMUM_LENGTH,
        description='Lambda versus pump intensity, high microwave frequencies',
        assumed_range='|A1|^2 1e6-3e7, 50 points'),
    'fig5a': Preset(
        name='fig5a', axis='photons', grid=PHOTON_GRID,
        series_field='fm_hz', series_values=(5e9, 15e9, 45e9),
        overrides={'geometry': {'L': 2.7e-6}, 'drive': {'pump_photons': 1e6}},
        description='Lambda versus initial microwave photon number',
        assumed_range='Nm 1e2-1e4 log-spaced, 41 points; curve frequencies assumed'),
    'fig5b': Preset(
        name='fig5b', axis='photons', grid=PHOTON_GRID,
        series_field='fm_hz', series_values=(5e9, 15e9, 45e9),
        overrides={'geometry': {'L': 2.7e-6}, 'drive': {'pump_photons': 1e6}},
        description='Lower sideband photon number versus initial microwave photon number',
        assumed_range='Nm 1e2-1e4 log-spaced, 41 points; curve frequencies assumed'),
    'fig6a': Preset(
        name='fig6a', axis='frequency', grid=FREQUENCY_GRID,
        series_field='pump_photons', series_values=(9e6, 10.9e6, 12.9e6),
        overrides=OPTIMUM_LENGTH,
        description='Lambda versus microwave frequency, moderate pump',
        assumed_range='fm 2-120 GHz, 60 points'),
    'fig6b': Preset(
        name='fig6b', axis='frequency', grid=FREQUENCY_GRID,
        series_field='pump_photons', series_values=(1.9e7, 2.1e7, 2.4e7),
        overrides=OPTIMUM_LENGTH,
        description='Lambda versus microwave frequency, strong pump',
        assumed_range='fm 2-120 GHz, 60 points'),
}


def preset_names() -> List[str]:
    return sorted(PRESETS)


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(preset_names())}",
                          'harness') from None
