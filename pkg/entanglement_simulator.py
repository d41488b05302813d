#!/usr/bin/env python3
"""
Microwave-Optical Entanglement Simulator
End-to-end runs from graphene material constants to the Duan determinant,
figure-preset parameter sweeps and CSV/JSON emission
"""

import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from conversion_rates import Geometry, conversion_rates, vacuum_voltage
from duan_entanglement import IMAGINARY_RESIDUE_RATIO, duan_lambda
from graphene_material import (FREQUENCY_CONVENTIONS, PERTURBATIVE_WARNING_RATIO, GrapheneParams,
                               chemical_potential, conductivity)
from moment_dynamics import (B0_CONVENTIONS, METHODS, PUMP_LETTERS, SystemParams, Trajectory, build_system,
                             convergence_check, initial_state)
from simulation_errors import ConfigError, SimulationError
from spp_waveguide import SppMode, build_mode, electrode_containment, mode_overlap
from sweep_presets import AXIS_FIELDS, SERIES_FIELDS, Preset, get_preset, preset_names, series_label

logger = logging.getLogger(__name__)

__version__ = '1.0.0'

MODULE = 'harness'

SIGNIFICANT_DIGITS = 12

CSV_COLUMNS = ['axis_value', 'lambda', 'lambda_imag', 'n3', 'entangled', 't_end_s', 'dt_s',
               'conjugate_drift', 're_g2', 'im_g2', 're_g3', 'im_g3']

DISPERSION_COLUMNS = ['f_hz', 're_beta', 'im_beta', 're_alpha', 'gamma', 'v_g', 'xi', 'eps_eff_loss_ratio']


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

def _require_positive(block: str, **values) -> None:
    for name, value in values.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not np.isfinite(value) or value <= 0:
            raise ConfigError(f"{block}.{name} must be a positive number, got {value!r}", MODULE)


def _require_non_negative(block: str, **values) -> None:
    for name, value in values.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not np.isfinite(value) or value < 0:
            raise ConfigError(f"{block}.{name} must be a non-negative number, got {value!r}", MODULE)


def _require_choice(block: str, name: str, value, choices) -> None:
    if value not in choices:
        raise ConfigError(f"{block}.{name} must be one of {list(choices)}, got {value!r}", MODULE)


@dataclass(frozen=True)
class MaterialConfig:
    n0: float = 1e18
    tau: float = 0.5e-12
    T: float = 3e-3
    Vf: float = 1e6
    eps_r: float = 1.0

    def __post_init__(self):
        _require_positive('material', n0=self.n0, tau=self.tau, T=self.T, Vf=self.Vf, eps_r=self.eps_r)
        if self.eps_r < 1:
            raise ConfigError(f"material.eps_r must be >= 1, got {self.eps_r!r}", MODULE)


@dataclass(frozen=True)
class GeometryConfig:
    L: float = 2.7e-6
    W: float = 1e-6
    d: float = 1e-6

    def __post_init__(self):
        _require_positive('geometry', L=self.L, W=self.W, d=self.d)


@dataclass(frozen=True)
class DriveConfig:
    f1_hz: float = 193e12
    fm_hz: float = 45e9
    pump_photons: float = 1e6
    Nm: float = 1e4
    Gamma_m: float = 1e6
    b0_convention: str = 'coherent'
    pump_letter: str = 'uniform_A'
    frequency_convention: str = 'as_printed'

    def __post_init__(self):
        _require_positive('drive', f1_hz=self.f1_hz, fm_hz=self.fm_hz)
        _require_non_negative('drive', pump_photons=self.pump_photons, Nm=self.Nm, Gamma_m=self.Gamma_m)
        if self.fm_hz >= self.f1_hz:
            raise ConfigError(f"drive.fm_hz ({self.fm_hz!r}) must be below drive.f1_hz ({self.f1_hz!r})", MODULE)
        _require_choice('drive', 'b0_convention', self.b0_convention, B0_CONVENTIONS)
        _require_choice('drive', 'pump_letter', self.pump_letter, PUMP_LETTERS)
        _require_choice('drive', 'frequency_convention', self.frequency_convention, FREQUENCY_CONVENTIONS)


@dataclass(frozen=True)
class NumericsConfig:
    method: str = 'rk4'
    dt0: Optional[float] = None         # None: t_end/100
    convergence_target: float = 1e-6
    emit_trajectory: bool = False

    def __post_init__(self):
        _require_choice('numerics', 'method', self.method, METHODS)
        if self.dt0 is not None:
            _require_positive('numerics', dt0=self.dt0)
        _require_positive('numerics', convergence_target=self.convergence_target)
        if not isinstance(self.emit_trajectory, bool):
            raise ConfigError(f"numerics.emit_trajectory must be true or false, got {self.emit_trajectory!r}",
                              MODULE)


BLOCKS = {
    'material': MaterialConfig,
    'geometry': GeometryConfig,
    'drive': DriveConfig,
    'numerics': NumericsConfig,
}


@dataclass(frozen=True)
class RunConfig:
    material: MaterialConfig = field(default_factory=MaterialConfig)
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    drive: DriveConfig = field(default_factory=DriveConfig)
    numerics: NumericsConfig = field(default_factory=NumericsConfig)

    def to_dict(self) -> Dict:
        return {name: asdict(getattr(self, name)) for name in BLOCKS}

    @classmethod
    def from_dict(cls, data: Dict) -> 'RunConfig':
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a JSON object", MODULE)
        unknown = sorted(set(data) - set(BLOCKS))
        if unknown:
            raise ConfigError(f"unknown configuration blocks: {', '.join(unknown)}", MODULE)

        blocks = {}
        for name, block_cls in BLOCKS.items():
            values = data.get(name, {})
            if not isinstance(values, dict):
                raise ConfigError(f"block '{name}' must be a JSON object", MODULE)
            allowed = {f.name for f in fields(block_cls)}
            extra = sorted(set(values) - allowed)
            if extra:
                raise ConfigError(f"unknown keys in '{name}': {', '.join(extra)}", MODULE)
            blocks[name] = block_cls(**values)
        return cls(**blocks)

    @classmethod
    def from_json(cls, path: str) -> 'RunConfig':
        try:
            with open(path) as f:
                data = json.load(f)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}", MODULE) from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}", MODULE) from exc
        return cls.from_dict(data)

    def with_value(self, block: str, key: str, value) -> 'RunConfig':
        """Copy with one field replaced, validated like a loaded config"""
        updated = replace(getattr(self, block), **{key: value})
        return replace(self, **{block: updated})

    def with_overrides(self, overrides: Dict[str, Dict]) -> 'RunConfig':
        config = self
        for block, values in overrides.items():
            for key, value in values.items():
                config = config.with_value(block, key, value)
        return config


# ---------------------------------------------------------------------------
# Results
# ---------------------------------------------------------------------------

def _sig(value: float) -> float:
    """Round to SIGNIFICANT_DIGITS significant digits"""
    value = float(value)
    if not np.isfinite(value):
        return value
    return float(f"{value:.{SIGNIFICANT_DIGITS}g}")


def _complex_dict(value: complex) -> Dict[str, float]:
    return {'re': _sig(np.real(value)), 'im': _sig(np.imag(value))}


def _mode_row(mode: SppMode) -> Dict[str, float]:
    return {
        'f_hz': mode.frequency,
        're_beta': float(np.real(mode.beta_prime)),
        'im_beta': float(np.imag(mode.beta_prime)),
        're_alpha': float(np.real(mode.alpha)),
        'gamma': mode.Gamma,
        'v_g': mode.v_g,
        'xi': mode.xi,
        'eps_eff_loss_ratio': mode.eps_eff_loss_ratio,
    }


@dataclass
class RunSetup:
    """Everything run_single derives before integrating"""
    pump: SppMode
    upper: SppMode
    lower: SppMode
    system_params: SystemParams
    g2: complex
    g3: complex
    t_end: float
    perturbation_ratio: float
    chemical_validity_ratio: float
    containment: Dict[str, float]


@dataclass
class RunResult:
    lam: float
    lambda_imag: float
    entangled: bool
    n3: float
    n3_coherent: float
    n_microwave: float
    t_end: float
    dt_accepted: float
    convergence_delta: float
    conjugate_drift: float
    g2: complex
    g3: complex
    beta_table: Dict[str, Dict[str, float]]
    perturbation_ratio: float
    flags: List[str]
    config: Dict
    code_version: str = __version__
    n2_proxy: Optional[float] = None     # <A2^dag A2> is not among the evolved moments
    trajectory: Optional[Trajectory] = field(default=None, repr=False, compare=False)

    def to_dict(self) -> Dict:
        """JSON-ready form; computed numbers carry 12 significant digits, the config echo is exact"""
        return {
            'lambda': _sig(self.lam),
            'lambda_imag': _sig(self.lambda_imag),
            'entangled': self.entangled,
            'n3': _sig(self.n3),
            'n3_coherent': _sig(self.n3_coherent),
            'n_microwave': _sig(self.n_microwave),
            'n2_proxy': self.n2_proxy,
            't_end': _sig(self.t_end),
            'dt_accepted': _sig(self.dt_accepted),
            'convergence_delta': _sig(self.convergence_delta),
            'conjugate_drift': _sig(self.conjugate_drift),
            'g2': _complex_dict(self.g2),
            'g3': _complex_dict(self.g3),
            'beta_table': {name: {k: _sig(v) for k, v in row.items()} for name, row in self.beta_table.items()},
            'perturbation_ratio': _sig(self.perturbation_ratio),
            'flags': list(self.flags),
            'config': self.config,
            'code_version': self.code_version,
        }

    def csv_row(self, axis_value: Optional[float]) -> Dict:
        return {
            'axis_value': np.nan if axis_value is None else axis_value,
            'lambda': self.lam,
            'lambda_imag': self.lambda_imag,
            'n3': self.n3,
            'entangled': self.entangled,
            't_end_s': self.t_end,
            'dt_s': self.dt_accepted,
            'conjugate_drift': self.conjugate_drift,
            're_g2': float(np.real(self.g2)),
            'im_g2': float(np.imag(self.g2)),
            're_g3': float(np.real(self.g3)),
            'im_g3': float(np.imag(self.g3)),
        }


@dataclass
class SweepRow:
    axis_value: Optional[float]
    result: Optional[RunResult] = None
    error: Optional[str] = None

    def to_dict(self) -> Dict:
        return {
            'axis_value': None if self.axis_value is None else _sig(self.axis_value),
            'result': None if self.result is None else self.result.to_dict(),
            'error': self.error,
        }

    def csv_row(self) -> Dict:
        if self.result is not None:
            return self.result.csv_row(self.axis_value)
        row = {column: np.nan for column in CSV_COLUMNS}
        row['axis_value'] = np.nan if self.axis_value is None else self.axis_value
        row['entangled'] = None
        return row


# ---------------------------------------------------------------------------
# Simulator
# ---------------------------------------------------------------------------

class EntanglementSimulator:
    def __init__(self, thresholds: Optional[Dict[str, float]] = None):
        """Initialize the simulator with diagnostic flag levels"""
        self.thresholds = {
            'chemical_potential_ratio': PERTURBATIVE_WARNING_RATIO,  # mu''*V/mu'
            'conductivity_ratio': 1e-3,                               # |V*sigma''|/|sigma'|
            'imaginary_residue': IMAGINARY_RESIDUE_RATIO,             # |Im Lambda|/|Re Lambda|
            'conjugate_drift': 1e-9,                                  # relative to <B^dag B>(0)
        }
        if thresholds:
            self.thresholds.update(thresholds)

    def prepare(self, config: RunConfig) -> RunSetup:
        """
        Material, waveguide and coupling chain for one configuration

        Args:
            config: validated run configuration

        Returns:
            RunSetup with the three SPP modes, rates, moment-system parameters and t_end
        """
        material, geometry, drive = config.material, config.geometry, config.drive
        params = GrapheneParams(n0=material.n0, tau=material.tau, T=material.T, Vf=material.Vf,
                                eps_r=material.eps_r, d=geometry.d)
        geom = Geometry(L=geometry.L, W=geometry.W, d=geometry.d, eps_r=material.eps_r)

        omega1 = 2.0 * np.pi * drive.f1_hz
        omega_m = 2.0 * np.pi * drive.fm_hz
        voltage = vacuum_voltage(omega_m, geom)
        mu = chemical_potential(params, v_ref=voltage)

        convention = drive.frequency_convention
        pump = build_mode(params, mu, omega1, convention)
        upper = build_mode(params, mu, omega1 + omega_m, convention)
        lower = build_mode(params, mu, omega1 - omega_m, convention)

        rates = conversion_rates(pump, upper, lower, geom, omega_m,
                                 I12=mode_overlap(pump, upper), I13=mode_overlap(pump, lower))

        system_params = SystemParams(g2=rates.g2, g3=rates.g3, Gamma2=upper.Gamma, Gamma3=lower.Gamma,
                                     Gamma_m=drive.Gamma_m, A=float(np.sqrt(drive.pump_photons)), N_m=drive.Nm,
                                     b0_convention=drive.b0_convention, pump_letter=drive.pump_letter)

        sigma = conductivity(params, mu, omega1, convention)
        return RunSetup(pump=pump, upper=upper, lower=lower, system_params=system_params,
                        g2=rates.g2, g3=rates.g3, t_end=geometry.L / pump.v_g,
                        perturbation_ratio=sigma.perturbation_ratio(voltage),
                        chemical_validity_ratio=float(mu.validity_ratio or 0.0),
                        containment=electrode_containment(pump, geometry.d))

    def _flags(self, setup: RunSetup, duan, final, n_ref: float) -> List[str]:
        flags = []
        if setup.chemical_validity_ratio > self.thresholds['chemical_potential_ratio']:
            flags.append(f"chemical potential drive not perturbative (ratio {setup.chemical_validity_ratio:.3e})")
        if setup.perturbation_ratio > self.thresholds['conductivity_ratio']:
            flags.append(f"conductivity drive not perturbative (ratio {setup.perturbation_ratio:.3e})")
        if not setup.containment['contained']:
            flags.append(f"SPP field not contained by electrodes ({setup.containment['decay_lengths']:.2f} "
                         f"decay lengths)")
        if duan.residue_exceeds(self.thresholds['imaginary_residue']):
            flags.append(f"Lambda carries an imaginary residue ({duan.lambda_imag:.3e})")
        flags.extend(final.invariant_violations(n_ref))
        if final.conjugate_drift > self.thresholds['conjugate_drift'] * max(1.0, n_ref):
            logger.debug("<A3^dag B^dag> differs from <A3 B>^* by %.3e", final.conjugate_drift)
        for flag in flags:
            logger.info(flag)
        return flags

    def run_single(self, config: RunConfig) -> RunResult:
        """
        One end-to-end run: modes, rates, moment evolution to t_end = L/v_g, Duan test

        Args:
            config: validated run configuration

        Returns:
            RunResult with full provenance (config echo and code version)
        """
        setup = self.prepare(config)
        numerics = config.numerics

        system = build_system(setup.system_params)
        state0 = initial_state(setup.system_params)
        dt0 = numerics.dt0 if numerics.dt0 is not None else setup.t_end / 100.0
        converged = convergence_check(system, state0, setup.t_end, dt0, method=numerics.method,
                                      target=numerics.convergence_target)

        final = converged.trajectory.final
        duan = duan_lambda(final)
        flags = self._flags(setup, duan, final, config.drive.Nm)

        logger.info("Run at L=%.4g m, fm=%.4g Hz, |A1|^2=%.4g: Lambda=%.6e (%s)",
                    config.geometry.L, config.drive.fm_hz, config.drive.pump_photons, duan.lam,
                    'entangled' if duan.entangled else 'separable')

        return RunResult(
            lam=duan.lam,
            lambda_imag=duan.lambda_imag,
            entangled=duan.entangled,
            n3=final.n3,
            n3_coherent=final.n3_coherent,
            n_microwave=final.n_microwave,
            t_end=float(setup.t_end),
            dt_accepted=float(converged.dt),
            convergence_delta=converged.delta,
            conjugate_drift=final.conjugate_drift,
            g2=setup.g2,
            g3=setup.g3,
            beta_table={'pump': _mode_row(setup.pump), 'upper': _mode_row(setup.upper),
                        'lower': _mode_row(setup.lower)},
            perturbation_ratio=setup.perturbation_ratio,
            flags=flags,
            config=config.to_dict(),
            trajectory=converged.trajectory if numerics.emit_trajectory else None,
        )

    def sweep(self, config: RunConfig, axis: str, grid: Sequence[float], workers: int = 1) -> List[SweepRow]:
        """
        Run one configuration per grid value of `axis`

        Per-point failures are recorded in the row and the sweep carries on.
        Rows come back in grid order whatever the worker count.
        """
        if axis not in AXIS_FIELDS:
            raise ConfigError(f"axis must be one of {sorted(AXIS_FIELDS)}, got {axis!r}", MODULE)
        grid = [float(v) for v in grid]
        if not grid:
            raise ConfigError("sweep grid is empty", MODULE)
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("sweep grid must be strictly ascending", MODULE)

        block, key = AXIS_FIELDS[axis]
        points = []
        for value in grid:
            try:
                points.append((value, config.with_value(block, key, value)))
            except ConfigError as exc:
                points.append((value, str(exc)))

        jobs = [(self.thresholds, value, point) for value, point in points]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(_sweep_point, jobs))
        else:
            rows = [_sweep_point(job) for job in jobs]

        failed = sum(1 for row in rows if row.error)
        if failed:
            logger.warning("%d of %d sweep points failed on axis %s", failed, len(rows), axis)
        return rows

    def run_preset(self, preset: Preset, config: RunConfig, workers: int = 1) -> Dict[str, List[SweepRow]]:
        """One sweep per series value of the preset, keyed by series label"""
        if preset.is_dispersion:
            raise ConfigError(f"preset {preset.name} is a dispersion table, use dispersion_table", MODULE)
        base = config.with_overrides(preset.overrides)
        if not preset.series_field:
            return {'base': self.sweep(base, preset.axis, preset.grid, workers)}

        block, key = SERIES_FIELDS[preset.series_field]
        series = {}
        for value in preset.series_values:
            label = series_label(preset.series_field, value)
            logger.info("Preset %s: series %s", preset.name, label)
            series[label] = self.sweep(base.with_value(block, key, value), preset.axis, preset.grid, workers)
        return series

    def dispersion_table(self, config: RunConfig, f_grid: Sequence[float]) -> pd.DataFrame:
        """Per-frequency SPP properties at the configured material constants"""
        material = config.material
        params = GrapheneParams(n0=material.n0, tau=material.tau, T=material.T, Vf=material.Vf,
                                eps_r=material.eps_r, d=config.geometry.d)
        mu = chemical_potential(params)
        rows = [_mode_row(build_mode(params, mu, 2.0 * np.pi * f, config.drive.frequency_convention))
                for f in f_grid]
        return pd.DataFrame(rows, columns=DISPERSION_COLUMNS)


def _sweep_point(job) -> SweepRow:
    thresholds, value, point = job
    if isinstance(point, str):
        return SweepRow(axis_value=value, error=point)
    try:
        return SweepRow(axis_value=value, result=EntanglementSimulator(thresholds).run_single(point))
    except SimulationError as exc:
        logger.warning("Sweep point %.6g failed: %s", value, exc)
        return SweepRow(axis_value=value, error=str(exc))


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------

def sweep_frame(rows: Sequence[SweepRow]) -> pd.DataFrame:
    return pd.DataFrame([row.csv_row() for row in rows], columns=CSV_COLUMNS)


def _write(path: str, writer) -> None:
    try:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        writer(path)
    except OSError as exc:
        raise SimulationError(f"cannot write {path}: {exc}", MODULE) from exc


def write_csv(frame: pd.DataFrame, path: str) -> None:
    _write(path, lambda p: frame.to_csv(p, index=False, float_format='%.12g', lineterminator='\r\n'))


def write_json(payload: Dict, path: str) -> None:
    def dump(p):
        with open(p, 'w') as f:
            json.dump(payload, f, indent=2)
            f.write('\n')
    _write(path, dump)


def emit(results, format: str, path: str, metadata: Optional[Dict] = None) -> None:
    """
    Write a RunResult or a list of SweepRows as CSV or JSON

    CSV carries exactly CSV_COLUMNS; JSON mirrors RunResult.to_dict().
    """
    if format not in ('csv', 'json'):
        raise ConfigError(f"format must be csv or json, got {format!r}", MODULE)

    if isinstance(results, RunResult):
        rows = [SweepRow(axis_value=None, result=results)]
        payload = results.to_dict()
    else:
        rows = list(results)
        payload = {'metadata': metadata or {}, 'rows': [row.to_dict() for row in rows]}
    if not rows:
        raise ConfigError("nothing to emit", MODULE)

    if format == 'csv':
        write_csv(sweep_frame(rows), path)
    else:
        write_json(payload, path)


def emit_preset(series: Dict[str, List[SweepRow]], format: str, path: str, metadata: Dict) -> List[str]:
    """JSON: one document holding every series; CSV: one file per series, suffixed by its label"""
    if format == 'json':
        payload = {'metadata': metadata,
                   'series': {label: [row.to_dict() for row in rows] for label, rows in series.items()}}
        write_json(payload, path)
        return [path]

    target = Path(path)
    written = []
    for label, rows in series.items():
        series_path = str(target.with_name(f"{target.stem}_{label}{target.suffix or '.csv'}"))
        emit(rows, 'csv', series_path)
        written.append(series_path)
    return written


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def _print_run_summary(result: RunResult) -> None:
    status = "✅ ENTANGLED" if result.entangled else "⚪ separable"
    print("\n" + "=" * 60)
    print(f"🔬 Duan determinant: {result.lam:.6e}  {status}")
    print("=" * 60)
    print(f"   t_end        : {result.t_end:.4e} s (dt {result.dt_accepted:.3e} s)")
    print(f"   |g2|, |g3|   : {abs(result.g2):.4e}, {abs(result.g3):.4e} 1/s")
    print(f"   <A3^dag A3>  : {result.n3:.4e}   |<A3>|^2: {result.n3_coherent:.4e}")
    print(f"   <B^dag B>    : {result.n_microwave:.4e}")
    for flag in result.flags:
        print(f"   ⚠️  {flag}")


def _print_sweep_summary(label: str, rows: List[SweepRow]) -> None:
    ok = [row for row in rows if row.result is not None]
    print(f"\n📊 {label}: {len(ok)}/{len(rows)} points")
    if ok:
        best = min(ok, key=lambda row: row.result.lam)
        entangled = sum(1 for row in ok if row.result.entangled)
        print(f"   Most negative Lambda {best.result.lam:.4e} at axis value {best.axis_value:.4g}")
        print(f"   Entangled points: {entangled}")
    for row in rows:
        if row.error:
            print(f"   ❌ {row.axis_value:.4g}: {row.error}")


def build_parser():
    import argparse

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='Run configuration (JSON)')
    common.add_argument('--out', help='Output file path; printed to stdout when omitted')
    common.add_argument('--format', choices=['csv', 'json'], default='json', help='Output format')
    common.add_argument('--verbose', action='store_true', help='Debug logging')

    parser = argparse.ArgumentParser(description='Graphene SPP microwave-optical entanglement simulator')
    parser.add_argument('--version', action='version', version=__version__)
    commands = parser.add_subparsers(dest='command', required=True)

    dispersion = commands.add_parser('dispersion', parents=[common], help='SPP dispersion table')
    dispersion.add_argument('--from', dest='start', type=float, default=150e12, help='Start frequency (Hz)')
    dispersion.add_argument('--to', dest='stop', type=float, default=250e12, help='Stop frequency (Hz)')
    dispersion.add_argument('--points', type=int, default=51)

    run = commands.add_parser('run', parents=[common], help='Single run')
    run.add_argument('--emit-trajectory', action='store_true', help='Also write the moment trajectory CSV')

    sweep = commands.add_parser('sweep', parents=[common], help='Parameter sweep')
    sweep.add_argument('--preset', choices=preset_names(), help='Figure preset')
    sweep.add_argument('--axis', choices=sorted(AXIS_FIELDS), help='Swept parameter')
    sweep.add_argument('--from', dest='start', type=float)
    sweep.add_argument('--to', dest='stop', type=float)
    sweep.add_argument('--points', type=int)
    sweep.add_argument('--log', action='store_true', help='Log-spaced grid')
    sweep.add_argument('--workers', type=int, default=1, help='Worker processes')
    return parser


def _grid(start: float, stop: float, points: int, log: bool = False) -> np.ndarray:
    if points is None or points < 1:
        raise ConfigError(f"--points must be a positive integer, got {points!r}", MODULE)
    if log:
        if start <= 0 or stop <= 0:
            raise ConfigError("log-spaced grids need positive end points", MODULE)
        return np.geomspace(start, stop, points)
    return np.linspace(start, stop, points)


def _command_dispersion(simulator: EntanglementSimulator, config: RunConfig, args) -> None:
    frame = simulator.dispersion_table(config, _grid(args.start, args.stop, args.points))
    if args.out:
        if args.format == 'csv':
            write_csv(frame, args.out)
        else:
            write_json({'rows': frame.to_dict('records')}, args.out)
        print(f"📈 Dispersion table ({len(frame)} frequencies) saved to {args.out}")
    elif args.format == 'csv':
        print(frame.to_csv(index=False, float_format='%.12g'), end='')
    else:
        print(json.dumps({'rows': frame.to_dict('records')}, indent=2))


def _command_run(simulator: EntanglementSimulator, config: RunConfig, args) -> None:
    if args.emit_trajectory:
        config = config.with_value('numerics', 'emit_trajectory', True)
    result = simulator.run_single(config)
    if args.out:
        emit(result, args.format, args.out)
        _print_run_summary(result)
        print(f"\nResults saved to {args.out}")
        if result.trajectory is not None:
            target = Path(args.out)
            trajectory_path = str(target.with_name(f"{target.stem}_trajectory.csv"))
            write_csv(result.trajectory.to_frame(), trajectory_path)
            print(f"Trajectory saved to {trajectory_path}")
    elif args.format == 'csv':
        print(sweep_frame([SweepRow(None, result)]).to_csv(index=False, float_format='%.12g'), end='')
    else:
        print(json.dumps(result.to_dict(), indent=2))


def _command_sweep(simulator: EntanglementSimulator, config: RunConfig, args) -> None:
    if args.preset:
        preset = get_preset(args.preset)
        metadata = preset.metadata()
        if preset.is_dispersion:
            frame = simulator.dispersion_table(config, preset.grid)
            if args.out:
                if args.format == 'csv':
                    write_csv(frame, args.out)
                else:
                    write_json({'metadata': metadata, 'rows': frame.to_dict('records')}, args.out)
                print(f"📈 {preset.name}: dispersion table saved to {args.out}")
            else:
                print(frame.to_csv(index=False, float_format='%.12g'), end='')
            return

        if args.out:
            print(f"🚀 Preset {preset.name}: {preset.description}")
        series = simulator.run_preset(preset, config, workers=args.workers)
        if args.out:
            for label, rows in series.items():
                _print_sweep_summary(label, rows)
            for path in emit_preset(series, args.format, args.out, metadata):
                print(f"Results saved to {path}")
        else:
            payload = {'metadata': metadata,
                       'series': {label: [row.to_dict() for row in rows] for label, rows in series.items()}}
            print(json.dumps(payload, indent=2))
        return

    if not args.axis or args.start is None or args.stop is None or args.points is None:
        raise ConfigError("sweep needs --preset or all of --axis, --from, --to, --points", MODULE)
    grid = _grid(args.start, args.stop, args.points, args.log)
    rows = simulator.sweep(config, args.axis, grid, workers=args.workers)
    metadata = {'axis': args.axis, 'points': len(grid), 'grid_min': float(grid[0]), 'grid_max': float(grid[-1])}
    if args.out:
        emit(rows, args.format, args.out, metadata)
        _print_sweep_summary(args.axis, rows)
        print(f"\nResults saved to {args.out}")
    elif args.format == 'csv':
        print(sweep_frame(rows).to_csv(index=False, float_format='%.12g'), end='')
    else:
        print(json.dumps({'metadata': metadata, 'rows': [row.to_dict() for row in rows]}, indent=2))


COMMANDS = {
    'dispersion': _command_dispersion,
    'run': _command_run,
    'sweep': _command_sweep,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format='%(asctime)s %(name)s %(levelname)s: %(message)s')

    try:
        config = RunConfig.from_json(args.config) if args.config else RunConfig()
        COMMANDS[args.command](EntanglementSimulator(), config, args)
    except ConfigError as exc:
        print(f"❌ Configuration error: {exc}", file=sys.stderr)
        return 1
    except SimulationError as exc:
        print(f"❌ Simulation failed: {exc}", file=sys.stderr)
        return 2
    return 0


# CLI interface for direct usage
if __name__ == '__main__':
    sys.exit(main())
