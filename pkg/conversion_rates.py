#!/usr/bin/env python3
"""
Conversion Rates
Quantized microwave-optical coupling rates g2 (upper sideband) and g3 (lower sideband)
"""

from dataclasses import dataclass

import numpy as np

from physical_constants import EPS_0, HBAR
from simulation_errors import DomainError, NumericError
from spp_waveguide import SppMode

MODULE = 'coupling'

SINC_SERIES_RADIUS = 1e-4
FREQUENCY_MATCH_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Geometry:
    """Capacitor plates of area L x W separated by d"""
    L: float
    W: float
    d: float
    eps_r: float = 1.0

    def __post_init__(self):
        for name in ('L', 'W', 'd'):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise DomainError(f"{name} must be positive, got {value!r}", MODULE)
        if self.eps_r < 1:
            raise DomainError(f"eps_r must be >= 1, got {self.eps_r!r}", MODULE)

    @property
    def A_r(self) -> float:
        return self.L * self.W

    @property
    def C(self) -> float:
        return EPS_0 * self.eps_r / self.d


@dataclass(frozen=True)
class CouplingRates:
    g2: complex
    g3: complex
    delta_beta_12: complex
    delta_beta_31: complex


def complex_sinc(z: complex) -> complex:
    """sin(z)/z for complex z, series near the removable singularity"""
    z = complex(z)
    if abs(z) < SINC_SERIES_RADIUS:
        z2 = z * z
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0
    return complex(np.sin(z) / z)


def vacuum_voltage(omega_m: float, geom: Geometry) -> float:
    """Single-photon microwave voltage (2*hbar*omega_m / (C*A_r))^(1/2)"""
    if omega_m < 0:
        raise DomainError(f"microwave frequency must be non-negative, got {omega_m!r}", MODULE)
    return float(np.sqrt(2.0 * HBAR * omega_m / (geom.C * geom.A_r)))


def _phase_factor(delta_beta: complex, length: float) -> complex:
    half = delta_beta * length / 2.0
    return complex_sinc(half) * np.exp(1j * half)


def _rate(sideband: SppMode, pump: SppMode, geom: Geometry, omega_m: float,
          delta_beta: complex, overlap: complex, label: str) -> complex:
    radicand = (2.0 * pump.omega * sideband.omega * HBAR * omega_m
                / (geom.C * geom.A_r * np.real(pump.eps_eff_prime) * np.real(sideband.eps_eff_prime)))
    if radicand < 0 or not np.isfinite(radicand):
        raise NumericError(f"{label}: negative or non-finite quantization radicand {radicand!r}", MODULE)

    rate = (0.5 * sideband.eps_eff_dprime * _phase_factor(delta_beta, geom.L)
            * np.sqrt(radicand) * overlap / np.sqrt(pump.xi * sideband.xi))
    if not np.isfinite(rate):
        raise NumericError(f"{label} is not finite: {rate!r}", MODULE)
    return complex(rate)


def _check_frequency(mode: SppMode, expected: float, label: str) -> None:
    if abs(mode.omega - expected) > FREQUENCY_MATCH_TOLERANCE * expected:
        raise DomainError(f"{label} mode at {mode.omega!r} rad/s, expected {expected!r}", MODULE)


def conversion_rates(pump: SppMode, upper: SppMode, lower: SppMode, geom: Geometry,
                     omega_m: float, I12: complex, I13: complex) -> CouplingRates:
    """
    Conversion rates for the pump at omega1 and sidebands at omega1 +/- omega_m

    Args:
        pump, upper, lower: SPP modes at omega1, omega1+omega_m, omega1-omega_m
        geom: capacitor geometry
        omega_m: microwave angular frequency
        I12, I13: normalized mode overlaps pump/upper and pump/lower

    Returns:
        CouplingRates with the unperturbed phase mismatches beta1-beta2 and beta3-beta1
    """
    _check_frequency(upper, pump.omega + omega_m, 'upper sideband')
    _check_frequency(lower, pump.omega - omega_m, 'lower sideband')

    delta_12 = pump.beta_prime - upper.beta_prime
    delta_31 = lower.beta_prime - pump.beta_prime

    g2 = _rate(upper, pump, geom, omega_m, delta_12, I12, 'g2')
    g3 = _rate(lower, pump, geom, omega_m, delta_31, I13, 'g3')
    return CouplingRates(g2=g2, g3=g3, delta_beta_12=complex(delta_12), delta_beta_31=complex(delta_31))
