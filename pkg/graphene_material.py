#!/usr/bin/env python3
"""
Graphene Material Model
Electrically tunable chemical potential and sheet conductivity, with the first-order
terms driven by the microwave voltage across the capacitor
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from physical_constants import EPS_0, HBAR, K_B, Q_E
from simulation_errors import DomainError, NumericError

logger = logging.getLogger(__name__)

MODULE = 'material'

FREQUENCY_CONVENTIONS = ('as_printed', 'angular')

# Ratio above which a perturbative expansion is flagged
PERTURBATIVE_WARNING_RATIO = 0.1


@dataclass(frozen=True)
class GrapheneParams:
    """Material and environment constants of the loaded capacitor (SI units)"""
    n0: float = 1e18          # sheet carrier density, 1/m^2
    tau: float = 0.5e-12      # scattering relaxation time, s
    T: float = 3e-3           # temperature, K
    Vf: float = 1e6           # Fermi velocity, m/s
    eps_r: float = 1.0        # gap filler relative permittivity
    d: float = 1e-6           # plate separation, m

    def __post_init__(self):
        for name in ('n0', 'tau', 'T', 'Vf', 'd'):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise DomainError(f"{name} must be positive, got {value!r}", MODULE)
        if not np.isfinite(self.eps_r) or self.eps_r < 1:
            raise DomainError(f"eps_r must be >= 1, got {self.eps_r!r}", MODULE)

    @property
    def capacitance(self) -> float:
        """Capacitance per unit area C = eps0*eps_r/d (F/m^2)"""
        return EPS_0 * self.eps_r / self.d


@dataclass(frozen=True)
class ChemicalPotential:
    mu_prime: float                           # J
    mu_dprime: float                          # J/V
    validity_ratio: Optional[float] = None    # mu_dprime*V_ref/mu_prime

    @property
    def perturbative(self) -> bool:
        return self.validity_ratio is None or self.validity_ratio <= PERTURBATIVE_WARNING_RATIO

    def value(self, voltage: complex = 0.0, phase: float = 0.0) -> float:
        """Chemical potential for drive amplitude `voltage` at phase w_m*t (the c.c. is added)"""
        term = voltage * self.mu_dprime * np.exp(-1j * phase)
        return float(self.mu_prime + 2.0 * np.real(term))


@dataclass(frozen=True)
class Conductivity:
    sigma_prime: complex     # S
    sigma_dprime: complex    # S/V
    omega: float = 0.0       # rad/s at which it was evaluated

    def perturbation_ratio(self, voltage: float) -> float:
        """|V*sigma''| / |sigma'| for the drive scale `voltage`"""
        return float(abs(voltage * self.sigma_dprime) / abs(self.sigma_prime))


def chemical_potential(params: GrapheneParams, v_ref: float = 0.0) -> ChemicalPotential:
    """
    Unperturbed chemical potential and its voltage coefficient

    Args:
        params: graphene and capacitor parameters
        v_ref: reference voltage amplitude used for the validity ratio

    Returns:
        ChemicalPotential with mu' = hbar*Vf*sqrt(pi*n0) and mu'' = hbar*Vf*C/(q*sqrt(pi*n0))
    """
    if params.n0 <= 0:
        raise DomainError(f"carrier density must be positive, got {params.n0!r}", MODULE)

    root = np.sqrt(np.pi * params.n0)
    mu_prime = HBAR * params.Vf * root
    mu_dprime = HBAR * params.Vf * params.capacitance / (Q_E * root)

    ratio = abs(v_ref) * mu_dprime / mu_prime
    if ratio > PERTURBATIVE_WARNING_RATIO:
        logger.warning("Chemical potential perturbation ratio %.3g exceeds %.1g at V=%.3g V",
                       ratio, PERTURBATIVE_WARNING_RATIO, v_ref)
    return ChemicalPotential(mu_prime=float(mu_prime), mu_dprime=float(mu_dprime),
                             validity_ratio=float(ratio))


def log1p_exp_neg(x: float) -> float:
    """ln(exp(-x) + 1) without overflow or underflow trouble"""
    if x > 700.0:
        return 0.0
    if x >= 0.0:
        return float(np.log1p(np.exp(-x)))
    return float(-x + np.log1p(np.exp(x)))


def _drive_frequency(omega: float, tau: float, convention: str) -> complex:
    if convention == 'as_printed':
        return omega / (2.0 * np.pi) + 1j / tau
    if convention == 'angular':
        return omega + 1j / tau
    raise DomainError(f"unknown frequency convention {convention!r}", MODULE)


def _check_finite(terms: dict) -> None:
    for name, value in terms.items():
        if not np.isfinite(value):
            raise NumericError(f"non-finite conductivity term '{name}': {value!r}", MODULE)


def conductivity(params: GrapheneParams, mu: ChemicalPotential, omega: float,
                 frequency_convention: str = 'as_printed') -> Conductivity:
    """
    Sheet conductivity sigma' and its voltage coefficient sigma'' at angular frequency omega

    The drive term (omega/2pi + i/tau) is used as written; frequency_convention='angular'
    swaps in (omega + i/tau) instead.
    """
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega!r}", MODULE)

    w = _drive_frequency(omega, params.tau, frequency_convention)
    kT = K_B * params.T
    x = mu.mu_prime / kT
    mu2 = 2.0 * mu.mu_prime
    wh = w * HBAR

    with np.errstate(all='ignore'):
        inter_prime = 1j * Q_E**2 / (4.0 * np.pi * HBAR) * np.log((mu2 - wh) / (mu2 + wh))
        intra_scale = 1j * Q_E**2 * kT / (np.pi * HBAR**2 * w)
        intra_prime = intra_scale * (x + 2.0 * log1p_exp_neg(x))

        inter_dprime = (1j * Q_E**2 / (np.pi * HBAR) * wh
                        / (mu2**2 - wh**2) * mu.mu_dprime)
        intra_dprime = intra_scale * np.tanh(x / 2.0) * mu.mu_dprime / kT

    _check_finite({
        'interband sigma\'': inter_prime,
        'intraband sigma\'': intra_prime,
        'interband sigma\'\'': inter_dprime,
        'intraband sigma\'\'': intra_dprime,
    })

    return Conductivity(sigma_prime=complex(inter_prime + intra_prime),
                        sigma_dprime=complex(inter_dprime + intra_dprime),
                        omega=float(omega))
