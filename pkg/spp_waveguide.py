#!/usr/bin/env python3
"""
Graphene SPP Waveguide
Dispersion, perturbed propagation constant, transverse decay, group velocity,
mode integrals and overlaps for the pump and sideband SPP modes
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np

from graphene_material import ChemicalPotential, Conductivity, GrapheneParams, conductivity
from physical_constants import C_LIGHT, EPS_0, HBAR, MU_0, Z_0
from simulation_errors import BranchError, ConfinementError, ConvergenceError, DomainError, SingularityError

logger = logging.getLogger(__name__)

MODULE = 'waveguide'

SINGULARITY_TOLERANCE = 1e-12
CONTAINMENT_DECAY_LENGTHS = 10.0


@dataclass(frozen=True)
class SppMode:
    """Derived waveguide quantities at one optical frequency"""
    omega: float
    k0: float
    beta_prime: complex
    beta_dprime: complex
    alpha: complex
    eps_eff_prime: complex
    eps_eff_dprime: complex
    Gamma: float
    v_g: float
    xi: float
    eps_r: float = 1.0

    @property
    def frequency(self) -> float:
        return self.omega / (2.0 * np.pi)

    @property
    def eps_eff_loss_ratio(self) -> float:
        """Im/Re of eps_eff' (diagnostic for the real normalization)"""
        return float(abs(np.imag(self.eps_eff_prime) / np.real(self.eps_eff_prime)))


@dataclass(frozen=True)
class ModeProfileIntegrals:
    int_Dy2: float
    int_Dxz2: float
    V_L: float


def _pick_branch(root: complex, accept: Callable[[complex], bool], what: str) -> complex:
    """Principal root first, the negated root if the branch rule fails"""
    if accept(root):
        return root
    if accept(-root):
        return -root
    raise BranchError(f"no {what} branch satisfies the branch rule", (root, -root), MODULE)


def solve_dispersion(sigma: Conductivity, omega: float) -> complex:
    """beta' = k0*sqrt(1 - (2/(Z0*sigma'))^2) on the forward, lossy branch"""
    if sigma.sigma_prime == 0:
        raise DomainError("conductivity must be non-zero", MODULE)
    k0 = omega / C_LIGHT
    root = k0 * np.sqrt(complex(1.0 - (2.0 / (Z_0 * sigma.sigma_prime)) ** 2))
    return complex(_pick_branch(root, lambda b: b.real > 0 and b.imag >= 0, 'propagation constant'))


def perturbed_beta(beta_prime: complex, sigma: Conductivity) -> complex:
    """beta'' = beta'/(1 - (Z0*sigma'/2)^2) * sigma''/sigma'"""
    denominator = 1.0 - (0.5 * Z_0 * sigma.sigma_prime) ** 2
    if abs(denominator) < SINGULARITY_TOLERANCE:
        raise SingularityError(f"resonant conductivity: 1-(Z0*sigma'/2)^2 = {denominator!r}", MODULE)
    return complex(beta_prime / denominator * (sigma.sigma_dprime / sigma.sigma_prime))


def transverse_alpha(beta_prime: complex, k0: float, eps_r: float = 1.0) -> complex:
    radicand = complex(beta_prime ** 2 - eps_r * k0 ** 2)
    if radicand == 0:
        raise DomainError("beta equals sqrt(eps)*k0, transverse decay undefined", MODULE)
    root = np.sqrt(radicand)
    try:
        return complex(_pick_branch(root, lambda a: a.real > 0, 'transverse decay'))
    except BranchError as exc:
        raise ConfinementError(f"mode not confined: alpha candidates {exc.roots}", MODULE) from exc


def group_velocity(beta_of_frequency: Callable[[float], complex], omega: float,
                   rel_step: float = 1e-4, tol: float = 1e-6, max_refinements: int = 10) -> float:
    """
    Group velocity v_g = df/dRe(beta) by central differences with step halving

    Args:
        beta_of_frequency: maps cyclic frequency (Hz) to the complex propagation constant
        omega: evaluation angular frequency (rad/s)
        rel_step: initial step as a fraction of the cyclic frequency
        tol: relative agreement required between successive estimates
        max_refinements: number of halvings before giving up

    Returns:
        Richardson-extrapolated derivative from the last two step sizes
    """
    f_hz = omega / (2.0 * np.pi)

    def central(h: float) -> float:
        d_beta = np.real(beta_of_frequency(f_hz + h)) - np.real(beta_of_frequency(f_hz - h))
        return 2.0 * h / d_beta

    h = rel_step * f_hz
    previous = central(h)
    for _ in range(max_refinements):
        h /= 2.0
        current = central(h)
        if abs(current - previous) <= tol * abs(current):
            return float((4.0 * current - previous) / 3.0)
        previous = current
    raise ConvergenceError(f"group velocity did not converge at f={f_hz:.6g} Hz", MODULE)


def _field_scale_sq(omega: float, eps_r: float) -> float:
    return (omega * eps_r * EPS_0) ** 2


def _int_dy2(alpha: complex) -> float:
    return 1.0 / np.real(alpha)


def _int_dxz2(omega: float, beta: complex, alpha: complex, eps_r: float) -> float:
    weight = abs(beta) ** 2 + abs(alpha) ** 2
    return weight / (_field_scale_sq(omega, eps_r) * np.real(alpha))


def _xi(omega: float, beta: complex, alpha: complex, eps_eff_prime: complex, eps_r: float) -> float:
    ratio = _int_dy2(alpha) / _int_dxz2(omega, beta, alpha, eps_r)
    return float(0.5 + MU_0 / (2.0 * EPS_0 * np.real(eps_eff_prime)) * ratio)


def _require_confined(mode: SppMode) -> None:
    if not np.real(mode.alpha) > 0:
        raise ConfinementError(f"mode at {mode.frequency:.6g} Hz is not confined", MODULE)


def mode_profile_integrals(mode: SppMode, area: float = 1.0) -> ModeProfileIntegrals:
    """Closed-form transverse integrals; V_L = area * int(|Dx|^2 + |Dz|^2) dx"""
    _require_confined(mode)
    int_dxz2 = _int_dxz2(mode.omega, mode.beta_prime, mode.alpha, mode.eps_r)
    return ModeProfileIntegrals(int_Dy2=float(_int_dy2(mode.alpha)),
                                int_Dxz2=float(int_dxz2),
                                V_L=float(area * int_dxz2))


def mode_overlap(m: SppMode, n: SppMode) -> complex:
    """
    Normalized cross integral I_mn of the (Dx, Dz) profiles of two modes

    Each profile decays as exp(-alpha|x|) on both sides of the sheet, so the
    integrals reduce to elementary expressions in alpha and beta.
    """
    _require_confined(m)
    _require_confined(n)
    decay = np.conj(m.alpha) + n.alpha
    if not np.real(decay) > 0:
        raise DomainError(f"overlap decay alpha_m* + alpha_n = {decay!r} has non-positive real part", MODULE)

    scale = m.omega * n.omega * m.eps_r * n.eps_r * EPS_0 ** 2
    cross = (np.conj(m.beta_prime) * n.beta_prime + np.conj(m.alpha) * n.alpha) / scale * 2.0 / decay
    norm = np.sqrt(_int_dxz2(m.omega, m.beta_prime, m.alpha, m.eps_r)
                   * _int_dxz2(n.omega, n.beta_prime, n.alpha, n.eps_r))
    return complex(cross / norm)


def xi_factor(mode: SppMode) -> float:
    """xi = 1/2 + mu0/(2 eps0 Re eps_eff') * int|Dy|^2 / int(|Dx|^2+|Dz|^2)"""
    _require_confined(mode)
    return _xi(mode.omega, mode.beta_prime, mode.alpha, mode.eps_eff_prime, mode.eps_r)


def field_amplitude_scale(mode: SppMode, area: float) -> float:
    """SPP amplitude per photon, sqrt(hbar*omega / (xi*eps0*Re(eps_eff')*V_L))"""
    volume = mode_profile_integrals(mode, area).V_L
    return float(np.sqrt(HBAR * mode.omega / (mode.xi * EPS_0 * np.real(mode.eps_eff_prime) * volume)))


def electrode_containment(mode: SppMode, d: float) -> Dict[str, float]:
    _require_confined(mode)
    decay = np.real(mode.alpha)
    return {
        'edge_field_ratio': float(np.exp(-decay * d / 2.0)),
        'contained_fraction': float(-np.expm1(-decay * d)),
        'decay_lengths': float(decay * d),
        'contained': bool(decay * d >= CONTAINMENT_DECAY_LENGTHS),
    }


def dispersion_function(params: GrapheneParams, mu: ChemicalPotential,
                        frequency_convention: str = 'as_printed') -> Callable[[float], complex]:
    """beta'(f) through the material chain at fixed parameters"""
    def beta_of_frequency(f_hz: float) -> complex:
        omega = 2.0 * np.pi * f_hz
        return solve_dispersion(conductivity(params, mu, omega, frequency_convention), omega)
    return beta_of_frequency


def build_mode(params: GrapheneParams, mu: ChemicalPotential, omega: float,
               frequency_convention: str = 'as_printed') -> SppMode:
    """Full per-frequency chain: sigma -> beta' -> beta'' -> alpha -> eps_eff -> v_g -> Gamma -> xi"""
    sigma = conductivity(params, mu, omega, frequency_convention)
    k0 = omega / C_LIGHT
    beta_prime = solve_dispersion(sigma, omega)
    beta_dprime = perturbed_beta(beta_prime, sigma)
    alpha = transverse_alpha(beta_prime, k0, params.eps_r)

    eps_eff_prime = (beta_prime / k0) ** 2
    eps_eff_dprime = 2.0 * beta_prime * beta_dprime / k0 ** 2

    v_g = group_velocity(dispersion_function(params, mu, frequency_convention), omega)
    gamma = 2.0 * v_g * np.imag(beta_prime)

    mode = SppMode(omega=float(omega), k0=float(k0), beta_prime=beta_prime, beta_dprime=beta_dprime,
                   alpha=alpha, eps_eff_prime=complex(eps_eff_prime), eps_eff_dprime=complex(eps_eff_dprime),
                   Gamma=float(gamma), v_g=float(v_g),
                   xi=_xi(omega, beta_prime, alpha, eps_eff_prime, params.eps_r),
                   eps_r=float(params.eps_r))

    if not 0 < mode.v_g < C_LIGHT:
        logger.warning("Group velocity %.4g m/s outside (0, c) at %.6g Hz", mode.v_g, mode.frequency)
    logger.debug("SPP mode at %.6g Hz: beta'=%s alpha=%s v_g=%.4g Gamma=%.4g xi=%.6f",
                 mode.frequency, beta_prime, alpha, mode.v_g, mode.Gamma, mode.xi)
    return mode
