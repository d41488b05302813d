#!/usr/bin/env python3
"""
Moment Dynamics
Linear ODE system for the first moments and the regression-theorem second moments
of the pumped microwave/sideband system, with fixed-step integration and a
step-halving convergence check on the Duan determinant
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import pandas as pd

from duan_entanglement import duan_lambda
from moment_state import (A2, A2_DAG, A3, A3_A2, A3_B, A3_DAG, A3DAG_A2DAG, A3DAG_A3, A3DAG_BDAG, B, B_DAG,
                          BDAG_A2, BDAG_A3DAG, BDAG_B, MOMENT_NAMES, N_MOMENTS, MomentState)
from simulation_errors import ConvergenceError, DomainError, NumericError

logger = logging.getLogger(__name__)

MODULE = 'dynamics'

B0_CONVENTIONS = ('coherent', 'zero')
PUMP_LETTERS = ('uniform_A', 'as_printed')
METHODS = ('rk4', 'euler')


@dataclass(frozen=True)
class SystemParams:
    g2: complex
    g3: complex
    Gamma2: float
    Gamma3: float
    Gamma_m: float
    A: float
    N_m: float
    b0_convention: str = 'coherent'
    pump_letter: str = 'uniform_A'

    def __post_init__(self):
        for name in ('Gamma2', 'Gamma3', 'Gamma_m', 'A', 'N_m'):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise DomainError(f"{name} must be non-negative, got {value!r}", MODULE)
        if self.b0_convention not in B0_CONVENTIONS:
            raise DomainError(f"b0_convention must be one of {B0_CONVENTIONS}", MODULE)
        if self.pump_letter not in PUMP_LETTERS:
            raise DomainError(f"pump_letter must be one of {PUMP_LETTERS}", MODULE)


@dataclass(frozen=True)
class LinearSystem:
    """dx/dt = M x + c"""
    M: np.ndarray
    c: np.ndarray

    def rhs(self, x: np.ndarray) -> np.ndarray:
        return self.M @ x + self.c


@dataclass
class Trajectory:
    times: np.ndarray
    values: np.ndarray     # shape (len(times), 14)
    method: str
    dt: float

    @property
    def final(self) -> MomentState:
        return MomentState.from_vector(self.values[-1], self.times[-1])

    def state(self, k: int) -> MomentState:
        return MomentState.from_vector(self.values[k], self.times[k])

    def to_frame(self) -> pd.DataFrame:
        """t_s followed by re/im columns of every moment (29 columns)"""
        columns = {'t_s': self.times}
        for i, name in enumerate(MOMENT_NAMES):
            columns[f're_{name}'] = self.values[:, i].real
            columns[f'im_{name}'] = self.values[:, i].imag
        return pd.DataFrame(columns)


@dataclass
class ConvergenceResult:
    dt: float
    delta: float
    halvings: int
    trajectory: Trajectory


def initial_state(params: SystemParams) -> MomentState:
    """Uncorrelated start: empty sidebands, N_m microwave photons, all cross moments zero"""
    vector = np.zeros(N_MOMENTS, dtype=complex)
    b0 = np.sqrt(params.N_m) if params.b0_convention == 'coherent' else 0.0
    vector[B] = b0
    vector[B_DAG] = np.conj(b0)
    vector[BDAG_B] = params.N_m
    return MomentState.from_vector(vector)


def build_system(params: SystemParams) -> LinearSystem:
    """
    Transcribe the moment equations into M and c

    The pump amplitude A is real; with pump_letter='as_printed' the <B^dag B>
    equation keeps A1 = iA. <A3 A3^dag> in the <A3 B> equation is closed as
    <A3^dag A3> + 1, which is the only affine term.
    """
    g2, g3, A = params.g2, params.g3, params.A
    half2, half3, half_m = params.Gamma2 / 2.0, params.Gamma3 / 2.0, params.Gamma_m / 2.0
    A1 = 1j * A if params.pump_letter == 'as_printed' else A

    M = np.zeros((N_MOMENTS, N_MOMENTS), dtype=complex)
    c = np.zeros(N_MOMENTS, dtype=complex)

    # <A2>, <A3>, <B>
    M[A2, A2] = -half2
    M[A2, B] = g2 * A
    M[A3, A3] = -half3
    M[A3, B_DAG] = g3 * A
    M[B, B] = -half_m
    M[B, A2] = -g2 * A
    M[B, A3_DAG] = g3 * A

    # conjugates of the three rows above
    M[A2_DAG, A2_DAG] = -half2
    M[A2_DAG, B_DAG] = np.conj(g2) * A
    M[A3_DAG, A3_DAG] = -half3
    M[A3_DAG, B] = np.conj(g3) * A
    M[B_DAG, B_DAG] = -half_m
    M[B_DAG, A2_DAG] = -np.conj(g2) * A
    M[B_DAG, A3] = np.conj(g3) * A

    M[A3_B, A3_B] = -half_m
    M[A3_B, A3_A2] = -g2 * A
    M[A3_B, A3DAG_A3] = g3 * A
    c[A3_B] = g3 * A

    M[A3_A2, A3_A2] = -half2
    M[A3_A2, A3_B] = g2 * A

    M[A3DAG_A3, A3DAG_A3] = -half3
    M[A3DAG_A3, A3DAG_BDAG] = g3 * A

    M[A3DAG_BDAG, A3DAG_BDAG] = -half_m
    M[A3DAG_BDAG, A3DAG_A2DAG] = -g2 * A
    M[A3DAG_BDAG, A3DAG_A3] = g3 * A

    M[A3DAG_A2DAG, A3DAG_A2DAG] = -half2
    M[A3DAG_A2DAG, A3DAG_BDAG] = g2 * A

    M[BDAG_B, BDAG_B] = -half_m
    M[BDAG_B, BDAG_A2] = -g2 * np.conj(A1)
    M[BDAG_B, BDAG_A3DAG] = g3 * A1

    M[BDAG_A2, BDAG_A2] = -half2
    M[BDAG_A2, BDAG_B] = g2 * A

    M[BDAG_A3DAG, BDAG_A3DAG] = -half_m
    M[BDAG_A3DAG, BDAG_B] = g3 * A

    return LinearSystem(M=M, c=c)


def _time_grid(t_end: float, dt: float) -> np.ndarray:
    n = max(1, int(np.ceil(t_end / dt * (1.0 - 1e-12))))
    times = np.minimum(np.arange(n + 1) * dt, t_end)
    times[-1] = t_end
    return times


def _rk4_step(system: LinearSystem, x: np.ndarray, h: float) -> np.ndarray:
    k1 = system.rhs(x)
    k2 = system.rhs(x + 0.5 * h * k1)
    k3 = system.rhs(x + 0.5 * h * k2)
    k4 = system.rhs(x + h * k3)
    return x + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0


def _euler_step(system: LinearSystem, x: np.ndarray, h: float) -> np.ndarray:
    return x + h * system.rhs(x)


STEPPERS = {'rk4': _rk4_step, 'euler': _euler_step}


def _duan_value(state: MomentState) -> float:
    return duan_lambda(state).lam


def integrate(system: LinearSystem, state0: MomentState, t_end: float, dt: float,
              method: str = 'rk4') -> Trajectory:
    """
    Fixed-step integration from t=0 to t_end; the last step is shortened to land on t_end

    Args:
        system: linear moment system
        state0: initial moments
        t_end: final time (s)
        dt: step size (s)
        method: 'rk4' or 'euler'

    Returns:
        Trajectory holding every step including both end points
    """
    if not t_end > 0 or not dt > 0:
        raise DomainError(f"t_end and dt must be positive, got t_end={t_end!r}, dt={dt!r}", MODULE)
    if method not in STEPPERS:
        raise DomainError(f"method must be one of {METHODS}, got {method!r}", MODULE)

    step = STEPPERS[method]
    times = _time_grid(t_end, dt)
    values = np.empty((len(times), N_MOMENTS), dtype=complex)
    values[0] = state0.vector

    x = values[0]
    with np.errstate(over='ignore', invalid='ignore'):
        for k in range(1, len(times)):
            x = step(system, x, times[k] - times[k - 1])
            if not np.all(np.isfinite(x)):
                raise NumericError(f"non-finite moments at step {k} (t={times[k]:.4e} s)", MODULE, step=k)
            values[k] = x

    return Trajectory(times=times, values=values, method=method, dt=float(dt))


def convergence_check(system: LinearSystem, state0: MomentState, t_end: float, dt0: float,
                      method: str = 'rk4', target: float = 1e-6, max_halvings: int = 12,
                      metric: Optional[Callable[[MomentState], float]] = None) -> ConvergenceResult:
    """
    Halve dt until the final-time Duan determinant changes by less than `target` (relative)

    Returns the finer of the two agreeing step sizes together with its trajectory.
    """
    if not dt0 > 0:
        raise DomainError(f"dt0 must be positive, got {dt0!r}", MODULE)
    metric = metric or _duan_value

    dt = dt0
    previous = metric(integrate(system, state0, t_end, dt, method).final)
    delta = float('inf')
    for halving in range(1, max_halvings + 1):
        dt /= 2.0
        trajectory = integrate(system, state0, t_end, dt, method)
        current = metric(trajectory.final)
        scale = max(abs(current), abs(previous), 1e-12)
        delta = abs(current - previous) / scale
        logger.debug("Convergence halving %d: dt=%.4e Lambda=%.10e delta=%.3e", halving, dt, current, delta)
        if delta < target:
            return ConvergenceResult(dt=dt, delta=float(delta), halvings=halving, trajectory=trajectory)
        previous = current

    raise ConvergenceError(f"no convergence within {max_halvings} halvings (last delta {delta:.3e})", MODULE)
