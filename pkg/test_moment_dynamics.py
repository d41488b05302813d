"""Moment equations, fixed-step integration and step-halving convergence"""

import numpy as np
import pytest
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from duan_entanglement import duan_lambda
from moment_dynamics import (ConvergenceResult, LinearSystem, SystemParams, build_system, convergence_check,
                             initial_state, integrate)
from moment_state import (A2, A3, A3_B, A3DAG_A3, A3DAG_BDAG, B, B_DAG, BDAG_A2, BDAG_B, N_MOMENTS,
                          MomentState)
from simulation_errors import ConvergenceError, DomainError, NumericError

GENERIC = SystemParams(g2=1.3e9 + 0.4e9j, g3=0.7e9 - 0.2e9j, Gamma2=2e12, Gamma3=1.8e12, Gamma_m=1e6,
                       A=1e3, N_m=1e4)


def augmented(system: LinearSystem) -> np.ndarray:
    """[[M, c], [0, 0]] so the affine system propagates with one matrix exponential"""
    n = N_MOMENTS
    matrix = np.zeros((n + 1, n + 1), dtype=complex)
    matrix[:n, :n] = system.M
    matrix[:n, n] = system.c
    return matrix


def final_lambda(system, state0, t_end, steps, method='rk4'):
    return duan_lambda(integrate(system, state0, t_end, t_end / steps, method).final).lam


class TestSystemParams:

    @pytest.mark.parametrize("field", ['Gamma2', 'Gamma3', 'Gamma_m', 'A', 'N_m'])
    def test_negative_values(self, field):
        with pytest.raises(DomainError):
            SystemParams(**{**dict(g2=1.0, g3=1.0, Gamma2=1.0, Gamma3=1.0, Gamma_m=1.0, A=1.0, N_m=1.0), field: -1.0})

    def test_unknown_conventions(self):
        with pytest.raises(DomainError):
            SystemParams(g2=1.0, g3=1.0, Gamma2=1.0, Gamma3=1.0, Gamma_m=1.0, A=1.0, N_m=1.0, b0_convention='x')
        with pytest.raises(DomainError):
            SystemParams(g2=1.0, g3=1.0, Gamma2=1.0, Gamma3=1.0, Gamma_m=1.0, A=1.0, N_m=1.0, pump_letter='x')


class TestBuildSystem:

    def test_off_diagonal_couplings(self):
        M = build_system(GENERIC).M
        off_diagonal = M - np.diag(np.diag(M))
        assert np.count_nonzero(off_diagonal) == 19

    def test_single_affine_term(self):
        system = build_system(GENERIC)
        assert np.count_nonzero(system.c) == 1
        assert system.c[A3_B] == GENERIC.g3 * GENERIC.A

    def test_damping(self):
        M = build_system(GENERIC).M
        assert M[A2, A2] == -GENERIC.Gamma2 / 2
        assert M[A3, A3] == -GENERIC.Gamma3 / 2
        assert M[BDAG_B, BDAG_B] == -GENERIC.Gamma_m / 2

    def test_first_moment_conjugate_rows(self):
        M = build_system(GENERIC).M
        # conjugate rows are the complex conjugates of the plain rows with indices swapped
        swap = np.array([3, 4, 5, 0, 1, 2])
        assert np.allclose(M[3:6][:, swap], np.conj(M[0:3, 0:6]), rtol=0, atol=0)

    def test_zero_pump_is_homogeneous(self):
        system = build_system(SystemParams(g2=1e9, g3=1e9, Gamma2=1.0, Gamma3=1.0, Gamma_m=1.0, A=0.0, N_m=1.0))
        assert not np.any(system.c)
        assert np.count_nonzero(system.M - np.diag(np.diag(system.M))) == 0

    def test_printed_pump_letter(self):
        printed = build_system(SystemParams(**{**GENERIC.__dict__, 'pump_letter': 'as_printed'})).M
        uniform = build_system(GENERIC).M
        assert printed[BDAG_B, BDAG_A2] == -GENERIC.g2 * np.conj(1j * GENERIC.A)
        assert uniform[BDAG_B, BDAG_A2] == -GENERIC.g2 * GENERIC.A

    def test_initial_state(self):
        coherent = initial_state(GENERIC)
        assert coherent[B] == np.sqrt(GENERIC.N_m)
        assert coherent[B_DAG] == np.sqrt(GENERIC.N_m)
        assert coherent[BDAG_B] == GENERIC.N_m
        assert np.count_nonzero(coherent.vector) == 3

        empty = initial_state(SystemParams(**{**GENERIC.__dict__, 'b0_convention': 'zero'}))
        assert empty[B] == 0
        assert empty[BDAG_B] == GENERIC.N_m


class TestIntegrate:

    def test_grid_lands_on_end_time(self):
        trajectory = integrate(build_system(GENERIC), initial_state(GENERIC), 1e-12, 3e-14)
        assert trajectory.times[0] == 0
        assert trajectory.times[-1] == 1e-12
        assert np.all(np.diff(trajectory.times) > 0)
        assert trajectory.final.t == 1e-12

    def test_frame_columns(self):
        frame = integrate(build_system(GENERIC), initial_state(GENERIC), 1e-12, 1e-13).to_frame()
        assert frame.shape[1] == 29
        assert frame.columns[0] == 't_s'
        assert 're_Bdag_B' in frame.columns and 'im_A3_B' in frame.columns

    def test_decay_only(self):
        params = SystemParams(g2=0, g3=0, Gamma2=0, Gamma3=0, Gamma_m=1e6, A=1.0, N_m=1e4)
        t_end = 1 / params.Gamma_m
        final = integrate(build_system(params), initial_state(params), t_end, t_end / 100).final
        assert final.n_microwave == pytest.approx(params.N_m * np.exp(-0.5), rel=1e-8)
        assert final[B] == pytest.approx(np.sqrt(params.N_m) * np.exp(-0.5), rel=1e-8)

    def test_linearity_without_pump(self):
        params = SystemParams(g2=1e9, g3=1e9, Gamma2=1e12, Gamma3=1e12, Gamma_m=1e6, A=0.0, N_m=1e4)
        system = build_system(params)
        rng = np.random.default_rng(3)
        x0 = rng.normal(size=N_MOMENTS) + 1j * rng.normal(size=N_MOMENTS)
        one = integrate(system, MomentState.from_vector(x0), 1e-12, 1e-14).final.vector
        scaled = integrate(system, MomentState.from_vector(2.5 * x0), 1e-12, 1e-14).final.vector
        assert np.allclose(scaled, 2.5 * one, rtol=1e-13, atol=0)

    def test_matrix_exponential_oracle(self, default_system, default_setup):
        system, state0 = default_system
        t_end = default_setup.t_end
        final = integrate(system, state0, t_end, t_end / 400).final.vector
        propagated = expm(augmented(system) * t_end) @ np.append(state0.vector, 1.0)
        assert np.allclose(final, propagated[:N_MOMENTS], rtol=1e-9, atol=1e-9 * np.sqrt(1e4))

    def test_closed_microwave_subsystem(self):
        # g3 = 0 and no damping: <B^dag B> and <B^dag A2> rotate into each other
        params = SystemParams(g2=2e9, g3=0, Gamma2=0, Gamma3=0, Gamma_m=0, A=1.0, N_m=100.0)
        system = build_system(params)
        t_end = 5e-10
        final = integrate(system, initial_state(params), t_end, t_end / 200).final
        exact = expm(system.M * t_end) @ initial_state(params).vector
        assert final.n_microwave == pytest.approx(exact[BDAG_B].real, rel=1e-8)
        assert final.n_microwave == pytest.approx(100.0 * np.cos(2e9 * t_end), rel=1e-8)
        assert np.allclose(final[BDAG_A2], exact[BDAG_A2], rtol=1e-8, atol=1e-8)

    def test_against_dop853(self, default_system, default_setup):
        system, state0 = default_system
        t_end = default_setup.t_end
        solution = solve_ivp(lambda t, x: system.rhs(x), (0.0, t_end), state0.vector, method='DOP853',
                             rtol=1e-12, atol=1e-12)
        reference = duan_lambda(MomentState.from_vector(solution.y[:, -1])).lam
        assert final_lambda(system, state0, t_end, 400) == pytest.approx(reference, rel=1e-6)

    def test_default_trajectory_invariants(self, default_system, default_setup):
        system, state0 = default_system
        trajectory = integrate(system, state0, default_setup.t_end, default_setup.t_end / 200)
        for k in range(len(trajectory.times)):
            state = trajectory.state(k)
            assert state.pair_mismatch() < 1e-9
            assert state.n3 >= 0
            assert state.n_microwave > 0
        # the lower sideband block starts empty and is only fed by itself
        assert trajectory.final[A3DAG_A3] == 0
        assert trajectory.final[A3DAG_BDAG] == 0

    @pytest.mark.parametrize("method, steps, order", [
        ('rk4', (8, 16, 32), 4.0),
        ('euler', (64, 128, 256), 1.0),
    ])
    def test_convergence_order(self, default_system, default_setup, method, steps, order):
        system, state0 = default_system
        t_end = default_setup.t_end
        reference = final_lambda(system, state0, t_end, 2048)
        errors = [abs(final_lambda(system, state0, t_end, n, method) - reference) for n in steps]
        slope = np.polyfit(np.log([t_end / n for n in steps]), np.log(errors), 1)[0]
        tolerance = 0.3 if method == 'rk4' else 0.2
        assert slope == pytest.approx(order, abs=tolerance)

    def test_overflow_reports_step(self):
        system = LinearSystem(M=np.eye(N_MOMENTS, dtype=complex) * 1e200, c=np.zeros(N_MOMENTS, dtype=complex))
        with pytest.raises(NumericError) as info:
            integrate(system, MomentState.from_vector(np.ones(N_MOMENTS)), 10.0, 1.0)
        assert info.value.step == 1

    @pytest.mark.parametrize("t_end, dt, method", [(0.0, 1.0, 'rk4'), (1.0, 0.0, 'rk4'), (1.0, 0.1, 'midpoint')])
    def test_invalid_arguments(self, t_end, dt, method):
        with pytest.raises(DomainError):
            integrate(build_system(GENERIC), initial_state(GENERIC), t_end, dt, method)


class TestConvergenceCheck:

    def test_default_point(self, default_system, default_setup):
        system, state0 = default_system
        t_end = default_setup.t_end
        result = convergence_check(system, state0, t_end, t_end / 100)
        assert isinstance(result, ConvergenceResult)
        assert result.delta < 1e-6
        assert result.dt == t_end / 200
        assert result.trajectory.dt == result.dt

    def test_decay_only_converges_quickly(self):
        params = SystemParams(g2=0, g3=0, Gamma2=0, Gamma3=0, Gamma_m=1e6, A=1.0, N_m=1e4)
        t_end = 1 / params.Gamma_m
        result = convergence_check(build_system(params), initial_state(params), t_end, t_end / 100,
                                   metric=lambda state: state.n_microwave)
        assert result.halvings <= 3

    @pytest.mark.parametrize("metric", [None, lambda state: state.n_microwave], ids=['duan', 'n_microwave'])
    def test_stiff_coupling_refines_step(self, metric):
        params = SystemParams(g2=1e9, g3=1e8, Gamma2=0, Gamma3=0, Gamma_m=0, A=1.0, N_m=100.0)
        rate = params.g2 * params.A
        t_end = 50 / rate
        result = convergence_check(build_system(params), initial_state(params), t_end, t_end / 20,
                                   metric=metric)
        assert result.dt * rate <= 1 / 50

    def test_failure(self):
        params = SystemParams(g2=1e9, g3=1e8, Gamma2=0, Gamma3=0, Gamma_m=0, A=1.0, N_m=100.0)
        t_end = 50 / params.g2
        with pytest.raises(ConvergenceError):
            convergence_check(build_system(params), initial_state(params), t_end, t_end / 20, max_halvings=1,
                              metric=lambda state: state.n_microwave)

    def test_invalid_step(self):
        with pytest.raises(DomainError):
            convergence_check(build_system(GENERIC), initial_state(GENERIC), 1e-12, 0.0)
