#!/usr/bin/env python3
"""
Duan Entanglement Criterion
Determinant form of the inseparability test between the microwave mode B and the
lower SPP sideband A3: the fields are entangled whenever the determinant is negative.
"""

from dataclasses import dataclass

import numpy as np

from moment_state import A3, A3_B, A3DAG_A3, A3DAG_BDAG, A3_DAG, B, B_DAG, BDAG_B, MomentState

IMAGINARY_RESIDUE_RATIO = 1e-3


@dataclass(frozen=True)
class DuanResult:
    lam: float                 # Re(Lambda)
    lambda_imag: float         # Im(Lambda), reported as a diagnostic
    entangled: bool
    matrix: np.ndarray

    def residue_exceeds(self, ratio: float = IMAGINARY_RESIDUE_RATIO) -> bool:
        """|Im Lambda| above `ratio` times |Re Lambda|"""
        return abs(self.lambda_imag) > ratio * abs(self.lam)

    @property
    def residue_flagged(self) -> bool:
        return self.residue_exceeds()


def duan_matrix(state: MomentState) -> np.ndarray:
    v = state.vector
    return np.array([
        [1.0,       v[A3],    v[B_DAG]],
        [v[A3_DAG], v[A3DAG_A3], v[A3DAG_BDAG]],
        [v[B],      v[A3_B],  v[BDAG_B]],
    ], dtype=complex)


def _det3(m: np.ndarray) -> complex:
    return (m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
            - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
            + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0]))


def duan_lambda(state: MomentState) -> DuanResult:
    """Cofactor expansion of the 3x3 moment determinant; strict sign test, no dead band"""
    matrix = duan_matrix(state)
    det = complex(_det3(matrix))
    return DuanResult(lam=float(det.real), lambda_imag=float(det.imag),
                      entangled=bool(det.real < 0), matrix=matrix)
