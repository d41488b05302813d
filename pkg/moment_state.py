#!/usr/bin/env python3
"""
Moment state layout shared by the dynamics and entanglement modules

The 14 evolved averages are stored as one complex vector: six first moments
(three operators and their conjugates) followed by eight second moments.
"""

from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

# First moments
A2, A3, B, A2_DAG, A3_DAG, B_DAG = range(6)
# Second moments
A3DAG_A3, A3_B, A3_A2, A3DAG_BDAG, A3DAG_A2DAG, BDAG_B, BDAG_A2, BDAG_A3DAG = range(6, 14)

N_FIRST = 6
N_MOMENTS = 14

MOMENT_NAMES = [
    'A2', 'A3', 'B', 'A2_dag', 'A3_dag', 'B_dag',
    'A3dag_A3', 'A3_B', 'A3_A2', 'A3dag_Bdag', 'A3dag_A2dag', 'Bdag_B', 'Bdag_A2', 'Bdag_A3dag',
]

CONJUGATE_PAIRS = ((A2, A2_DAG), (A3, A3_DAG), (B, B_DAG))


@dataclass
class MomentState:
    first: np.ndarray = field(default_factory=lambda: np.zeros(N_FIRST, dtype=complex))
    second: np.ndarray = field(default_factory=lambda: np.zeros(N_MOMENTS - N_FIRST, dtype=complex))
    t: float = 0.0

    @classmethod
    def from_vector(cls, vector: np.ndarray, t: float = 0.0) -> 'MomentState':
        vector = np.asarray(vector, dtype=complex)
        return cls(first=vector[:N_FIRST].copy(), second=vector[N_FIRST:].copy(), t=float(t))

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.first, self.second])

    def __getitem__(self, index: int) -> complex:
        return complex(self.vector[index])

    def as_dict(self) -> Dict[str, complex]:
        return {name: complex(v) for name, v in zip(MOMENT_NAMES, self.vector)}

    @property
    def n3(self) -> float:
        return float(np.real(self[A3DAG_A3]))

    @property
    def n_microwave(self) -> float:
        return float(np.real(self[BDAG_B]))

    @property
    def n3_coherent(self) -> float:
        """|<A3>|^2, the coherent part of the lower sideband occupation"""
        return float(abs(self[A3]) ** 2)

    @property
    def conjugate_drift(self) -> float:
        """|<A3^dag B^dag> - <A3 B>^*|, zero for a physical state"""
        return float(abs(self[A3DAG_BDAG] - np.conj(self[A3_B])))

    def pair_mismatch(self) -> float:
        """Largest relative mismatch between stored conjugates and conjugated partners"""
        worst = 0.0
        for i, j in CONJUGATE_PAIRS:
            scale = max(abs(self.first[i]), 1.0)
            worst = max(worst, abs(np.conj(self.first[i]) - self.first[j]) / scale)
        return float(worst)

    def invariant_violations(self, n_ref: float = 1.0) -> List[str]:
        tol = 1e-9 * max(1.0, n_ref)
        issues = []
        for name, index in (('<A3^dag A3>', A3DAG_A3), ('<B^dag B>', BDAG_B)):
            value = self[index]
            if value.real < -tol:
                issues.append(f"{name} negative: {value.real:.3e}")
            if abs(value.imag) > 1e-9 * max(abs(value.real), 1.0):
                issues.append(f"{name} not real: Im={value.imag:.3e}")
        if self.pair_mismatch() > 1e-9:
            issues.append(f"first-moment conjugates drifted: {self.pair_mismatch():.3e}")
        return issues
