#!/usr/bin/env python3
"""
Physical constants used by the graphene capacitor entanglement simulator.

CODATA values come from scipy.constants; documented here to 9 significant digits.
The free-space impedance is the rounded 377 Ω used by the SPP dispersion relation.
"""

from scipy import constants as const

HBAR = const.hbar            # 1.05457182e-34 J s
Q_E = const.e                # 1.60217663e-19 C
K_B = const.k                # 1.38064900e-23 J/K
EPS_0 = const.epsilon_0      # 8.85418781e-12 F/m
MU_0 = const.mu_0            # 1.25663706e-06 H/m
C_LIGHT = const.c            # 2.99792458e+08 m/s
Z_0 = 377.0                  # Ω, rounded free-space impedance
